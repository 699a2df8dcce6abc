//! Exact finite-field machinery for symplectic spaces over GF(p): subspace
//! lattices, hyperbolic Grassmannians, base subsets, involution
//! correspondences, and a verifier that checks the structural claims about
//! them by exhaustive or seeded computation.

pub mod base;
pub mod error;
pub mod field;
pub mod hyperbolic;
pub mod involution;
pub mod linalg;
pub mod pair;
pub mod symplectic;
pub mod verifier;

pub use base::{
    base_subsets_containing, enumerate_base_subsets, BaseSubset, ExactnessOracle, ExactnessTable,
    LevelBaseSubset, MemberSet, SymplecticBase,
};
pub use error::{Budget, Error, Result};
pub use field::{Prime, Scalar};
pub use hyperbolic::{Bijection, HkFamily, PerpPairFamily};
pub use involution::{CommutingGraph, Involution};
pub use linalg::{enumerate_subspaces, gaussian_binomial, Matrix, Subspace};
pub use pair::{PairBaseSubset, PairElement, PairExactnessOracle, ProjectiveBase};
pub use symplectic::{Classification, GroupElement, GroupKind, LineKind, SymplecticSpace};
pub use verifier::{run_check, run_suite, CheckSpec, Report, Status};
