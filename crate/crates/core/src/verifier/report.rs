use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Result};
use crate::field::Prime;
use crate::linalg::{Matrix, Subspace};
use crate::symplectic::SymplecticSpace;

use super::checks;

/// Basis rows of a subspace or rows of a matrix, as serialized.
pub type Rows = Vec<Vec<u32>>;

pub(crate) fn rows(s: &Subspace) -> Rows {
    s.basis().to_rows()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Refused,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// Check parameters; `None` means the check's default (possibly a set of
/// cases, listed in the report notes).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub params: Params,
    pub status: Status,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
    pub budget: u64,
    pub runtime_ms: u64,
    pub version: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// Which family of base subsets an exactness witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Decompositions of V into orthogonal hyperbolic lines.
    Symplectic,
    /// Projective bases of W.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactnessClaim {
    /// The set is maximal inexact but is no incidence set of level 2.
    MaximalNotIncidence,
    /// The set is an incidence set of level 2 but not maximal inexact.
    IncidenceNotMaximal,
    /// At most one U_i(X) differs from S_i, yet X is inexact.
    SingleDeviationInexact,
}

/// A property of a permutation of the members of H_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapProperty {
    /// Images of base subsets are base subsets.
    PreservesBaseSubsets,
    /// f(U^⊥) = f(U)^⊥ for all members (needs n = 2k).
    RespectsPerp,
    /// Every pair {U, U^⊥} is mapped to itself (needs n = 2k).
    FixesPerpPairs,
    /// Some element of GSp(Ω) induces the map (group must be enumerable).
    Induced,
    /// Commutation of the corresponding involutions is preserved.
    PreservesCommutation,
}

/// Serialized evidence for a failed check. [`Counterexample::recheck`]
/// reproduces the failure from this data alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A direct count disagrees with an independent identity.
    Count {
        quantity: CountedQuantity,
        p: u32,
        n: usize,
        expected: u64,
        found: u64,
    },
    /// These members of H_k are not the level-k expansion of any base subset.
    NotBaseSubset {
        p: u32,
        n: usize,
        k: usize,
        members: Vec<Rows>,
    },
    /// Two hyperbolic lines whose orthogonality disagrees with sharing a
    /// base subset.
    PerpBaseMismatch {
        p: u32,
        n: usize,
        first: Rows,
        second: Rows,
    },
    /// A map sent U to `image_of_u` and U^⊥ to `image_of_perp`, which is not
    /// the perp of `image_of_u`.
    PerpNotPreserved {
        p: u32,
        n: usize,
        image_of_u: Rows,
        image_of_perp: Rows,
    },
    /// A permutation of the canonically ordered H_k with `property`
    /// evaluating differently from `expected`.
    MapProperty {
        p: u32,
        n: usize,
        k: usize,
        image: Vec<usize>,
        property: MapProperty,
        expected: bool,
    },
    /// The induced map of `matrix` admitted no reconstructed witness.
    MissingWitness {
        p: u32,
        n: usize,
        k: usize,
        matrix: Rows,
        seed: u64,
    },
    /// An exactness claim about a subset of a level base subset.
    Exactness {
        side: Side,
        claim: ExactnessClaim,
        p: u32,
        n: usize,
        k: usize,
        base: Vec<Rows>,
        set: Vec<usize>,
    },
    /// A bijection between two level base subsets satisfying the
    /// maximal-inexact hypothesis but not the incidence-set conclusion.
    MapConclusion {
        side: Side,
        p: u32,
        n: usize,
        k: usize,
        from_base: Vec<Rows>,
        to_base: Vec<Rows>,
        image: Vec<usize>,
    },
    /// N ⊆ M with dim N over the threshold of `part`, lacking `part`
    /// mutually orthogonal hyperbolic lines.
    OrthogonalLines {
        p: u32,
        n: usize,
        m: usize,
        part: usize,
        big: Rows,
        sub: Rows,
    },
    /// Fixed spaces whose involutions form a maximal commuting set xor a
    /// base subset.
    CommutingSetMismatch {
        p: u32,
        n: usize,
        k: usize,
        members: Vec<Rows>,
    },
    /// Two involutions whose commutation disagrees with the splitting test.
    CommutationMismatch {
        p: u32,
        n: usize,
        first: Rows,
        second: Rows,
    },
    /// Members of H_k whose involutions commute although no base subset
    /// contains both.
    UncoveredCommutingPair {
        p: u32,
        n: usize,
        k: usize,
        first: Rows,
        second: Rows,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountedQuantity {
    HyperbolicLines,
    BaseSubsets,
}

impl Counterexample {
    /// Re-evaluates the failure; `Ok(true)` means it reproduces.
    pub fn recheck(&self, budget: Budget) -> Result<bool> {
        match self {
            Counterexample::Count {
                quantity,
                p,
                n,
                expected,
                ..
            } => {
                let space = space(*p, *n)?;
                let found = match quantity {
                    CountedQuantity::HyperbolicLines => {
                        crate::HkFamily::build(&space, 1, budget)?.len()
                    }
                    CountedQuantity::BaseSubsets => {
                        crate::enumerate_base_subsets(&space, budget)?.len()
                    }
                };
                Ok(found as u64 != *expected)
            }
            Counterexample::NotBaseSubset { p, n, k, members } => {
                let space = space(*p, *n)?;
                let members = subspaces(&space, members)?;
                Ok(!checks::is_level_base_subset(&space, *k, &members, budget)?)
            }
            Counterexample::PerpBaseMismatch {
                p,
                n,
                first,
                second,
            } => {
                let space = space(*p, *n)?;
                let (a, b) = (subspace(&space, first)?, subspace(&space, second)?);
                let orthogonal = space.orthogonal(&a, &b)?;
                let shared =
                    !crate::base_subsets_containing(&space, &[a, b], Some(1), budget)?.is_empty();
                Ok(orthogonal != shared)
            }
            Counterexample::PerpNotPreserved {
                p,
                n,
                image_of_u,
                image_of_perp,
            } => {
                let space = space(*p, *n)?;
                let u = subspace(&space, image_of_u)?;
                Ok(space.perp(&u)? != subspace(&space, image_of_perp)?)
            }
            Counterexample::MapProperty {
                p,
                n,
                k,
                image,
                property,
                expected,
            } => {
                let space = space(*p, *n)?;
                let ctx = checks::MapContext::new(&space, *k, budget)?;
                let f = crate::Bijection::new(image.clone())?;
                Ok(ctx.evaluate(&f, *property, budget)? != *expected)
            }
            Counterexample::MissingWitness {
                p,
                n,
                k,
                matrix,
                seed,
            } => {
                let space = space(*p, *n)?;
                let m = Matrix::from_rows(space.prime(), space.dim(), matrix)?;
                let l = space.group_element(m)?;
                Ok(checks::reconstruct_for(&space, *k, &l, *seed)?.is_none())
            }
            Counterexample::Exactness {
                side,
                claim,
                p,
                n,
                k,
                base,
                set,
            } => checks::recheck_exactness(*side, *claim, *p, *n, *k, base, set, budget),
            Counterexample::MapConclusion {
                side,
                p,
                n,
                k,
                from_base,
                to_base,
                image,
            } => {
                checks::recheck_map_conclusion(*side, *p, *n, *k, from_base, to_base, image, budget)
            }
            Counterexample::OrthogonalLines {
                p,
                n,
                m,
                part,
                big,
                sub,
            } => {
                let space = space(*p, *n)?;
                let (big, sub) = (subspace(&space, big)?, subspace(&space, sub)?);
                let applies = space.is_nondegenerate(&big)?
                    && big.dim() == 2 * m
                    && big.contains(&sub)?
                    && sub.dim() > m + 2 * (part - 1);
                Ok(applies
                    && crate::base::orthogonal_lines_in(&space, &sub, *part, budget)?.is_none())
            }
            Counterexample::CommutingSetMismatch { p, n, k, members } => {
                let space = space(*p, *n)?;
                let members = subspaces(&space, members)?;
                checks::recheck_commuting_set(&space, *k, &members, budget)
            }
            Counterexample::CommutationMismatch {
                p,
                n,
                first,
                second,
            } => {
                let space = space(*p, *n)?;
                let u = crate::Involution::from_subspace(&space, &subspace(&space, first)?)?;
                let v = crate::Involution::from_subspace(&space, &subspace(&space, second)?)?;
                Ok(u.commutes(&v)? != u.splits(&v)?)
            }
            Counterexample::UncoveredCommutingPair {
                p,
                n,
                k,
                first,
                second,
            } => {
                let space = space(*p, *n)?;
                let (a, b) = (subspace(&space, first)?, subspace(&space, second)?);
                if a.dim() != 2 * k || b.dim() != 2 * k {
                    return Ok(false);
                }
                let u = crate::Involution::from_subspace(&space, &a)?;
                let v = crate::Involution::from_subspace(&space, &b)?;
                let covered =
                    !crate::base_subsets_containing(&space, &[a, b], Some(1), budget)?.is_empty();
                Ok(u.commutes(&v)? && !covered)
            }
        }
    }
}

pub(crate) fn space(p: u32, n: usize) -> Result<SymplecticSpace> {
    SymplecticSpace::new(Prime::new(p)?, n)
}

pub(crate) fn subspace(space: &SymplecticSpace, r: &Rows) -> Result<Subspace> {
    Subspace::from_rows(space.prime(), space.dim(), r)
}

pub(crate) fn subspaces(space: &SymplecticSpace, rs: &[Rows]) -> Result<Vec<Subspace>> {
    rs.iter().map(|r| subspace(space, r)).collect()
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with `runtime_ms` zeroed, for determinism comparisons.
    pub fn without_runtime(&self) -> Report {
        Report {
            runtime_ms: 0,
            ..self.clone()
        }
    }
}
