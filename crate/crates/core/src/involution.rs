//! Symplectic involutions in odd characteristic, their correspondence with
//! non-degenerate subspaces, commutation, and maximal commuting sets.

use serde::Serialize;

use crate::error::{Budget, Error, NodeCounter, Result};
use crate::field::is_odd_characteristic;
use crate::hyperbolic::HkFamily;
use crate::linalg::{Matrix, Subspace};
use crate::symplectic::{Classification, GroupElement, SymplecticSpace};

/// A symplectic involution u with cached eigenspaces: u fixes `s_plus`
/// and negates `s_minus = s_plus^⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Involution {
    matrix: Matrix,
    s_plus: Subspace,
    #[serde(skip)]
    s_minus: Subspace,
}

impl Involution {
    /// The involution with +1-eigenspace `s` and −1-eigenspace `s^⊥`.
    pub fn from_subspace(space: &SymplecticSpace, s: &Subspace) -> Result<Self> {
        if !is_odd_characteristic(space.prime()) {
            return Err(Error::CharacteristicTwo);
        }
        if s.is_zero() || s.is_full() || !space.is_nondegenerate(s)? {
            return Err(Error::Domain(
                "the fixed space must be a proper non-degenerate subspace".into(),
            ));
        }
        let p = space.prime();
        let s_minus = space.perp(s)?;
        let cols: Vec<&[u32]> = s.basis_rows().chain(s_minus.basis_rows()).collect();
        let change = Matrix::from_columns(p, space.dim(), &cols)?;
        let signs: Vec<u32> = (0..space.dim())
            .map(|i| if i < s.dim() { 1 } else { p.neg(1) })
            .collect();
        let inv = change.inverse().expect("S + S^⊥ = V for non-degenerate S");
        let matrix = change.mul(&Matrix::diagonal(p, &signs))?.mul(&inv)?;
        Ok(Involution {
            matrix,
            s_plus: s.clone(),
            s_minus,
        })
    }

    /// Validates `m` as a symplectic involution and computes its eigenspaces.
    pub fn from_matrix(space: &SymplecticSpace, m: Matrix) -> Result<Self> {
        if !is_odd_characteristic(space.prime()) {
            return Err(Error::CharacteristicTwo);
        }
        if space.classify(&m)? != Classification::Symplectic {
            return Err(Error::Domain("matrix is not symplectic".into()));
        }
        if !m.mul(&m)?.is_identity() {
            return Err(Error::Domain(
                "matrix does not square to the identity".into(),
            ));
        }
        let id = Matrix::identity(space.prime(), space.dim());
        let s_plus = Subspace::row_space(&m.add(&id.neg())?.kernel());
        let s_minus = Subspace::row_space(&m.add(&id)?.kernel());
        if s_plus.is_zero() || s_minus.is_zero() {
            return Err(Error::Domain("±identity is not a proper involution".into()));
        }
        // In odd characteristic V = S_+ ⊕ S_-, and a symplectic involution
        // has S_- = S_+^⊥ with both non-degenerate.
        debug_assert_eq!(space.perp(&s_plus)?, s_minus);
        Ok(Involution {
            matrix: m,
            s_plus,
            s_minus,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The image of u under the correspondence with H_k.
    pub fn s_plus(&self) -> &Subspace {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &Subspace {
        &self.s_minus
    }

    /// Half the dimension of the fixed space.
    pub fn k(&self) -> usize {
        self.s_plus.dim() / 2
    }

    pub fn commutes(&self, other: &Involution) -> Result<bool> {
        Ok(self.matrix.mul(&other.matrix)? == other.matrix.mul(&self.matrix)?)
    }

    /// True iff the fixed space of `other` splits along the eigenspaces of
    /// `self`, the subspace-level form of commutation.
    pub fn splits(&self, other: &Involution) -> Result<bool> {
        let a = other.s_plus.intersect(&self.s_plus)?;
        let b = other.s_plus.intersect(&self.s_minus)?;
        Ok(a.sum(&b)? == other.s_plus)
    }

    /// −u, the involution with the eigenspaces swapped.
    pub fn negated(&self) -> Involution {
        Involution {
            matrix: self.matrix.neg(),
            s_plus: self.s_minus.clone(),
            s_minus: self.s_plus.clone(),
        }
    }

    /// l·u·l⁻¹, whose fixed space is l(S_+(u)).
    pub fn conjugate(&self, l: &GroupElement) -> Result<Involution> {
        let matrix = l.matrix().mul(&self.matrix)?.mul(l.inverse().matrix())?;
        Ok(Involution {
            matrix,
            s_plus: l.apply(&self.s_plus)?,
            s_minus: l.apply(&self.s_minus)?,
        })
    }
}

/// One involution per member of `family`, in member order.
pub fn involution_universe(family: &HkFamily) -> Result<Vec<Involution>> {
    family
        .members()
        .iter()
        .map(|u| Involution::from_subspace(family.space(), u))
        .collect()
}

/// Pairwise commutation over a universe of involutions.
#[derive(Debug, Clone)]
pub struct CommutingGraph {
    adjacent: Vec<Vec<bool>>,
}

impl CommutingGraph {
    pub fn build(universe: &[Involution], budget: Budget) -> Result<Self> {
        let n = universe.len();
        budget.check("building the commuting graph", (n as u128) * (n as u128))?;
        let mut adjacent = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = universe[i].commutes(&universe[j])?;
                adjacent[i][j] = c;
                adjacent[j][i] = c;
            }
        }
        Ok(CommutingGraph { adjacent })
    }

    pub fn len(&self) -> usize {
        self.adjacent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacent.is_empty()
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        i == j || self.adjacent[i][j]
    }

    pub fn commuting_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (i + 1..self.len())
                .filter(move |&j| self.adjacent[i][j])
                .map(move |j| (i, j))
        })
    }

    /// Pairwise commuting, and no other element commutes with all of `set`.
    pub fn is_maximal_commuting(&self, set: &[usize]) -> bool {
        let pairwise = set
            .iter()
            .enumerate()
            .all(|(a, &i)| set[a + 1..].iter().all(|&j| self.commutes(i, j)));
        pairwise
            && (0..self.len())
                .filter(|v| !set.contains(v))
                .all(|v| !set.iter().all(|&i| self.commutes(i, v)))
    }

    /// Every maximal commuting set (Bron–Kerbosch with pivoting), each
    /// sorted, in lexicographic order.
    pub fn maximal_commuting_sets(&self, budget: Budget) -> Result<Vec<Vec<usize>>> {
        let mut counter = NodeCounter::new("enumerating maximal commuting sets", budget);
        let mut out = Vec::new();
        let all: Vec<usize> = (0..self.len()).collect();
        self.bron_kerbosch(&mut Vec::new(), all, Vec::new(), &mut out, &mut counter)?;
        for set in &mut out {
            set.sort_unstable();
        }
        out.sort();
        Ok(out)
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<usize>,
        mut p: Vec<usize>,
        mut x: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        counter: &mut NodeCounter,
    ) -> Result<()> {
        counter.tick()?;
        if p.is_empty() && x.is_empty() {
            out.push(r.clone());
            return Ok(());
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| self.adjacent[u][v]).count())
            .expect("p or x is nonempty");
        let branch: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&v| !self.adjacent[pivot][v])
            .collect();
        for v in branch {
            let np = p.iter().copied().filter(|&w| self.adjacent[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| self.adjacent[v][w]).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx, out, counter)?;
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
        Ok(())
    }
}
