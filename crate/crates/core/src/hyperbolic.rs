//! Materialized families H_k of non-degenerate 2k-subspaces and the index
//! maps between them: perp, maps induced by group elements, and the
//! perp-swapping flip available when n = 2k.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::linalg::{enumerate_subspaces, Subspace};
use crate::symplectic::{GroupElement, SymplecticSpace};

/// A bijection between member indices of two families (or one family).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Bijection(Vec<usize>);

impl Bijection {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!(
                    "index image is not a bijection of 0..{}",
                    image.len()
                )));
            }
        }
        Ok(Bijection(image))
    }

    pub fn identity(len: usize) -> Self {
        Bijection((0..len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Image of a set of indices, sorted.
    pub fn apply_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.0[i]).collect();
        out.sort_unstable();
        out
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Bijection) -> Result<Bijection> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Bijection(other.0.iter().map(|&i| self.0[i]).collect()))
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Bijection(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// H_k(Ω) with a stable member order (the canonical subspace order).
#[derive(Debug, Clone)]
pub struct HkFamily {
    space: SymplecticSpace,
    k: usize,
    members: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
}

#[derive(Serialize)]
struct IndexedMember<'a> {
    index: usize,
    basis: &'a Subspace,
}

impl Serialize for HkFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.members
                .iter()
                .enumerate()
                .map(|(index, basis)| IndexedMember { index, basis }),
        )
    }
}

impl HkFamily {
    pub fn build(space: &SymplecticSpace, k: usize, budget: Budget) -> Result<Self> {
        if k == 0 || k >= space.n() {
            return Err(Error::InvalidArgument(format!(
                "k must lie in 1..={} for n = {}, got {k}",
                space.n().saturating_sub(1),
                space.n()
            )));
        }
        let mut members = Vec::new();
        for u in enumerate_subspaces(space.prime(), space.dim(), 2 * k, budget)? {
            if space.is_nondegenerate(&u)? {
                members.push(u);
            }
        }
        members.sort();
        let index = members
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, u)| (u, i))
            .collect();
        Ok(HkFamily {
            space: space.clone(),
            k,
            members,
            index,
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn position(&self, u: &Subspace) -> Option<usize> {
        self.index.get(u).copied()
    }

    fn require(&self, u: &Subspace) -> Result<usize> {
        self.position(u)
            .ok_or_else(|| Error::Domain(format!("{u:?} is not a member of H_{}", self.k)))
    }

    /// U ↦ U^⊥ into `target`, which must be the family at level n − k.
    pub fn perp_map(&self, target: &HkFamily) -> Result<Bijection> {
        if target.space != self.space || target.k + self.k != self.space.n() {
            return Err(Error::InvalidArgument(
                "perp map needs the family at the complementary level".into(),
            ));
        }
        let image = self
            .members
            .iter()
            .map(|u| target.require(&self.space.perp(u)?))
            .collect::<Result<Vec<_>>>()?;
        Bijection::new(image)
    }

    /// The permutation U ↦ l(U).
    pub fn induced_map(&self, l: &GroupElement) -> Result<Bijection> {
        let image = self
            .members
            .iter()
            .map(|u| self.require(&l.apply(u)?))
            .collect::<Result<Vec<_>>>()?;
        Bijection::new(image)
    }

    /// Members incident (containment either way) to `t`, or also to `t^⊥`
    /// unless `plus_only`.
    pub fn incidence_set(&self, t: &Subspace, plus_only: bool) -> Result<Vec<usize>> {
        if !self.space.is_nondegenerate(t)? {
            return Err(Error::Domain(
                "incidence sets need a non-degenerate T".into(),
            ));
        }
        let tp = self.space.perp(t)?;
        let mut out = Vec::new();
        for (i, u) in self.members.iter().enumerate() {
            let hit = u.incident(t)? || (!plus_only && u.incident(&tp)?);
            if hit {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn require_half(&self) -> Result<()> {
        if 2 * self.k != self.space.n() {
            return Err(Error::InvalidArgument(format!(
                "needs n = 2k, got n = {}, k = {}",
                self.space.n(),
                self.k
            )));
        }
        Ok(())
    }

    /// Swaps U ↔ U^⊥ on the perp-closed set `x`, identity elsewhere.
    pub fn flip_map(&self, x: &[usize]) -> Result<Bijection> {
        self.require_half()?;
        let mut image: Vec<usize> = (0..self.len()).collect();
        let mut in_x = vec![false; self.len()];
        for &i in x {
            if i >= self.len() {
                return Err(Error::InvalidArgument(format!(
                    "member index {i} out of range"
                )));
            }
            in_x[i] = true;
        }
        for &i in x {
            let j = self.require(&self.space.perp(&self.members[i])?)?;
            if !in_x[j] {
                return Err(Error::InvalidArgument(
                    "flip set is not closed under perp".into(),
                ));
            }
            image[i] = j;
        }
        Bijection::new(image)
    }

    /// The quotient by U ~ U^⊥ when n = 2k.
    pub fn perp_pairs(&self) -> Result<PerpPairFamily> {
        self.require_half()?;
        let mut pair_of = vec![usize::MAX; self.len()];
        let mut pairs = Vec::with_capacity(self.len() / 2);
        for (i, u) in self.members.iter().enumerate() {
            if pair_of[i] != usize::MAX {
                continue;
            }
            let j = self.require(&self.space.perp(u)?)?;
            assert_ne!(i, j, "a non-degenerate subspace meets its perp trivially");
            pair_of[i] = pairs.len();
            pair_of[j] = pairs.len();
            pairs.push((i, j));
        }
        Ok(PerpPairFamily { pairs, pair_of })
    }
}

/// The unordered pairs {U, U^⊥} of a family with n = 2k.
#[derive(Debug, Clone)]
pub struct PerpPairFamily {
    pairs: Vec<(usize, usize)>,
    pair_of: Vec<usize>,
}

impl PerpPairFamily {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_of(&self, member: usize) -> usize {
        self.pair_of[member]
    }

    /// The map on pairs induced by a member map that respects the pairing.
    pub fn induced(&self, f: &Bijection) -> Result<Bijection> {
        let image = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                let (pa, pb) = (self.pair_of[f.apply(a)], self.pair_of[f.apply(b)]);
                if pa == pb {
                    Ok(pa)
                } else {
                    Err(Error::Domain(
                        "member map does not respect the perp pairing".into(),
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Bijection::new(image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Prime, Scalar};
    use crate::symplectic::seeded_rng;

    fn space(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap()
    }

    fn family(p: u32, n: usize, k: usize) -> HkFamily {
        HkFamily::build(&space(p, n), k, Budget::DEFAULT).unwrap()
    }

    #[test]
    fn family_sizes() {
        assert_eq!(family(2, 2, 1).len(), 20);
        assert_eq!(family(3, 2, 1).len(), 90);
        assert_eq!(family(2, 3, 1).len(), 336);
        assert_eq!(family(2, 3, 2).len(), 336);
        assert!(HkFamily::build(&space(2, 2), 2, Budget::DEFAULT).is_err());
        assert!(HkFamily::build(&space(2, 3), 1, Budget::new(10))
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn perp_maps_are_mutually_inverse() {
        let (h1, h2) = (family(2, 3, 1), family(2, 3, 2));
        let p1 = h1.perp_map(&h2).unwrap();
        let p2 = h2.perp_map(&h1).unwrap();
        assert!(p2.compose(&p1).unwrap().is_identity());
        let s = h1.space();
        let i = h1.position(&s.coordinate_span(&[0, 1])).unwrap();
        assert_eq!(h2.member(p1.apply(i)), &s.coordinate_span(&[2, 3, 4, 5]));
        assert!(h1.perp_map(&h1).is_err());
    }

    #[test]
    fn induced_maps_are_functorial() {
        let h = family(3, 2, 1);
        let s = h.space().clone();
        assert!(h.induced_map(&s.identity()).unwrap().is_identity());
        for seed in 0..10 {
            let a = s.random_sp(seed);
            let b = s
                .random_sp(seed + 100)
                .compose(&s.similitude_generator(2).unwrap())
                .unwrap();
            let ab = h.induced_map(&a.compose(&b).unwrap()).unwrap();
            let composed = h
                .induced_map(&a)
                .unwrap()
                .compose(&h.induced_map(&b).unwrap())
                .unwrap();
            assert_eq!(ab, composed);
        }
    }

    #[test]
    fn transvection_fixes_its_own_line() {
        let h = family(2, 2, 1);
        let s = h.space();
        let t = s.transvection(&s.unit(0), Scalar::one(s.prime())).unwrap();
        let i = h.position(&s.coordinate_span(&[0, 1])).unwrap();
        assert_eq!(h.induced_map(&t).unwrap().apply(i), i);
    }

    #[test]
    fn incidence_sets() {
        let h = family(2, 2, 1);
        let s = h.space();
        let t = s.coordinate_span(&[0, 1]);
        let i = h.position(&t).unwrap();
        assert_eq!(h.incidence_set(&t, true).unwrap(), vec![i]);
        assert_eq!(h.incidence_set(&t, false).unwrap().len(), 2);
        assert!(h.incidence_set(&s.coordinate_span(&[0, 2]), true).is_err());

        let h = family(2, 3, 1);
        let s = h.space().clone();
        let t = s.coordinate_span(&[0, 1, 2, 3]);
        assert_eq!(h.incidence_set(&t, true).unwrap().len(), 20);
        let mut rng = seeded_rng(5);
        for seed in 0..10 {
            let l = s.random_sp(seed);
            let pairs = s.random_hyperbolic_pairs(&s.full(), &mut rng).unwrap();
            let t = s
                .span(&[&pairs[0].0, &pairs[0].1, &pairs[1].0, &pairs[1].1])
                .unwrap();
            let f = h.induced_map(&l).unwrap();
            let lhs = f.apply_set(&h.incidence_set(&t, true).unwrap());
            let rhs = h.incidence_set(&l.apply(&t).unwrap(), true).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn flips_and_pairs() {
        let h = family(2, 2, 1);
        assert!(h.flip_map(&[]).unwrap().is_identity());
        let pairs = h.perp_pairs().unwrap();
        assert_eq!(pairs.len(), 10);
        let (a, b) = pairs.pairs()[3];
        let f = h.flip_map(&[a, b]).unwrap();
        assert_eq!((f.apply(a), f.apply(b)), (b, a));
        assert_eq!((0..h.len()).filter(|&i| f.apply(i) != i).count(), 2);
        assert!(h.flip_map(&[a]).is_err());
        assert!(pairs.induced(&f).unwrap().is_identity());
        assert!(pairs
            .induced(&Bijection::identity(h.len()))
            .unwrap()
            .is_identity());
        assert!(family(2, 3, 1).flip_map(&[]).is_err());
    }

    #[test]
    fn bijection_validation() {
        assert!(Bijection::new(vec![1, 0, 2]).is_ok());
        assert!(Bijection::new(vec![1, 1, 2]).is_err());
        assert!(Bijection::new(vec![0, 3]).is_err());
        let b = Bijection::new(vec![2, 0, 1]).unwrap();
        assert!(b.compose(&b.inverse()).unwrap().is_identity());
        assert_eq!(b.apply_set(&[0, 1]), vec![0, 2]);
    }

    /// Every member splits into k mutually orthogonal hyperbolic lines.
    #[test]
    fn members_decompose_into_orthogonal_lines() {
        for (n, k) in [(2, 1), (3, 1), (3, 2)] {
            let h = family(2, n, k);
            let s = h.space();
            let mut rng = seeded_rng(11);
            for u in h.members() {
                let pairs = s.random_hyperbolic_pairs(u, &mut rng).unwrap();
                assert_eq!(pairs.len(), k);
                let lines: Vec<Subspace> = pairs
                    .iter()
                    .map(|(v, w)| s.span(&[v, w]).unwrap())
                    .collect();
                let mut sum = s.zero();
                for (i, a) in lines.iter().enumerate() {
                    assert!(s.is_nondegenerate(a).unwrap());
                    for b in &lines[i + 1..] {
                        assert!(s.orthogonal(a, b).unwrap());
                    }
                    sum = sum.sum(a).unwrap();
                }
                assert_eq!(&sum, u);
            }
        }
    }

    #[test]
    fn family_serializes_with_indices() {
        let h = family(2, 2, 1);
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 20);
        assert_eq!(v[0]["index"], 0);
    }
}
