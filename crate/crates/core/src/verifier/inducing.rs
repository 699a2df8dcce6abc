//! Deciding whether a permutation of H_k is induced by an element of
//! GSp(Ω): by sweeping an enumerated group, or, when the group is too large
//! to enumerate, by reconstructing the candidate from the images of a
//! projective frame.

use std::collections::HashMap;

use crate::error::Result;
use crate::hyperbolic::{Bijection, HkFamily};
use crate::linalg::{Matrix, Subspace};
use crate::symplectic::{GroupElement, SeededRng, SymplecticSpace};

/// Induced permutations of a family under every element of a group, keyed
/// by permutation; the first element (in group order) is kept as witness.
pub struct InducedTable {
    witnesses: HashMap<Bijection, GroupElement>,
    group_size: usize,
}

impl InducedTable {
    pub fn build(family: &HkFamily, group: &[GroupElement]) -> Result<Self> {
        let mut witnesses = HashMap::new();
        for l in group {
            witnesses
                .entry(family.induced_map(l)?)
                .or_insert_with(|| l.clone());
        }
        Ok(InducedTable {
            witnesses,
            group_size: group.len(),
        })
    }

    pub fn find(&self, f: &Bijection) -> Option<&GroupElement> {
        self.witnesses.get(f)
    }

    /// Number of distinct induced permutations.
    pub fn distinct(&self) -> usize {
        self.witnesses.len()
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// Induced permutations in a deterministic order.
    pub fn permutations(&self) -> Vec<&Bijection> {
        let mut v: Vec<&Bijection> = self.witnesses.keys().collect();
        v.sort_by(|a, b| a.images().cmp(b.images()));
        v
    }
}

/// Linear sweep over `group` for an element inducing `f`.
pub fn find_inducing_element(
    family: &HkFamily,
    f: &Bijection,
    group: &[GroupElement],
) -> Result<Option<GroupElement>> {
    for l in group {
        if &family.induced_map(l)? == f {
            return Ok(Some(l.clone()));
        }
    }
    Ok(None)
}

/// Attempts to hit each point with this many random members.
const MEMBER_TRIES: usize = 64;

/// Reconstructs a candidate l from a black-box map `f` on H_k and checks it
/// against `probes`. If `f` is induced, the result is a witness; if the
/// probes cover the whole family, `None` proves `f` is not induced.
pub fn reconstruct_inducing_element<F>(
    space: &SymplecticSpace,
    k: usize,
    f: F,
    probes: &[Subspace],
    rng: &mut SeededRng,
) -> Result<Option<GroupElement>>
where
    F: Fn(&Subspace) -> Result<Subspace>,
{
    let d = space.dim();
    let p = space.prime();
    // Frame: e_1, …, e_2n and e_1 + … + e_2n.
    let mut frame: Vec<Vec<u32>> = (0..d).map(|i| space.unit(i)).collect();
    frame.push(vec![1; d]);
    let mut images = Vec::with_capacity(frame.len());
    for v in &frame {
        match image_of_point(space, k, &f, v, rng)? {
            Some(q) => images.push(q),
            None => return Ok(None),
        }
    }
    let q = Matrix::from_columns(p, d, &images[..d])?;
    let Some(q_inv) = q.inverse() else {
        return Ok(None);
    };
    let scales = q_inv.mul_vec(&images[d])?;
    if scales.contains(&0) {
        return Ok(None);
    }
    let Ok(l) = space.group_element(q.mul(&Matrix::diagonal(p, &scales))?) else {
        return Ok(None);
    };
    for u in probes {
        if l.apply(u)? != f(u)? {
            return Ok(None);
        }
    }
    Ok(Some(l))
}

/// The image point of span(v), as the meet of images of members whose
/// meet is span(v).
fn image_of_point<F>(
    space: &SymplecticSpace,
    k: usize,
    f: &F,
    v: &[u32],
    rng: &mut SeededRng,
) -> Result<Option<Vec<u32>>>
where
    F: Fn(&Subspace) -> Result<Subspace>,
{
    let mut meet = space.full();
    let mut image_meet = space.full();
    for _ in 0..MEMBER_TRIES {
        if meet.dim() == 1 {
            break;
        }
        let u = random_member_through(space, k, v, rng)?;
        meet = meet.intersect(&u)?;
        image_meet = image_meet.intersect(&f(&u)?)?;
    }
    if meet.dim() != 1 || image_meet.dim() != 1 {
        return Ok(None);
    }
    Ok(Some(image_meet.basis().row(0).to_vec()))
}

/// A random member of H_k containing v: a hyperbolic line through v plus
/// k − 1 orthogonal hyperbolic lines.
fn random_member_through(
    space: &SymplecticSpace,
    k: usize,
    v: &[u32],
    rng: &mut SeededRng,
) -> Result<Subspace> {
    let w = space.random_partner_in(v, &space.full(), rng);
    let line = space.span(&[v, &w[..]])?;
    let rest = space.perp(&line)?;
    let pairs = space.random_hyperbolic_pairs(&rest, rng)?;
    pairs
        .iter()
        .take(k - 1)
        .try_fold(line, |acc, (a, b)| acc.sum(&space.span(&[a, b])?))
}
