//! The linear side: complementary pairs (S, U) of W = GF(p)^n, projective
//! bases, their base subsets B_k, incidence sets B_k(α), and exactness of
//! subsets of B_k.

use std::cell::Cell;

use serde::Serialize;

use crate::base::{combinations, ExactnessTable, LevelBaseSubset, MemberSet};
use crate::error::{Budget, Error, NodeCounter, Result};
use crate::field::Prime;
use crate::hyperbolic::Bijection;
use crate::linalg::{enumerate_subspaces, Subspace};

/// (S, U) with S ⊕ U = W.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PairElement {
    first: Subspace,
    second: Subspace,
}

impl PairElement {
    pub fn new(first: Subspace, second: Subspace) -> Result<Self> {
        if first.ambient_dim() != second.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: first.ambient_dim(),
                found: second.ambient_dim(),
            });
        }
        if !first.sum(&second)?.is_full() || first.dim() + second.dim() != first.ambient_dim() {
            return Err(Error::Domain(
                "pair components must be complementary".into(),
            ));
        }
        Ok(PairElement { first, second })
    }

    pub fn first(&self) -> &Subspace {
        &self.first
    }

    pub fn second(&self) -> &Subspace {
        &self.second
    }

    pub fn swapped(&self) -> PairElement {
        PairElement {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

/// n independent points of P(W), kept as a sorted set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjectiveBase {
    points: Vec<Subspace>,
}

impl ProjectiveBase {
    pub fn new<R: AsRef<[u32]>>(prime: Prime, vectors: &[R]) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || Subspace::span(prime, n, vectors)?.dim() != n {
            return Err(Error::Domain(
                "a projective base needs n independent points".into(),
            ));
        }
        let points = vectors
            .iter()
            .map(|v| Subspace::span(prime, n, &[v.as_ref()]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_points(points))
    }

    fn from_points(mut points: Vec<Subspace>) -> Self {
        points.sort();
        ProjectiveBase { points }
    }

    pub fn standard(prime: Prime, n: usize) -> Self {
        let vs: Vec<Vec<u32>> = (0..n).map(|i| Subspace::unit(n, i)).collect();
        Self::new(prime, &vs).expect("unit vectors are independent")
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn prime(&self) -> Prime {
        self.points[0].prime()
    }

    fn span_of(&self, indices: &[usize]) -> Result<Subspace> {
        indices
            .iter()
            .try_fold(Subspace::zero(self.prime(), self.n()), |acc, &i| {
                acc.sum(&self.points[i])
            })
    }

    /// B_k: the C(n, k) pairs of spans of complementary point sets.
    pub fn base_subset(&self, k: usize) -> Result<PairBaseSubset> {
        let n = self.n();
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!(
                "level k must lie in 1..{n}, got {k}"
            )));
        }
        let index_sets = combinations(n, k);
        if index_sets.len() > MemberSet::CAPACITY {
            return Err(Error::InvalidArgument(
                "too many members for a member set".into(),
            ));
        }
        let members = index_sets
            .iter()
            .map(|set| {
                let rest: Vec<usize> = (0..n).filter(|i| !set.contains(i)).collect();
                PairElement::new(self.span_of(set)?, self.span_of(&rest)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PairBaseSubset {
            base: self.clone(),
            k,
            members,
            index_sets,
        })
    }
}

/// The base subset B_k of G_k(W) associated with a projective base.
#[derive(Debug, Clone)]
pub struct PairBaseSubset {
    base: ProjectiveBase,
    k: usize,
    members: Vec<PairElement>,
    index_sets: Vec<Vec<usize>>,
}

impl PairBaseSubset {
    pub fn base(&self) -> &ProjectiveBase {
        &self.base
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

    pub fn members(&self) -> &[PairElement] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &PairElement {
        &self.members[i]
    }

    pub fn index_set(&self, i: usize) -> &[usize] {
        &self.index_sets[i]
    }

    pub fn all(&self) -> MemberSet {
        MemberSet::full(self.len())
    }

    /// Members (S, U) with S incident to α's first component, or also to
    /// its second unless `plus_only`. α must come from the same base.
    pub fn incident_members(&self, alpha: &PairElement, plus_only: bool) -> Result<MemberSet> {
        for part in [alpha.first(), alpha.second()] {
            let inside = self
                .base
                .points
                .iter()
                .filter(|pt| part.contains(pt).unwrap_or(false))
                .count();
            if inside != part.dim() {
                return Err(Error::Domain(
                    "α is not spanned by points of this base".into(),
                ));
            }
        }
        let mut out = MemberSet::empty();
        for (i, m) in self.members.iter().enumerate() {
            let s = m.first();
            if s.incident(alpha.first())? || (!plus_only && s.incident(alpha.second())?) {
                out = out.with(i);
            }
        }
        Ok(out)
    }

    /// The index-set bijection onto a symplectic level base subset:
    /// (span P_I, span P_J) ↦ Σ_{i ∈ I} S_i.
    pub fn bridge(&self, target: &LevelBaseSubset) -> Result<Bijection> {
        if target.source().n() != self.base.n() || target.k() != self.k {
            return Err(Error::InvalidArgument(
                "bridge needs matching n and k".into(),
            ));
        }
        let image = (0..self.len())
            .map(|i| {
                (0..target.len())
                    .find(|&j| target.index_set(j) == self.index_set(i))
                    .expect("both sides list every k-subset")
            })
            .collect();
        Bijection::new(image)
    }
}

/// Points P with P ⊆ S or P ⊆ U: exactly the points a base may use if its
/// B_k is to contain (S, U).
fn compatible_points(points: &[Subspace], m: &PairElement) -> Vec<Subspace> {
    points
        .iter()
        .filter(|pt| {
            m.first().contains(pt).unwrap_or(false) || m.second().contains(pt).unwrap_or(false)
        })
        .cloned()
        .collect()
}

/// Projective bases from the sorted `pool`, chosen in increasing order.
fn independent_sets(
    prime: Prime,
    n: usize,
    pool: &[Subspace],
    limit: Option<usize>,
    counter: &mut NodeCounter,
) -> Result<Vec<ProjectiveBase>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        pool: &[Subspace],
        start: usize,
        n: usize,
        span: &Subspace,
        chosen: &mut Vec<usize>,
        out: &mut Vec<ProjectiveBase>,
        limit: usize,
        counter: &mut NodeCounter,
    ) -> Result<()> {
        if chosen.len() == n {
            out.push(ProjectiveBase::from_points(
                chosen.iter().map(|&i| pool[i].clone()).collect(),
            ));
            return Ok(());
        }
        for i in start..pool.len() {
            if pool.len() - i < n - chosen.len() || out.len() >= limit {
                break;
            }
            if span.contains(&pool[i])? {
                continue;
            }
            counter.tick()?;
            let next = span.sum(&pool[i])?;
            chosen.push(i);
            go(pool, i + 1, n, &next, chosen, out, limit, counter)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(
        pool,
        0,
        n,
        &Subspace::zero(prime, n),
        &mut Vec::with_capacity(n),
        &mut out,
        limit.unwrap_or(usize::MAX),
        counter,
    )?;
    Ok(out)
}

/// Decides exactness of subsets of one B_k.
pub struct PairExactnessOracle<'a> {
    level: &'a PairBaseSubset,
    member_points: Vec<Vec<Subspace>>,
    all_points: Vec<Subspace>,
    budget: Budget,
    nodes: Cell<u64>,
}

impl<'a> PairExactnessOracle<'a> {
    pub fn new(level: &'a PairBaseSubset, budget: Budget) -> Result<Self> {
        let (p, n) = (level.base.prime(), level.base.n());
        let mut all_points: Vec<Subspace> = enumerate_subspaces(p, n, 1, budget)?.collect();
        all_points.sort();
        let member_points = level
            .members
            .iter()
            .map(|m| compatible_points(&all_points, m))
            .collect();
        Ok(PairExactnessOracle {
            level,
            member_points,
            all_points,
            budget,
            nodes: Cell::new(0),
        })
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.get()
    }

    /// Projective bases whose B_k contains `x`.
    pub fn containing(&self, x: MemberSet, limit: Option<usize>) -> Result<Vec<ProjectiveBase>> {
        let mut it = x.iter();
        let pool = match it.next() {
            None => self.all_points.clone(),
            Some(first) => {
                let mut pool = self.member_points[first].clone();
                for j in it {
                    let other = &self.member_points[j];
                    pool.retain(|pt| other.binary_search(pt).is_ok());
                }
                pool
            }
        };
        let base = &self.level.base;
        let mut counter = NodeCounter::new("deciding exactness of pairs", self.budget);
        let result = independent_sets(base.prime(), base.n(), &pool, limit, &mut counter);
        self.nodes.set(self.nodes.get() + counter.nodes());
        result
    }

    pub fn is_exact(&self, x: MemberSet) -> Result<bool> {
        Ok(self.containing(x, Some(2))?.len() == 1)
    }

    pub fn classify_all(&self) -> Result<ExactnessTable> {
        ExactnessTable::classify(self.level.len(), |x| self.is_exact(x))
    }
}
