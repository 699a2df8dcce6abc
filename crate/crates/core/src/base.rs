//! Symplectic bases, base subsets of H_1 and their level-k expansions,
//! exactness of subsets of an expansion, and the backtracking search over
//! decompositions of V into mutually orthogonal hyperbolic lines.

use std::cell::{Cell, OnceCell};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Budget, Error, NodeCounter, Result};
use crate::linalg::{dot, enumerate_subspaces, Subspace};
use crate::symplectic::{seeded_rng, GroupElement, SeededRng, SymplecticSpace};

/// A set of member indices of a base subset, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MemberSet(u128);

impl MemberSet {
    pub const CAPACITY: usize = 128;

    pub const fn empty() -> Self {
        MemberSet(0)
    }

    pub fn full(len: usize) -> Self {
        assert!(len <= Self::CAPACITY);
        if len == Self::CAPACITY {
            MemberSet(u128::MAX)
        } else {
            MemberSet((1u128 << len) - 1)
        }
    }

    pub const fn from_bits(bits: u128) -> Self {
        MemberSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(MemberSet(0), |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        assert!(i < Self::CAPACITY);
        MemberSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        MemberSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: MemberSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: MemberSet) -> Self {
        MemberSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..Self::CAPACITY).filter(move |&i| self.contains(i))
    }

    /// Image under an index map.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        MemberSet::from_indices(self.iter().map(f))
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for MemberSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// 2n points with a fixed-point-free pairing σ: each point is
/// non-orthogonal to exactly its partner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBase {
    points: Vec<Subspace>,
    pairing: Vec<usize>,
}

impl SymplecticBase {
    pub fn new<R: AsRef<[u32]>>(space: &SymplecticSpace, vectors: &[R]) -> Result<Self> {
        if vectors.len() != space.dim() || space.span(vectors)?.dim() != space.dim() {
            return Err(Error::Domain(
                "a symplectic base needs 2n independent points".into(),
            ));
        }
        let mut pairing = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            let partners: Vec<usize> = vectors
                .iter()
                .enumerate()
                .filter(|(_, w)| space.omega_raw(v.as_ref(), w.as_ref()) != 0)
                .map(|(j, _)| j)
                .collect();
            match partners[..] {
                [j] if j != i => pairing.push(j),
                _ => {
                    return Err(Error::Domain(format!(
                        "point {i} is non-orthogonal to {} points, expected exactly one",
                        partners.len()
                    )))
                }
            }
        }
        let points = vectors
            .iter()
            .map(|v| space.span(&[v.as_ref()]))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymplecticBase { points, pairing })
    }

    /// The standard basis e_1, …, e_2n, paired (2i, 2i+1).
    pub fn standard(space: &SymplecticSpace) -> Self {
        let vs: Vec<Vec<u32>> = (0..space.dim()).map(|i| space.unit(i)).collect();
        SymplecticBase::new(space, &vs).expect("standard basis is symplectic")
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn partner(&self, i: usize) -> usize {
        self.pairing[i]
    }

    /// The n lines P_i + P_σ(i).
    pub fn base_subset(&self, space: &SymplecticSpace) -> Result<BaseSubset> {
        let lines = (0..self.points.len())
            .filter(|&i| i < self.pairing[i])
            .map(|i| self.points[i].sum(&self.points[self.pairing[i]]))
            .collect::<Result<Vec<_>>>()?;
        BaseSubset::new(space, lines)
    }
}

/// n mutually orthogonal hyperbolic lines summing to V, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BaseSubset {
    lines: Vec<Subspace>,
}

impl BaseSubset {
    pub fn new(space: &SymplecticSpace, mut lines: Vec<Subspace>) -> Result<Self> {
        if lines.len() != space.n() {
            return Err(Error::Domain(format!(
                "a base subset has n = {} lines, got {}",
                space.n(),
                lines.len()
            )));
        }
        for (i, a) in lines.iter().enumerate() {
            if a.dim() != 2 || !space.is_nondegenerate(a)? {
                return Err(Error::Domain(format!("line {i} is not hyperbolic")));
            }
            for b in &lines[i + 1..] {
                if !space.orthogonal(a, b)? {
                    return Err(Error::Domain("base subset lines must be orthogonal".into()));
                }
            }
        }
        // n orthogonal hyperbolic lines are independent, so they span V.
        lines.sort();
        Ok(BaseSubset { lines })
    }

    fn from_sorted(lines: Vec<Subspace>) -> Self {
        BaseSubset { lines }
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }

    /// Seeded decomposition by iterated hyperbolic-pair extraction.
    pub fn random(space: &SymplecticSpace, seed: u64) -> Self {
        Self::random_with(space, &mut seeded_rng(seed))
    }

    pub(crate) fn random_with(space: &SymplecticSpace, rng: &mut SeededRng) -> Self {
        let pairs = space
            .random_hyperbolic_pairs(&space.full(), rng)
            .expect("V is non-degenerate");
        let mut lines: Vec<Subspace> = pairs
            .iter()
            .map(|(v, w)| space.span(&[v, w]).expect("vectors of length 2n"))
            .collect();
        lines.sort();
        BaseSubset::from_sorted(lines)
    }

    pub fn image(&self, l: &GroupElement) -> Result<BaseSubset> {
        let mut lines = self
            .lines
            .iter()
            .map(|s| l.apply(s))
            .collect::<Result<Vec<_>>>()?;
        lines.sort();
        Ok(BaseSubset::from_sorted(lines))
    }

    /// All C(n, k) sums of k distinct lines.
    pub fn expand(&self, space: &SymplecticSpace, k: usize) -> Result<LevelBaseSubset> {
        let n = self.n();
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!(
                "level k must lie in 1..{n}, got {k}"
            )));
        }
        let index_sets = combinations(n, k);
        if index_sets.len() > MemberSet::CAPACITY {
            return Err(Error::InvalidArgument(format!(
                "C({n}, {k}) members exceed the supported {}",
                MemberSet::CAPACITY
            )));
        }
        let members = index_sets
            .iter()
            .map(|set| {
                set.iter()
                    .try_fold(space.zero(), |acc, &i| acc.sum(&self.lines[i]))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelBaseSubset {
            space: space.clone(),
            source: self.clone(),
            k,
            members,
            index_sets,
        })
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// The base subset of H_k defined by a base subset of H_1.
#[derive(Debug, Clone)]
pub struct LevelBaseSubset {
    space: SymplecticSpace,
    source: BaseSubset,
    k: usize,
    members: Vec<Subspace>,
    index_sets: Vec<Vec<usize>>,
}

impl LevelBaseSubset {
    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn source(&self) -> &BaseSubset {
        &self.source
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

    /// Which source lines sum to member `i`.
    pub fn index_set(&self, i: usize) -> &[usize] {
        &self.index_sets[i]
    }

    pub fn position(&self, u: &Subspace) -> Option<usize> {
        self.members.iter().position(|m| m == u)
    }

    pub fn all(&self) -> MemberSet {
        MemberSet::full(self.len())
    }

    pub fn subspaces(&self, x: MemberSet) -> Vec<Subspace> {
        x.iter().map(|i| self.members[i].clone()).collect()
    }

    /// Index of the member U^⊥ (the sum of the other lines), when n = 2k.
    pub fn complement(&self, i: usize) -> Option<usize> {
        let rest: Vec<usize> = (0..self.source.n())
            .filter(|j| !self.index_sets[i].contains(j))
            .collect();
        self.index_sets.iter().position(|s| *s == rest)
    }

    /// Intersection of the members of `x` containing line `i`; `None` marks
    /// that no member of `x` contains it.
    pub fn u_i(&self, x: MemberSet, i: usize) -> Result<Option<Subspace>> {
        let mut acc: Option<Subspace> = None;
        for j in x.iter().filter(|&j| self.index_sets[j].contains(&i)) {
            acc = Some(match acc {
                None => self.members[j].clone(),
                Some(a) => a.intersect(&self.members[j])?,
            });
        }
        Ok(acc)
    }

    /// Members incident to `m` or, unless `plus_only`, to `m^⊥`. `m` must be
    /// a sum of source lines.
    pub fn incident_members(&self, m: &Subspace, plus_only: bool) -> Result<MemberSet> {
        let inside: Vec<&Subspace> = self
            .source
            .lines()
            .iter()
            .filter(|s| m.contains(s).unwrap_or(false))
            .collect();
        let spanned = inside
            .iter()
            .try_fold(self.space.zero(), |acc, s| acc.sum(s))?;
        if m.is_zero() || &spanned != m {
            return Err(Error::Domain(
                "subspace is not a sum of source lines".into(),
            ));
        }
        let mp = self.space.perp(m)?;
        let mut out = MemberSet::empty();
        for (i, u) in self.members.iter().enumerate() {
            if u.incident(m)? || (!plus_only && u.incident(&mp)?) {
                out = out.with(i);
            }
        }
        Ok(out)
    }
}

/// Hyperbolic lines inside `u`, found by enumerating 2-subspaces in u's
/// coordinates.
pub fn hyperbolic_lines_in(
    space: &SymplecticSpace,
    u: &Subspace,
    budget: Budget,
) -> Result<Vec<Subspace>> {
    if u.dim() < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for coords in enumerate_subspaces(space.prime(), u.dim(), 2, budget)? {
        let line = u.embed(&coords)?;
        if space.is_nondegenerate(&line)? {
            out.push(line);
        }
    }
    out.sort();
    Ok(out)
}

/// A line with cached basis vectors and their images under the Gram map,
/// so orthogonality is four dot products.
struct PoolLine {
    basis: [Vec<u32>; 2],
    form: [Vec<u32>; 2],
}

/// Sets of `size` mutually orthogonal lines drawn from the sorted `pool`,
/// as increasing index lists, in lexicographic order. Stops after `limit`.
pub(crate) fn orthogonal_cliques(
    space: &SymplecticSpace,
    pool: &[Subspace],
    size: usize,
    limit: Option<usize>,
    counter: &mut NodeCounter,
) -> Result<Vec<Vec<usize>>> {
    let p = space.prime();
    let lines: Vec<PoolLine> = pool
        .iter()
        .map(|l| {
            let b = l.basis();
            let basis = [b.row(0).to_vec(), b.row(1).to_vec()];
            let form = [space.form_image(&basis[0]), space.form_image(&basis[1])];
            PoolLine { basis, form }
        })
        .collect();
    let orth = |a: usize, b: usize| {
        let (a, b) = (&lines[a], &lines[b]);
        a.basis
            .iter()
            .all(|x| b.form.iter().all(|y| dot(p, x, y) == 0))
    };

    struct Search<'a, F: Fn(usize, usize) -> bool> {
        orth: F,
        size: usize,
        limit: usize,
        counter: &'a mut NodeCounter,
        chosen: Vec<usize>,
        found: Vec<Vec<usize>>,
    }

    impl<F: Fn(usize, usize) -> bool> Search<'_, F> {
        fn extend(&mut self, candidates: &[usize]) -> Result<()> {
            if self.chosen.len() == self.size {
                self.found.push(self.chosen.clone());
                return Ok(());
            }
            let need = self.size - self.chosen.len();
            for (pos, &c) in candidates.iter().enumerate() {
                if candidates.len() - pos < need || self.found.len() >= self.limit {
                    break;
                }
                self.counter.tick()?;
                let next: Vec<usize> = candidates[pos + 1..]
                    .iter()
                    .copied()
                    .filter(|&d| (self.orth)(c, d))
                    .collect();
                self.chosen.push(c);
                self.extend(&next)?;
                self.chosen.pop();
            }
            Ok(())
        }
    }

    let mut search = Search {
        orth,
        size,
        limit: limit.unwrap_or(usize::MAX),
        counter,
        chosen: Vec::with_capacity(size),
        found: Vec::new(),
    };
    if size == 0 {
        return Ok(vec![Vec::new()]);
    }
    let all: Vec<usize> = (0..pool.len()).collect();
    search.extend(&all)?;
    Ok(search.found)
}

/// All of H_1 in canonical order.
pub fn all_hyperbolic_lines(space: &SymplecticSpace, budget: Budget) -> Result<Vec<Subspace>> {
    hyperbolic_lines_in(space, &space.full(), budget)
}

/// Lines compatible with `u`: those inside u or inside u^⊥. A decomposition
/// has u among its level-k sums exactly when all its lines are compatible.
fn compatible_lines(
    space: &SymplecticSpace,
    u: &Subspace,
    budget: Budget,
) -> Result<Vec<Subspace>> {
    let mut lines = hyperbolic_lines_in(space, u, budget)?;
    lines.extend(hyperbolic_lines_in(space, &space.perp(u)?, budget)?);
    lines.sort();
    lines.dedup();
    Ok(lines)
}

fn cliques_to_base_subsets(pool: &[Subspace], cliques: Vec<Vec<usize>>) -> Vec<BaseSubset> {
    cliques
        .into_iter()
        .map(|c| BaseSubset::from_sorted(c.into_iter().map(|i| pool[i].clone()).collect()))
        .collect()
}

/// Base subsets of H_1 whose level-k expansion contains every element of
/// `x`, in lexicographic order, stopping after `limit`.
pub fn base_subsets_containing(
    space: &SymplecticSpace,
    x: &[Subspace],
    limit: Option<usize>,
    budget: Budget,
) -> Result<Vec<BaseSubset>> {
    for u in x {
        if !space.is_nondegenerate(u)? || u.is_zero() || u.is_full() {
            return Err(Error::Domain(
                "constraints must be proper non-degenerate subspaces".into(),
            ));
        }
    }
    let pool = match x.split_first() {
        None => all_hyperbolic_lines(space, budget)?,
        Some((first, rest)) => {
            let mut pool = compatible_lines(space, first, budget)?;
            let perps = rest
                .iter()
                .map(|u| space.perp(u))
                .collect::<Result<Vec<_>>>()?;
            pool.retain(|l| {
                rest.iter().zip(&perps).all(|(u, up)| {
                    u.contains(l).unwrap_or(false) || up.contains(l).unwrap_or(false)
                })
            });
            pool
        }
    };
    let mut counter = NodeCounter::new("searching orthogonal line decompositions", budget);
    let cliques = orthogonal_cliques(space, &pool, space.n(), limit, &mut counter)?;
    Ok(cliques_to_base_subsets(&pool, cliques))
}

/// Every base subset of H_1.
pub fn enumerate_base_subsets(space: &SymplecticSpace, budget: Budget) -> Result<Vec<BaseSubset>> {
    base_subsets_containing(space, &[], None, budget)
}

/// `count` distinct mutually orthogonal hyperbolic lines inside `n_sub`,
/// if there are any.
pub fn orthogonal_lines_in(
    space: &SymplecticSpace,
    n_sub: &Subspace,
    count: usize,
    budget: Budget,
) -> Result<Option<Vec<Subspace>>> {
    let pool = hyperbolic_lines_in(space, n_sub, budget)?;
    let mut counter = NodeCounter::new("searching orthogonal lines", budget);
    let found = orthogonal_cliques(space, &pool, count, Some(1), &mut counter)?;
    Ok(found
        .into_iter()
        .next()
        .map(|c| c.into_iter().map(|i| pool[i].clone()).collect()))
}

/// Decides exactness of subsets of one level base subset, caching the
/// compatible lines of each member.
pub struct ExactnessOracle<'a> {
    level: &'a LevelBaseSubset,
    member_lines: Vec<Vec<Subspace>>,
    all_lines: OnceCell<Vec<Subspace>>,
    budget: Budget,
    nodes: Cell<u64>,
}

impl<'a> ExactnessOracle<'a> {
    pub fn new(level: &'a LevelBaseSubset, budget: Budget) -> Result<Self> {
        let member_lines = level
            .members()
            .iter()
            .map(|u| compatible_lines(level.space(), u, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactnessOracle {
            level,
            member_lines,
            all_lines: OnceCell::new(),
            budget,
            nodes: Cell::new(0),
        })
    }

    pub fn level(&self) -> &LevelBaseSubset {
        self.level
    }

    /// Search nodes spent across all queries so far.
    pub fn nodes(&self) -> u64 {
        self.nodes.get()
    }

    fn pool(&self, x: MemberSet) -> Result<Vec<Subspace>> {
        let mut it = x.iter();
        let Some(first) = it.next() else {
            if self.all_lines.get().is_none() {
                let lines = all_hyperbolic_lines(self.level.space(), self.budget)?;
                let _ = self.all_lines.set(lines);
            }
            return Ok(self.all_lines.get().expect("just set").clone());
        };
        let mut pool = self.member_lines[first].clone();
        for j in it {
            let other = &self.member_lines[j];
            pool.retain(|l| other.binary_search(l).is_ok());
        }
        Ok(pool)
    }

    /// Base subsets of H_1 whose level-k expansion contains `x`.
    pub fn containing(&self, x: MemberSet, limit: Option<usize>) -> Result<Vec<BaseSubset>> {
        let pool = self.pool(x)?;
        let space = self.level.space();
        let mut counter = NodeCounter::new("deciding exactness", self.budget);
        let result = orthogonal_cliques(space, &pool, space.n(), limit, &mut counter);
        self.nodes.set(self.nodes.get() + counter.nodes());
        Ok(cliques_to_base_subsets(&pool, result?))
    }

    pub fn is_exact(&self, x: MemberSet) -> Result<bool> {
        Ok(self.containing(x, Some(2))?.len() == 1)
    }

    /// Inexact, and every one-member extension is exact.
    pub fn is_maximal_inexact(&self, x: MemberSet) -> Result<bool> {
        if self.is_exact(x)? {
            return Ok(false);
        }
        for i in (0..self.level.len()).filter(|&i| !x.contains(i)) {
            if !self.is_exact(x.with(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn classify_all(&self) -> Result<ExactnessTable> {
        ExactnessTable::classify(self.level.len(), |x| self.is_exact(x))
    }
}

/// Exactness of every subset of an m-member base subset.
#[derive(Debug, Clone)]
pub struct ExactnessTable {
    len: usize,
    exact: Vec<bool>,
}

impl ExactnessTable {
    /// Largest member count for which all subsets are tabulated.
    pub const MAX_MEMBERS: usize = 20;

    pub fn classify(
        len: usize,
        mut is_exact: impl FnMut(MemberSet) -> Result<bool>,
    ) -> Result<Self> {
        if len > Self::MAX_MEMBERS {
            return Err(Error::InvalidArgument(format!(
                "cannot tabulate all subsets of {len} members"
            )));
        }
        let exact = (0..1u128 << len)
            .map(|bits| is_exact(MemberSet::from_bits(bits)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactnessTable { len, exact })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_exact(&self, x: MemberSet) -> bool {
        self.exact[x.bits() as usize]
    }

    pub fn is_maximal_inexact(&self, x: MemberSet) -> bool {
        !self.is_exact(x)
            && (0..self.len)
                .filter(|&i| !x.contains(i))
                .all(|i| self.is_exact(x.with(i)))
    }

    pub fn subsets(&self) -> impl Iterator<Item = MemberSet> {
        (0..1u128 << self.len).map(MemberSet::from_bits)
    }

    pub fn maximal_inexact(&self) -> Vec<MemberSet> {
        self.subsets()
            .filter(|&x| self.is_maximal_inexact(x))
            .collect()
    }
}

/// True iff `h` and `h⁻¹` both send maximal inexact subsets to maximal
/// inexact subsets. `h` maps member indices of `from` to those of `to`.
pub fn preserves_maximal_inexact(h: &[usize], from: &ExactnessTable, to: &ExactnessTable) -> bool {
    let mut inv = vec![0; h.len()];
    for (i, &j) in h.iter().enumerate() {
        inv[j] = i;
    }
    from.maximal_inexact()
        .into_iter()
        .all(|x| to.is_maximal_inexact(x.map(|i| h[i])))
        && to
            .maximal_inexact()
            .into_iter()
            .all(|y| from.is_maximal_inexact(y.map(|j| inv[j])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma3Outcome {
    /// At most one index i has U_i(X) ≠ S_i (an empty U_i counts as ≠).
    pub hypothesis: bool,
    pub exact: Option<bool>,
}

impl Lemma3Outcome {
    pub fn holds(self) -> bool {
        !self.hypothesis || self.exact == Some(true)
    }
}

/// Tests "X is exact whenever U_i(X) differs from S_i for at most one i".
pub fn lemma3_check(oracle: &ExactnessOracle<'_>, x: MemberSet) -> Result<Lemma3Outcome> {
    let level = oracle.level();
    let mut deviations = 0;
    for (i, line) in level.source().lines().iter().enumerate() {
        if level.u_i(x, i)?.as_ref() != Some(line) {
            deviations += 1;
        }
    }
    let hypothesis = deviations <= 1;
    let exact = if hypothesis {
        Some(oracle.is_exact(x)?)
    } else {
        None
    };
    Ok(Lemma3Outcome { hypothesis, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use crate::hyperbolic::HkFamily;
    use std::collections::HashSet;

    fn space(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap()
    }

    fn standard(s: &SymplecticSpace) -> BaseSubset {
        SymplecticBase::standard(s).base_subset(s).unwrap()
    }

    #[test]
    fn base_subset_from_standard_base() {
        let s = space(2, 2);
        let b = standard(&s);
        let mut expected = [s.coordinate_span(&[0, 1]), s.coordinate_span(&[2, 3])];
        expected.sort();
        assert_eq!(b.lines(), &expected[..]);
        let permuted: Vec<Vec<u32>> = [3, 0, 2, 1].iter().map(|&i| s.unit(i)).collect();
        assert_eq!(
            SymplecticBase::new(&s, &permuted)
                .unwrap()
                .base_subset(&s)
                .unwrap(),
            b
        );
        let bad: Vec<Vec<u32>> = [0, 2, 1, 3].iter().map(|&i| s.unit(i)).collect();
        assert!(SymplecticBase::new(&s, &bad).is_ok());
        let dependent = vec![s.unit(0), s.unit(0), s.unit(1), s.unit(3)];
        assert!(SymplecticBase::new(&s, &dependent).is_err());
        let two_partners = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ];
        assert!(SymplecticBase::new(&s, &two_partners).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(5, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn decomposition_counts() {
        assert_eq!(
            enumerate_base_subsets(&space(2, 2), Budget::DEFAULT)
                .unwrap()
                .len(),
            10
        );
        assert_eq!(
            enumerate_base_subsets(&space(3, 2), Budget::DEFAULT)
                .unwrap()
                .len(),
            45
        );
        assert_eq!(
            enumerate_base_subsets(&space(2, 3), Budget::DEFAULT)
                .unwrap()
                .len(),
            1120
        );
        let refused = enumerate_base_subsets(&space(2, 3), Budget::new(100)).unwrap_err();
        assert!(refused.is_budget());
    }

    #[test]
    fn random_base_subsets() {
        let s = space(3, 3);
        for seed in 0..100 {
            let b = BaseSubset::random(&s, seed);
            assert_eq!(BaseSubset::new(&s, b.lines().to_vec()).unwrap(), b);
        }
        assert_eq!(BaseSubset::random(&s, 9), BaseSubset::random(&s, 9));

        let s = space(2, 2);
        let all: HashSet<BaseSubset> = enumerate_base_subsets(&s, Budget::DEFAULT)
            .unwrap()
            .into_iter()
            .collect();
        let reached: HashSet<BaseSubset> =
            (0..200).map(|seed| BaseSubset::random(&s, seed)).collect();
        assert_eq!(reached, all);
    }

    #[test]
    fn expansion() {
        let s = space(2, 3);
        let b = standard(&s);
        let l2 = b.expand(&s, 2).unwrap();
        assert_eq!(l2.len(), 3);
        let lines = b.lines();
        assert_eq!(l2.member(0), &lines[0].sum(&lines[1]).unwrap());
        for (i, u) in l2.members().iter().enumerate() {
            assert!(s.is_nondegenerate(u).unwrap());
            assert!(l2.position(&s.perp(u).unwrap()).is_none());
            assert_eq!(l2.complement(i), None);
        }
        let s4 = space(2, 4);
        let l = standard(&s4).expand(&s4, 2).unwrap();
        for i in 0..l.len() {
            let c = l.complement(i).unwrap();
            assert_eq!(l.member(c), &s4.perp(l.member(i)).unwrap());
        }
        assert!(b.expand(&s, 3).is_err());
    }

    #[test]
    fn u_i_examples() {
        let s = space(2, 3);
        let b = standard(&s);
        let l2 = b.expand(&s, 2).unwrap();
        // Members {0,1} and {0,2} contain line 0.
        let x = MemberSet::from_indices([0, 1]);
        assert_eq!(l2.u_i(x, 0).unwrap(), Some(b.lines()[0].clone()));
        assert_eq!(
            l2.u_i(MemberSet::from_indices([0]), 0).unwrap(),
            Some(l2.member(0).clone())
        );
        assert_eq!(l2.u_i(MemberSet::from_indices([2]), 0).unwrap(), None);
    }

    #[test]
    fn incidence_filters() {
        let s4 = space(2, 4);
        let l = standard(&s4).expand(&s4, 2).unwrap();
        for m in l.members() {
            let set = l.incident_members(m, false).unwrap();
            assert_eq!(set.len(), 2);
            assert!(set.contains(l.position(m).unwrap()));
        }
        let s5 = space(2, 5);
        let l = standard(&s5).expand(&s5, 2).unwrap();
        assert_eq!(l.incident_members(l.member(0), false).unwrap().len(), 4);
        let s3 = space(2, 3);
        let b = standard(&s3);
        let l2 = b.expand(&s3, 2).unwrap();
        assert_eq!(
            l2.incident_members(&b.lines()[0], true).unwrap(),
            MemberSet::from_indices([0, 1])
        );
        assert!(l2
            .incident_members(&s3.coordinate_span(&[0, 2]), true)
            .is_err());
    }

    /// Constrained search agrees with filtering the full enumeration.
    #[test]
    fn constrained_search_matches_filtering() {
        for (p, n, k) in [(2, 3, 1), (2, 3, 2), (3, 2, 1)] {
            let s = space(p, n);
            let all = enumerate_base_subsets(&s, Budget::DEFAULT).unwrap();
            let expansions: Vec<HashSet<Subspace>> = all
                .iter()
                .map(|b| b.expand(&s, k).unwrap().members().iter().cloned().collect())
                .collect();
            let h = HkFamily::build(&s, k, Budget::DEFAULT).unwrap();
            for seed in 0..15u64 {
                let mut rng = seeded_rng(seed);
                let b = BaseSubset::random_with(&s, &mut rng);
                let level = b.expand(&s, k).unwrap();
                let x: Vec<Subspace> = level
                    .members()
                    .iter()
                    .take(1 + seed as usize % level.len())
                    .cloned()
                    .collect();
                let fast = base_subsets_containing(&s, &x, None, Budget::DEFAULT).unwrap();
                let slow: Vec<BaseSubset> = all
                    .iter()
                    .zip(&expansions)
                    .filter(|(_, e)| x.iter().all(|u| e.contains(u)))
                    .map(|(b, _)| b.clone())
                    .collect();
                assert_eq!(fast, slow);
                // An arbitrary member of H_k as a lone constraint.
                let u = h.member(seed as usize * 7 % h.len()).clone();
                let fast =
                    base_subsets_containing(&s, std::slice::from_ref(&u), None, Budget::DEFAULT)
                        .unwrap();
                let slow = all
                    .iter()
                    .zip(&expansions)
                    .filter(|(_, e)| e.contains(&u))
                    .count();
                assert_eq!(fast.len(), slow);
            }
        }
    }

    #[test]
    fn full_expansion_is_exact() {
        let s = space(2, 3);
        let b = BaseSubset::random(&s, 3);
        let l2 = b.expand(&s, 2).unwrap();
        let found = base_subsets_containing(&s, l2.members(), None, Budget::DEFAULT).unwrap();
        assert_eq!(found, vec![b]);
        let oracle = ExactnessOracle::new(&l2, Budget::DEFAULT).unwrap();
        assert!(oracle.is_exact(l2.all()).unwrap());
        assert!(!oracle.is_exact(MemberSet::empty()).unwrap());
    }

    #[test]
    fn incidence_sets_of_level_two_are_maximal_inexact() {
        let s = space(2, 4);
        let level = standard(&s).expand(&s, 2).unwrap();
        let oracle = ExactnessOracle::new(&level, Budget::DEFAULT).unwrap();
        for m in level.members() {
            let x = level.incident_members(m, false).unwrap();
            assert!(oracle.containing(x, None).unwrap().len() >= 2);
            assert!(oracle.is_maximal_inexact(x).unwrap());
        }
        let table = oracle.classify_all().unwrap();
        let mut expected: Vec<MemberSet> = level
            .members()
            .iter()
            .map(|m| level.incident_members(m, false).unwrap())
            .collect();
        expected.sort();
        expected.dedup();
        assert_eq!(table.maximal_inexact(), expected);
    }

    #[test]
    fn lemma3_on_small_cases() {
        let s = space(2, 3);
        let level = standard(&s).expand(&s, 2).unwrap();
        let oracle = ExactnessOracle::new(&level, Budget::DEFAULT).unwrap();
        let empty = lemma3_check(&oracle, MemberSet::empty()).unwrap();
        assert!(!empty.hypothesis && empty.holds());
        for x in (0..8u128).map(MemberSet::from_bits) {
            assert!(lemma3_check(&oracle, x).unwrap().holds());
        }
    }

    #[test]
    fn lemma7_style_searches() {
        let s = space(2, 3);
        let found = orthogonal_lines_in(&s, &s.full(), 3, Budget::DEFAULT)
            .unwrap()
            .unwrap();
        assert_eq!(found.len(), 3);
        let iso = s.coordinate_span(&[0, 2, 4]);
        assert!(orthogonal_lines_in(&s, &iso, 1, Budget::DEFAULT)
            .unwrap()
            .is_none());
    }

    #[test]
    fn member_sets() {
        let x = MemberSet::from_indices([0, 3, 5]);
        assert_eq!(x.len(), 3);
        assert!(x.contains(3) && !x.contains(4));
        assert_eq!(x.without(3).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert!(x.without(0).is_subset(x));
        assert_eq!(MemberSet::full(4).bits(), 0b1111);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[0,3,5]");
        assert_eq!(x.map(|i| i + 1), MemberSet::from_indices([1, 4, 6]));
    }
}
