//! The individual checks behind the registry.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::base::{
    base_subsets_containing, enumerate_base_subsets, lemma3_check, orthogonal_lines_in,
    preserves_maximal_inexact, BaseSubset, ExactnessOracle, ExactnessTable, LevelBaseSubset,
    MemberSet, SymplecticBase,
};
use crate::error::{Budget, Error, Result};
use crate::field::Prime;
use crate::hyperbolic::{Bijection, HkFamily};
use crate::involution::{involution_universe, CommutingGraph};
use crate::linalg::{enumerate_subspaces, Subspace};
use crate::pair::{PairBaseSubset, PairExactnessOracle, ProjectiveBase};
use crate::symplectic::{
    seeded_rng, sp_order, GroupElement, GroupKind, SeededRng, SymplecticSpace,
};

use super::inducing::{find_inducing_element, reconstruct_inducing_element, InducedTable};
use super::report::{
    rows, space, subspaces, CountedQuantity, Counterexample, ExactnessClaim, MapProperty, Mode,
    Params, Rows, Side, Status,
};

pub(crate) struct Context {
    pub params: Params,
    pub seed: u64,
    pub budget: Budget,
}

impl Context {
    fn p(&self, default: u32) -> u32 {
        self.params.p.unwrap_or(default)
    }

    fn n(&self, default: usize) -> usize {
        self.params.n.unwrap_or(default)
    }

    fn k(&self, default: usize) -> usize {
        self.params.k.unwrap_or(default)
    }

    fn samples(&self, default: usize) -> usize {
        self.params.samples.unwrap_or(default)
    }

    fn mode(&self) -> Mode {
        self.params.mode.unwrap_or(Mode::Exhaustive)
    }

    /// Requested parameters with the resolved single values filled in.
    fn resolved(&self, p: Option<u32>, n: Option<usize>, k: Option<usize>) -> Params {
        Params {
            p: p.or(self.params.p),
            n: n.or(self.params.n),
            k: k.or(self.params.k),
            ..self.params.clone()
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub params: Option<Params>,
    pub counts: BTreeMap<String, u64>,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
    inapplicable: bool,
}

impl Outcome {
    fn with_params(params: Params) -> Self {
        Outcome {
            params: Some(params),
            ..Outcome::default()
        }
    }

    fn set(&mut self, key: impl Into<String>, value: impl TryInto<u64>) {
        self.counts
            .insert(key.into(), value.try_into().unwrap_or(u64::MAX));
    }

    fn add(&mut self, key: &str, value: u64) {
        *self.counts.entry(key.to_string()).or_insert(0) += value;
    }

    /// Records a failure; only the first counterexample is kept.
    fn fail(&mut self, cx: Counterexample) {
        self.counterexample.get_or_insert(cx);
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    fn inapplicable(mut self, why: impl Into<String>) -> Self {
        self.inapplicable = true;
        self.note(why);
        self
    }

    pub fn status(&self) -> Status {
        if self.counterexample.is_some() {
            Status::Fail
        } else if self.inapplicable {
            Status::Inapplicable
        } else {
            Status::Pass
        }
    }
}

fn prime(p: u32) -> Result<Prime> {
    Prime::new(p)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, i| acc.saturating_mul(i))
}

/// A seeded element of GSp(Ω): a random symplectic element times a
/// similitude with random multiplier.
fn sample_element(space: &SymplecticSpace, rng: &mut SeededRng) -> Result<GroupElement> {
    let l = space.random_sp_with(rng);
    let q = space.prime().value();
    if q == 2 {
        return Ok(l);
    }
    l.compose(&space.similitude_generator(rng.gen_range(1..q))?)
}

/// Permutations of 0..len in lexicographic order.
fn permutations(len: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = Some((0..len).collect::<Vec<usize>>());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut perm = current.clone();
        if let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) {
            let j = (i..perm.len())
                .rev()
                .find(|&j| perm[j] > perm[i - 1])
                .expect("pivot has a successor");
            perm.swap(i - 1, j);
            perm[i..].reverse();
            next = Some(perm);
        }
        Some(current)
    })
}

/// Member index sets, in `family`, of the level-k expansion of each base
/// subset.
fn level_index_sets(family: &HkFamily, bases: &[BaseSubset], k: usize) -> Result<Vec<Vec<usize>>> {
    bases
        .iter()
        .map(|b| {
            let level = b.expand(family.space(), k)?;
            let mut set = level
                .members()
                .iter()
                .map(|u| {
                    family
                        .position(u)
                        .ok_or_else(|| Error::Domain("expansion member outside H_k".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            set.sort_unstable();
            Ok(set)
        })
        .collect()
}

/// True iff `members` is exactly the level-k expansion of a base subset.
pub(crate) fn is_level_base_subset(
    space: &SymplecticSpace,
    k: usize,
    members: &[Subspace],
    budget: Budget,
) -> Result<bool> {
    let mut ms = members.to_vec();
    ms.sort();
    ms.dedup();
    if k == 0 || k >= space.n() || ms.len() as u128 != binomial(space.n(), k) {
        return Ok(false);
    }
    for u in &ms {
        if u.dim() != 2 * k || !space.is_nondegenerate(u)? {
            return Ok(false);
        }
    }
    // C(n, k) distinct members inside one expansion are all of it.
    Ok(!base_subsets_containing(space, &ms, Some(1), budget)?.is_empty())
}

/// A family together with its base subsets as index sets, for evaluating
/// properties of permutations of H_k.
pub(crate) struct MapContext {
    family: HkFamily,
    base_list: Vec<Vec<usize>>,
    base_sets: HashSet<Vec<usize>>,
}

impl MapContext {
    pub fn new(space: &SymplecticSpace, k: usize, budget: Budget) -> Result<Self> {
        let family = HkFamily::build(space, k, budget)?;
        let bases = enumerate_base_subsets(space, budget)?;
        let base_list = level_index_sets(&family, &bases, k)?;
        let base_sets = base_list.iter().cloned().collect();
        Ok(MapContext {
            family,
            base_list,
            base_sets,
        })
    }

    /// First base subset whose image is not a base subset.
    fn base_subset_violation(&self, f: &Bijection) -> Option<Vec<usize>> {
        self.base_list
            .iter()
            .map(|set| f.apply_set(set))
            .find(|img| !self.base_sets.contains(img))
    }

    fn preserves_base_subsets(&self, f: &Bijection) -> bool {
        self.base_subset_violation(f).is_none()
    }

    /// First member U with f(U^⊥) ≠ f(U)^⊥ (n = 2k only).
    fn perp_violation(&self, f: &Bijection) -> Result<Option<usize>> {
        let pk = self.family.perp_map(&self.family)?;
        Ok((0..self.family.len()).find(|&i| f.apply(pk.apply(i)) != pk.apply(f.apply(i))))
    }

    fn perp_counterexample(&self, f: &Bijection, i: usize) -> Result<Counterexample> {
        let space = self.family.space();
        let perp_index = self
            .family
            .position(&space.perp(self.family.member(i))?)
            .expect("n = 2k");
        Ok(Counterexample::PerpNotPreserved {
            p: space.prime().value(),
            n: space.n(),
            image_of_u: rows(self.family.member(f.apply(i))),
            image_of_perp: rows(self.family.member(f.apply(perp_index))),
        })
    }

    fn map_counterexample(
        &self,
        f: &Bijection,
        property: MapProperty,
        expected: bool,
    ) -> Counterexample {
        let space = self.family.space();
        Counterexample::MapProperty {
            p: space.prime().value(),
            n: space.n(),
            k: self.family.k(),
            image: f.images().to_vec(),
            property,
            expected,
        }
    }

    pub fn evaluate(&self, f: &Bijection, property: MapProperty, budget: Budget) -> Result<bool> {
        if f.len() != self.family.len() {
            return Err(Error::InvalidArgument(
                "map length differs from the family size".into(),
            ));
        }
        match property {
            MapProperty::PreservesBaseSubsets => Ok(self.preserves_base_subsets(f)),
            MapProperty::RespectsPerp => Ok(self.perp_violation(f)?.is_none()),
            MapProperty::FixesPerpPairs => Ok(self
                .family
                .perp_pairs()?
                .induced(f)
                .map(|b| b.is_identity())
                .unwrap_or(false)),
            MapProperty::Induced => {
                let group = self.family.space().enumerate_gsp(budget)?;
                Ok(find_inducing_element(&self.family, f, &group)?.is_some())
            }
            MapProperty::PreservesCommutation => {
                let universe = involution_universe(&self.family)?;
                let graph = CommutingGraph::build(&universe, budget)?;
                Ok(preserves_commutation(&graph, f))
            }
        }
    }
}

fn preserves_commutation(graph: &CommutingGraph, f: &Bijection) -> bool {
    (0..graph.len()).all(|i| {
        (i + 1..graph.len()).all(|j| graph.commutes(i, j) == graph.commutes(f.apply(i), f.apply(j)))
    })
}

/// Perp-closed member sets of a family with n = 2k, one per subset of the
/// perp pairs.
fn perp_closed_sets(
    pairs: &[(usize, usize)],
    budget: Budget,
) -> Result<impl Iterator<Item = Vec<usize>> + '_> {
    let count = 1u128.checked_shl(pairs.len() as u32).unwrap_or(u128::MAX);
    budget.check("enumerating perp-closed sets", count)?;
    Ok((0..count as u64).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, &(a, b))| [a, b])
            .collect()
    }))
}

// ---------------------------------------------------------------------------
// enumeration

const ENUMERATION_CASES: [(u32, usize); 3] = [(2, 2), (3, 2), (2, 3)];

pub(crate) fn enumeration(ctx: &Context) -> Result<Outcome> {
    let cases: Vec<(u32, usize)> = match (ctx.params.p, ctx.params.n) {
        (None, None) => ENUMERATION_CASES.to_vec(),
        (p, n) => vec![(p.unwrap_or(2), n.unwrap_or(2))],
    };
    let mut out = Outcome::with_params(ctx.params.clone());
    for (p, n) in cases {
        let sp = space(p, n)?;
        let tag = format!("p{p}_n{n}");
        let q = p as u128;
        let lines = HkFamily::build(&sp, 1, ctx.budget)?.len() as u64;
        // Ordered pairs (v, w) with Ω(v, w) = 1, divided by the q(q²−1)
        // such pairs spanning any one hyperbolic line.
        let line_formula = (q.pow(2 * n as u32) - 1) * q.pow(2 * n as u32 - 2) / (q * q - 1);
        out.set(format!("{tag}_hyperbolic_lines"), lines);
        if lines as u128 != line_formula {
            out.fail(Counterexample::Count {
                quantity: CountedQuantity::HyperbolicLines,
                p,
                n,
                expected: line_formula as u64,
                found: lines,
            });
        }

        let bases = enumerate_base_subsets(&sp, ctx.budget)?.len() as u64;
        // Choosing a first line leaves a base subset of its perp, and each
        // decomposition is counted once per line.
        let mut recursive = 1u128;
        for r in 2..=n {
            let hr = HkFamily::build(&space(p, r)?, 1, ctx.budget)?.len() as u128;
            recursive = recursive * hr / r as u128;
        }
        // Sp(Ω) acts simply transitively on ordered symplectic bases up to
        // the stabilizer Sp(2)^n ⋊ S_n of a decomposition.
        let orbit = sp_order(p as u64, n) / (sp_order(p as u64, 1).pow(n as u32) * factorial(n));
        out.set(format!("{tag}_base_subsets"), bases);
        out.set(format!("{tag}_base_subsets_recursive"), recursive);
        out.set(format!("{tag}_base_subsets_orbit"), orbit);
        if bases as u128 != recursive || bases as u128 != orbit {
            out.fail(Counterexample::Count {
                quantity: CountedQuantity::BaseSubsets,
                p,
                n,
                expected: recursive as u64,
                found: bases,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// fact1

pub(crate) fn fact1(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(3), ctx.n(2), ctx.k(1));
    let out = Outcome::with_params(ctx.resolved(Some(p), Some(n), Some(k)));
    let sp = space(p, n)?;
    if p == 2 {
        return Ok(out.inapplicable("symplectic involutions need odd characteristic"));
    }
    let mut out = out;
    let family = HkFamily::build(&sp, k, ctx.budget)?;
    let universe = involution_universe(&family)?;
    let graph = CommutingGraph::build(&universe, ctx.budget)?;
    let mc = graph.maximal_commuting_sets(ctx.budget)?;
    let bases = enumerate_base_subsets(&sp, ctx.budget)?;
    let mut base_sets = level_index_sets(&family, &bases, k)?;
    base_sets.sort();
    base_sets.dedup();

    out.set("involutions", universe.len());
    out.set("universe_size", universe.len());
    out.set("base_subsets", base_sets.len());
    out.set("mc_subsets", mc.len());

    let member_rows = |set: &[usize]| {
        set.iter()
            .map(|&i| rows(family.member(i)))
            .collect::<Vec<_>>()
    };
    let mc_set: HashSet<&Vec<usize>> = mc.iter().collect();
    let base_set: HashSet<&Vec<usize>> = base_sets.iter().collect();
    let mismatch = mc
        .iter()
        .find(|s| !base_set.contains(s))
        .or_else(|| base_sets.iter().find(|s| !mc_set.contains(s)));
    if let Some(set) = mismatch {
        out.fail(Counterexample::CommutingSetMismatch {
            p,
            n,
            k,
            members: member_rows(set),
        });
    }

    let mut commuting_pairs = 0u64;
    let mut covered = 0u64;
    for (i, j) in graph.commuting_pairs() {
        commuting_pairs += 1;
        if mc
            .iter()
            .any(|s| s.binary_search(&i).is_ok() && s.binary_search(&j).is_ok())
        {
            covered += 1;
        } else {
            out.fail(Counterexample::UncoveredCommutingPair {
                p,
                n,
                k,
                first: rows(family.member(i)),
                second: rows(family.member(j)),
            });
        }
    }
    out.set("commuting_pairs", commuting_pairs);
    out.set("commuting_pairs_in_mc", covered);

    let mut splitting = 0u64;
    for (i, u) in universe.iter().enumerate() {
        for (j, v) in universe.iter().enumerate().skip(i + 1) {
            if u.commutes(v)? == u.splits(v)? {
                splitting += 1;
            } else {
                out.fail(Counterexample::CommutationMismatch {
                    p,
                    n,
                    first: rows(family.member(i)),
                    second: rows(family.member(j)),
                });
            }
        }
    }
    out.set("splitting_agreements", splitting);

    // Induced maps and flips preserve base subsets exactly when the
    // transported maps on involutions preserve commutation.
    let base_lookup: HashSet<Vec<usize>> = base_sets.iter().cloned().collect();
    let mut maps: Vec<Bijection> = Vec::new();
    let mut rng = seeded_rng(ctx.seed);
    for _ in 0..10 {
        maps.push(family.induced_map(&sample_element(&sp, &mut rng)?)?);
    }
    if 2 * k == n {
        let pairs = family.perp_pairs()?;
        for _ in 0..10 {
            let x: Vec<usize> = pairs
                .pairs()
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .flat_map(|&(a, b)| [a, b])
                .collect();
            maps.push(family.flip_map(&x)?);
        }
    }
    for f in &maps {
        let preserves = base_sets
            .iter()
            .all(|s| base_lookup.contains(&f.apply_set(s)));
        let commutes = preserves_commutation(&graph, f);
        let cx = |property, expected| Counterexample::MapProperty {
            p,
            n,
            k,
            image: f.images().to_vec(),
            property,
            expected,
        };
        if !preserves {
            out.fail(cx(MapProperty::PreservesBaseSubsets, true));
        } else if !commutes {
            out.fail(cx(MapProperty::PreservesCommutation, true));
        }
    }
    out.set("dictionary_maps", maps.len());
    Ok(out)
}

pub(crate) fn recheck_commuting_set(
    space: &SymplecticSpace,
    k: usize,
    members: &[Subspace],
    budget: Budget,
) -> Result<bool> {
    let family = HkFamily::build(space, k, budget)?;
    let universe = involution_universe(&family)?;
    let graph = CommutingGraph::build(&universe, budget)?;
    let mut idx = members
        .iter()
        .map(|u| {
            family
                .position(u)
                .ok_or_else(|| Error::Domain("not a member of H_k".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    let is_mc = graph.is_maximal_commuting(&idx);
    Ok(is_mc != is_level_base_subset(space, k, members, budget)?)
}

// ---------------------------------------------------------------------------
// fact2

pub(crate) fn fact2(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(3), ctx.k(1));
    let samples = ctx.samples(100);
    let mut out = Outcome::with_params(Params {
        samples: Some(samples),
        ..ctx.resolved(Some(p), Some(n), Some(k))
    });
    let sp = space(p, n)?;
    let low = HkFamily::build(&sp, k, ctx.budget)?;
    let high = if 2 * k == n {
        low.clone()
    } else {
        HkFamily::build(&sp, n - k, ctx.budget)?
    };
    let perp = low.perp_map(&high)?;
    let bases = enumerate_base_subsets(&sp, ctx.budget)?;
    let low_sets = level_index_sets(&low, &bases, k)?;
    let high_sets: HashSet<Vec<usize>> = level_index_sets(&high, &bases, n - k)?
        .into_iter()
        .collect();

    let mut images = HashSet::new();
    for set in &low_sets {
        let img = perp.apply_set(set);
        if !high_sets.contains(&img) {
            out.fail(Counterexample::NotBaseSubset {
                p,
                n,
                k: n - k,
                members: img.iter().map(|&i| rows(high.member(i))).collect(),
            });
        }
        images.insert(img);
    }
    let back = perp.inverse();
    for set in high_sets.iter().filter(|s| !images.contains(*s)) {
        out.fail(Counterexample::NotBaseSubset {
            p,
            n,
            k,
            members: back
                .apply_set(set)
                .iter()
                .map(|&i| rows(low.member(i)))
                .collect(),
        });
    }
    out.set("base_subsets", bases.len());
    out.set("distinct_images", images.len());

    let mut rng = seeded_rng(ctx.seed);
    let mut intertwined = 0u64;
    let mut conjugates_preserving = 0u64;
    for _ in 0..samples {
        let l = sample_element(&sp, &mut rng)?;
        let f_low = low.induced_map(&l)?;
        let f_high = high.induced_map(&l)?;
        let lhs = perp.compose(&f_low)?;
        let rhs = f_high.compose(&perp)?;
        if let Some(i) = (0..low.len()).find(|&i| lhs.apply(i) != rhs.apply(i)) {
            let u = low.member(i);
            out.fail(Counterexample::PerpNotPreserved {
                p,
                n,
                image_of_u: rows(&l.apply(u)?),
                image_of_perp: rows(&l.apply(&sp.perp(u)?)?),
            });
        } else {
            intertwined += 1;
        }
        // perp ∘ f ∘ perp⁻¹ on the complementary level.
        let conj = perp.compose(&f_low)?.compose(&back)?;
        match high_sets
            .iter()
            .map(|s| conj.apply_set(s))
            .find(|img| !high_sets.contains(img))
        {
            None => conjugates_preserving += 1,
            Some(img) => out.fail(Counterexample::NotBaseSubset {
                p,
                n,
                k: n - k,
                members: img.iter().map(|&i| rows(high.member(i))).collect(),
            }),
        }
    }
    out.set("sampled_elements", samples);
    out.set("intertwining_holds", intertwined);
    out.set("conjugates_preserving_base_subsets", conjugates_preserving);
    Ok(out)
}

// ---------------------------------------------------------------------------
// perp_iff_base

const PERP_CASES: [(u32, usize); 3] = [(2, 2), (3, 2), (2, 3)];

pub(crate) fn perp_iff_base(ctx: &Context) -> Result<Outcome> {
    let cases: Vec<(u32, usize)> = match (ctx.params.p, ctx.params.n) {
        (None, None) => PERP_CASES.to_vec(),
        (p, n) => vec![(p.unwrap_or(2), n.unwrap_or(2))],
    };
    let mut out = Outcome::with_params(ctx.params.clone());
    for (p, n) in cases {
        let sp = space(p, n)?;
        let family = HkFamily::build(&sp, 1, ctx.budget)?;
        let bases = enumerate_base_subsets(&sp, ctx.budget)?;
        let mut shared = HashSet::new();
        for set in level_index_sets(&family, &bases, 1)? {
            for (a, &i) in set.iter().enumerate() {
                for &j in &set[a + 1..] {
                    shared.insert((i, j));
                }
            }
        }
        let (mut pairs, mut orthogonal) = (0u64, 0u64);
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                let (a, b) = (family.member(i), family.member(j));
                let orth = sp.orthogonal(a, b)?;
                pairs += 1;
                orthogonal += orth as u64;
                if orth != shared.contains(&(i, j)) {
                    out.fail(Counterexample::PerpBaseMismatch {
                        p,
                        n,
                        first: rows(a),
                        second: rows(b),
                    });
                }
            }
        }
        out.set(format!("p{p}_n{n}_pairs"), pairs);
        out.set(format!("p{p}_n{n}_orthogonal_pairs"), orthogonal);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// flips: example1, thm2_flip_negative, lemma9_for_maps

struct FlipSetting {
    ctx: MapContext,
    table: InducedTable,
    pairs: Vec<(usize, usize)>,
}

fn flip_setting(ctx: &Context, out: &mut Outcome) -> Result<Option<FlipSetting>> {
    let (p, n, k) = (ctx.p(2), ctx.n(2), ctx.k(1));
    out.params = Some(ctx.resolved(Some(p), Some(n), Some(k)));
    let sp = space(p, n)?;
    if 2 * k != n {
        return Ok(None);
    }
    let map_ctx = MapContext::new(&sp, k, ctx.budget)?;
    let group = sp.enumerate_gsp(ctx.budget)?;
    let table = InducedTable::build(&map_ctx.family, &group)?;
    let pairs = map_ctx.family.perp_pairs()?.pairs().to_vec();
    out.set("members", map_ctx.family.len());
    out.set("base_subsets", map_ctx.base_list.len());
    out.set("group_elements", table.group_size());
    out.set(
        "group_similitudes",
        group
            .iter()
            .filter(|g| g.kind() != GroupKind::Symplectic)
            .count(),
    );
    out.set("induced_permutations", table.distinct());
    Ok(Some(FlipSetting {
        ctx: map_ctx,
        table,
        pairs,
    }))
}

const FLIP_NEEDS_HALF: &str = "flips exist only when n = 2k";

pub(crate) fn example1(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(setting) = flip_setting(ctx, &mut out)? else {
        return Ok(out.inapplicable(FLIP_NEEDS_HALF));
    };
    let (mut sets, mut preserving, mut not_induced) = (0u64, 0u64, 0u64);
    for x in perp_closed_sets(&setting.pairs, ctx.budget)? {
        let f = setting.ctx.family.flip_map(&x)?;
        sets += 1;
        if setting.ctx.preserves_base_subsets(&f) {
            preserving += 1;
        } else {
            out.fail(
                setting
                    .ctx
                    .map_counterexample(&f, MapProperty::PreservesBaseSubsets, true),
            );
        }
        if !x.is_empty() {
            if setting.table.find(&f).is_none() {
                not_induced += 1;
            } else {
                out.fail(
                    setting
                        .ctx
                        .map_counterexample(&f, MapProperty::Induced, false),
                );
            }
        }
    }
    out.set("perp_closed_sets", sets);
    out.set("flips_preserving_base_subsets", preserving);
    out.set("nonempty_flips_not_induced", not_induced);
    Ok(out)
}

pub(crate) fn thm2_flip_negative(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(setting) = flip_setting(ctx, &mut out)? else {
        return Ok(out.inapplicable(FLIP_NEEDS_HALF));
    };
    let quotient = setting.ctx.family.perp_pairs()?;
    let (mut sets, mut identity_on_pairs, mut respects, mut not_induced) = (0u64, 0u64, 0u64, 0u64);
    for x in perp_closed_sets(&setting.pairs, ctx.budget)? {
        let f = setting.ctx.family.flip_map(&x)?;
        sets += 1;
        match quotient.induced(&f) {
            Ok(bar) if bar.is_identity() => identity_on_pairs += 1,
            _ => out.fail(
                setting
                    .ctx
                    .map_counterexample(&f, MapProperty::FixesPerpPairs, true),
            ),
        }
        match setting.ctx.perp_violation(&f)? {
            None => respects += 1,
            Some(i) => out.fail(setting.ctx.perp_counterexample(&f, i)?),
        }
        if !x.is_empty() {
            if setting.table.find(&f).is_none() {
                not_induced += 1;
            } else {
                out.fail(
                    setting
                        .ctx
                        .map_counterexample(&f, MapProperty::Induced, false),
                );
            }
        }
    }
    out.set("perp_closed_sets", sets);
    out.set("flips_identity_on_pairs", identity_on_pairs);
    out.set("flips_respecting_perp", respects);
    out.set("nonempty_flips_not_induced", not_induced);
    Ok(out)
}

pub(crate) fn lemma9_for_maps(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let Some(setting) = flip_setting(ctx, &mut out)? else {
        return Ok(out.inapplicable(FLIP_NEEDS_HALF));
    };
    let family = &setting.ctx.family;
    let perp = family.perp_map(family)?;
    let mut maps: Vec<(&str, Bijection)> = setting
        .table
        .permutations()
        .into_iter()
        .map(|f| ("induced_maps", f.clone()))
        .collect();
    for x in perp_closed_sets(&setting.pairs, ctx.budget)? {
        maps.push(("flips", family.flip_map(&x)?));
    }
    let conjugates: Vec<(&str, Bijection)> = maps
        .iter()
        .map(|(_, f)| Ok(("perp_conjugates", perp.compose(f)?.compose(&perp)?)))
        .collect::<Result<_>>()?;
    maps.extend(conjugates);
    for (kind, f) in &maps {
        out.add(kind, 1);
        match setting.ctx.perp_violation(f)? {
            None => out.add("respecting_perp", 1),
            Some(i) => out.fail(setting.ctx.perp_counterexample(f, i)?),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// exactness: lemma1, lemma4, lemma3

/// The standing assumption n ≥ 4 and 1 < k < n − 1 of the inexactness
/// results.
fn inexactness_range(n: usize, k: usize) -> bool {
    n >= 4 && 1 < k && k + 1 < n
}

const OUTSIDE_RANGE: &str = "needs n >= 4 and 1 < k < n - 1";

fn symplectic_base_rows(b: &BaseSubset) -> Vec<Rows> {
    b.lines().iter().map(rows).collect()
}

fn linear_base_rows(b: &ProjectiveBase) -> Vec<Rows> {
    b.points().iter().map(rows).collect()
}

fn is_maximal_inexact_by(
    len: usize,
    x: MemberSet,
    is_exact: impl Fn(MemberSet) -> Result<bool>,
) -> Result<bool> {
    if is_exact(x)? {
        return Ok(false);
    }
    for i in (0..len).filter(|&i| !x.contains(i)) {
        if !is_exact(x.with(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sorted_unique(mut v: Vec<MemberSet>) -> Vec<MemberSet> {
    v.sort();
    v.dedup();
    v
}

fn symplectic_incidence_sets(
    level: &LevelBaseSubset,
    lower: &LevelBaseSubset,
) -> Result<Vec<(MemberSet, MemberSet)>> {
    lower
        .members()
        .iter()
        .map(|m| {
            Ok((
                level.incident_members(m, false)?,
                level.incident_members(m, true)?,
            ))
        })
        .collect()
}

fn linear_incidence_sets(
    level: &PairBaseSubset,
    lower: &PairBaseSubset,
) -> Result<Vec<(MemberSet, MemberSet)>> {
    lower
        .members()
        .iter()
        .map(|a| {
            Ok((
                level.incident_members(a, false)?,
                level.incident_members(a, true)?,
            ))
        })
        .collect()
}

/// Compares maximal inexact sets with incidence sets of level 2, recording
/// failures through `cx`.
fn compare_classification(
    out: &mut Outcome,
    table: &ExactnessTable,
    incidence: &[MemberSet],
    nodes: u64,
    mut cx: impl FnMut(ExactnessClaim, MemberSet) -> Counterexample,
) {
    let maximal = table.maximal_inexact();
    let exact = table.subsets().filter(|&x| table.is_exact(x)).count();
    out.set("subsets", 1u64 << table.len());
    out.set("exact", exact);
    out.set("inexact", (1usize << table.len()) - exact);
    out.set("maximal_inexact", maximal.len());
    out.set("incidence_sets", incidence.len());
    out.set("oracle_nodes", nodes);
    for &x in &maximal {
        if !incidence.contains(&x) {
            out.fail(cx(ExactnessClaim::MaximalNotIncidence, x));
        }
    }
    for &y in incidence {
        if !table.is_maximal_inexact(y) {
            out.fail(cx(ExactnessClaim::IncidenceNotMaximal, y));
        }
    }
}

pub(crate) fn lemma1(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(4), ctx.k(2));
    let mut out = Outcome::with_params(ctx.resolved(Some(p), Some(n), Some(k)));
    if !inexactness_range(n, k) {
        return Ok(out.inapplicable(OUTSIDE_RANGE));
    }
    let base = ProjectiveBase::standard(prime(p)?, n);
    let level = base.base_subset(k)?;
    let level2 = base.base_subset(2)?;
    let oracle = PairExactnessOracle::new(&level, ctx.budget)?;
    let table = oracle.classify_all()?;
    let incidence = sorted_unique(
        linear_incidence_sets(&level, &level2)?
            .into_iter()
            .map(|(full, _)| full)
            .collect(),
    );
    let base_rows = linear_base_rows(&base);
    compare_classification(&mut out, &table, &incidence, oracle.nodes(), |claim, x| {
        Counterexample::Exactness {
            side: Side::Linear,
            claim,
            p,
            n,
            k,
            base: base_rows.clone(),
            set: x.iter().collect(),
        }
    });
    Ok(out)
}

pub(crate) fn lemma4(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(4), ctx.k(2));
    let mut out = Outcome::with_params(ctx.resolved(Some(p), Some(n), Some(k)));
    if !inexactness_range(n, k) {
        return Ok(out.inapplicable(OUTSIDE_RANGE));
    }
    let sp = space(p, n)?;
    let source = SymplecticBase::standard(&sp).base_subset(&sp)?;
    let level = source.expand(&sp, k)?;
    let level2 = source.expand(&sp, 2)?;
    let oracle = ExactnessOracle::new(&level, ctx.budget)?;
    let table = oracle.classify_all()?;
    let incidence = sorted_unique(
        symplectic_incidence_sets(&level, &level2)?
            .into_iter()
            .map(|(full, _)| full)
            .collect(),
    );
    let base_rows = symplectic_base_rows(&source);
    compare_classification(&mut out, &table, &incidence, oracle.nodes(), |claim, x| {
        Counterexample::Exactness {
            side: Side::Symplectic,
            claim,
            p,
            n,
            k,
            base: base_rows.clone(),
            set: x.iter().collect(),
        }
    });

    // The maximality argument for S_k(M), M = S_i + S_j, asserts that
    // U_r(S_k(M) ∪ {U}) = S_r for r ∈ {i, j} and for every other r.
    let (mut pair_mismatch, mut other_mismatch) = (0u64, 0u64);
    for (mi, m) in level2.members().iter().enumerate() {
        let ij = level2.index_set(mi);
        let x = level.incident_members(m, false)?;
        for u in (0..level.len()).filter(|&u| !x.contains(u)) {
            let extended = x.with(u);
            for (r, line) in source.lines().iter().enumerate() {
                if level.u_i(extended, r)?.as_ref() != Some(line) {
                    if ij.contains(&r) {
                        pair_mismatch += 1;
                    } else {
                        other_mismatch += 1;
                    }
                }
            }
        }
    }
    out.set("extension_indices_in_pair_differing", pair_mismatch);
    out.set("extension_indices_outside_pair_differing", other_mismatch);
    if pair_mismatch + other_mismatch > 0 {
        out.note(format!(
            "U_r(S_k(M) ∪ {{U}}) differs from S_r at {} (index, extension) combinations, so the \
             single-deviation criterion does not certify maximality here; the oracle confirms it directly",
            pair_mismatch + other_mismatch
        ));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn recheck_exactness(
    side: Side,
    claim: ExactnessClaim,
    p: u32,
    n: usize,
    k: usize,
    base: &[Rows],
    set: &[usize],
    budget: Budget,
) -> Result<bool> {
    let x = MemberSet::from_indices(set.iter().copied());
    match side {
        Side::Symplectic => {
            let sp = space(p, n)?;
            let source = BaseSubset::new(&sp, subspaces(&sp, base)?)?;
            let level = source.expand(&sp, k)?;
            let oracle = ExactnessOracle::new(&level, budget)?;
            if claim == ExactnessClaim::SingleDeviationInexact {
                return Ok(!lemma3_check(&oracle, x)?.holds());
            }
            let level2 = source.expand(&sp, 2)?;
            let incidence: Vec<MemberSet> = symplectic_incidence_sets(&level, &level2)?
                .into_iter()
                .map(|(full, _)| full)
                .collect();
            let maximal = oracle.is_maximal_inexact(x)?;
            Ok(match claim {
                ExactnessClaim::MaximalNotIncidence => maximal && !incidence.contains(&x),
                _ => incidence.contains(&x) && !maximal,
            })
        }
        Side::Linear => {
            let vectors: Vec<Vec<u32>> = base
                .iter()
                .map(|r| {
                    r.first()
                        .cloned()
                        .ok_or_else(|| Error::InvalidArgument("empty point".into()))
                })
                .collect::<Result<_>>()?;
            let base = ProjectiveBase::new(prime(p)?, &vectors)?;
            let level = base.base_subset(k)?;
            let level2 = base.base_subset(2)?;
            let oracle = PairExactnessOracle::new(&level, budget)?;
            let incidence: Vec<MemberSet> = linear_incidence_sets(&level, &level2)?
                .into_iter()
                .map(|(full, _)| full)
                .collect();
            let maximal = is_maximal_inexact_by(level.len(), x, |y| oracle.is_exact(y))?;
            Ok(match claim {
                ExactnessClaim::MaximalNotIncidence => maximal && !incidence.contains(&x),
                ExactnessClaim::IncidenceNotMaximal => incidence.contains(&x) && !maximal,
                ExactnessClaim::SingleDeviationInexact => {
                    return Err(Error::InvalidArgument(
                        "single-deviation claims are symplectic".into(),
                    ))
                }
            })
        }
    }
}

pub(crate) fn lemma3(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(4), ctx.k(2));
    let samples = ctx.samples(500);
    let mut out = Outcome::with_params(Params {
        samples: Some(samples),
        ..ctx.resolved(Some(p), Some(n), Some(k))
    });
    let sp = space(p, n)?;
    let run = |out: &mut Outcome, oracle: &ExactnessOracle<'_>, x: MemberSet| -> Result<()> {
        let outcome = lemma3_check(oracle, x)?;
        out.add("subsets_checked", 1);
        out.add("hypothesis_held", outcome.hypothesis as u64);
        if outcome.holds() {
            out.add("implication_held", 1);
        } else {
            let level = oracle.level();
            out.fail(Counterexample::Exactness {
                side: Side::Symplectic,
                claim: ExactnessClaim::SingleDeviationInexact,
                p,
                n,
                k,
                base: symplectic_base_rows(level.source()),
                set: x.iter().collect(),
            });
        }
        Ok(())
    };

    let source = SymplecticBase::standard(&sp).base_subset(&sp)?;
    let level = source.expand(&sp, k)?;
    if level.len() <= ExactnessTable::MAX_MEMBERS {
        let oracle = ExactnessOracle::new(&level, ctx.budget)?;
        for bits in 0..1u128 << level.len() {
            run(&mut out, &oracle, MemberSet::from_bits(bits))?;
        }
    }
    let mut rng = seeded_rng(ctx.seed);
    for _ in 0..samples {
        let b = BaseSubset::random_with(&sp, &mut rng);
        let level = b.expand(&sp, k)?;
        let oracle = ExactnessOracle::new(&level, ctx.budget)?;
        let x = MemberSet::from_indices((0..level.len()).filter(|_| rng.gen_bool(0.5)));
        run(&mut out, &oracle, x)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// bijections: lemma2, lemma5

/// For every lower incidence set some target incidence set is its image
/// (with matching plus-variants when `plus` is set).
fn incidence_conclusion(
    h: &[usize],
    from: &[(MemberSet, MemberSet)],
    to: &[(MemberSet, MemberSet)],
    plus: bool,
) -> bool {
    from.iter().all(|&(full, plus_set)| {
        let img = full.map(|i| h[i]);
        let img_plus = plus_set.map(|i| h[i]);
        to.iter()
            .any(|&(f2, p2)| f2 == img && (!plus || p2 == img_plus))
    })
}

/// The member map induced by permuting the n underlying lines or points.
fn index_permutation_map(index_sets: &[Vec<usize>], sigma: &[usize]) -> Vec<usize> {
    index_sets
        .iter()
        .map(|set| {
            let mut img: Vec<usize> = set.iter().map(|&i| sigma[i]).collect();
            img.sort_unstable();
            index_sets
                .iter()
                .position(|s| *s == img)
                .expect("permuted index sets stay k-subsets")
        })
        .collect()
}

struct BijectionSweep<'a> {
    from_table: &'a ExactnessTable,
    to_table: &'a ExactnessTable,
    from_sets: &'a [(MemberSet, MemberSet)],
    to_sets: &'a [(MemberSet, MemberSet)],
    plus: bool,
}

impl BijectionSweep<'_> {
    /// `None` if the hypothesis fails, else whether the conclusion holds.
    fn test(&self, h: &[usize]) -> Option<bool> {
        preserves_maximal_inexact(h, self.from_table, self.to_table)
            .then(|| incidence_conclusion(h, self.from_sets, self.to_sets, self.plus))
    }

    fn record(
        &self,
        out: &mut Outcome,
        prefix: &str,
        h: &[usize],
        cx: impl FnOnce() -> Counterexample,
    ) {
        out.add(&format!("{prefix}_tested"), 1);
        match self.test(h) {
            None => {}
            Some(true) => {
                out.add(&format!("{prefix}_hypothesis_satisfied"), 1);
                out.add(&format!("{prefix}_conclusion_held"), 1);
            }
            Some(false) => {
                out.add(&format!("{prefix}_hypothesis_satisfied"), 1);
                out.fail(cx());
            }
        }
    }

    fn vacuity_note(&self, out: &mut Outcome, len: usize) {
        if self
            .from_sets
            .iter()
            .all(|&(full, _)| full == MemberSet::full(len))
        {
            out.note(if self.plus {
                "every incidence set of level k - 1 is the whole base subset, so only the \
                 plus-variant constrains the bijection"
            } else {
                "every incidence set of level k - 1 is the whole base subset, so the conclusion \
                 holds for any bijection; hypothesis_satisfied records how many qualify"
            });
        }
        if !self.plus {
            out.note("n = 2k: the plus-variant conclusion is not asserted");
        }
    }
}

pub(crate) fn lemma2(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(4), ctx.k(2));
    let samples = ctx.samples(200);
    let mut out = Outcome::with_params(ctx.resolved(Some(p), Some(n), Some(k)));
    if !inexactness_range(n, k) {
        return Ok(out.inapplicable(OUTSIDE_RANGE));
    }
    let base = ProjectiveBase::standard(prime(p)?, n);
    let level = base.base_subset(k)?;
    let lower = base.base_subset(k - 1)?;
    let oracle = PairExactnessOracle::new(&level, ctx.budget)?;
    let table = oracle.classify_all()?;
    let sets = linear_incidence_sets(&level, &lower)?;
    let sweep = BijectionSweep {
        from_table: &table,
        to_table: &table,
        from_sets: &sets,
        to_sets: &sets,
        plus: n != 2 * k,
    };
    let base_rows = linear_base_rows(&base);
    let cx = |h: &[usize]| Counterexample::MapConclusion {
        side: Side::Linear,
        p,
        n,
        k,
        from_base: base_rows.clone(),
        to_base: base_rows.clone(),
        image: h.to_vec(),
    };
    let len = level.len();
    match ctx.mode() {
        Mode::Exhaustive => {
            ctx.budget.check("sweeping bijections", factorial(len))?;
            for h in permutations(len) {
                sweep.record(&mut out, "bijections", &h, || cx(&h));
            }
        }
        Mode::Sampled => {
            let mut rng = seeded_rng(ctx.seed);
            for _ in 0..samples {
                let mut h: Vec<usize> = (0..len).collect();
                h.shuffle(&mut rng);
                sweep.record(&mut out, "bijections", &h, || cx(&h));
            }
        }
    }
    // Permuting base points: g(B_k(α)) = B_k(σ(α)).
    let index_sets: Vec<Vec<usize>> = (0..len).map(|i| level.index_set(i).to_vec()).collect();
    let lower_sets: Vec<Vec<usize>> = (0..lower.len())
        .map(|i| lower.index_set(i).to_vec())
        .collect();
    ctx.budget
        .check("sweeping point permutations", factorial(n))?;
    for sigma in permutations(n) {
        let g = index_permutation_map(&index_sets, &sigma);
        let beta = index_permutation_map(&lower_sets, &sigma);
        let matches = sets.iter().enumerate().all(|(a, &(full, plus))| {
            let (f2, p2) = sets[beta[a]];
            full.map(|i| g[i]) == f2 && plus.map(|i| g[i]) == p2
        });
        out.add("point_permutations", 1);
        if matches && sweep.test(&g) == Some(true) {
            out.add("point_permutations_matching", 1);
        } else {
            out.fail(cx(&g));
        }
    }
    out.set("oracle_nodes", oracle.nodes());
    sweep.vacuity_note(&mut out, len);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn recheck_map_conclusion(
    side: Side,
    p: u32,
    n: usize,
    k: usize,
    from_base: &[Rows],
    to_base: &[Rows],
    image: &[usize],
    budget: Budget,
) -> Result<bool> {
    let (from_table, to_table, from_sets, to_sets) = match side {
        Side::Linear => {
            let make = |rs: &[Rows]| -> Result<ProjectiveBase> {
                let vs: Vec<Vec<u32>> = rs.iter().filter_map(|r| r.first().cloned()).collect();
                ProjectiveBase::new(prime(p)?, &vs)
            };
            let (fb, tb) = (make(from_base)?, make(to_base)?);
            let (fl, tl) = (fb.base_subset(k)?, tb.base_subset(k)?);
            let ft = PairExactnessOracle::new(&fl, budget)?.classify_all()?;
            let tt = PairExactnessOracle::new(&tl, budget)?.classify_all()?;
            let fs = linear_incidence_sets(&fl, &fb.base_subset(k - 1)?)?;
            let ts = linear_incidence_sets(&tl, &tb.base_subset(k - 1)?)?;
            (ft, tt, fs, ts)
        }
        Side::Symplectic => {
            let sp = space(p, n)?;
            let fb = BaseSubset::new(&sp, subspaces(&sp, from_base)?)?;
            let tb = BaseSubset::new(&sp, subspaces(&sp, to_base)?)?;
            let (fl, tl) = (fb.expand(&sp, k)?, tb.expand(&sp, k)?);
            let ft = ExactnessOracle::new(&fl, budget)?.classify_all()?;
            let tt = ExactnessOracle::new(&tl, budget)?.classify_all()?;
            let fs = symplectic_incidence_sets(&fl, &fb.expand(&sp, k - 1)?)?;
            let ts = symplectic_incidence_sets(&tl, &tb.expand(&sp, k - 1)?)?;
            (ft, tt, fs, ts)
        }
    };
    Bijection::new(image.to_vec())?;
    let sweep = BijectionSweep {
        from_table: &from_table,
        to_table: &to_table,
        from_sets: &from_sets,
        to_sets: &to_sets,
        plus: n != 2 * k,
    };
    Ok(sweep.test(image) == Some(false))
}

pub(crate) fn lemma5(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(4), ctx.k(2));
    let samples = ctx.samples(20);
    let mode = ctx.mode();
    let mut out = Outcome::with_params(Params {
        samples: (mode == Mode::Sampled).then_some(samples),
        mode: Some(mode),
        ..ctx.resolved(Some(p), Some(n), Some(k))
    });
    if !inexactness_range(n, k) {
        return Ok(out.inapplicable(OUTSIDE_RANGE));
    }
    let sp = space(p, n)?;
    let mut rng = seeded_rng(ctx.seed);
    let source = SymplecticBase::standard(&sp).base_subset(&sp)?;
    let l = sample_element(&sp, &mut rng)?;
    let target = source.image(&l)?;
    let (from, to) = (source.expand(&sp, k)?, target.expand(&sp, k)?);
    let (from_lower, to_lower) = (source.expand(&sp, k - 1)?, target.expand(&sp, k - 1)?);
    let from_oracle = ExactnessOracle::new(&from, ctx.budget)?;
    let to_oracle = ExactnessOracle::new(&to, ctx.budget)?;
    let from_table = from_oracle.classify_all()?;
    let to_table = to_oracle.classify_all()?;
    let from_sets = symplectic_incidence_sets(&from, &from_lower)?;
    let to_sets = symplectic_incidence_sets(&to, &to_lower)?;
    let sweep = BijectionSweep {
        from_table: &from_table,
        to_table: &to_table,
        from_sets: &from_sets,
        to_sets: &to_sets,
        plus: n != 2 * k,
    };
    let (from_rows, to_rows) = (symplectic_base_rows(&source), symplectic_base_rows(&target));
    let cx = |h: &[usize]| Counterexample::MapConclusion {
        side: Side::Symplectic,
        p,
        n,
        k,
        from_base: from_rows.clone(),
        to_base: to_rows.clone(),
        image: h.to_vec(),
    };

    // The restriction of (l)_k, for which M' = l(M).
    let induced: Vec<usize> = from
        .members()
        .iter()
        .map(|u| {
            to.position(&l.apply(u)?)
                .ok_or_else(|| Error::Domain("l(S_k) ≠ S'_k".into()))
        })
        .collect::<Result<_>>()?;
    let mut induced_ok = sweep.test(&induced) == Some(true);
    for (m, &(full, plus)) in from_lower.members().iter().zip(&from_sets) {
        let lm = to_lower
            .position(&l.apply(m)?)
            .ok_or_else(|| Error::Domain("l(S_{k-1}) ≠ S'_{k-1}".into()))?;
        let (f2, p2) = to_sets[lm];
        induced_ok &= full.map(|i| induced[i]) == f2 && plus.map(|i| induced[i]) == p2;
    }
    out.set("induced_map_matches_image", induced_ok as u64);
    if !induced_ok {
        out.fail(cx(&induced));
    }

    let len = from.len();
    match mode {
        Mode::Exhaustive => {
            ctx.budget.check("sweeping bijections", factorial(len))?;
            for h in permutations(len) {
                sweep.record(&mut out, "bijections", &h, || cx(&h));
            }
        }
        Mode::Sampled => {
            // Line permutations preserve the structure; random transpositions
            // and shuffles mostly break it.
            let index_sets: Vec<Vec<usize>> =
                (0..len).map(|i| from.index_set(i).to_vec()).collect();
            for _ in 0..samples {
                let mut sigma: Vec<usize> = (0..n).collect();
                sigma.shuffle(&mut rng);
                let relabel = index_permutation_map(&index_sets, &sigma);
                let h: Vec<usize> = relabel.iter().map(|&i| induced[i]).collect();
                sweep.record(&mut out, "line_permuted", &h, || cx(&h));

                let mut t = h.clone();
                let picked = rand::seq::index::sample(&mut rng, len, 2);
                t.swap(picked.index(0), picked.index(1));
                sweep.record(&mut out, "transposed", &t, || cx(&t));

                let mut s: Vec<usize> = (0..len).collect();
                s.shuffle(&mut rng);
                sweep.record(&mut out, "shuffled", &s, || cx(&s));
            }
        }
    }
    out.set("oracle_nodes", from_oracle.nodes() + to_oracle.nodes());
    sweep.vacuity_note(&mut out, len);
    Ok(out)
}

// ---------------------------------------------------------------------------
// lemma7

pub(crate) fn lemma7(ctx: &Context) -> Result<Outcome> {
    let (p, n) = (ctx.p(2), ctx.n(3));
    let ms: Vec<usize> = match ctx.params.m {
        Some(m) => vec![m],
        None => vec![2, 3].into_iter().filter(|&m| m <= n).collect(),
    };
    let mut out = Outcome::with_params(ctx.resolved(Some(p), Some(n), None));
    let sp = space(p, n)?;
    let mut applicable = false;
    for m in ms {
        if m == 0 || m > n {
            return Err(Error::InvalidArgument(format!(
                "m must lie in 1..={n}, got {m}"
            )));
        }
        let bigs: Vec<Subspace> = if m == n {
            vec![sp.full()]
        } else {
            HkFamily::build(&sp, m, ctx.budget)?.members().to_vec()
        };
        out.set(format!("m{m}_subspaces_m"), bigs.len());
        for part in 1..=3usize {
            let threshold = m + 2 * (part - 1);
            let key = format!("m{m}_part{part}_cases");
            if threshold >= 2 * m {
                out.set(key, 0u64);
                out.note(format!("m = {m}, part {part}: inapplicable, no N with dim N > {threshold} fits in dim {}", 2 * m));
                continue;
            }
            applicable = true;
            let mut cases = 0u64;
            for big in &bigs {
                for d in threshold + 1..=2 * m {
                    for coords in enumerate_subspaces(sp.prime(), 2 * m, d, ctx.budget)? {
                        let sub = big.embed(&coords)?;
                        cases += 1;
                        if orthogonal_lines_in(&sp, &sub, part, ctx.budget)?.is_none() {
                            out.fail(Counterexample::OrthogonalLines {
                                p,
                                n,
                                m,
                                part,
                                big: rows(big),
                                sub: rows(&sub),
                            });
                        }
                    }
                }
            }
            out.set(key, cases);
        }
    }
    if !applicable {
        return Ok(out.inapplicable("no part of the statement applies at these parameters"));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// thm1_positive, thm1_explore

/// Base subsets sampled per group element.
const BASES_PER_ELEMENT: usize = 20;

/// Reconstructs an inducing element for (l)_k, probing the members of
/// seeded random base subsets.
pub(crate) fn reconstruct_for(
    space: &SymplecticSpace,
    k: usize,
    l: &GroupElement,
    seed: u64,
) -> Result<Option<GroupElement>> {
    let mut rng = seeded_rng(seed);
    let mut probes = Vec::new();
    for _ in 0..BASES_PER_ELEMENT {
        probes.extend_from_slice(
            BaseSubset::random_with(space, &mut rng)
                .expand(space, k)?
                .members(),
        );
    }
    reconstruct_inducing_element(space, k, |u| l.apply(u), &probes, &mut rng)
}

pub(crate) fn thm1_positive(ctx: &Context) -> Result<Outcome> {
    let (p, n) = (ctx.p(3), ctx.n(3));
    let samples = ctx.samples(100);
    let ks: Vec<usize> = match ctx.params.k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    let mut out = Outcome::with_params(Params {
        samples: Some(samples),
        ..ctx.resolved(Some(p), Some(n), None)
    });
    let sp = space(p, n)?;
    let q = sp.prime();
    let mut rng = seeded_rng(ctx.seed);
    for k in ks {
        let tag = format!("k{k}");
        for _ in 0..samples {
            let l = sample_element(&sp, &mut rng)?;
            for _ in 0..BASES_PER_ELEMENT {
                let b = BaseSubset::random_with(&sp, &mut rng);
                let images = b
                    .expand(&sp, k)?
                    .members()
                    .iter()
                    .map(|u| l.apply(u))
                    .collect::<Result<Vec<_>>>()?;
                if is_level_base_subset(&sp, k, &images, ctx.budget)? {
                    out.add(&format!("{tag}_images_are_base_subsets"), 1);
                } else {
                    out.fail(Counterexample::NotBaseSubset {
                        p,
                        n,
                        k,
                        members: images.iter().map(rows).collect(),
                    });
                }
            }
            let seed = rng.gen::<u64>();
            match reconstruct_for(&sp, k, &l, seed)? {
                Some(w) => {
                    out.add(&format!("{tag}_witnesses"), 1);
                    let kind = if w.is_symplectic() {
                        "symplectic"
                    } else {
                        "similitude"
                    };
                    out.add(&format!("{tag}_witness_{kind}"), 1);
                    out.add(
                        &format!("{tag}_witness_nonsquare_multiplier"),
                        (!q.is_square(w.multiplier())) as u64,
                    );
                }
                None => out.fail(Counterexample::MissingWitness {
                    p,
                    n,
                    k,
                    matrix: l.matrix().to_rows(),
                    seed,
                }),
            }
        }
    }
    out.note("witnesses are found only up to a scalar; a non-square multiplier means no rescaling lies in Sp(Ω)");
    Ok(out)
}

pub(crate) fn thm1_explore(ctx: &Context) -> Result<Outcome> {
    let (p, n, k) = (ctx.p(2), ctx.n(3), ctx.k(1));
    let samples = ctx.samples(200);
    let mut out = Outcome::with_params(Params {
        samples: Some(samples),
        ..ctx.resolved(Some(p), Some(n), Some(k))
    });
    let sp = space(p, n)?;
    let map_ctx = MapContext::new(&sp, k, ctx.budget)?;
    let family = &map_ctx.family;
    for key in [
        "preserving_base_subsets",
        "preserving_and_induced",
        "preserving_not_induced",
    ] {
        out.set(key, 0u64);
    }
    let mut rng = seeded_rng(ctx.seed);
    for i in 0..samples {
        let l = sample_element(&sp, &mut rng)?;
        let mut image = family.induced_map(&l)?.images().to_vec();
        let picked = rand::seq::index::sample(&mut rng, image.len(), 3);
        let (a, b, c) = (picked.index(0), picked.index(1), picked.index(2));
        image.swap(a, b);
        if i % 2 == 1 {
            image.swap(b, c);
        }
        let f = Bijection::new(image)?;
        out.add("perturbations", 1);
        if !map_ctx.preserves_base_subsets(&f) {
            continue;
        }
        out.add("preserving_base_subsets", 1);
        let black_box = |u: &Subspace| -> Result<Subspace> {
            let i = family
                .position(u)
                .ok_or_else(|| Error::Domain("probe outside H_k".into()))?;
            Ok(family.member(f.apply(i)).clone())
        };
        match reconstruct_inducing_element(&sp, k, black_box, family.members(), &mut rng)? {
            Some(_) => out.add("preserving_and_induced", 1),
            None => {
                out.add("preserving_not_induced", 1);
                out.note(format!(
                    "perturbation {i} preserves base subsets but is not induced"
                ));
            }
        }
    }
    out.note("exploratory: findings are reported, never counted as failures");
    Ok(out)
}
