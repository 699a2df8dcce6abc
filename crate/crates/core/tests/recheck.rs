//! Counterexamples re-evaluate from their serialized data alone: fabricated
//! false claims reproduce, true statements do not.

use symplecta::verifier::{CountedQuantity, Counterexample, ExactnessClaim, MapProperty, Side};
use symplecta::{BaseSubset, Budget, HkFamily, Prime, SymplecticBase, SymplecticSpace};

fn rows(s: &symplecta::Subspace) -> Vec<Vec<u32>> {
    s.basis().to_rows()
}

fn space(p: u32, n: usize) -> SymplecticSpace {
    SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap()
}

fn round_trip(cx: &Counterexample) -> Counterexample {
    serde_json::from_str(&serde_json::to_string(cx).unwrap()).unwrap()
}

fn reproduces(cx: Counterexample) -> bool {
    round_trip(&cx).recheck(Budget::DEFAULT).unwrap()
}

#[test]
fn counts() {
    let wrong = Counterexample::Count {
        quantity: CountedQuantity::BaseSubsets,
        p: 2,
        n: 2,
        expected: 11,
        found: 10,
    };
    assert!(reproduces(wrong));
    let right = Counterexample::Count {
        quantity: CountedQuantity::HyperbolicLines,
        p: 3,
        n: 2,
        expected: 90,
        found: 90,
    };
    assert!(!reproduces(right));
}

#[test]
fn orthogonality_and_base_subsets() {
    let s = space(3, 2);
    let b = BaseSubset::random(&s, 9);
    let (u, v) = (&b.lines()[0], &b.lines()[1]);
    let agree = Counterexample::PerpBaseMismatch {
        p: 3,
        n: 2,
        first: rows(u),
        second: rows(v),
    };
    assert!(!reproduces(agree));

    let expansion = b.expand(&s, 1).unwrap();
    let members: Vec<_> = expansion.members().iter().map(rows).collect();
    assert!(!reproduces(Counterexample::NotBaseSubset {
        p: 3,
        n: 2,
        k: 1,
        members: members.clone(),
    }));
    assert!(reproduces(Counterexample::NotBaseSubset {
        p: 3,
        n: 2,
        k: 1,
        members: vec![members[0].clone(), members[0].clone()],
    }));
}

#[test]
fn perp_images() {
    let s = space(2, 2);
    let b = BaseSubset::random(&s, 3);
    let u = &b.lines()[0];
    let perp = s.perp(u).unwrap();
    assert!(!reproduces(Counterexample::PerpNotPreserved {
        p: 2,
        n: 2,
        image_of_u: rows(u),
        image_of_perp: rows(&perp),
    }));
    assert!(reproduces(Counterexample::PerpNotPreserved {
        p: 2,
        n: 2,
        image_of_u: rows(u),
        image_of_perp: rows(u),
    }));
}

#[test]
fn map_properties() {
    let s = space(2, 2);
    let family = HkFamily::build(&s, 1, Budget::DEFAULT).unwrap();
    let (a, b) = family.perp_pairs().unwrap().pairs()[0];
    let flip = family.flip_map(&[a, b]).unwrap().images().to_vec();
    let claim = |property, expected| Counterexample::MapProperty {
        p: 2,
        n: 2,
        k: 1,
        image: flip.clone(),
        property,
        expected,
    };
    // A flip is not induced but preserves base subsets and fixes perp pairs.
    assert!(reproduces(claim(MapProperty::Induced, true)));
    assert!(!reproduces(claim(MapProperty::Induced, false)));
    assert!(!reproduces(claim(MapProperty::PreservesBaseSubsets, true)));
    assert!(!reproduces(claim(MapProperty::FixesPerpPairs, true)));
    assert!(!reproduces(claim(MapProperty::RespectsPerp, true)));

    let mut swapped: Vec<usize> = (0..family.len()).collect();
    swapped.swap(0, 1);
    assert!(reproduces(Counterexample::MapProperty {
        p: 2,
        n: 2,
        k: 1,
        image: swapped,
        property: MapProperty::PreservesBaseSubsets,
        expected: true,
    }));
}

#[test]
fn exactness_claims() {
    let s = space(2, 4);
    let source = SymplecticBase::standard(&s).base_subset(&s).unwrap();
    let base: Vec<_> = source.lines().iter().map(rows).collect();
    let level = source.expand(&s, 2).unwrap();
    let incidence = level.incident_members(level.member(0), false).unwrap();
    let claim = |claim, set: Vec<usize>| Counterexample::Exactness {
        side: Side::Symplectic,
        claim,
        p: 2,
        n: 4,
        k: 2,
        base: base.clone(),
        set,
    };
    let set: Vec<usize> = incidence.iter().collect();
    assert!(!reproduces(claim(
        ExactnessClaim::IncidenceNotMaximal,
        set.clone()
    )));
    assert!(!reproduces(claim(ExactnessClaim::MaximalNotIncidence, set)));
    assert!(!reproduces(claim(
        ExactnessClaim::SingleDeviationInexact,
        (0..6).collect()
    )));
}

#[test]
fn map_conclusions_hold_for_the_identity() {
    let s = space(2, 4);
    let source = SymplecticBase::standard(&s).base_subset(&s).unwrap();
    let base: Vec<_> = source.lines().iter().map(rows).collect();
    assert!(!reproduces(Counterexample::MapConclusion {
        side: Side::Symplectic,
        p: 2,
        n: 4,
        k: 2,
        from_base: base.clone(),
        to_base: base,
        image: (0..6).collect(),
    }));
}

#[test]
fn orthogonal_lines_and_witnesses() {
    let s = space(2, 3);
    let full = s.full();
    assert!(!reproduces(Counterexample::OrthogonalLines {
        p: 2,
        n: 3,
        m: 3,
        part: 3,
        big: rows(&full),
        sub: rows(&full),
    }));
    let l = s.random_sp(5);
    assert!(!reproduces(Counterexample::MissingWitness {
        p: 2,
        n: 3,
        k: 1,
        matrix: l.matrix().to_rows(),
        seed: 1,
    }));
}

#[test]
fn commuting_sets() {
    let s = space(3, 2);
    let b = BaseSubset::random(&s, 2);
    let members: Vec<_> = b.lines().iter().map(rows).collect();
    assert!(!reproduces(Counterexample::CommutingSetMismatch {
        p: 3,
        n: 2,
        k: 1,
        members: members.clone(),
    }));
    assert!(!reproduces(Counterexample::UncoveredCommutingPair {
        p: 3,
        n: 2,
        k: 1,
        first: members[0].clone(),
        second: members[1].clone(),
    }));
    assert!(!reproduces(Counterexample::CommutationMismatch {
        p: 3,
        n: 2,
        first: members[0].clone(),
        second: members[1].clone(),
    }));
}
