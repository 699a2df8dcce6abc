use proptest::prelude::*;

use symplecta::{
    BaseSubset, Bijection, Budget, HkFamily, Matrix, MemberSet, Prime, Subspace, SymplecticSpace,
};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    prime().prop_flat_map(move |p| {
        (
            Just(p),
            prop::collection::vec(prop::collection::vec(0..p, cols), rows),
        )
    })
}

fn space_and_vectors() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>)> {
    (prime(), 1usize..=3).prop_flat_map(|(p, n)| {
        (
            Just(p),
            Just(n),
            prop::collection::vec(prop::collection::vec(0..p, 2 * n), 0..=2 * n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity((p, rows) in matrix(3, 5)) {
        let m = Matrix::from_rows(Prime::new(p).unwrap(), 5, &rows).unwrap();
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.rows(), 5);
        for v in kernel.row_iter() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_is_two_sided((p, rows) in matrix(4, 4)) {
        let m = Matrix::from_rows(Prime::new(p).unwrap(), 4, &rows).unwrap();
        match m.inverse() {
            Some(inv) => {
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
            }
            None => prop_assert!(m.rank() < 4),
        }
    }

    #[test]
    fn perp_is_an_involution_with_complementary_dimension((p, n, vs) in space_and_vectors()) {
        let space = SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap();
        let s = Subspace::span(space.prime(), space.dim(), &vs).unwrap();
        let perp = space.perp(&s).unwrap();
        prop_assert_eq!(s.dim() + perp.dim(), space.dim());
        prop_assert_eq!(space.perp(&perp).unwrap(), s.clone());
        // Non-degenerate exactly when S meets its perp trivially.
        prop_assert_eq!(space.is_nondegenerate(&s).unwrap(), s.intersect(&perp).unwrap().is_zero());
    }

    #[test]
    fn random_symplectic_elements_preserve_the_form(
        p in prime(), n in 1usize..=3, seed in any::<u64>(),
        x in prop::collection::vec(0u32..7, 6), y in prop::collection::vec(0u32..7, 6),
    ) {
        let space = SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap();
        let (x, y): (Vec<u32>, Vec<u32>) = (
            x[..2 * n].iter().map(|v| v % p).collect(),
            y[..2 * n].iter().map(|v| v % p).collect(),
        );
        let l = space.random_sp(seed);
        prop_assert!(l.is_symplectic());
        let (lx, ly) = (l.apply_vec(&x).unwrap(), l.apply_vec(&y).unwrap());
        prop_assert_eq!(space.omega(&lx, &ly).unwrap(), space.omega(&x, &y).unwrap());
        prop_assert!(l.compose(&l.inverse()).unwrap().matrix().is_identity());
    }

    #[test]
    fn bijections_form_a_group(perm in Just((0..12).collect::<Vec<usize>>()).prop_shuffle()) {
        let f = Bijection::new(perm).unwrap();
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        prop_assert!(f.inverse().compose(&f).unwrap().is_identity());
        let set = vec![0, 3, 7];
        prop_assert_eq!(f.inverse().apply_set(&f.apply_set(&set)), set);
    }

    #[test]
    fn member_sets_behave_like_sets(a in prop::collection::btree_set(0usize..40, 0..20), b in prop::collection::btree_set(0usize..40, 0..20)) {
        let (x, y) = (MemberSet::from_indices(a.iter().copied()), MemberSet::from_indices(b.iter().copied()));
        prop_assert_eq!(x.iter().collect::<Vec<_>>(), a.iter().copied().collect::<Vec<_>>());
        let union = x.union(y);
        prop_assert_eq!(union.len(), a.union(&b).count());
        prop_assert!(x.is_subset(union) && y.is_subset(union));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn induced_maps_are_functorial(s1 in any::<u64>(), s2 in any::<u64>()) {
        let space = SymplecticSpace::new(Prime::new(3).unwrap(), 2).unwrap();
        let family = HkFamily::build(&space, 1, Budget::DEFAULT).unwrap();
        let (a, b) = (space.random_sp(s1), space.random_sp(s2));
        let composed = family.induced_map(&a.compose(&b).unwrap()).unwrap();
        let separately = family.induced_map(&a).unwrap().compose(&family.induced_map(&b).unwrap()).unwrap();
        prop_assert_eq!(composed, separately);
    }

    #[test]
    fn random_base_subsets_decompose_the_space(p in prop::sample::select(vec![2u32, 3]), n in 2usize..=3, seed in any::<u64>()) {
        let space = SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap();
        let b = BaseSubset::random(&space, seed);
        let lines = b.lines();
        prop_assert_eq!(lines.len(), n);
        let mut total = space.zero();
        for (i, u) in lines.iter().enumerate() {
            prop_assert!(space.is_nondegenerate(u).unwrap());
            for v in &lines[i + 1..] {
                prop_assert!(space.orthogonal(u, v).unwrap());
            }
            total = total.sum(u).unwrap();
        }
        prop_assert!(total.is_full());
        for k in 1..n {
            let level = b.expand(&space, k).unwrap();
            for (i, m) in level.members().iter().enumerate() {
                prop_assert_eq!(m.dim(), 2 * k);
                prop_assert!(space.is_nondegenerate(m).unwrap());
                if let Some(j) = level.complement(i) {
                    prop_assert_eq!(level.member(j), &space.perp(m).unwrap());
                }
            }
        }
    }

    #[test]
    fn images_of_base_subsets_are_base_subsets(seed in any::<u64>(), elt in any::<u64>()) {
        let space = SymplecticSpace::new(Prime::new(3).unwrap(), 3).unwrap();
        let b = BaseSubset::random(&space, seed);
        let image = b.image(&space.random_sp(elt)).unwrap();
        let found = symplecta::base_subsets_containing(&space, image.lines(), Some(2), Budget::DEFAULT).unwrap();
        prop_assert_eq!(found, vec![image]);
    }
}
