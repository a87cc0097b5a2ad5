//! Property suites for the algebraic invariants.

use proptest::prelude::*;

use utinv::grading::ElementaryGrading;
use utinv::group::{Group, GroupElement};
use utinv::homogeneity::build_theta;
use utinv::matrixalg::{Field, PrimeField, Rationals, UTMatrix};

fn cyclic_group() -> impl Strategy<Value = Group> {
    (1u64..=12).prop_map(Group::Cyclic)
}

fn small_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        cyclic_group(),
        (1u64..=4, 1u64..=4)
            .prop_map(|(a, b)| Group::Product(vec![Group::Cyclic(a), Group::Cyclic(b)])),
    ]
}

fn group_with_tuple(max_len: usize) -> impl Strategy<Value = (Group, Vec<GroupElement>)> {
    (small_group(), 0..=max_len).prop_flat_map(|(group, len)| {
        let elems = group.elements().expect("finite by construction");
        let count = elems.len();
        (
            Just(group),
            proptest::collection::vec(0..count, len)
                .prop_map(move |idx| idx.into_iter().map(|i| elems[i].clone()).collect()),
        )
    })
}

proptest! {
    #[test]
    fn group_axioms_hold(
        (group, tuple) in group_with_tuple(3)
    ) {
        let elems = group.elements().unwrap();
        let e = group.identity();
        for a in tuple.iter().chain(elems.iter().take(4)) {
            prop_assert_eq!(group.op(a, &e).unwrap(), a.clone());
            prop_assert_eq!(group.op(&e, a).unwrap(), a.clone());
            let inv = group.inverse(a).unwrap();
            prop_assert_eq!(group.op(a, &inv).unwrap(), e.clone());
            prop_assert_eq!(group.op(&inv, a).unwrap(), e.clone());
        }
    }

    #[test]
    fn segment_product_peels_one_entry(
        (group, tuple) in group_with_tuple(6)
    ) {
        for i in 1..=tuple.len() {
            for k in 1..=(tuple.len() - i + 1) {
                let whole = group.segment_product(&tuple, i, k).unwrap();
                let head = group.segment_product(&tuple, i, k - 1).unwrap();
                let step = group.op(&head, &tuple[i + k - 2]).unwrap();
                prop_assert_eq!(whole, step);
            }
        }
    }

    #[test]
    fn spec_print_parse_round_trip(orders in proptest::collection::vec(1u64..=20, 1..4)) {
        let spec = orders
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x");
        let group = Group::parse_spec(&spec).unwrap();
        prop_assert_eq!(group.spec_string(), spec.clone());
        prop_assert_eq!(Group::parse_spec(&group.spec_string()).unwrap(), group);
    }

    #[test]
    fn degree_multiplicativity(
        (group, tuple) in group_with_tuple(5)
    ) {
        let n = tuple.len() + 1;
        let grading = ElementaryGrading::new(group.clone(), n, tuple).unwrap();
        for i in 1..=n {
            for j in i..=n {
                for k in j..=n {
                    let lhs = group
                        .op(&grading.degree(i, j).unwrap(), &grading.degree(j, k).unwrap())
                        .unwrap();
                    prop_assert_eq!(lhs, grading.degree(i, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn support_enumeration_matches_closed_form(
        (group, tuple) in group_with_tuple(5)
    ) {
        let n = tuple.len() + 1;
        let grading = ElementaryGrading::new(group, n, tuple).unwrap();
        prop_assert_eq!(grading.support().support_set(), grading.support_closed_form());
    }

    #[test]
    fn decision_is_reversal_symmetric(
        (group, tuple) in group_with_tuple(5)
    ) {
        let n = tuple.len() + 1;
        let grading = ElementaryGrading::new(group, n, tuple).unwrap();
        prop_assert_eq!(
            build_theta(&grading).admits(),
            build_theta(&grading.reversed()).admits()
        );
    }

    #[test]
    fn admitted_theta_is_involutive_and_fixes_e(
        (group, tuple) in group_with_tuple(5)
    ) {
        let n = tuple.len() + 1;
        let grading = ElementaryGrading::new(group.clone(), n, tuple).unwrap();
        if let Some(theta) = build_theta(&grading).theta() {
            let e = group.identity();
            prop_assert_eq!(theta.apply(&e), Some(&e));
            for (g, h) in theta.mapping() {
                prop_assert_eq!(theta.apply(h), Some(g));
            }
            prop_assert!(utinv::theta_properties_check(theta, &grading));
        }
    }
}

fn f7_matrix(n: usize) -> impl Strategy<Value = UTMatrix<PrimeField>> {
    let f = PrimeField::new(7).unwrap();
    let dim = n * (n + 1) / 2;
    proptest::collection::vec(0u64..7, dim).prop_map(move |mut entries| {
        // force an invertible diagonal
        let mut idx = 0;
        for i in 1..=n {
            if entries[idx] == 0 {
                entries[idx] = 1;
            }
            idx += n - i + 1;
        }
        UTMatrix::from_upper_entries(f, n, entries).unwrap()
    })
}

proptest! {
    #[test]
    fn reflection_reverses_products_and_is_involutive(
        x in f7_matrix(4),
        y in f7_matrix(4)
    ) {
        prop_assert_eq!(x.canonical_involution().canonical_involution(), x.clone());
        prop_assert_eq!(
            x.mul(&y).canonical_involution(),
            y.canonical_involution().mul(&x.canonical_involution())
        );
    }

    #[test]
    fn block_inverse_agrees_with_back_substitution(p in f7_matrix(5)) {
        let f = PrimeField::new(7).unwrap();
        let inv = p.block_inverse().unwrap();
        prop_assert_eq!(inv.clone(), p.back_substitution_inverse().unwrap());
        prop_assert_eq!(p.mul(&inv), UTMatrix::identity(f, 5));
    }

    #[test]
    fn antiauto_reverses_products_over_q(
        seed in 0u64..1000
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = UTMatrix::random_invertible(Rationals, 3, &mut rng);
        let x = UTMatrix::random_invertible(Rationals, 3, &mut rng);
        let y = UTMatrix::random_invertible(Rationals, 3, &mut rng);
        let lhs = utinv::antiauto_apply(&p, &x.mul(&y)).unwrap();
        let rhs = utinv::antiauto_apply(&p, &y)
            .unwrap()
            .mul(&utinv::antiauto_apply(&p, &x).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_field_axioms(
        a in -20i64..20, b in -20i64..20, c in 1i64..20
    ) {
        let f = Rationals;
        let x = f.div(&f.from_int(a), &f.from_int(c)).unwrap();
        let y = f.from_int(b);
        prop_assert_eq!(f.add(&x, &y), f.add(&y, &x));
        prop_assert_eq!(f.mul(&x, &y), f.mul(&y, &x));
        if !f.is_zero(&x) {
            prop_assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
    }
}
