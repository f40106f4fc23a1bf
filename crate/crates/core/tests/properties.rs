mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use quadcap::{FieldElement, FractionalIdeal, QuadraticField};

const FIELDS: [i64; 12] = [-23, -21, -14, -5, -3, -1, 2, 3, 5, 10, 13, 79];

fn field() -> impl Strategy<Value = QuadraticField> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|d| QuadraticField::new(d).unwrap())
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn element(k: QuadraticField) -> impl Strategy<Value = FieldElement> {
    (small_rational(), small_rational()).prop_map(move |(a, b)| k.element(a, b))
}

fn nonzero(k: QuadraticField) -> impl Strategy<Value = FieldElement> {
    element(k).prop_filter("nonzero", |x| !x.is_zero())
}

fn ideal(k: QuadraticField) -> impl Strategy<Value = FractionalIdeal> {
    (nonzero(k), nonzero(k)).prop_map(move |(a, b)| FractionalIdeal::from_generators(k, &[a, b]).unwrap())
}

fn field_and_ideals(count: usize) -> impl Strategy<Value = (QuadraticField, Vec<FractionalIdeal>)> {
    field().prop_flat_map(move |k| (Just(k), prop::collection::vec(ideal(k), count)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_norm_is_multiplicative((_, x, y) in field().prop_flat_map(|k| (Just(k), element(k), element(k)))) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn ideal_product_commutes_and_associates((_, v) in field_and_ideals(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
    }

    #[test]
    fn ideal_norm_is_multiplicative((_, v) in field_and_ideals(2)) {
        prop_assert_eq!(v[0].mul(&v[1]).unwrap().norm(), v[0].norm() * v[1].norm());
    }

    #[test]
    fn dual_is_inverse((k, v) in field_and_ideals(1)) {
        let i = &v[0];
        prop_assert!(i.mul(&i.dual()).unwrap().is_unit_ideal());
        prop_assert_eq!(&i.dual().dual(), i);
        prop_assert_eq!(i.mul(&i.dual()).unwrap(), FractionalIdeal::unit(k));
    }

    #[test]
    fn ideal_times_conjugate_is_norm((k, v) in field_and_ideals(1)) {
        let i = &v[0];
        let n = k.element(i.norm(), BigRational::from_integer(0.into()));
        prop_assert_eq!(i.mul(&i.galois_conjugate()).unwrap(), FractionalIdeal::principal(&n).unwrap());
    }

    #[test]
    fn hnf_ignores_generator_order_and_recombination(
        (k, a, b, c) in field().prop_flat_map(|k| (Just(k), nonzero(k), nonzero(k), nonzero(k))),
        m in -5i64..=5,
    ) {
        let base = FractionalIdeal::from_generators(k, &[a.clone(), b.clone(), c.clone()]).unwrap();
        let permuted = FractionalIdeal::from_generators(k, &[c.clone(), a.clone(), b.clone()]).unwrap();
        // (a, b + m·a, c) spans the same Z[ω]-module.
        let shifted = &b + &a.scale(&BigRational::from_integer(m.into()));
        let recombined = FractionalIdeal::from_generators(k, &[a, shifted, c]).unwrap();
        prop_assert_eq!(&base, &permuted);
        prop_assert_eq!(&base, &recombined);
    }

    #[test]
    fn text_and_json_round_trip((_, v) in field_and_ideals(1)) {
        let i = &v[0];
        prop_assert_eq!(&FractionalIdeal::parse_text(&i.to_text()).unwrap(), i);
        prop_assert_eq!(&FractionalIdeal::from_json(&i.to_json()).unwrap(), i);
    }

    #[test]
    fn class_of_product_is_product_of_classes((k, v) in field_and_ideals(2)) {
        let cl = quadcap::classgroup::class_group(k);
        let (a, b) = (&v[0], &v[1]);
        let ab = a.mul(b).unwrap();
        let g = cl.group();
        prop_assert_eq!(cl.class_index(&ab), g.op(cl.class_index(a), cl.class_index(b)));
        prop_assert_eq!(a.class_order().unwrap() as usize, g.element_order(cl.class_index(a)));
    }

    #[test]
    fn splitting_product_is_p(d in prop::sample::select(FIELDS.to_vec()), p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37])) {
        let k = QuadraticField::new(d).unwrap();
        let report = quadcap::splitting::splitting_type(k, p).unwrap();
        prop_assert_eq!(report.product(), FractionalIdeal::principal(&k.from_bigint(BigInt::from(p))).unwrap());
    }
}

#[test]
fn class_numbers_match_reduced_forms() {
    for (disc, d) in common::fundamental_discriminants(-400, 0) {
        let k = QuadraticField::new(d).unwrap();
        assert_eq!(
            quadcap::classgroup::class_number(k),
            common::forms_class_number(disc),
            "D = {disc}"
        );
    }
}

#[test]
fn real_class_numbers_match_table() {
    for d in (2..100).filter(|&d| common::squarefree(d)) {
        let k = QuadraticField::new(d).unwrap();
        assert_eq!(
            quadcap::classgroup::class_number(k),
            common::real_class_number_table(d),
            "d = {d}"
        );
    }
}

#[test]
fn oracle_hnf_agrees_with_library_equality() {
    let mut rng = common::rng(7);
    for d in FIELDS {
        let k = QuadraticField::new(d).unwrap();
        for _ in 0..20 {
            let a = common::random_ideal(k, &mut rng);
            let b = common::random_ideal(k, &mut rng);
            let coords = |i: &FractionalIdeal| i.z_basis().iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>();
            assert_eq!(common::same_lattice(&coords(&a), &coords(&b)), a == b);
            assert!(common::same_lattice(
                &coords(&a),
                &coords(&a.mul(&FractionalIdeal::unit(k)).unwrap())
            ));
        }
    }
}
