use num_complex::Complex64;
use proptest::prelude::*;
use transindex::lefschetz::{random_torus_point, MIN_SEPARATION};
use transindex::series::{geometric_expansion, is_unit_series, mul_lower_bounded, mul_upper_bounded};
use transindex::{
    chi, euler_characteristic, lambda_poly, lefschetz_residue, module_action, ExpansionPoint, KClassRep, LaurentPoly,
    TorusPoint, Window, WindowedSeries,
};

const RANK: usize = 3;

fn poly(rank: usize, max_terms: usize, max_exp: i64) -> impl Strategy<Value = LaurentPoly> {
    let term = (prop::collection::vec(-max_exp..=max_exp, rank), -max_exp..=max_exp, -9i64..=9);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        terms.into_iter().fold(LaurentPoly::zero(rank), |acc, (torus, circle, c)| {
            &acc + &LaurentPoly::monomial(rank, &torus, circle, c)
        })
    })
}

fn torus_poly(rank: usize, max_terms: usize, max_exp: i64) -> impl Strategy<Value = LaurentPoly> {
    poly(rank, max_terms, max_exp).prop_map(move |p| {
        p.circle_parts().values().fold(LaurentPoly::zero(rank), |acc, c| &acc + c)
    })
}

fn point(rank: usize) -> impl Strategy<Value = TorusPoint> {
    (prop::collection::vec(0.0..std::f64::consts::TAU, rank), 0.0..std::f64::consts::TAU).prop_map(|(angles, c)| {
        TorusPoint::from_angles(&angles).with_circle(Complex64::from_polar(1.0, c)).unwrap()
    })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_is_commutative_and_associative(a in poly(RANK, 6, 4), b in poly(RANK, 6, 4), c in poly(RANK, 6, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &LaurentPoly::zero(RANK), a.clone());
    }

    #[test]
    fn multiplication_laws(a in poly(RANK, 6, 4), b in poly(RANK, 6, 4), c in poly(RANK, 6, 4)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(RANK), a.clone());
    }

    #[test]
    fn in_place_ops_match_binary_ops(a in poly(RANK, 6, 4), b in poly(RANK, 6, 4)) {
        let mut s = a.clone();
        s += &b;
        prop_assert_eq!(s, &a + &b);
        let mut d = a.clone();
        d -= &b;
        prop_assert_eq!(d, &a - &b);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly(RANK, 6, 4), b in poly(RANK, 6, 4), pt in point(RANK)) {
        let (ea, eb) = (a.eval_at(&pt).unwrap(), b.eval_at(&pt).unwrap());
        prop_assert!(close((&a + &b).eval_at(&pt).unwrap(), ea + eb));
        prop_assert!(close((&a * &b).eval_at(&pt).unwrap(), ea * eb));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(a in poly(RANK, 6, 4), b in poly(RANK, 6, 4), i in 1..=RANK) {
        let s = |p: &LaurentPoly| p.substitute_t(i).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a - &b)), &s(&a) - &s(&b));
        prop_assert!(!s(&a).has_circle_terms());
    }

    #[test]
    fn print_parse_round_trip(a in poly(RANK, 8, 6)) {
        let text = a.to_string();
        prop_assert_eq!(LaurentPoly::parse(&text, RANK).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&json).unwrap(), a);
    }

    #[test]
    fn exact_division_recovers_factors(a in poly(RANK, 5, 3), b in poly(RANK, 4, 3)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn module_action_is_associative(p in poly(2, 3, 2), q in poly(2, 3, 2), s in prop::collection::vec(torus_poly(2, 3, 3), 21)) {
        let s = WindowedSeries::new(2, Window::new(-10, 10).unwrap(), s).unwrap();
        let nested = module_action(&p, &module_action(&q, &s).unwrap());
        let direct = module_action(&(&p * &q), &s);
        match (nested, direct) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x.first_mismatch(&y).unwrap(), None),
            (Err(_), _) | (_, Err(_)) => {}
        }
    }

    #[test]
    fn one_sided_products_invert_geometric_factors(e in prop::collection::vec(-3i64..=3, 2), neg in any::<bool>()) {
        let sign = if neg { -1 } else { 1 };
        let a = LaurentPoly::monomial(2, &e, 0, sign);
        let one_minus = &LaurentPoly::one(2) - &(&a * &LaurentPoly::circle_var(2, 1));
        let z = geometric_expansion(&a, Window::new(0, 12).unwrap(), ExpansionPoint::Zero).unwrap();
        prop_assert!(is_unit_series(&module_action(&one_minus, &z).unwrap()));
        let i = geometric_expansion(&a, Window::new(-12, 0).unwrap(), ExpansionPoint::Infinity).unwrap();
        prop_assert!(is_unit_series(&module_action(&one_minus, &i).unwrap()));
        let zz = mul_lower_bounded(&z, &z).unwrap();
        let ii = mul_upper_bounded(&i, &i).unwrap();
        prop_assert_eq!(zz.window(), Window::new(0, 12).unwrap());
        prop_assert_eq!(ii.window(), Window::new(-12, 0).unwrap());
        let sq = &one_minus * &one_minus;
        let low = module_action(&sq, &zz).unwrap();
        prop_assert!(is_unit_series(&low));
        let high = module_action(&sq, &ii).unwrap();
        prop_assert!(is_unit_series(&high));
    }

    #[test]
    fn residue_matches_euler_oracle((n, f) in (1usize..=3).prop_flat_map(|n| (Just(n), poly(n + 1, 4, 3)))) {
        let rep = KClassRep::new(f);
        prop_assert_eq!(lefschetz_residue(n, &rep).unwrap(), euler_characteristic(n, &rep).unwrap());
    }

    #[test]
    fn residue_descends_to_the_quotient(f in poly(3, 4, 3), q in poly(3, 3, 2)) {
        let rep = KClassRep::new(f);
        let shifted = rep.add_ideal_element(&q).unwrap();
        prop_assert_eq!(lefschetz_residue(2, &rep).unwrap(), lefschetz_residue(2, &shifted).unwrap());
    }

    #[test]
    fn random_points_are_separated(n in 1usize..=4, seed in any::<u64>()) {
        let pt = random_torus_point(n, seed);
        let z = pt.coords();
        prop_assert_eq!(z.len(), n + 1);
        for i in 0..z.len() {
            prop_assert!((z[i].norm() - 1.0).abs() <= 1e-12);
            for j in i + 1..z.len() {
                prop_assert!((z[i] - z[j]).norm() >= MIN_SEPARATION);
            }
        }
    }
}

#[test]
fn lambda_vanishes_at_each_pole() {
    for n in 0..4 {
        let l = lambda_poly(n, -1);
        for i in 1..=n + 1 {
            assert!(l.substitute_t(i).unwrap().is_zero());
        }
    }
}

#[test]
fn characters_have_identity_value_of_euler_characteristic() {
    // chi_{n,l}(1) is the holomorphic Euler characteristic of O(-l) on CP^n.
    assert_eq!(chi(2, 2).at_identity(), 6.into());
    assert_eq!(chi(2, -4).at_identity(), 3.into());
    assert_eq!(chi(3, -5).at_identity(), (-4).into());
}
