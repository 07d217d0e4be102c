use bsz2d::oracle::orthonormality_defect;
use bsz2d::poly::{
    rational_from_f64, t_map, t_map_inverse, u_index, Basis1, Basis2, BivariatePoly, LaurentPoly, UnivariatePoly,
};
use bsz2d::szego::complete_1d;
use bsz2d::total::build_total_system;
use bsz2d::weights::ProductOmega;
use bsz2d::WeightSpec;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..=max_len)
}

fn factor() -> impl Strategy<Value = f64> {
    prop_oneof![-0.9..-0.05f64, 0.05..0.9f64]
}

fn grid(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 1..=max), 1..=max)
}

#[test]
fn u_recurrence_is_exact_in_monomials() {
    let x = UnivariatePoly::new(Basis1::Monomial, vec![0.0, 2.0]);
    for n in 1..40i64 {
        let lhs = u_index::<f64>(n + 1).to_monomial();
        let rhs = x.mul(&u_index::<f64>(n).to_monomial()).unwrap().sub(&u_index::<f64>(n - 1).to_monomial()).unwrap();
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negative_u_indices_reflect(n in 0i64..30) {
        prop_assert_eq!(u_index::<f64>(-n - 2), u_index::<f64>(n).scale(&-1.0));
    }

    #[test]
    fn chebu_monomial_roundtrip_is_exact_in_rationals(c in prop::collection::vec(-1000i64..1000, 1..=65)) {
        let c: Vec<BigRational> = c.into_iter().map(|v| BigRational::new(v.into(), 7.into())).collect();
        let p = UnivariatePoly::new(Basis1::ChebU, c);
        prop_assert_eq!(p.to_monomial().to_chebu(), p);
    }

    // The monomial basis amplifies rounding by roughly 2.5x per degree, so
    // the f64 round trip keeps 1e-12 only at low degree.
    #[test]
    fn chebu_monomial_roundtrip_f64(c in prop::collection::vec(-1.0..1.0f64, 1..=13)) {
        let p = UnivariatePoly::new(Basis1::ChebU, c);
        let back = p.to_monomial().to_chebu();
        let scale = p.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..p.coeffs().len().max(back.coeffs().len()) {
            prop_assert!((p.coeff(i) - back.coeff(i)).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn t_map_is_injective(rows in grid(6)) {
        let p = BivariatePoly::from_rows(Basis2::ChebUxChebU, rows);
        let l = t_map(&p).unwrap();
        prop_assert_eq!(t_map_inverse(&l).unwrap(), p);
    }

    #[test]
    fn t_map_of_shifted_product_is_joukowski_expansion(
        n in 0usize..=10,
        m in 0usize..=10,
        pc in coeffs(11),
        qc in coeffs(11),
    ) {
        let p = UnivariatePoly::new(Basis1::Monomial, pc.into_iter().take(n + 1).collect());
        let q = UnivariatePoly::new(Basis1::Monomial, qc.into_iter().take(m + 1).collect());
        let px = p.to_chebu().mul(&u_index(n as i64)).unwrap();
        let qy = q.to_chebu().mul(&u_index(m as i64)).unwrap();
        let lhs = t_map(&BivariatePoly::tensor(&px, &qy).unwrap()).unwrap();
        let rhs = LaurentPoly::joukowski(&p, false)
            .mul(&LaurentPoly::joukowski(&q, true))
            .shift(-(n as i64), -(m as i64));
        prop_assert!(lhs.max_diff(&rhs) < 1e-12 * 64.0, "diff {}", lhs.max_diff(&rhs));
    }

    #[test]
    fn evaluation_agrees_with_monomial_form(rows in grid(6), x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let p = BivariatePoly::from_rows(Basis2::ChebUxChebU, rows);
        let a = p.eval(x, y);
        let b = p.to_monomial().eval(x, y);
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn product_evaluates_to_product_of_values(
        r1 in grid(5), r2 in grid(5), x in -1.0..1.0f64, y in -1.0..1.0f64,
    ) {
        let p = BivariatePoly::from_rows(Basis2::ChebUxChebU, r1);
        let q = BivariatePoly::from_rows(Basis2::ChebUxChebU, r2);
        let pq = p.mul(&q).unwrap().eval(x, y);
        let expect = p.eval(x, y) * q.eval(x, y);
        prop_assert!((pq - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
    }

    #[test]
    fn expanded_weight_matches_factored_modulus(
        a in prop::collection::vec(factor(), 1..=4),
        samples in prop::collection::vec((0.0..std::f64::consts::TAU, -1.0..1.0f64), 100),
    ) {
        let spec = WeightSpec::product(a).unwrap();
        let h = spec.h();
        for (theta, y) in samples {
            let direct = spec.abs2(theta, y);
            let expanded = h.eval(nalgebra::Complex::from_polar(1.0, theta), y).norm_sqr();
            prop_assert!((direct - expanded).abs() <= 1e-10 * direct.abs());
        }
    }

    #[test]
    fn expanded_degrees_respect_the_band(a in prop::collection::vec(factor(), 1..=5)) {
        let spec = WeightSpec::product(a.clone()).unwrap();
        let n_h = spec.n_h();
        prop_assert_eq!(n_h, 2 * a.len());
        prop_assert_eq!(spec.kappa(), a.len());
        for (i, hi) in spec.h().coeffs().iter().enumerate() {
            let bound = (n_h / 2).saturating_sub((n_h / 2).abs_diff(i));
            prop_assert!(hi.degree().is_none_or(|d| d <= bound), "h_{} has degree {:?}", i, hi.degree());
        }
        let top = spec.h().coeffs()[n_h].clone();
        for k in 0..=20 {
            let y = -1.0 + k as f64 / 10.0;
            prop_assert!(top.eval(y).abs() < 1.0);
        }
    }

    #[test]
    fn reversed_omega_is_homogeneous(a in prop::collection::vec(factor(), 1..=5)) {
        let n = a.len() as i64;
        let rev = ProductOmega::omega_reversed(&a);
        for (i, j) in rev.support() {
            prop_assert_eq!(i + j, n);
        }
        prop_assert_eq!(rev.homogeneous_degree(), Some(n));
    }

    #[test]
    fn fingerprint_ignores_factor_order(a in prop::collection::vec(factor(), 1..=4), rot in 0usize..4) {
        let mut b = a.clone();
        let len = b.len();
        b.rotate_left(rot % len);
        b.reverse();
        let fa = WeightSpec::product(a).unwrap().fingerprint();
        let fb = WeightSpec::product(b).unwrap().fingerprint();
        prop_assert_eq!(fa, fb);
    }

    #[test]
    fn weight_json_roundtrip(a in prop::collection::vec(factor(), 1..=4), generic in any::<bool>()) {
        let spec = WeightSpec::product(a).unwrap();
        let spec = if generic {
            let h = spec.h().coeffs().iter().map(|p| p.coeffs().to_vec()).collect();
            WeightSpec::generic(h).unwrap()
        } else {
            spec
        };
        let back = WeightSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(back.fingerprint(), spec.fingerprint());
    }

    #[test]
    fn completion_agrees_with_exact_arithmetic(roots in prop::collection::vec(1.2..4.0f64, 4..=7), signs in prop::collection::vec(any::<bool>(), 7)) {
        // h(z) = prod (1 - z / r): every root outside the closed disk.
        let mut h = vec![1.0];
        for (r, s) in roots.iter().zip(&signs) {
            let r = if *s { *r } else { -*r };
            let mut next = vec![0.0; h.len() + 1];
            for (i, c) in h.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c / r;
            }
            h = next;
        }
        let exact: Vec<BigRational> = h.iter().map(|&v| rational_from_f64(v)).collect();
        let n = h.len() - 1;
        for k in 0..(n - 1) / 2 {
            let f = complete_1d(&h, k).unwrap();
            let e = complete_1d(&exact, k).unwrap();
            prop_assert_eq!(f.corrections.len(), e.corrections.len());
            for ((t, a), (s, b)) in f.corrections.iter().zip(&e.corrections) {
                prop_assert_eq!(t, s);
                prop_assert!((a - b.to_f64().unwrap()).abs() < 1e-9, "k={} t={}: {} vs {}", k, t, a, b);
            }
            for (i, c) in e.qhat.coeffs().iter().enumerate() {
                prop_assert!((f.qhat.coeff(i) - c.to_f64().unwrap()).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn total_systems_are_orthonormal(a in prop::collection::vec(factor(), 1..=2), n in 2usize..=5) {
        let spec = WeightSpec::product(a).unwrap();
        let sys = build_total_system(&spec, n, bsz2d::DEFAULT_TOL).unwrap();
        let polys: Vec<&BivariatePoly> = sys.polys().collect();
        let defect = orthonormality_defect(&spec, &polys, bsz2d::DEFAULT_TOL).unwrap();
        prop_assert!(defect < 1e-7, "defect {}", defect);
    }

    #[test]
    fn product_moments_are_symmetric_in_x_and_y(a in prop::collection::vec(factor(), 1..=3)) {
        let spec = WeightSpec::product(a).unwrap();
        let t = bsz2d::oracle::cheb_table(&spec, 6, bsz2d::DEFAULT_TOL).unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                prop_assert!((t.get(i, j) - t.get(j, i)).abs() < 1e-12);
            }
        }
    }
}
