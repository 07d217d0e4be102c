//! The families `q_k(x, y) = sum_i h_i(y) U_{k-i}(x)` and their mirrors
//! `q~_l`, closed-form norms, and the one-variable low-degree completion.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::poly::{cheb_tensor, u_index, Basis1, BivariatePoly, Coeff, UnivariatePoly};
use crate::weights::WeightSpec;

/// `ceil(a / 2)` for any integer `a`.
pub fn ceil_half(a: i64) -> i64 {
    (a + 1).div_euclid(2)
}

/// Smallest `k` for which `q_k` has total degree `k`: `ceil((N_h - 2) / 2)`.
pub fn qk_threshold(n_h: usize) -> i64 {
    ceil_half(n_h as i64 - 2)
}

/// `q_k` from the coefficient list `h_i(y)` (any basis).
pub fn qk_from_coeffs<T: Coeff>(h: &[UnivariatePoly<T>], k: i64) -> BivariatePoly<T> {
    let mut q = BivariatePoly::zero(crate::poly::Basis2::ChebUxChebU);
    for (i, hi) in h.iter().enumerate() {
        if hi.is_zero() {
            continue;
        }
        let u = u_index::<T>(k - i as i64);
        if u.is_zero() {
            continue;
        }
        q = q.add(&cheb_tensor(&u, hi)).expect("ChebU");
    }
    q
}

/// `q_k(x, y)`, unnormalized.
pub fn build_qk(spec: &WeightSpec, k: i64) -> Result<BivariatePoly> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("k = {k} must be nonnegative")));
    }
    Ok(qk_from_coeffs(spec.h().coeffs(), k))
}

/// `q~_l(x, y) = sum_j h~_j(x) U_{l-j}(y)`; product weights only.
pub fn build_tilde_ql(spec: &WeightSpec, l: i64) -> Result<BivariatePoly> {
    match spec {
        // h~_j has the coefficients of h_j, so q~_l is q_l with x and y exchanged.
        WeightSpec::ProductOmega(_) => Ok(build_qk(spec, l)?.swap_xy()),
        WeightSpec::GenericH(_) => Err(Error::Unsupported(
            "q~_l needs a product-form weight".into(),
        )),
    }
}

/// `int q_k(x, y)^2 sqrt(1 - x^2) / |h(z, y)|^2 dx` in closed form.
///
/// `Ok(None)` when `k` is at the threshold but neither closed case applies.
pub fn qk_norm_closed(spec: &WeightSpec, k: i64) -> Result<Option<f64>> {
    let n = spec.n_h() as i64;
    let threshold = qk_threshold(spec.n_h());
    if k < threshold {
        return Err(Error::BelowThreshold {
            index: k,
            threshold,
        });
    }
    if k >= ceil_half(n - 1) {
        return Ok(Some(FRAC_PI_2));
    }
    if 2 * k + 2 == n {
        let top = &spec.h().coeffs()[n as usize];
        if top.degree().unwrap_or(0) > 0 {
            return Ok(None);
        }
        return Ok(Some(FRAC_PI_2 * (1.0 - top.coeff(0))));
    }
    Ok(None)
}

/// One-variable `q_t(x) = sum_i h_i U_{t-i}(x)` for constant `h_i`.
pub fn qk_1d<T: Coeff>(h: &[T], t: i64) -> UnivariatePoly<T> {
    let mut q = UnivariatePoly::zero(Basis1::ChebU);
    for (i, hi) in h.iter().enumerate() {
        q = q.add(&u_index::<T>(t - i as i64).scale(hi)).expect("ChebU");
    }
    q
}

/// Output of [`complete_1d`].
#[derive(Debug, Clone, PartialEq)]
pub struct Completion<T: Coeff = f64> {
    /// `q^_k = q_k + sum_t h'_t q_t`, of degree `k`, in the U basis.
    pub qhat: UnivariatePoly<T>,
    /// `(t, h'_t)` for `t = k + 1 ..= N - k - 2`.
    pub corrections: Vec<(usize, T)>,
}

impl<T: Coeff> Completion<T> {
    pub fn correction(&self, t: usize) -> Option<&T> {
        self.corrections.iter().find(|(s, _)| *s == t).map(|(_, c)| c)
    }
}

/// Pivot magnitude below which [`complete_1d`] reports a breakdown.
pub const ELIMINATION_TOL: f64 = 1e-10;

/// Orthogonal polynomial of degree `k < ceil((N-2)/2)` for the one-variable
/// weight `sqrt(1 - x^2) / |h(e^{i theta})|^2`, as a combination of
/// `q_k, ..., q_{N-k-2}`.
///
/// The `U_s` coefficient of `q_t` is `h_{t-s} - h_{s+t+2}`, so cancelling
/// `U_{k+1} .. U_{N-k-2}` is a square system. It is eliminated with pivots
/// taken in order from the top degree down and no row exchanges; when the
/// system is triangular this is plain back substitution.
///
/// The top correction is always `h'_{N-k-2} = h_N`. Folding `U_{k+1-N}`
/// back into `q_{k+1}` makes the next one
/// `h'_{N-k-3} = h_{N-1} - h_N h_1 + h_N h'_{k+1}`.
pub fn complete_1d<T: Coeff>(h: &[T], k: usize) -> Result<Completion<T>> {
    if h.is_empty() || h[0] != T::one() {
        return Err(Error::InvalidWeight("h_0 must equal 1".into()));
    }
    let n = h.len() as i64 - 1;
    let limit = qk_threshold(n as usize);
    if k as i64 >= limit {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be below ceil((N-2)/2) = {limit}"
        )));
    }
    let hj = |j: i64| -> T {
        if (0..=n).contains(&j) {
            h[j as usize].clone()
        } else {
            T::zero()
        }
    };
    let lo = k + 1;
    let hi = (n - k as i64 - 2) as usize;
    let size = hi + 1 - lo;
    // a[s][t], rhs[s] with s, t offset by lo.
    let mut a: Vec<Vec<T>> = (lo..=hi)
        .map(|s| {
            (lo..=hi)
                .map(|t| {
                    let up = if s <= t { hj((t - s) as i64) } else { T::zero() };
                    up - hj((s + t + 2) as i64)
                })
                .collect()
        })
        .collect();
    let qk = qk_1d(h, k as i64);
    let mut rhs: Vec<T> = (lo..=hi).map(|s| -qk.coeff(s)).collect();

    for p in (0..size).rev() {
        let pivot = a[p][p].clone();
        if pivot.is_negligible(ELIMINATION_TOL) {
            return Err(Error::EliminationBreakdown {
                t: p + lo,
                pivot: pivot.to_f64(),
            });
        }
        for s in 0..p {
            if a[s][p].is_zero() {
                continue;
            }
            let f = a[s][p].clone() / pivot.clone();
            for t in 0..=p {
                a[s][t] = a[s][t].clone() - f.clone() * a[p][t].clone();
            }
            rhs[s] = rhs[s].clone() - f * rhs[p].clone();
        }
    }
    let mut c = vec![T::zero(); size];
    for p in 0..size {
        let mut v = rhs[p].clone();
        for t in 0..p {
            v = v - a[p][t].clone() * c[t].clone();
        }
        c[p] = v / a[p][p].clone();
    }

    let mut q = qk;
    for (off, ct) in c.iter().enumerate() {
        q = q
            .add(&qk_1d(h, (lo + off) as i64).scale(ct))
            .expect("ChebU");
    }
    let coeffs = q.coeffs();
    let scale = coeffs.iter().fold(1.0_f64, |m, v| m.max(v.to_f64().abs()));
    for (s, v) in coeffs.iter().enumerate().skip(k + 1) {
        if !v.is_negligible(1e-9 * scale) {
            return Err(Error::Residual {
                what: format!("U_{s} coefficient of the completed q_{k}"),
                residual: v.to_f64().abs(),
                tol: 1e-9 * scale,
            });
        }
    }
    let kept = coeffs.iter().take(k + 1).cloned().collect();
    Ok(Completion {
        qhat: UnivariatePoly::new(Basis1::ChebU, kept),
        corrections: c.into_iter().enumerate().map(|(o, v)| (o + lo, v)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational_from_f64, Basis2};
    use crate::weights::expand_product;
    use num_rational::BigRational;

    #[test]
    fn thresholds() {
        assert_eq!(qk_threshold(0), -1);
        assert_eq!(qk_threshold(2), 0);
        assert_eq!(qk_threshold(3), 1);
        assert_eq!(qk_threshold(4), 1);
        assert_eq!(qk_threshold(5), 2);
        assert_eq!(ceil_half(-1), 0);
        assert_eq!(ceil_half(3), 2);
    }

    #[test]
    fn example_one_qk() {
        let a = 0.4;
        let spec = WeightSpec::product(vec![-a]).unwrap();
        // k = 1: U_1(x) - 2 a y U_0(x)
        let q1 = build_qk(&spec, 1).unwrap();
        let expect = BivariatePoly::from_rows(Basis2::ChebUxChebU, vec![vec![0.0, -a], vec![1.0]]);
        assert!(q1.max_diff(&expect) < 1e-15);
        // k = 0 folds h_2 U_{-2} = -a^2 U_0.
        let q0 = build_qk(&spec, 0).unwrap();
        assert!(q0.max_diff(&BivariatePoly::constant(Basis2::ChebUxChebU, 1.0 - a * a)) < 1e-15);
    }

    #[test]
    fn example_two_qk_three() {
        let (a, b) = (0.6, 0.3);
        // (1 - 2 b z)(1 - 2 a y z + a^2 z^2)
        let spec = WeightSpec::generic(vec![
            vec![1.0],
            vec![-2.0 * b, -2.0 * a],
            vec![a * a, 4.0 * a * b],
            vec![-2.0 * a * a * b],
        ])
        .unwrap();
        let q3 = build_qk(&spec, 3).unwrap().to_monomial();
        // U_3 - 2(ay + b) U_2 + a(4by + a) U_1 - 2 a^2 b U_0, assembled by hand
        let ux = |n| UnivariatePoly::<f64>::new(Basis1::ChebU, {
            let mut c = vec![0.0; n + 1];
            c[n] = 1.0;
            c
        });
        let my = |c: Vec<f64>| UnivariatePoly::new(Basis1::Monomial, c);
        let parts = [
            (ux(3), my(vec![1.0])),
            (ux(2), my(vec![-2.0 * b, -2.0 * a])),
            (ux(1), my(vec![a * a, 4.0 * a * b])),
            (ux(0), my(vec![-2.0 * a * a * b])),
        ];
        let mut e = BivariatePoly::zero(Basis2::ChebUxChebU);
        for (px, py) in parts {
            e = e.add(&cheb_tensor(&px, &py)).unwrap();
        }
        assert!(q3.max_diff(&e.to_monomial()) < 1e-14);
    }

    #[test]
    fn tilde_is_swapped() {
        let spec = WeightSpec::product(vec![-0.3]).unwrap();
        let t1 = build_tilde_ql(&spec, 1).unwrap();
        let expect = BivariatePoly::from_rows(Basis2::ChebUxChebU, vec![vec![0.0, 1.0], vec![-0.3]]);
        assert!(t1.max_diff(&expect) < 1e-15);
        let t0 = build_tilde_ql(&spec, 0).unwrap();
        assert!((t0.get(0, 0) - 0.91).abs() < 1e-15);
        let g = WeightSpec::generic(vec![vec![1.0], vec![0.2]]).unwrap();
        assert!(build_tilde_ql(&g, 1).is_err());
    }

    #[test]
    fn degree_collapse() {
        let spec = WeightSpec::product(vec![0.3, -0.5]).unwrap();
        let n = spec.n_h() as i64;
        for k in qk_threshold(spec.n_h())..n {
            let q = build_qk(&spec, k).unwrap().cleaned(1e-14);
            assert_eq!(q.xdeg(), Some(k as usize));
            assert_eq!(q.total_degree(), Some(k as usize));
        }
    }

    #[test]
    fn closed_norms() {
        let spec = WeightSpec::product(vec![-0.5]).unwrap();
        assert_eq!(qk_norm_closed(&spec, 1).unwrap(), Some(FRAC_PI_2));
        let v = qk_norm_closed(&spec, 0).unwrap().unwrap();
        assert!((v - FRAC_PI_2 * 0.75).abs() < 1e-15);
        let s4 = WeightSpec::product(vec![0.3, 0.4]).unwrap();
        assert!(matches!(
            qk_norm_closed(&s4, 0),
            Err(Error::BelowThreshold { index: 0, threshold: 1 })
        ));
    }

    #[test]
    fn complete_quintic_matches_worked_example() {
        let h = [1.0, 0.3, -0.2, 0.1, 0.05, -0.04];
        let c = complete_1d(&h, 1).unwrap();
        let expect_u1 = (h[0] - h[4]) + h[5] * (h[1] - h[5]);
        let expect_u0 = (h[1] - h[3]) + h[5] * (h[2] - h[4]);
        assert!((c.qhat.coeff(1) - expect_u1).abs() < 1e-15);
        assert!((c.qhat.coeff(0) - expect_u0).abs() < 1e-15);
        assert_eq!(c.corrections, vec![(2, h[5])]);
    }

    #[test]
    fn complete_empty_ranges() {
        assert!(complete_1d(&[1.0, 0.2, 0.1], 0).is_err());
        assert!(complete_1d(&[2.0, 0.2, 0.1, 0.0, 0.1], 0).is_err());
    }

    #[test]
    fn correction_chain_top_entries() {
        // N = 7, k = 0: corrections on q_1..q_5.
        let h = [1.0, 0.2, -0.1, 0.05, 0.03, -0.02, 0.01, 0.015];
        let c = complete_1d(&h, 0).unwrap();
        assert_eq!(c.corrections.len(), 5);
        assert!((c.correction(5).unwrap() - h[7]).abs() < 1e-15);
        let folded = h[7] * c.correction(1).unwrap();
        assert!((c.correction(4).unwrap() - (h[6] - h[7] * h[1] + folded)).abs() < 1e-15);
        assert_eq!(c.qhat.degree(), Some(0));
    }

    #[test]
    fn exact_mode_agrees() {
        let h: Vec<f64> = vec![1.0, 0.25, -0.125, 0.0625, 0.5, -0.25, 0.125];
        let hr: Vec<BigRational> = h.iter().map(|&v| rational_from_f64(v)).collect();
        for k in 0..2 {
            let cf = complete_1d(&h, k).unwrap();
            let cr = complete_1d(&hr, k).unwrap();
            for i in 0..=k {
                assert!((cf.qhat.coeff(i) - cr.qhat.coeff(i).to_f64()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn breakdown_reported() {
        // pivot for t = 1 is h_0 - h_4 = 0
        let h = [1.0, 0.0, 0.0, 0.0, 1.0];
        assert!(matches!(
            complete_1d(&h, 0),
            Err(Error::EliminationBreakdown { t: 1, .. })
        ));
    }

    #[test]
    fn product_h_generic_equivalence() {
        let g = expand_product(&[0.2, -0.7]).unwrap();
        let spec = WeightSpec::GenericH(g);
        let p = WeightSpec::product(vec![0.2, -0.7]).unwrap();
        for k in 0..6 {
            assert_eq!(build_qk(&spec, k).unwrap(), build_qk(&p, k).unwrap());
        }
    }
}
