//! Polynomial roots as companion-matrix eigenvalues, with diagonal balancing.

use nalgebra::{Complex, DMatrix};

/// Roots of `c[0] + c[1] z + ... + c[d] z^d`.
///
/// Leading coefficients with `|c_k| <= drop_tol * max|c|` are discarded
/// first; the returned `usize` is the effective degree after that.
pub fn poly_roots(c: &[f64], drop_tol: f64) -> (Vec<Complex<f64>>, usize) {
    let scale = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return (Vec::new(), 0);
    }
    let mut d = c.len() - 1;
    while d > 0 && c[d].abs() <= drop_tol * scale {
        d -= 1;
    }
    if d == 0 {
        return (Vec::new(), 0);
    }
    let lead = c[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    balance(&mut m);
    let ev = m.complex_eigenvalues();
    (ev.iter().copied().collect(), d)
}

/// Parlett-Reinsch balancing with radix-2 scale factors, applied in place as
/// a similarity transform.
pub fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_moduli(c: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = poly_roots(c, 1e-14).0.iter().map(|z| z.norm()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn quadratic_roots() {
        // (z - 2)(z + 3) = z^2 + z - 6
        let m = sorted_moduli(&[-6.0, 1.0, 1.0]);
        assert!((m[0] - 2.0).abs() < 1e-12 && (m[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn badly_scaled_roots() {
        // (1 - 1e3 z)(1 - 1e-3 z) has roots 1e-3 and 1e3.
        let m = sorted_moduli(&[1.0, -(1e3 + 1e-3), 1.0]);
        assert!((m[0] - 1e-3).abs() < 1e-15 && (m[1] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn degree_drop() {
        let (r, d) = poly_roots(&[1.0, 2.0, 1e-20], 1e-14);
        assert_eq!(d, 1);
        assert!((r[0].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn balancing_preserves_spectrum() {
        let mut m = DMatrix::from_row_slice(3, 3, &[1.0, 1e6, 0.0, 1e-6, 2.0, 1e5, 0.0, 1e-5, 3.0]);
        let before = m.trace();
        balance(&mut m);
        assert!((m.trace() - before).abs() < 1e-12);
        assert!(m.amax() < 1e5);
    }
}
