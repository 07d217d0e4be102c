//! Lexicographical and reverse-lexicographical systems on `Pi_{n,m}`.
//!
//! Low band: `q_r(x,y) U_k(y)` for `k <= m - kappa`. High band (product
//! weights, `m - N_f < k <= m`): the combination
//! `sum_j a_j q_{r+j} U_{k-j}(y) + b_j q~_{m+1+j} U_{r+k-m-1-j}(x)` whose
//! coefficients outside the window or above `(r, k)` vanish, found as a
//! one-dimensional nullspace. The elimination recursion on the Laurent side
//! is kept as an independent cross-check.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::gram_schmidt;
use crate::poly::{t_map, ux, uy, BivariatePoly, LaurentPoly, Ordering2};
use crate::szego::{build_qk, build_tilde_ql};
use crate::system::{OrthoEntry, OrthoSystem, Source, Window};
use crate::total::{normalize, total_threshold};
use crate::weights::{ProductOmega, WeightSpec};

/// Singular values below this fraction of the largest count as zero.
pub const NULLSPACE_TOL: f64 = 1e-8;
/// `|gamma_0|` below this is a recursion breakdown.
pub const GAMMA_TOL: f64 = 1e-12;
/// Residual allowed in slots the nullspace solve is meant to kill.
const KILL_TOL: f64 = 1e-8;

/// Normalized `q_r(x, y) U_k(y)`, lex degree `(r, k)`.
pub fn build_lex_low(spec: &WeightSpec, r: usize, k: usize, tol: f64) -> Result<OrthoEntry> {
    let threshold = total_threshold(spec);
    if r < threshold {
        return Err(Error::BelowThreshold {
            index: r as i64,
            threshold: threshold as i64,
        });
    }
    let p = build_qk(spec, r as i64)?.mul(&uy(k as i64))?;
    let (poly, norm) = normalize(spec, &p, (r, k), tol)?;
    Ok(OrthoEntry {
        index: (r, k),
        poly,
        norm,
        source: Source::ClosedForm,
    })
}

/// Normalized `q~_t(x, y) U_l(x)`, revlex degree `(l, t)`.
pub fn build_revlex_low(spec: &WeightSpec, l: usize, t: usize, tol: f64) -> Result<OrthoEntry> {
    let threshold = total_threshold(spec);
    if t < threshold {
        return Err(Error::BelowThreshold {
            index: t as i64,
            threshold: threshold as i64,
        });
    }
    let p = build_tilde_ql(spec, t as i64)?.mul(&ux(l as i64))?;
    let (poly, norm) = normalize(spec, &p, (l, t), tol)?;
    Ok(OrthoEntry {
        index: (l, t),
        poly,
        norm,
        source: Source::ClosedForm,
    })
}

fn product_factors(spec: &WeightSpec) -> Result<&ProductOmega> {
    spec.as_product().ok_or_else(|| {
        Error::Unsupported("the high band needs a product-form weight".into())
    })
}

/// Checks `m - N_f < k <= m` and `r, m >= 2 N_f`; returns `N_f`.
fn check_high_window(spec: &WeightSpec, r: usize, k: usize, m: usize) -> Result<usize> {
    let nf = product_factors(spec)?.n_factors();
    if k > m || k + nf <= m {
        return Err(Error::InvalidArgument(format!(
            "slot {k} is outside the high band ({}, {m}]",
            m as i64 - nf as i64
        )));
    }
    if r < 2 * nf || m < 2 * nf {
        return Err(Error::InvalidArgument(format!(
            "high band needs r, m >= 2 N_f = {} (got r = {r}, m = {m})",
            2 * nf
        )));
    }
    Ok(nf)
}

/// One-dimensional nullspace combination of `cols` killing every slot where
/// `kill(i, j)` holds, scaled so the first coefficient is 1.
fn solve_high(
    cols: &[BivariatePoly],
    kill: impl Fn(usize, usize) -> bool,
) -> Result<(BivariatePoly, Vec<f64>)> {
    let mut slots: Vec<(usize, usize)> = cols
        .iter()
        .flat_map(|p| p.terms().map(|(i, j, _)| (i, j)).collect::<Vec<_>>())
        .filter(|&(i, j)| kill(i, j))
        .collect();
    slots.sort_unstable();
    slots.dedup();
    let nc = cols.len();
    let nr = slots.len().max(nc);
    let mat = DMatrix::from_fn(nr, nc, |row, c| {
        slots.get(row).map_or(0.0, |&(i, j)| cols[c].get(i, j))
    });
    let svd = mat.svd(false, true);
    let sv = &svd.singular_values;
    let vt = svd.v_t.as_ref().expect("right singular vectors");
    let smax = sv.iter().fold(0.0_f64, |m, v| m.max(*v));
    let null: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= NULLSPACE_TOL * smax).collect();
    if null.len() != 1 {
        return Err(Error::DegenerateWindow { nullity: null.len() });
    }
    let v: Vec<f64> = (0..nc).map(|c| vt[(null[0], c)]).collect();
    let vmax = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if v[0].abs() <= NULLSPACE_TOL * vmax {
        return Err(Error::Anomaly(
            "leading ansatz coefficient vanishes in the nullspace".into(),
        ));
    }
    let coeffs: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
    let mut p = BivariatePoly::zero(cols[0].basis());
    for (c, col) in coeffs.iter().zip(cols) {
        p = p.axpy(c, col)?;
    }
    let scale = p.max_abs();
    let worst = slots.iter().fold(0.0_f64, |m, &(i, j)| m.max(p.get(i, j).abs()));
    if worst > KILL_TOL * scale {
        return Err(Error::Residual {
            what: "killed slot of the high-band combination".into(),
            residual: worst,
            tol: KILL_TOL * scale,
        });
    }
    // exact zeros where the window requires them
    let p = BivariatePoly::from_grid(
        p.basis(),
        p.nrows(),
        p.ncols(),
        (0..p.nrows())
            .flat_map(|i| (0..p.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| if kill(i, j) { 0.0 } else { p.get(i, j) })
            .collect(),
    );
    Ok((p, coeffs))
}

/// High-band slot `(r, k)` of the lex system on `Pi_{n,m}`.
pub fn build_lex_high(spec: &WeightSpec, r: usize, k: usize, m: usize, tol: f64) -> Result<OrthoEntry> {
    let nf = check_high_window(spec, r, k, m)?;
    let terms = k + nf - m;
    let mut cols = Vec::with_capacity(2 * terms);
    for j in 0..terms {
        cols.push(build_qk(spec, (r + j) as i64)?.mul(&uy(k as i64 - j as i64))?);
    }
    for j in 0..terms {
        let xi = r as i64 + k as i64 - m as i64 - 1 - j as i64;
        cols.push(build_tilde_ql(spec, (m + 1 + j) as i64)?.mul(&ux(xi))?);
    }
    let (p, _) = solve_high(&cols, |i, jj| jj > m || i > r || (i == r && jj > k))?;
    lead_check(&p, Ordering2::Lex, (r, k))?;
    let (poly, norm) = normalize(spec, &p, (r, k), tol)?;
    Ok(OrthoEntry {
        index: (r, k),
        poly,
        norm,
        source: Source::Elimination,
    })
}

/// High-band slot `(l, t)` of the revlex system on `Pi_{n,m}`: the mirror
/// ansatz `sum_j a_j q~_{t+j} U_{l-j}(x) + b_j q_{n+1+j} U_{t+l-n-1-j}(y)`.
pub fn build_revlex_high(spec: &WeightSpec, l: usize, t: usize, n: usize, tol: f64) -> Result<OrthoEntry> {
    let nf = check_high_window(spec, t, l, n)?;
    let terms = l + nf - n;
    let mut cols = Vec::with_capacity(2 * terms);
    for j in 0..terms {
        cols.push(build_tilde_ql(spec, (t + j) as i64)?.mul(&ux(l as i64 - j as i64))?);
    }
    for j in 0..terms {
        let yi = t as i64 + l as i64 - n as i64 - 1 - j as i64;
        cols.push(build_qk(spec, (n + 1 + j) as i64)?.mul(&uy(yi))?);
    }
    let (p, _) = solve_high(&cols, |i, jj| i > n || jj > t || (jj == t && i > l))?;
    lead_check(&p, Ordering2::RevLex, (l, t))?;
    let (poly, norm) = normalize(spec, &p, (l, t), tol)?;
    Ok(OrthoEntry {
        index: (l, t),
        poly,
        norm,
        source: Source::Elimination,
    })
}

fn lead_check(p: &BivariatePoly, ord: Ordering2, want: (usize, usize)) -> Result<()> {
    match p.leading_tol(ord, 1e-10) {
        Some(l) if l == want => Ok(()),
        other => Err(Error::Anomaly(format!(
            "combination leads at {other:?}, expected {want:?}"
        ))),
    }
}

/// Revlex slot `(l, t)` on `Pi_{n, .}`: low band when `l <= n - N_f`.
pub fn build_revlex(spec: &WeightSpec, l: usize, t: usize, n: usize, tol: f64) -> Result<OrthoEntry> {
    let nf = product_factors(spec)?.n_factors();
    if l + nf <= n {
        build_revlex_low(spec, l, t, tol)
    } else {
        build_revlex_high(spec, l, t, n, tol)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Low,
    High,
    Oracle,
}

fn assemble(
    spec: &WeightSpec,
    ord: Ordering2,
    window: Window,
    plan: &[((usize, usize), Slot)],
    build: impl Fn((usize, usize), Slot) -> Result<OrthoEntry> + Sync,
    tol: f64,
) -> Result<OrthoSystem> {
    let oracle = if plan.iter().any(|(_, s)| matches!(s, Slot::Oracle)) {
        Some(gram_schmidt(spec, ord, window, tol)?)
    } else {
        None
    };
    let entries = plan
        .par_iter()
        .map(|&(idx, slot)| match slot {
            Slot::Oracle => oracle
                .as_ref()
                .and_then(|s| s.get(idx).cloned())
                .ok_or_else(|| Error::Anomaly(format!("oracle lacks slot {idx:?}"))),
            s => build(idx, s),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthoSystem {
        ordering: ord,
        window,
        entries,
    })
}

/// Full lex system on `Pi_{n,m}`, entries in lex order.
pub fn build_lex_system(spec: &WeightSpec, n: usize, m: usize, tol: f64) -> Result<OrthoSystem> {
    let window = Window::Rect { n, m };
    let threshold = total_threshold(spec);
    let kappa = spec.kappa();
    let nf = spec.as_product().map(|p| p.n_factors());
    let plan: Vec<_> = window
        .indices(Ordering2::Lex)
        .into_iter()
        .map(|(r, k)| {
            let slot = if r >= threshold && k + kappa <= m {
                Slot::Low
            } else if nf.is_some_and(|f| r >= 2 * f && m >= 2 * f && k + f > m) {
                Slot::High
            } else {
                Slot::Oracle
            };
            ((r, k), slot)
        })
        .collect();
    assemble(
        spec,
        Ordering2::Lex,
        window,
        &plan,
        |(r, k), slot| match slot {
            Slot::Low => build_lex_low(spec, r, k, tol),
            _ => build_lex_high(spec, r, k, m, tol),
        },
        tol,
    )
}

/// Full revlex system on `Pi_{n,m}`, entries in revlex order.
pub fn build_revlex_system(spec: &WeightSpec, n: usize, m: usize, tol: f64) -> Result<OrthoSystem> {
    let window = Window::Rect { n, m };
    let threshold = total_threshold(spec);
    let nf = spec.as_product().map(|p| p.n_factors());
    let plan: Vec<_> = window
        .indices(Ordering2::RevLex)
        .into_iter()
        .map(|(l, t)| {
            let slot = match nf {
                Some(f) if t >= threshold && l + f <= n => Slot::Low,
                Some(f) if t >= 2 * f && n >= 2 * f => Slot::High,
                _ => Slot::Oracle,
            };
            ((l, t), slot)
        })
        .collect();
    assemble(
        spec,
        Ordering2::RevLex,
        window,
        &plan,
        |(l, t), slot| match slot {
            Slot::Low => build_revlex_low(spec, l, t, tol),
            _ => build_revlex_high(spec, l, t, n, tol),
        },
        tol,
    )
}

/// Atom of the elimination recursion relative to a base `(a, b)`:
/// `A(al, be) = q_{a+al} U_{b+be}(y)`, `B(al, be) = q~_{b+be} U_{a+al}(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Atom {
    A(i64, i64),
    B(i64, i64),
}

impl Atom {
    fn shift(self, da: i64, db: i64) -> Self {
        match self {
            Atom::A(a, b) => Atom::A(a + da, b + db),
            Atom::B(a, b) => Atom::B(a + da, b + db),
        }
    }

    fn eval(self, spec: &WeightSpec, base: (i64, i64)) -> Result<BivariatePoly> {
        match self {
            Atom::A(al, be) => build_qk(spec, base.0 + al)?.mul(&uy(base.1 + be)),
            Atom::B(al, be) => build_tilde_ql(spec, base.1 + be)?.mul(&ux(base.0 + al)),
        }
    }
}

type Combo = BTreeMap<Atom, f64>;

fn combo_shift(c: &Combo, da: i64, db: i64) -> Combo {
    c.iter().map(|(a, v)| (a.shift(da, db), *v)).collect()
}

fn combo_axpy(x: &Combo, s: f64, y: &Combo) -> Combo {
    let mut out = x.clone();
    for (a, v) in y {
        *out.entry(*a).or_insert(0.0) += s * v;
    }
    out
}

fn combo_eval(c: &Combo, spec: &WeightSpec, base: (i64, i64)) -> Result<BivariatePoly> {
    let mut p = BivariatePoly::zero(crate::poly::Basis2::ChebUxChebU);
    for (a, v) in c {
        p = p.axpy(v, &a.eval(spec, base)?)?;
    }
    Ok(p)
}

/// Snapshot after step `j` of the elimination recursion.
#[derive(Debug, Clone, Serialize)]
pub struct EliminationState {
    pub step: usize,
    /// Constant used to reach this step (`None` for the start).
    pub k: Option<f64>,
    /// `S^j_{r,m}` as a combination of atoms.
    pub s: Vec<(Atom, f64)>,
    pub s_tilde: Vec<(Atom, f64)>,
    /// Homogeneous factor with `T(S^j) = z^{-r} w^{-m} omega omega^j`.
    pub omega_j: Vec<((i64, i64), f64)>,
    /// `Some(N_f - j)` when `omega^j` is homogeneous of that degree.
    pub homogeneous_degree: Option<i64>,
    /// `max |T(S^j_{r,m}) - z^{-r} w^{-m} omega omega^j|`.
    pub t_residual: f64,
    /// Smallest `w` exponent among the non-negligible terms of
    /// `T(S^j_{r,m})` (at least `-m`).
    pub min_w_exponent: i64,
}

impl EliminationState {
    /// Homogeneity, `T`-image and window support all hold.
    pub fn invariant_holds(&self, n_f: usize, m: usize, tol: f64) -> bool {
        self.homogeneous_degree == Some(n_f as i64 - self.step as i64)
            && self.t_residual <= tol
            && self.min_w_exponent >= -(m as i64)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RecursionResult {
    pub entry: OrthoEntry,
    pub states: Vec<EliminationState>,
}

fn gamma(omega: &LaurentPoly, deg: i64, i: i64) -> f64 {
    omega.coeff(i, deg - i)
}

/// Drops the terms at `w^0` (`at_w`) or `z^0`, which the choice of `k`
/// cancels, and divides by `w` (or `z`).
fn divide_out(p: &LaurentPoly, by_w: bool) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().filter_map(|(&(a, b), c)| {
        let e = if by_w { b } else { a };
        if e == 0 {
            None
        } else if by_w {
            Some(((a, b - 1), *c))
        } else {
            Some(((a - 1, b), *c))
        }
    }))
}

/// The high-band slot `(r, k)` via the Laurent-side elimination recursion.
pub fn build_lex_high_recursion(
    spec: &WeightSpec,
    r: usize,
    k: usize,
    m: usize,
    tol: f64,
) -> Result<RecursionResult> {
    let nf = check_high_window(spec, r, k, m)?;
    let a = product_factors(spec)?.factors().to_vec();
    let n = nf as i64;
    let steps = k + nf - m;
    let base = (r as i64, m as i64);
    let omega = ProductOmega::omega(&a);
    let prefactor = LaurentPoly::monomial(-base.0, -base.1, 1.0).mul(&omega);

    let mut s: Combo = [(Atom::A(0, -n), 1.0)].into_iter().collect();
    let mut st: Combo = [(Atom::B(-n, 0), 1.0)].into_iter().collect();
    let mut om = ProductOmega::omega_reversed(&a);
    let mut om_t = om.swap();
    let mut states = Vec::with_capacity(steps + 1);
    let mut last_k = None;

    for j in 0..=steps {
        let poly = combo_eval(&s, spec, base)?;
        let image = t_map(&poly)?;
        let expect = prefactor.mul(&om);
        let scale = image.terms().fold(1.0_f64, |m, (_, c)| m.max(c.abs()));
        states.push(EliminationState {
            step: j,
            k: last_k,
            s: s.iter().map(|(a, v)| (*a, *v)).collect(),
            s_tilde: st.iter().map(|(a, v)| (*a, *v)).collect(),
            omega_j: om.terms().map(|(e, c)| (*e, *c)).collect(),
            homogeneous_degree: om.homogeneous_degree(),
            t_residual: image.max_diff(&expect) / scale,
            min_w_exponent: image
                .terms()
                .filter(|(_, c)| c.abs() > 1e-12 * scale)
                .map(|(&(_, b), _)| b)
                .min()
                .unwrap_or(0),
        });
        if j == steps {
            break;
        }
        let deg = n - j as i64;
        let g0 = gamma(&om, deg, 0);
        if g0.abs() < GAMMA_TOL {
            return Err(Error::RecursionBreakdown { step: j + 1, gamma0: g0 });
        }
        let kj = gamma(&om, deg, deg) / g0;
        let s_next = combo_axpy(&combo_shift(&s, 0, 1), -kj, &combo_shift(&st, 0, 1));
        let st_next = combo_axpy(&combo_shift(&st, 1, 0), -kj, &combo_shift(&s, 1, 0));
        let om_next = divide_out(&om.sub(&om_t.scale(&kj)), true);
        let om_t_next = divide_out(&om_t.sub(&om.scale(&kj)), false);
        s = s_next;
        st = st_next;
        om = om_next;
        om_t = om_t_next;
        last_k = Some(kj);
    }

    let p = combo_eval(&s, spec, base)?;
    lead_check(&p, Ordering2::Lex, (r, k))?;
    let (poly, norm) = normalize(spec, &p, (r, k), tol)?;
    Ok(RecursionResult {
        entry: OrthoEntry {
            index: (r, k),
            poly,
            norm,
            source: Source::Elimination,
        },
        states,
    })
}

/// `p_{n,m} = P^m_n(x) [1, y, ..., y^m]^t` with
/// `P^m_n(x) = sum_i K_i x^i`: row `l` of `K_i` holds the `x^i y^j`
/// coefficients of `p^l_{n,m}`.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionView {
    pub n: usize,
    pub m: usize,
    /// `K_0, ..., K_n`, each `(m+1) x (m+1)` row-major.
    pub k: Vec<Vec<Vec<f64>>>,
}

impl ConnectionView {
    /// Row `l` of `P^m_n(x) [1, y, ..., y^m]^t` as a monomial polynomial.
    pub fn row(&self, l: usize) -> BivariatePoly {
        let rows: Vec<Vec<f64>> = self.k.iter().map(|ki| ki[l].clone()).collect();
        BivariatePoly::from_rows(crate::poly::Basis2::MonomialxMonomial, rows)
    }
}

/// Reshapes the lex entries `p^0_{n,m} .. p^m_{n,m}` into the matrix
/// polynomial `P^m_n` and checks that `K_n` is lower triangular with a
/// positive diagonal.
pub fn connection_reshape(sys: &OrthoSystem, n: usize, m: usize) -> Result<ConnectionView> {
    if sys.ordering != Ordering2::Lex {
        return Err(Error::InvalidArgument("connection form needs a lex system".into()));
    }
    let mut k = vec![vec![vec![0.0; m + 1]; m + 1]; n + 1];
    for l in 0..=m {
        let e = sys
            .get((n, l))
            .ok_or_else(|| Error::InvalidArgument(format!("system lacks slot ({n}, {l})")))?;
        let mono = e.poly.to_monomial();
        if mono.nrows() > n + 1 || mono.ncols() > m + 1 {
            return Err(Error::InvalidArgument(format!("slot ({n}, {l}) leaves Pi_{{{n},{m}}}")));
        }
        for (i, j, c) in mono.terms() {
            k[i][l][j] = *c;
        }
    }
    let top = &k[n];
    let scale = top.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs()));
    for (l, row) in top.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if j > l && v.abs() > 1e-8 * scale {
                return Err(Error::Triangularity { i: l, j, value: *v });
            }
        }
        if row[l] <= 0.0 {
            return Err(Error::Triangularity { i: l, j: l, value: row[l] });
        }
    }
    Ok(ConnectionView { n, m, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{orthonormality_defect, DEFAULT_TOL};
    use crate::poly::Basis2;

    #[test]
    fn product_chebyshev_lex() {
        let c = WeightSpec::product(vec![]).unwrap();
        let sys = build_lex_system(&c, 3, 2, DEFAULT_TOL).unwrap();
        for e in &sys.entries {
            let expect = ux(e.index.0 as i64).mul(&uy(e.index.1 as i64)).unwrap();
            assert!(e.poly.max_diff(&expect) < 1e-12);
            assert_eq!(e.source, Source::ClosedForm);
        }
        assert!(build_lex_high(&c, 3, 2, 2, DEFAULT_TOL).is_err());
    }

    #[test]
    fn example_one_low_slot() {
        let a = 0.4;
        let s = WeightSpec::product(vec![-a]).unwrap();
        let e = build_lex_low(&s, 2, 0, DEFAULT_TOL).unwrap();
        let raw = BivariatePoly::from_rows(
            Basis2::ChebUxChebU,
            vec![vec![a * a], vec![0.0, -a], vec![1.0]],
        );
        let ratio = e.poly.get(2, 0) / raw.get(2, 0);
        assert!(e.poly.max_diff(&raw.scale(&ratio)) < 1e-12);
    }

    #[test]
    fn high_band_agrees_with_oracle() {
        let s = WeightSpec::product(vec![0.5, -0.3]).unwrap();
        let oracle = gram_schmidt(&s, Ordering2::Lex, Window::Rect { n: 5, m: 5 }, DEFAULT_TOL).unwrap();
        for k in [4, 5] {
            let e = build_lex_high(&s, 5, k, 5, DEFAULT_TOL).unwrap();
            assert!(e.poly.max_diff(&oracle.get((5, k)).unwrap().poly) < 1e-7, "k = {k}");
        }
    }

    #[test]
    fn recursion_agrees_and_keeps_invariants() {
        let s = WeightSpec::product(vec![0.45, -0.2, 0.3]).unwrap();
        for k in 5..=7 {
            let a = build_lex_high(&s, 7, k, 7, DEFAULT_TOL).unwrap();
            let b = build_lex_high_recursion(&s, 7, k, 7, DEFAULT_TOL).unwrap();
            assert!(a.poly.max_diff(&b.entry.poly) < 1e-8, "k = {k}");
            for st in &b.states {
                assert!(st.invariant_holds(3, 7, 1e-10), "{st:?}");
            }
        }
    }

    #[test]
    fn revlex_symmetric_spec_mirrors_lex() {
        let s = WeightSpec::product(vec![0.35, -0.5]).unwrap();
        let lex = build_lex_system(&s, 5, 5, DEFAULT_TOL).unwrap();
        let rev = build_revlex_system(&s, 5, 5, DEFAULT_TOL).unwrap();
        for e in &lex.entries {
            let (r, k) = e.index;
            let mirror = rev.get((k, r)).unwrap();
            assert!(e.poly.swap_xy().max_diff(&mirror.poly) < 1e-9);
        }
    }

    #[test]
    fn systems_are_orthonormal() {
        let s = WeightSpec::product(vec![-0.6]).unwrap();
        for sys in [
            build_lex_system(&s, 4, 4, DEFAULT_TOL).unwrap(),
            build_revlex_system(&s, 4, 4, DEFAULT_TOL).unwrap(),
        ] {
            let polys: Vec<&BivariatePoly> = sys.polys().collect();
            assert!(orthonormality_defect(&s, &polys, DEFAULT_TOL).unwrap() < 1e-9);
        }
    }

    #[test]
    fn connection_form() {
        let s = WeightSpec::product(vec![-0.5]).unwrap();
        let sys = build_lex_system(&s, 4, 4, DEFAULT_TOL).unwrap();
        let view = connection_reshape(&sys, 4, 4).unwrap();
        for l in 0..=4 {
            let back = view.row(l);
            assert_eq!(back, sys.get((4, l)).unwrap().poly.to_monomial());
        }
    }

    #[test]
    fn low_band_independent_of_window() {
        let s = WeightSpec::product(vec![0.3, 0.6]).unwrap();
        let a = build_lex_system(&s, 5, 5, DEFAULT_TOL).unwrap();
        let b = build_lex_system(&s, 5, 8, DEFAULT_TOL).unwrap();
        for k in 0..=3 {
            assert_eq!(a.get((5, k)).unwrap().poly, b.get((5, k)).unwrap().poly);
        }
    }

    #[test]
    fn high_band_norm_depends_on_gap_only() {
        let s = WeightSpec::product(vec![0.3, -0.45]).unwrap();
        let a = build_lex_high(&s, 5, 4, 5, DEFAULT_TOL).unwrap();
        let b = build_lex_high(&s, 6, 5, 6, DEFAULT_TOL).unwrap();
        assert!((a.norm - b.norm).abs() < 1e-8 * a.norm);
    }
}
