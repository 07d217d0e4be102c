//! Quadrature moments of `dmu = (4/pi^2) sqrt(1-x^2) sqrt(1-y^2) / |h(z,y)|^2`
//! and the Gram-Schmidt oracle built on them.
//!
//! With `x = cos(theta)`, `y = cos(phi)` every moment is an integral of a
//! smooth doubly periodic function over `[0, 2pi]^2`, so the trapezoid rule
//! converges geometrically. Resolution doubles until successive tables agree.
//! The measure is always normalized to unit mass.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Basis2, BivariatePoly, Ordering2};
use crate::system::{OrthoEntry, OrthoSystem, Source, Window};
use crate::weights::WeightSpec;

pub const DEFAULT_TOL: f64 = 1e-11;
pub const START_RESOLUTION: usize = 64;
pub const MAX_RESOLUTION: usize = 1 << 14;
/// Relative squared-norm loss at which Gram-Schmidt gives up.
pub const PIVOT_TOL: f64 = 1e-10;
pub const MAX_CONDITION: f64 = 1e12;

/// Which basis the moment table integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    /// `int x^i y^j dmu`
    Monomial,
    /// `int U_i(x) U_j(y) dmu`
    ChebU,
}

/// Square table of moments with indices `0..=degree` in each variable.
#[derive(Debug, Serialize, Deserialize)]
pub struct MomentTable {
    pub kind: MomentKind,
    pub degree: usize,
    pub resolution: usize,
    /// Mass of the unnormalized measure.
    pub mass: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    #[serde(skip)]
    prefix: OnceLock<Vec<f64>>,
}

impl MomentTable {
    fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i <= self.degree && j <= self.degree, "moment ({i}, {j}) outside table");
        self.values[i * self.dim() + j]
    }

    /// Change from the previous resolution.
    pub fn error(&self, i: usize, j: usize) -> f64 {
        self.errors[i * self.dim() + j]
    }

    pub fn max_error(&self) -> f64 {
        self.errors.iter().fold(0.0, |m, e| m.max(*e))
    }

    /// Step-2 prefix sums over both indices, for sums over linearization ranges.
    fn prefix(&self) -> &[f64] {
        self.prefix.get_or_init(|| {
            let d = self.dim();
            let mut p = vec![0.0; d * d];
            for e in 0..d {
                for f in 0..d {
                    let mut v = self.values[e * d + f];
                    if e >= 2 {
                        v += p[(e - 2) * d + f];
                    }
                    if f >= 2 {
                        v += p[e * d + f - 2];
                    }
                    if e >= 2 && f >= 2 {
                        v -= p[(e - 2) * d + f - 2];
                    }
                    p[e * d + f] = v;
                }
            }
            p
        })
    }

    /// `int U_a(x) U_b(y) U_c(x) U_d(y) dmu` for a Chebyshev table.
    pub fn basis_inner(&self, (a, b): (usize, usize), (c, d): (usize, usize)) -> f64 {
        debug_assert_eq!(self.kind, MomentKind::ChebU);
        let p = self.prefix();
        let dim = self.dim();
        let at = |e: i64, f: i64| -> f64 {
            if e < 0 || f < 0 {
                0.0
            } else {
                p[e as usize * dim + f as usize]
            }
        };
        let (el, eh) = (a.abs_diff(c) as i64, (a + c) as i64);
        let (fl, fh) = (b.abs_diff(d) as i64, (b + d) as i64);
        at(eh, fh) - at(el - 2, fh) - at(eh, fl - 2) + at(el - 2, fl - 2)
    }

    /// `<p, q>` for Chebyshev-basis polynomials.
    pub fn inner(&self, p: &BivariatePoly, q: &BivariatePoly) -> Result<f64> {
        if self.kind != MomentKind::ChebU
            || p.basis() != Basis2::ChebUxChebU
            || q.basis() != Basis2::ChebUxChebU
        {
            return Err(Error::BasisMismatch);
        }
        let need = (p.nrows() + q.nrows()).max(p.ncols() + q.ncols());
        if need > self.degree + 2 {
            return Err(Error::InvalidArgument(format!(
                "inner product needs moments to degree {}, table has {}",
                need.saturating_sub(2),
                self.degree
            )));
        }
        let qt: Vec<(usize, usize, f64)> = q.terms().map(|(c, d, v)| (c, d, *v)).collect();
        let mut s = 0.0;
        for (a, b, pv) in p.terms() {
            for &(c, d, qv) in &qt {
                s += pv * qv * self.basis_inner((a, b), (c, d));
            }
        }
        Ok(s)
    }

    /// `||p||` under the normalized measure.
    pub fn norm(&self, p: &BivariatePoly) -> Result<f64> {
        Ok(self.inner(p, p)?.max(0.0).sqrt())
    }
}

/// `1/|h(e^{i theta_k}, cos phi_l)|^2` on the `r x r` grid, rows indexed by `phi`.
fn inverse_weight_grid(spec: &WeightSpec, r: usize) -> Vec<f64> {
    let step = 2.0 * PI / r as f64;
    let zs: Vec<Complex<f64>> = (0..r).map(|k| Complex::from_polar(1.0, k as f64 * step)).collect();
    let mut w = vec![0.0; r * r];
    w.par_chunks_mut(r).enumerate().for_each(|(l, row)| {
        let y = (l as f64 * step).cos();
        match spec {
            WeightSpec::ProductOmega(p) => {
                for (k, out) in row.iter_mut().enumerate() {
                    let z = zs[k];
                    let z2 = z * z;
                    let v: f64 = p
                        .factors()
                        .iter()
                        .map(|&a| (Complex::new(1.0, 0.0) + z * (2.0 * a * y) + z2 * (a * a)).norm_sqr())
                        .product();
                    *out = 1.0 / v;
                }
            }
            WeightSpec::GenericH(g) => {
                let c = g.z_coeffs_at(y);
                for (k, out) in row.iter_mut().enumerate() {
                    let z = zs[k];
                    let h = c.iter().rev().fold(Complex::new(0.0, 0.0), |acc, ci| acc * z + ci);
                    *out = 1.0 / h.norm_sqr();
                }
            }
        }
    });
    w
}

/// Rows `basis_a(cos theta_k) sin^2(theta_k)`; for U this is `sin((a+1) theta) sin(theta)`.
fn basis_samples(kind: MomentKind, degree: usize, r: usize) -> DMatrix<f64> {
    let step = 2.0 * PI / r as f64;
    DMatrix::from_fn(degree + 1, r, |a, k| {
        let t = k as f64 * step;
        let s = t.sin();
        match kind {
            MomentKind::ChebU => ((a + 1) as f64 * t).sin() * s,
            MomentKind::Monomial => t.cos().powi(a as i32) * s * s,
        }
    })
}

/// Unnormalized table at resolution `r`, and its mass.
fn raw_table(spec: &WeightSpec, kind: MomentKind, degree: usize, r: usize) -> (Vec<f64>, f64) {
    let w = DMatrix::from_row_slice(r, r, &inverse_weight_grid(spec, r));
    let s = basis_samples(kind, degree, r);
    // rows of w are phi (y), columns theta (x)
    let t = &s * w.transpose() * s.transpose();
    let scale = 4.0 / (r * r) as f64;
    let d = degree + 1;
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            v[i * d + j] = t[(i, j)] * scale;
        }
    }
    let mass = v[0];
    (v, mass)
}

fn converged_table(spec: &WeightSpec, kind: MomentKind, degree: usize, tol: f64) -> Result<MomentTable> {
    let mut r = START_RESOLUTION.max(4 * (degree + 3).next_power_of_two());
    let mut prev: Option<Vec<f64>> = None;
    let mut change = f64::INFINITY;
    while r <= MAX_RESOLUTION {
        let (raw, mass) = raw_table(spec, kind, degree, r);
        let cur: Vec<f64> = raw.iter().map(|v| v / mass).collect();
        if let Some(p) = &prev {
            let errors: Vec<f64> = cur.iter().zip(p).map(|(a, b)| (a - b).abs()).collect();
            change = cur
                .iter()
                .zip(&errors)
                .map(|(v, e)| e / (1.0 + v.abs()))
                .fold(0.0, f64::max);
            if change < tol {
                return Ok(MomentTable {
                    kind,
                    degree,
                    resolution: r,
                    mass,
                    values: cur,
                    errors,
                    prefix: OnceLock::new(),
                });
            }
        }
        prev = Some(cur);
        r *= 2;
    }
    Err(Error::QuadratureNotConverged {
        resolution: r / 2,
        change,
    })
}

type CacheKey = (String, MomentKind, u64);

/// Concurrent moment cache keyed by weight fingerprint, kind and tolerance.
///
/// A table is only ever replaced by one of larger degree, and entries that
/// were already stored keep their values, so the first computed value of any
/// moment is the one every later reader sees.
#[derive(Default)]
pub struct MomentOracle {
    tables: RwLock<HashMap<CacheKey, Arc<MomentTable>>>,
}

/// Table degrees are rounded up to a multiple of this.
const DEGREE_BUCKET: usize = 8;

impl MomentOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache shared by all constructions.
    pub fn global() -> &'static MomentOracle {
        static GLOBAL: OnceLock<MomentOracle> = OnceLock::new();
        GLOBAL.get_or_init(MomentOracle::new)
    }

    /// A table covering indices up to at least `degree`.
    pub fn table(
        &self,
        spec: &WeightSpec,
        kind: MomentKind,
        degree: usize,
        tol: f64,
    ) -> Result<Arc<MomentTable>> {
        let key = (spec.fingerprint(), kind, tol.to_bits());
        if let Some(t) = self.tables.read().expect("cache lock").get(&key) {
            if t.degree >= degree {
                return Ok(Arc::clone(t));
            }
        }
        let degree = degree.div_ceil(DEGREE_BUCKET).max(1) * DEGREE_BUCKET;
        let fresh = converged_table(spec, kind, degree, tol)?;
        Ok(self.insert(key, fresh))
    }

    fn insert(&self, key: CacheKey, mut fresh: MomentTable) -> Arc<MomentTable> {
        let mut map = self.tables.write().expect("cache lock");
        if let Some(old) = map.get(&key) {
            if old.degree >= fresh.degree {
                return Arc::clone(old);
            }
            let (d_old, d_new) = (old.dim(), fresh.dim());
            for i in 0..d_old {
                for j in 0..d_old {
                    fresh.values[i * d_new + j] = old.values[i * d_old + j];
                    fresh.errors[i * d_new + j] = old.errors[i * d_old + j];
                }
            }
            fresh.mass = old.mass;
        }
        let t = Arc::new(fresh);
        map.insert(key, Arc::clone(&t));
        t
    }

    /// Writes every cached table as JSON into `dir`.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let map = self.tables.read().expect("cache lock");
        for ((fp, kind, tol), t) in map.iter() {
            let name = format!("{fp}-{}-{tol:016x}.json", kind_name(*kind));
            std::fs::write(dir.join(name), serde_json::to_vec(t.as_ref())?)?;
        }
        Ok(())
    }

    /// Loads tables written by [`save_dir`](Self::save_dir); unreadable
    /// files are skipped.
    pub fn load_dir(&self, dir: &Path) -> Result<usize> {
        let mut n = 0;
        let Ok(rd) = std::fs::read_dir(dir) else {
            return Ok(0);
        };
        for entry in rd {
            let path = entry?.path();
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let parts: Vec<&str> = stem.rsplitn(3, '-').collect();
            if parts.len() != 3 {
                continue;
            }
            let Ok(tol) = u64::from_str_radix(parts[0], 16) else {
                continue;
            };
            let Ok(bytes) = std::fs::read(&path) else {
                continue;
            };
            let Ok(table) = serde_json::from_slice::<MomentTable>(&bytes) else {
                continue;
            };
            if table.values.len() != table.dim() * table.dim() {
                continue;
            }
            self.insert((parts[2].to_string(), table.kind, tol), table);
            n += 1;
        }
        Ok(n)
    }
}

fn kind_name(k: MomentKind) -> &'static str {
    match k {
        MomentKind::Monomial => "monomial",
        MomentKind::ChebU => "chebu",
    }
}

/// `int x^i y^j dmu` (normalized measure).
pub fn moment(spec: &WeightSpec, i: usize, j: usize, tol: f64) -> Result<f64> {
    let t = MomentOracle::global().table(spec, MomentKind::Monomial, i.max(j), tol)?;
    Ok(t.get(i, j))
}

/// `int U_i(x) U_j(y) dmu`.
pub fn cheb_moment(spec: &WeightSpec, i: usize, j: usize, tol: f64) -> Result<f64> {
    let t = MomentOracle::global().table(spec, MomentKind::ChebU, i.max(j), tol)?;
    Ok(t.get(i, j))
}

/// Chebyshev table able to pair polynomials of the given per-variable degree.
pub fn cheb_table(spec: &WeightSpec, degree: usize, tol: f64) -> Result<Arc<MomentTable>> {
    MomentOracle::global().table(spec, MomentKind::ChebU, 2 * degree, tol)
}

fn poly_degree(p: &BivariatePoly) -> usize {
    p.nrows().max(p.ncols()).saturating_sub(1)
}

/// `<p, q>` under the normalized measure.
pub fn inner(spec: &WeightSpec, p: &BivariatePoly, q: &BivariatePoly, tol: f64) -> Result<f64> {
    let d = poly_degree(p).max(poly_degree(q));
    cheb_table(spec, d, tol)?.inner(&p.to_chebu(), &q.to_chebu())
}

/// `int f(x) sqrt(1-x^2) / |h(z, y)|^2 dx` with `x = (z + 1/z)/2` on the unit circle.
pub fn univariate_integral(spec: &WeightSpec, y: f64, f: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::InvalidArgument(format!("y = {y} outside [-1, 1]")));
    }
    let coeffs = spec.h().z_coeffs_at(y);
    let eval = |r: usize| -> f64 {
        let step = 2.0 * PI / r as f64;
        let s: f64 = (0..r)
            .map(|k| {
                let t = k as f64 * step;
                let z = Complex::from_polar(1.0, t);
                let h = coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c);
                let st = t.sin();
                f(t.cos()) * st * st / h.norm_sqr()
            })
            .sum();
        0.5 * s * step
    };
    let mut r = START_RESOLUTION;
    let mut prev = eval(r);
    let mut change = f64::INFINITY;
    while r < MAX_RESOLUTION {
        r *= 2;
        let cur = eval(r);
        change = (cur - prev).abs();
        if change < tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged { resolution: r, change })
}

/// `int x^i dmu_y(x)` with `dmu_y = sqrt(1-x^2)/|h(z,y)|^2 dx` (no `2/pi`).
pub fn univariate_moment(spec: &WeightSpec, i: usize, y: f64, tol: f64) -> Result<f64> {
    univariate_integral(spec, y, |x| x.powi(i as i32), tol)
}

/// Gram-Schmidt on the tensor Chebyshev basis `U_i(x) U_j(y)` taken in `ord`
/// order over `window`.
///
/// The Chebyshev basis spans the same nested spaces as the monomials in each
/// of the three orderings, with positive leading coefficients, so the
/// result is the orthonormal system with positive monomial leading
/// coefficients.
pub fn gram_schmidt(spec: &WeightSpec, ord: Ordering2, window: Window, tol: f64) -> Result<OrthoSystem> {
    let idx = window.indices(ord);
    let (dx, dy) = window.degrees();
    let table = cheb_table(spec, dx.max(dy), tol)?;
    let nb = idx.len();
    let g = DMatrix::from_fn(nb, nb, |p, q| table.basis_inner(idx[p], idx[q]));

    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::UnreliableOracle { condition });
    }

    let mut qs: Vec<DVector<f64>> = Vec::with_capacity(nb);
    let mut gqs: Vec<DVector<f64>> = Vec::with_capacity(nb);
    for k in 0..nb {
        let mut v = DVector::zeros(nb);
        v[k] = 1.0;
        for _pass in 0..2 {
            for (q, gq) in qs.iter().zip(&gqs) {
                let c = v.dot(gq);
                v.axpy(-c, q, 1.0);
            }
        }
        let gv = &g * &v;
        let n2 = v.dot(&gv);
        if n2 <= PIVOT_TOL * g[(k, k)] {
            return Err(Error::IllConditioned {
                i: idx[k].0,
                j: idx[k].1,
                pivot: n2,
            });
        }
        let nrm = n2.sqrt();
        qs.push(v / nrm);
        gqs.push(gv / nrm);
    }

    let (rows, cols) = (dx + 1, dy + 1);
    let entries = qs
        .iter()
        .zip(&idx)
        .map(|(v, &index)| {
            let mut data = vec![0.0; rows * cols];
            for (p, &(i, j)) in idx.iter().enumerate() {
                data[i * cols + j] = v[p];
            }
            OrthoEntry {
                index,
                poly: BivariatePoly::from_grid(Basis2::ChebUxChebU, rows, cols, data),
                norm: 1.0,
                source: Source::Oracle,
            }
        })
        .collect();
    Ok(OrthoSystem {
        ordering: ord,
        window,
        entries,
    })
}

/// Monomial moment matrix of `Pi_{n,m}` in lex order.
pub fn lex_moment_matrix(spec: &WeightSpec, n: usize, m: usize, tol: f64) -> Result<DMatrix<f64>> {
    let t = MomentOracle::global().table(spec, MomentKind::Monomial, 2 * n.max(m), tol)?;
    let idx = Window::Rect { n, m }.indices(Ordering2::Lex);
    Ok(DMatrix::from_fn(idx.len(), idx.len(), |p, q| {
        t.get(idx[p].0 + idx[q].0, idx[p].1 + idx[q].1)
    }))
}

/// Largest spread among entries of a lex moment matrix of `Pi_{n,m}` that
/// share the same `(i + k, j + l)`: zero for a doubly Hankel matrix.
pub fn doubly_hankel_defect(mat: &DMatrix<f64>, n: usize, m: usize) -> f64 {
    let idx = Window::Rect { n, m }.indices(Ordering2::Lex);
    let mut seen: HashMap<(usize, usize), f64> = HashMap::new();
    let mut worst: f64 = 0.0;
    for (p, a) in idx.iter().enumerate() {
        for (q, b) in idx.iter().enumerate() {
            let key = (a.0 + b.0, a.1 + b.1);
            let v = mat[(p, q)];
            match seen.get(&key) {
                Some(&w) => worst = worst.max((v - w).abs()),
                None => {
                    seen.insert(key, v);
                }
            }
        }
    }
    worst
}

/// Largest deviation of the oracle Gram matrix of `polys` from the identity.
pub fn orthonormality_defect(spec: &WeightSpec, polys: &[&BivariatePoly], tol: f64) -> Result<f64> {
    let d = polys.iter().map(|p| poly_degree(p)).max().unwrap_or(0);
    let t = cheb_table(spec, d, tol)?;
    let mut worst: f64 = 0.0;
    for (i, p) in polys.iter().enumerate() {
        for (j, q) in polys.iter().enumerate().skip(i) {
            let v = t.inner(p, q)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ux, uy};

    fn ex1(a: f64) -> WeightSpec {
        if a == 0.0 {
            WeightSpec::product(vec![]).unwrap()
        } else {
            WeightSpec::product(vec![-a]).unwrap()
        }
    }

    #[test]
    fn probability_mass_and_chebyshev_moments() {
        let s = ex1(0.5);
        assert!((moment(&s, 0, 0, DEFAULT_TOL).unwrap() - 1.0).abs() < 1e-14);
        let c = ex1(0.0);
        assert!((moment(&c, 2, 0, DEFAULT_TOL).unwrap() - 0.25).abs() < 1e-13);
        assert!((moment(&c, 2, 2, DEFAULT_TOL).unwrap() - 0.0625).abs() < 1e-13);
        assert!(cheb_moment(&c, 1, 0, DEFAULT_TOL).unwrap().abs() < 1e-14);
    }

    #[test]
    fn example_one_mixed_moment() {
        for a in [0.3, 0.7] {
            // <x, U_1(y)> = 2 int xy dmu is the a/2 corner of A_{x,0}
            let v = moment(&ex1(a), 1, 1, DEFAULT_TOL).unwrap();
            assert!((v - a / 4.0).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn odd_moments_vanish() {
        let s = ex1(0.6);
        for (i, j) in [(1, 0), (0, 1), (2, 1), (3, 2)] {
            assert!(moment(&s, i, j, DEFAULT_TOL).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn univariate_chebyshev() {
        let c = ex1(0.0);
        let v = univariate_moment(&c, 0, 0.3, DEFAULT_TOL).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12);
        assert!(univariate_moment(&c, 0, 1.5, DEFAULT_TOL).is_err());
    }

    #[test]
    fn refinement_within_error_estimate() {
        let s = WeightSpec::product(vec![0.45, -0.3]).unwrap();
        let a = converged_table(&s, MomentKind::Monomial, 6, 1e-9).unwrap();
        let b = converged_table(&s, MomentKind::Monomial, 6, 1e-13).unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                assert!((a.get(i, j) - b.get(i, j)).abs() <= a.error(i, j) + 1e-14);
            }
        }
    }

    #[test]
    fn chebyshev_gram_schmidt_is_identity_basis() {
        let c = ex1(0.0);
        let sys = gram_schmidt(&c, Ordering2::Total, Window::Total { n: 2 }, DEFAULT_TOL).unwrap();
        let expect = [uy(0), uy(1), ux(1), uy(2), ux(1).mul(&uy(1)).unwrap(), ux(2)];
        for (e, p) in sys.entries.iter().zip(&expect) {
            assert!(e.poly.max_diff(p) < 1e-12, "{:?}", e.index);
        }
    }

    #[test]
    fn gram_schmidt_orthonormal_and_idempotent() {
        let s = WeightSpec::product(vec![0.5, -0.4]).unwrap();
        let sys = gram_schmidt(&s, Ordering2::Lex, Window::Rect { n: 3, m: 3 }, DEFAULT_TOL).unwrap();
        let polys: Vec<&BivariatePoly> = sys.polys().collect();
        assert!(orthonormality_defect(&s, &polys, DEFAULT_TOL).unwrap() < 1e-10);
        for e in &sys.entries {
            let lead = e.poly.leading_tol(Ordering2::Lex, 1e-12).unwrap();
            assert_eq!(lead, e.index);
            assert!(e.poly.get(lead.0, lead.1) > 0.0);
        }
    }

    #[test]
    fn doubly_hankel() {
        let s = WeightSpec::product(vec![0.3]).unwrap();
        let m = lex_moment_matrix(&s, 2, 3, DEFAULT_TOL).unwrap();
        assert_eq!(doubly_hankel_defect(&m, 2, 3), 0.0);
        assert!((&m - m.transpose()).amax() == 0.0);
    }

    #[test]
    fn cache_first_writer_wins() {
        let o = MomentOracle::new();
        let s = WeightSpec::product(vec![0.2]).unwrap();
        let small = o.table(&s, MomentKind::ChebU, 4, 1e-11).unwrap();
        let big = o.table(&s, MomentKind::ChebU, 20, 1e-11).unwrap();
        assert!(big.degree >= 20);
        for i in 0..=small.degree {
            for j in 0..=small.degree {
                assert_eq!(small.get(i, j).to_bits(), big.get(i, j).to_bits());
            }
        }
        let again = o.table(&s, MomentKind::ChebU, 4, 1e-11).unwrap();
        assert!(Arc::ptr_eq(&again, &big));
    }

    #[test]
    fn spill_roundtrip() {
        let dir = std::env::temp_dir().join(format!("bsz2d-spill-{}", std::process::id()));
        let o = MomentOracle::new();
        let s = WeightSpec::product(vec![0.25]).unwrap();
        let t = o.table(&s, MomentKind::Monomial, 3, 1e-11).unwrap();
        o.save_dir(&dir).unwrap();
        let o2 = MomentOracle::new();
        assert_eq!(o2.load_dir(&dir).unwrap(), 1);
        let t2 = o2.table(&s, MomentKind::Monomial, 3, 1e-11).unwrap();
        assert_eq!(t.get(2, 2).to_bits(), t2.get(2, 2).to_bits());
        std::fs::remove_dir_all(&dir).ok();
    }
}
