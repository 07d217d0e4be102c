//! Worked examples with known closed forms, and a regression runner.
//!
//! - `Ex1(a)`: `h = 1 - 2ayz + a^2 z^2`.
//! - `Ex2(a, b)`: `h = (1 - 2bz)(1 - 2ayz + a^2 z^2)`, `|b| < 1/2`.
//! - `Ex4(a1, a2)`: `h = (1 - 2 a1 y z + a1^2 z^2)(1 - 2 a2 y z + a2^2 z^2)`.
//! - `RemarkN4(b1, b2, a)`: `h = (1 - b1 z)(1 - b2 z)(1 - 2ayz + a^2 z^2)`.
//!
//! The point-mass example (a weight with an atom off the square) is not a
//! Bernstein-Szego weight on `[-1,1]^2` and is left out.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lex::{build_lex_system, connection_reshape};
use crate::oracle::{gram_schmidt, orthonormality_defect, univariate_moment, DEFAULT_TOL};
use crate::poly::{ux, uy, Basis2, BivariatePoly, Ordering2};
use crate::recurrence::{
    lex_blocks_from, lex_pattern, total_blocks_from, verify_lex_structure, verify_total_structure, TotalBlocks,
};
use crate::szego::{build_qk, ceil_half};
use crate::system::{OrthoSystem, Window};
use crate::total::build_total_system;
use crate::weights::{is_stable, WeightSpec, DEFAULT_STABILITY_SAMPLES, DEFAULT_STABILITY_TOL};

pub const MATRIX_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-7;
pub const MARGINAL_TOL: f64 = 1e-9;
pub const MARGINAL_SAMPLES: [f64; 3] = [-0.8, 0.0, 0.5];
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ExampleId {
    Ex1 { a: f64 },
    Ex2 { a: f64, b: f64 },
    Ex4 { a1: f64, a2: f64 },
    RemarkN4 { b1: f64, b2: f64, a: f64 },
}

/// Product of polynomials in `z` whose coefficients are monomial lists in `y`.
fn mul_z(p: &[Vec<f64>], q: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); p.len() + q.len() - 1];
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let slot = &mut out[i + j];
            for (s, a) in pi.iter().enumerate() {
                for (t, b) in qj.iter().enumerate() {
                    if slot.len() <= s + t {
                        slot.resize(s + t + 1, 0.0);
                    }
                    slot[s + t] += a * b;
                }
            }
        }
    }
    out
}

fn quadratic(a: f64) -> Vec<Vec<f64>> {
    vec![vec![1.0], vec![0.0, -2.0 * a], vec![a * a]]
}

fn in_unit(name: &str, v: f64, bound: f64) -> Result<()> {
    if v.is_finite() && v.abs() < bound {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {v} must satisfy |{name}| < {bound}")))
    }
}

impl ExampleId {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Ex1 { .. } => "example-1",
            Self::Ex2 { .. } => "example-2",
            Self::Ex4 { .. } => "example-4",
            Self::RemarkN4 { .. } => "remark-n4",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Self::Ex1 { a } => in_unit("a", a, 1.0),
            Self::Ex2 { a, b } => in_unit("a", a, 1.0).and(in_unit("b", b, 0.5)),
            Self::Ex4 { a1, a2 } => in_unit("a1", a1, 1.0).and(in_unit("a2", a2, 1.0)),
            Self::RemarkN4 { b1, b2, a } => in_unit("b1", b1, 1.0)
                .and(in_unit("b2", b2, 1.0))
                .and(in_unit("a", a, 1.0)),
        }
    }

    pub fn spec(&self) -> Result<WeightSpec> {
        self.validate()?;
        match *self {
            Self::Ex1 { a } => WeightSpec::product(if a == 0.0 { vec![] } else { vec![-a] }),
            Self::Ex4 { a1, a2 } => {
                WeightSpec::product([-a1, -a2].into_iter().filter(|v| *v != 0.0).collect())
            }
            Self::Ex2 { a, b } => WeightSpec::generic(mul_z(&[vec![1.0], vec![-2.0 * b]], &quadratic(a))),
            Self::RemarkN4 { b1, b2, a } => WeightSpec::generic(mul_z(
                &[vec![1.0], vec![-(b1 + b2)], vec![b1 * b2]],
                &quadratic(a),
            )),
        }
    }

    /// Expected `A_{x,n}`.
    pub fn a_x(&self, n: usize) -> Option<DMatrix<f64>> {
        let a = match *self {
            Self::Ex1 { a } | Self::Ex2 { a, .. } => a,
            _ => return None,
        };
        let mut m = DMatrix::zeros(n + 1, n + 2);
        m[(0, 0)] = a / 2.0;
        m[(0, 1)] = (1.0 - a * a).sqrt() / 2.0;
        for i in 1..=n {
            m[(i, i + 1)] = 0.5;
        }
        Some(m)
    }

    /// Expected `A_{y,n} = [I | 0] / 2`.
    pub fn a_y(&self, n: usize) -> Option<DMatrix<f64>> {
        match self {
            Self::Ex1 { .. } | Self::Ex2 { .. } => Some(DMatrix::from_fn(n + 1, n + 2, |i, j| {
                if i == j {
                    0.5
                } else {
                    0.0
                }
            })),
            _ => None,
        }
    }

    pub fn b_x(&self, n: usize) -> Option<DMatrix<f64>> {
        match *self {
            Self::Ex1 { .. } => Some(DMatrix::zeros(n + 1, n + 1)),
            Self::Ex2 { a, b } => {
                let mut m = DMatrix::zeros(n + 1, n + 1);
                if n == 0 {
                    m[(0, 0)] = b;
                } else {
                    let s = (1.0 - a * a).sqrt();
                    m[(0, 0)] = b * (1.0 - a * a);
                    m[(0, 1)] = -b * a * s;
                    m[(1, 0)] = -b * a * s;
                    m[(1, 1)] = b * a * a;
                }
                Some(m)
            }
            _ => None,
        }
    }

    pub fn b_y(&self, n: usize) -> Option<DMatrix<f64>> {
        match *self {
            Self::Ex1 { .. } => Some(DMatrix::zeros(n + 1, n + 1)),
            Self::Ex2 { a, b } => {
                let mut m = DMatrix::zeros(n + 1, n + 1);
                if n == 0 {
                    m[(0, 0)] = a * b;
                }
                Some(m)
            }
            _ => None,
        }
    }

    /// `int dmu_y(x)` in closed form.
    pub fn marginal(&self, y: f64) -> Option<f64> {
        match *self {
            Self::Ex1 { .. } => Some(1.0),
            Self::Ex2 { a, b } => Some(1.0 / (1.0 - 4.0 * a * b * y + 4.0 * a * a * b * b)),
            Self::Ex4 { a1, a2 } => {
                let c = a1 * a2;
                Some((1.0 + c) / ((1.0 - c) * ((1.0 + c).powi(2) - 4.0 * c * y * y)))
            }
            Self::RemarkN4 { .. } => None,
        }
    }

    /// Constant turning `int sqrt(1-x^2)/|h|^2 dx` into `int dmu_y(x)`, when
    /// known; otherwise the marginal is checked up to a constant.
    pub fn marginal_scale(&self) -> Option<f64> {
        match *self {
            Self::Ex1 { a } | Self::Ex2 { a, .. } => Some(2.0 / PI * (1.0 - a * a)),
            Self::Ex4 { a1, a2 } => Some(2.0 / PI * (1.0 - a1 * a1) * (1.0 - a2 * a2)),
            Self::RemarkN4 { .. } => None,
        }
    }

    /// Orthogonal polynomials `V_n(y)` of the marginal, which the total
    /// system carries at `k = 0`.
    pub fn v_n(&self, n: usize) -> Option<BivariatePoly> {
        let n = n as i64;
        match *self {
            Self::Ex1 { .. } => Some(uy(n)),
            Self::Ex2 { a, b } => uy(n).axpy(&(-2.0 * a * b), &uy(n - 1)).ok(),
            Self::Ex4 { a1, a2 } => uy(n).axpy(&(-a1 * a2), &uy(n - 2)).ok(),
            Self::RemarkN4 { .. } => None,
        }
    }

    /// `q_k` written out: `sum_i h_i(y) U_{k-i}(x)` with the coefficients
    /// expanded by hand, `U_{-m-2} = -U_m`.
    pub fn q_k(&self, k: usize) -> Option<BivariatePoly> {
        let k = k as i64;
        let y = |c: f64| uy(1).scale(&(c / 2.0));
        let y2 = |c: f64| uy(2).axpy(&1.0, &uy(0)).map(|p| p.scale(&(c / 4.0))).ok();
        let c = |c: f64| BivariatePoly::constant(Basis2::ChebUxChebU, c);
        let terms: Vec<(i64, BivariatePoly)> = match *self {
            Self::Ex1 { a } => vec![(0, c(1.0)), (1, y(-2.0 * a)), (2, c(a * a))],
            Self::Ex2 { a, b } => vec![
                (0, c(1.0)),
                (1, y(-2.0 * a).add(&c(-2.0 * b)).ok()?),
                (2, y(4.0 * a * b).add(&c(a * a)).ok()?),
                (3, c(-2.0 * a * a * b)),
            ],
            Self::Ex4 { a1, a2 } => vec![
                (0, c(1.0)),
                (1, y(-2.0 * (a1 + a2))),
                (2, y2(4.0 * a1 * a2)?.add(&c(a1 * a1 + a2 * a2)).ok()?),
                (3, y(-2.0 * a1 * a2 * (a1 + a2))),
                (4, c(a1 * a1 * a2 * a2)),
            ],
            Self::RemarkN4 { .. } => return None,
        };
        let mut q = BivariatePoly::zero(Basis2::ChebUxChebU);
        for (i, t) in terms {
            q = q.add(&t.mul(&ux(k - i)).ok()?).ok()?;
        }
        Some(q)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub name: String,
    /// Where the expected value comes from, e.g. `"example-2 recurrence"`.
    pub tag: String,
    pub passed: bool,
    pub margin: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub subject: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<ExampleId>,
    pub depth: usize,
    pub passed: bool,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, tag: String, margin: f64, tol: f64) {
        let passed = margin <= tol;
        self.passed &= passed;
        self.entries.push(ReportEntry {
            name: name.into(),
            tag,
            passed,
            margin,
            tol,
            detail: None,
        });
    }

    fn fail(&mut self, name: impl Into<String>, tag: String, err: &Error) {
        self.passed = false;
        self.entries.push(ReportEntry {
            name: name.into(),
            tag,
            passed: false,
            margin: f64::INFINITY,
            tol: 0.0,
            detail: Some(err.to_string()),
        });
    }

    fn record<T>(&mut self, name: &str, tag: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(name, tag.to_string(), &e);
                None
            }
        }
    }
}

fn matrix_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    (a - b).abs().max()
}

/// Largest coefficient gap between two systems over the slots of `sys`.
pub fn system_gap(sys: &OrthoSystem, oracle: &OrthoSystem) -> f64 {
    sys.entries
        .iter()
        .map(|e| {
            oracle
                .get(e.index)
                .map_or(f64::INFINITY, |o| e.poly.max_diff(&o.poly))
        })
        .fold(0.0, f64::max)
}

/// `max_y |(scale) I(y) / closed(y) - 1|`, with the scale fitted at the
/// first sample when it is not known.
pub fn marginal_defect(id: &ExampleId, tol: f64) -> Result<Option<f64>> {
    let spec = id.spec()?;
    let mut ratios = Vec::new();
    for y in MARGINAL_SAMPLES {
        let Some(closed) = id.marginal(y) else {
            return Ok(None);
        };
        ratios.push(univariate_moment(&spec, 0, y, tol)? / closed);
    }
    let scale = id.marginal_scale().map_or(1.0 / ratios[0], |s| s);
    Ok(Some(ratios.iter().map(|r| (r * scale - 1.0).abs()).fold(0.0, f64::max)))
}

/// Builds total and lex systems to `depth`, extracts blocks, and compares
/// against the closed forms and the oracle.
pub fn run_regression(id: ExampleId, depth: usize) -> Report {
    run_regression_tol(id, depth, DEFAULT_TOL)
}

pub fn run_regression_tol(id: ExampleId, depth: usize, tol: f64) -> Report {
    let mut rep = Report {
        subject: id.label().to_string(),
        example: Some(id),
        depth,
        passed: true,
        entries: Vec::new(),
    };
    let l = id.label();
    if depth > MAX_DEPTH {
        rep.fail(
            "depth",
            format!("{l} setup"),
            &Error::InvalidArgument(format!("depth {depth} exceeds {MAX_DEPTH}")),
        );
        return rep;
    }
    let Some(spec) = rep.record("weight", &format!("{l} setup"), id.spec()) else {
        return rep;
    };
    if let Some(s) = rep.record(
        "stability",
        &format!("{l} setup"),
        is_stable(&spec, DEFAULT_STABILITY_SAMPLES, DEFAULT_STABILITY_TOL),
    ) {
        rep.push("h stable on the closed disk", format!("{l} setup"), if s.stable { 0.0 } else { 1.0 }, 0.0);
    }

    let tag = format!("{l} recurrence");
    if let Some(sys) = rep.record("total system", &tag, build_total_system(&spec, depth + 1, tol)) {
        let blocks: Vec<Option<TotalBlocks>> = (0..=depth)
            .map(|n| rep.record(&format!("blocks n = {n}"), &tag, total_blocks_from(&spec, &sys, n, tol)))
            .collect();
        for b in blocks.iter().flatten() {
            let n = b.n;
            for (name, got, want) in [
                ("A_x", &b.a_x, id.a_x(n)),
                ("A_y", &b.a_y, id.a_y(n)),
                ("B_x", &b.b_x, id.b_x(n)),
                ("B_y", &b.b_y, id.b_y(n)),
            ] {
                if let Some(w) = want {
                    rep.push(format!("{name} at n = {n}"), tag.clone(), matrix_gap(got, &w), MATRIX_TOL);
                }
            }
        }
        let vtag = format!("{l} V_n");
        for n in 0..=depth {
            if let (Some(v), Some(p)) = (id.v_n(n), sys.get((0, n))) {
                let gap = (|| -> Result<f64> {
                    let nrm = crate::oracle::inner(&spec, &v, &v, tol)?.sqrt();
                    Ok(p.poly.max_diff(&v.scale(&(1.0 / nrm))))
                })();
                if let Some(g) = rep.record(&format!("p_{n}^0 = V_{n}"), &vtag, gap) {
                    rep.push(format!("p_{n}^0 = V_{n} / |V_{n}|"), vtag.clone(), g, ORACLE_TOL);
                }
            }
        }
        let otag = format!("{l} oracle");
        if let Some(o) = rep.record(
            "total oracle",
            &otag,
            gram_schmidt(&spec, Ordering2::Total, Window::Total { n: depth + 1 }, tol),
        ) {
            rep.push("total system vs oracle", otag.clone(), system_gap(&sys, &o), ORACLE_TOL);
        }
    }

    let qtag = format!("{l} q_k");
    for k in (ceil_half(spec.n_h() as i64 - 2).max(1) as usize)..=depth {
        if let Some(q) = id.q_k(k) {
            if let Some(b) = rep.record(&format!("q_{k}"), &qtag, build_qk(&spec, k as i64)) {
                rep.push(format!("q_{k} written out vs built"), qtag.clone(), q.max_diff(&b), 1e-12);
            }
        }
    }

    let mtag = format!("{l} marginal");
    if let Some(Some(d)) = rep.record("marginal", &mtag, marginal_defect(&id, 1e-13)) {
        rep.push("marginal closed form", mtag, d, MARGINAL_TOL);
    }

    let stag = format!("{l} structure");
    let min_total = ceil_half(spec.n_h() as i64 - 1).max(0) as usize;
    if depth >= min_total {
        if let Some(r) = rep.record("total structure", &stag, verify_total_structure(&spec, depth, tol)) {
            let worst = r.checks.iter().filter(|c| !c.passed).map(|c| c.value).fold(0.0, f64::max);
            rep.push(format!("total structure at n = {depth}"), stag.clone(), if r.passed { 0.0 } else { worst.max(1.0) }, 0.0);
        }
    }
    let min_lex = ceil_half(spec.n_h() as i64 + 1).max(1) as usize;
    if depth >= min_lex {
        if let Some(r) = rep.record("lex structure", &stag, verify_lex_structure(&spec, depth, depth, tol)) {
            let worst = r.checks.iter().filter(|c| !c.passed).map(|c| c.value).fold(0.0, f64::max);
            rep.push(format!("lex structure at ({depth}, {depth})"), stag.clone(), if r.passed { 0.0 } else { worst.max(1.0) }, 0.0);
        }
    }

    let ltag = format!("{l} lex");
    if let Some(lex) = rep.record("lex system", &ltag, build_lex_system(&spec, depth, depth, tol)) {
        if let Some(o) = rep.record(
            "lex oracle",
            &ltag,
            gram_schmidt(&spec, Ordering2::Lex, Window::Rect { n: depth, m: depth }, tol),
        ) {
            rep.push("lex system vs oracle", ltag.clone(), system_gap(&lex, &o), ORACLE_TOL);
        }
        if let Some(p) = spec.as_product() {
            let nf = p.n_factors();
            for n in (2 * nf + 1)..depth {
                if 2 * nf < depth {
                    if let Some(b) = rep.record(&format!("lex blocks n = {n}"), &ltag, lex_blocks_from(&spec, &lex, n, tol)) {
                        let r = lex_pattern(&spec, &b);
                        let worst = r.checks.iter().map(|c| c.value).fold(0.0, f64::max);
                        rep.push(format!("A = I/2, B = 0 at ({n}, {depth})"), ltag.clone(), worst, MATRIX_TOL);
                    }
                }
            }
        }
    }
    rep
}

/// Invariant suite for an arbitrary weight: stability, total and lex systems
/// against the oracle, orthonormality, block structure and commutativity.
pub fn verify_weight(spec: &WeightSpec, depth: usize, tol: f64) -> Report {
    let mut rep = Report {
        subject: format!("weight {}", &spec.fingerprint()[..12]),
        example: None,
        depth,
        passed: true,
        entries: Vec::new(),
    };
    let tag = "verify".to_string();
    if let Some(s) = rep.record(
        "stability",
        &tag,
        is_stable(spec, DEFAULT_STABILITY_SAMPLES, DEFAULT_STABILITY_TOL),
    ) {
        rep.push("h stable on the closed disk", tag.clone(), if s.stable { 0.0 } else { 1.0 }, 0.0);
    }
    if let Some(sys) = rep.record("total system", &tag, build_total_system(spec, depth, tol)) {
        let polys: Vec<&BivariatePoly> = sys.polys().collect();
        if let Some(d) = rep.record("total orthonormality", &tag, orthonormality_defect(spec, &polys, tol)) {
            rep.push("total orthonormality defect", tag.clone(), d, ORACLE_TOL);
        }
        if let Some(o) = rep.record(
            "total oracle",
            &tag,
            gram_schmidt(spec, Ordering2::Total, Window::Total { n: depth }, tol),
        ) {
            rep.push("total system vs oracle", tag.clone(), system_gap(&sys, &o), ORACLE_TOL);
        }
    }
    let min_total = ceil_half(spec.n_h() as i64 - 1).max(0) as usize;
    if depth >= min_total {
        if let Some(r) = rep.record("total structure", &tag, verify_total_structure(spec, depth, tol)) {
            for c in r.checks {
                rep.push(format!("total: {}", c.name), tag.clone(), c.value, c.tol);
            }
        }
    }
    if let Some(lex) = rep.record("lex system", &tag, build_lex_system(spec, depth, depth, tol)) {
        let polys: Vec<&BivariatePoly> = lex.polys().collect();
        if let Some(d) = rep.record("lex orthonormality", &tag, orthonormality_defect(spec, &polys, tol)) {
            rep.push("lex orthonormality defect", tag.clone(), d, ORACLE_TOL);
        }
        if let Some(o) = rep.record(
            "lex oracle",
            &tag,
            gram_schmidt(spec, Ordering2::Lex, Window::Rect { n: depth, m: depth }, tol),
        ) {
            rep.push("lex system vs oracle", tag.clone(), system_gap(&lex, &o), ORACLE_TOL);
        }
        rep.record("lex connection form", &tag, connection_reshape(&lex, depth, depth));
    }
    let min_lex = ceil_half(spec.n_h() as i64 + 1).max(1) as usize;
    if depth >= min_lex {
        if let Some(r) = rep.record("lex structure", &tag, verify_lex_structure(spec, depth, depth, tol)) {
            for c in r.checks {
                rep.push(format!("lex: {}", c.name), tag.clone(), c.value, c.tol);
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BivariatePoly;
    use crate::szego::qk_from_coeffs;
    use crate::weights::GenericH;
    use num_rational::BigRational;

    #[test]
    fn ex2_expansion() {
        let s = ExampleId::Ex2 { a: 0.6, b: 0.3 }.spec().unwrap();
        let h = s.h().coeffs();
        assert_eq!(h.len(), 4);
        assert!((h[3].coeff(0) + 2.0 * 0.36 * 0.3).abs() < 1e-15);
        assert_eq!(s.kappa(), 1);
        assert!(ExampleId::Ex2 { a: 0.6, b: 0.5 }.spec().is_err());
    }

    #[test]
    fn ex2_qk_exact() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let (a, b) = (r(3, 5), r(3, 10));
        let two = r(2, 1);
        let h = GenericH::new(vec![
            crate::poly::UnivariatePoly::new(crate::poly::Basis1::Monomial, vec![r(1, 1)]),
            crate::poly::UnivariatePoly::new(crate::poly::Basis1::Monomial, vec![-&two * &b, -&two * &a]),
            crate::poly::UnivariatePoly::new(crate::poly::Basis1::Monomial, vec![&a * &a, r(4, 1) * &a * &b]),
            crate::poly::UnivariatePoly::new(crate::poly::Basis1::Monomial, vec![-&two * &a * &a * &b]),
        ]
        .into_iter()
        .map(|p| p.map(|c| num_traits::ToPrimitive::to_f64(c).unwrap()))
        .collect());
        assert!(h.is_ok());
        // exact rational q_k against the written-out form in rationals
        let hq: Vec<_> = [
            vec![r(1, 1)],
            vec![-&two * &b, -&two * &a],
            vec![&a * &a, r(4, 1) * &a * &b],
            vec![-&two * &a * &a * &b],
        ]
        .into_iter()
        .map(|c| crate::poly::UnivariatePoly::new(crate::poly::Basis1::Monomial, c))
        .collect();
        for k in 1..6 {
            let q: BivariatePoly<BigRational> = qk_from_coeffs(&hq, k);
            let id = ExampleId::Ex2 { a: 0.6, b: 0.3 };
            let f = q.map(|c| num_traits::ToPrimitive::to_f64(c).unwrap());
            assert!(f.max_diff(&id.q_k(k as usize).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn ex1_regression() {
        let rep = run_regression(ExampleId::Ex1 { a: 0.3 }, 5);
        assert!(rep.passed, "{:#?}", rep.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
        let rep = run_regression(ExampleId::Ex1 { a: 0.0 }, 4);
        assert!(rep.passed);
        let rep = verify_weight(&ExampleId::Ex1 { a: -0.5 }.spec().unwrap(), 4, DEFAULT_TOL);
        assert!(rep.passed, "{:#?}", rep.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
    }

    #[test]
    fn ex2_regression() {
        let rep = run_regression(ExampleId::Ex2 { a: 0.6, b: 0.3 }, 4);
        assert!(rep.passed, "{:#?}", rep.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
    }

    #[test]
    fn ex4_and_remark_regression() {
        for id in [ExampleId::Ex4 { a1: 0.5, a2: -0.3 }, ExampleId::RemarkN4 { b1: 0.4, b2: -0.2, a: 0.5 }] {
            let rep = run_regression(id, 5);
            assert!(rep.passed, "{:#?}", rep.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>());
        }
    }
}
