//! Weight specifications `h(z, y) = sum_i h_i(y) z^i`, their stability on
//! the closed unit disk for `y` in `[-1, 1]`, and the product form
//! `h(z, y) = prod_i (1 + 2 a_i y z + a_i^2 z^2)`.

use std::sync::OnceLock;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::{Basis1, Coeff, LaurentPoly, UnivariatePoly};
use crate::roots::poly_roots;

/// `h(z, y)` given by its `z`-coefficients `h_i(y)` (monomial basis in `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct GenericH {
    h: Vec<UnivariatePoly>,
}

impl GenericH {
    /// Validates `h_0 = 1`, a nonzero top coefficient and
    /// `deg h_i <= min(i, N - i)`.
    pub fn new(h: Vec<UnivariatePoly>) -> Result<Self> {
        let h: Vec<UnivariatePoly> = h.into_iter().map(|p| p.to_monomial()).collect();
        if h.is_empty() {
            return Err(Error::InvalidWeight("empty coefficient list".into()));
        }
        if h[0].coeffs() != [1.0] {
            return Err(Error::InvalidWeight("h_0 must be the constant 1".into()));
        }
        let n = h.len() - 1;
        if h[n].is_zero() {
            return Err(Error::InvalidWeight(format!("top coefficient h_{n} is zero")));
        }
        for (i, hi) in h.iter().enumerate() {
            let bound = i.min(n - i);
            if let Some(d) = hi.degree() {
                if d > bound {
                    return Err(Error::InvalidWeight(format!(
                        "deg h_{i} = {d} exceeds min(i, N - i) = {bound}"
                    )));
                }
            }
        }
        Ok(Self { h })
    }

    /// From monomial coefficient lists, one per power of `z`.
    pub fn from_coeffs(h: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            h.into_iter()
                .map(|c| UnivariatePoly::new(Basis1::Monomial, c))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[UnivariatePoly] {
        &self.h
    }

    /// `z`-degree `N_h`.
    pub fn n(&self) -> usize {
        self.h.len() - 1
    }

    /// Largest `y`-degree among the `h_i`.
    pub fn kappa(&self) -> usize {
        self.h.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// `z`-coefficients at a fixed `y`.
    pub fn z_coeffs_at(&self, y: f64) -> Vec<f64> {
        self.h.iter().map(|p| p.eval(y)).collect()
    }

    pub fn eval(&self, z: Complex<f64>, y: f64) -> Complex<f64> {
        self.z_coeffs_at(y)
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// `omega(z, w) = prod_i (1 + a_i z w)`, with `h(z, y) = omega(z, w) omega(z, 1/w)`.
#[derive(Debug, Clone)]
pub struct ProductOmega {
    a: Vec<f64>,
    expanded: OnceLock<GenericH>,
}

impl PartialEq for ProductOmega {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl ProductOmega {
    /// An empty factor list is the product Chebyshev weight.
    pub fn new(a: Vec<f64>) -> Result<Self> {
        for (index, &value) in a.iter().enumerate() {
            if !(value != 0.0 && value.abs() < 1.0) {
                return Err(Error::InvalidFactor { index, value });
            }
        }
        Ok(Self {
            a,
            expanded: OnceLock::new(),
        })
    }

    pub fn factors(&self) -> &[f64] {
        &self.a
    }

    /// Number of factors `N_f`.
    pub fn n_factors(&self) -> usize {
        self.a.len()
    }

    /// The `GenericH` view, computed on first use.
    pub fn expanded(&self) -> &GenericH {
        self.expanded.get_or_init(|| GenericH {
            h: product_h(&self.a),
        })
    }

    /// `omega(z, w)` as a Laurent polynomial.
    pub fn omega<T: Coeff>(a: &[T]) -> LaurentPoly<T> {
        a.iter().fold(LaurentPoly::monomial(0, 0, T::one()), |acc, ai| {
            acc.mul(&LaurentPoly::from_terms([((0, 0), T::one()), ((1, 1), ai.clone())]))
        })
    }

    /// `w^N omega(z, 1/w) = prod_i (w + a_i z)`.
    pub fn omega_reversed<T: Coeff>(a: &[T]) -> LaurentPoly<T> {
        a.iter().fold(LaurentPoly::monomial(0, 0, T::one()), |acc, ai| {
            acc.mul(&LaurentPoly::from_terms([((0, 1), T::one()), ((1, 0), ai.clone())]))
        })
    }
}

/// Coefficients `h_i(y)` of `prod_i (1 + 2 a_i y z + a_i^2 z^2)`, monomial in `y`.
///
/// The same list read with `x` in place of `y` gives `h~_j(x)` of
/// `omega(z, w) omega(1/z, w)`, since the product is symmetric in `z` and `w`.
pub fn product_h<T: Coeff>(a: &[T]) -> Vec<UnivariatePoly<T>> {
    let mut h: Vec<UnivariatePoly<T>> = vec![UnivariatePoly::constant(Basis1::Monomial, T::one())];
    for ai in a {
        let g = [
            UnivariatePoly::constant(Basis1::Monomial, T::one()),
            UnivariatePoly::new(Basis1::Monomial, vec![T::zero(), T::from_i64(2) * ai.clone()]),
            UnivariatePoly::constant(Basis1::Monomial, ai.clone() * ai.clone()),
        ];
        let mut next = vec![UnivariatePoly::zero(Basis1::Monomial); h.len() + 2];
        for (i, hi) in h.iter().enumerate() {
            for (j, gj) in g.iter().enumerate() {
                next[i + j] = next[i + j].add(&hi.mul(gj).expect("monomial")).expect("monomial");
            }
        }
        h = next;
    }
    h
}

/// Either a general `h(z, y)` or the product form.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    GenericH(GenericH),
    ProductOmega(ProductOmega),
}

impl WeightSpec {
    pub fn product(a: Vec<f64>) -> Result<Self> {
        Ok(Self::ProductOmega(ProductOmega::new(a)?))
    }

    pub fn generic(h: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Self::GenericH(GenericH::from_coeffs(h)?))
    }

    pub fn h(&self) -> &GenericH {
        match self {
            Self::GenericH(g) => g,
            Self::ProductOmega(p) => p.expanded(),
        }
    }

    /// `N_h`, the `z`-degree of `h`.
    pub fn n_h(&self) -> usize {
        match self {
            Self::GenericH(g) => g.n(),
            Self::ProductOmega(p) => 2 * p.n_factors(),
        }
    }

    pub fn kappa(&self) -> usize {
        match self {
            Self::GenericH(g) => g.kappa(),
            Self::ProductOmega(p) => p.n_factors(),
        }
    }

    pub fn as_product(&self) -> Option<&ProductOmega> {
        match self {
            Self::ProductOmega(p) => Some(p),
            Self::GenericH(_) => None,
        }
    }

    /// `|h(e^{i theta}, y)|^2`.
    pub fn abs2(&self, theta: f64, y: f64) -> f64 {
        let z = Complex::from_polar(1.0, theta);
        match self {
            Self::ProductOmega(p) => p
                .factors()
                .iter()
                .map(|&a| (Complex::new(1.0, 0.0) + z * (2.0 * a * y) + z * z * (a * a)).norm_sqr())
                .product(),
            Self::GenericH(g) => g.eval(z, y).norm_sqr(),
        }
    }

    /// Canonical key: product weights do not depend on factor order.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        match self {
            Self::ProductOmega(p) => {
                let mut a = p.factors().to_vec();
                a.sort_by(f64::total_cmp);
                hasher.update(b"omega");
                for v in a {
                    hasher.update(v.to_le_bytes());
                }
            }
            Self::GenericH(g) => {
                hasher.update(b"generic_h");
                for hi in g.coeffs() {
                    hasher.update((hi.coeffs().len() as u64).to_le_bytes());
                    for v in hi.coeffs() {
                        hasher.update(v.to_le_bytes());
                    }
                }
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The product expansion of `prod (1 + 2 a_i y z + a_i^2 z^2)` as a
/// `GenericH` with `N_h = 2 N_f`.
pub fn expand_product(a: &[f64]) -> Result<GenericH> {
    Ok(ProductOmega::new(a.to_vec())?.expanded().clone())
}

/// Coefficients `h~_j(x)` of `h~(x, w) = omega(z, w) omega(1/z, w)`, monomial in `x`.
pub fn tilde_expand(spec: &WeightSpec) -> Result<GenericH> {
    match spec {
        WeightSpec::ProductOmega(p) => Ok(GenericH {
            h: product_h(p.factors()),
        }),
        WeightSpec::GenericH(_) => Err(Error::Unsupported(
            "the reflected weight needs a product-form spec".into(),
        )),
    }
}

/// JSON weight config: `{"product": [...]}` or `{"generic_h": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightConfig {
    Product(Vec<f64>),
    GenericH(Vec<Vec<f64>>),
}

impl WeightConfig {
    pub fn into_spec(self) -> Result<WeightSpec> {
        match self {
            Self::Product(a) => WeightSpec::product(a),
            Self::GenericH(h) => WeightSpec::generic(h),
        }
    }

    pub fn from_spec(spec: &WeightSpec) -> Self {
        match spec {
            WeightSpec::ProductOmega(p) => Self::Product(p.factors().to_vec()),
            WeightSpec::GenericH(g) => {
                Self::GenericH(g.coeffs().iter().map(|p| p.coeffs().to_vec()).collect())
            }
        }
    }
}

impl WeightSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<WeightConfig>(s)?.into_spec()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WeightConfig::from_spec(self)).expect("plain data")
    }
}

/// Outcome of a stability check.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// Certified from the factor parameters rather than sampled.
    pub analytic: bool,
    /// Smallest root modulus of `h(., y)` over the samples.
    pub min_modulus: f64,
    pub witness_y: f64,
    pub samples: usize,
    /// Sample points where the top `z`-coefficient vanished.
    pub degree_drops: Vec<f64>,
    /// `max |h_N(y)|` over the samples.
    pub max_abs_top: f64,
}

pub const DEFAULT_STABILITY_SAMPLES: usize = 129;
pub const DEFAULT_STABILITY_TOL: f64 = 1e-9;

/// Stability of `h(., y)` on `|z| <= 1` for every `y` in `[-1, 1]`.
///
/// Product weights are certified from the factors: the roots of
/// `1 + 2 a y z + a^2 z^2` have modulus `1/|a|` for all `|y| <= 1`.
/// General weights are sampled on a Chebyshev grid (endpoints included),
/// with extra points near the endpoints and around the worst sample.
pub fn is_stable(spec: &WeightSpec, y_samples: usize, tol: f64) -> Result<StabilityReport> {
    if y_samples < 2 {
        return Err(Error::InvalidArgument("need at least two y samples".into()));
    }
    if let WeightSpec::ProductOmega(p) = spec {
        let max_a = p.factors().iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        let min_modulus = if max_a == 0.0 { f64::INFINITY } else { 1.0 / max_a };
        let top: f64 = p.factors().iter().map(|a| a * a).product();
        return Ok(StabilityReport {
            stable: min_modulus > 1.0 + tol,
            analytic: true,
            min_modulus,
            witness_y: 1.0,
            samples: 0,
            degree_drops: Vec::new(),
            max_abs_top: top,
        });
    }
    let g = spec.h();
    let step = std::f64::consts::PI / (y_samples - 1) as f64;
    let mut ys: Vec<f64> = (0..y_samples).map(|j| (j as f64 * step).cos()).collect();
    for k in 1..8 {
        let t = (k as f64 * step / 8.0).cos();
        ys.push(t);
        ys.push(-t);
    }
    let mut report = StabilityReport {
        stable: true,
        analytic: false,
        min_modulus: f64::INFINITY,
        witness_y: ys[0],
        samples: 0,
        degree_drops: Vec::new(),
        max_abs_top: 0.0,
    };
    let visit = |y: f64, report: &mut StabilityReport| {
        let c = g.z_coeffs_at(y);
        report.max_abs_top = report.max_abs_top.max(c[c.len() - 1].abs());
        let (roots, d) = poly_roots(&c, 1e-13);
        if d + 1 < c.len() {
            report.degree_drops.push(y);
        }
        let m = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        if m < report.min_modulus {
            report.min_modulus = m;
            report.witness_y = y;
        }
        report.samples += 1;
    };
    for &y in &ys {
        visit(y, &mut report);
    }
    let w = report.witness_y;
    let (lo, hi) = ((w - step).max(-1.0), (w + step).min(1.0));
    for k in 0..=32 {
        visit(lo + (hi - lo) * k as f64 / 32.0, &mut report);
    }
    report.stable = report.min_modulus > 1.0 + tol;
    Ok(report)
}
