use std::collections::BTreeMap;

use super::bivariate::{Basis2, BivariatePoly};
use super::coeff::Coeff;
use super::univariate::UnivariatePoly;
use crate::error::{Error, Result};

/// Finite Laurent polynomial `sum c_{a,b} z^a w^b` with `a, b` any integers.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<T: Coeff = f64> {
    coeffs: BTreeMap<(i64, i64), T>,
}

impl<T: Coeff> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<T: Coeff> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: i64, b: i64, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), T)>) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    pub fn add_term(&mut self, a: i64, b: i64, c: T) {
        let v = match self.coeffs.remove(&(a, b)) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert((a, b), v);
        }
    }

    pub fn coeff(&self, a: i64, b: i64) -> T {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &T)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&(a, b), c) in &other.coeffs {
            p.add_term(a, b, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&k, c)| (k, c.clone() * s.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (&(a, b), c) in &self.coeffs {
            for (&(d, e), f) in &other.coeffs {
                p.add_term(a + d, b + e, c.clone() * f.clone());
            }
        }
        p
    }

    /// Multiplies by `z^da w^db`.
    pub fn shift(&self, da: i64, db: i64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&(a, b), c)| ((a + da, b + db), c.clone())))
    }

    /// `f(1/z, 1/w)`.
    pub fn reflect(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&(a, b), c)| ((-a, -b), c.clone())))
    }

    /// Exchanges `z` and `w`.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(&(a, b), c)| ((b, a), c.clone())))
    }

    /// `Some(d)` when every term has `a + b = d`.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.coeffs.keys().map(|(a, b)| a + b);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Restriction to terms with `w`-exponent `b`.
    pub fn w_slice(&self, b: i64) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .filter(|((_, bb), _)| *bb == b)
                .map(|(&k, c)| (k, c.clone())),
        )
    }

    /// `p((z + 1/z)/2)` for a monomial-basis `p` (or `w` when `in_w`).
    pub fn joukowski(p: &UnivariatePoly<T>, in_w: bool) -> Self {
        let m = p.to_monomial();
        let half = T::half();
        let mut base = Self::monomial(1, 0, half.clone()).add(&Self::monomial(-1, 0, half));
        if in_w {
            base = base.swap();
        }
        let mut power = Self::monomial(0, 0, T::one());
        let mut out = Self::zero();
        for (k, c) in m.coeffs().iter().enumerate() {
            if k > 0 {
                power = power.mul(&base);
            }
            out = out.add(&power.scale(c));
        }
        out
    }
}

impl LaurentPoly<f64> {
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (&(a, b), c) in &self.coeffs {
            m = m.max((c - other.coeff(a, b)).abs());
        }
        for (&(a, b), c) in &other.coeffs {
            if !self.coeffs.contains_key(&(a, b)) {
                m = m.max(c.abs());
            }
        }
        m
    }

    pub fn cleaned(&self, tol: f64) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(&k, c)| (k, *c)),
        )
    }
}

/// The linear map `U_l(x) U_j(y) -> z^{-l} w^{-j}`.
pub fn t_map<T: Coeff>(p: &BivariatePoly<T>) -> Result<LaurentPoly<T>> {
    if p.basis() != Basis2::ChebUxChebU {
        return Err(Error::BasisMismatch);
    }
    Ok(LaurentPoly::from_terms(
        p.terms().map(|(i, j, c)| ((-(i as i64), -(j as i64)), c.clone())),
    ))
}

/// Inverse of [`t_map`] on its image; fails on positive exponents.
pub fn t_map_inverse<T: Coeff>(l: &LaurentPoly<T>) -> Result<BivariatePoly<T>> {
    let mut rows = 0;
    let mut cols = 0;
    for (a, b) in l.support() {
        if a > 0 || b > 0 {
            return Err(Error::InvalidArgument(format!(
                "z^{a} w^{b} is outside the image of the T-map"
            )));
        }
        rows = rows.max((-a) as usize + 1);
        cols = cols.max((-b) as usize + 1);
    }
    let mut data = vec![T::zero(); rows * cols];
    for (&(a, b), c) in l.terms() {
        data[(-a) as usize * cols + (-b) as usize] = c.clone();
    }
    Ok(BivariatePoly::from_grid(Basis2::ChebUxChebU, rows, cols, data))
}
