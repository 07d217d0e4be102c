use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use crate::error::{Error, Result};

/// Basis of a one-variable polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis1 {
    #[serde(rename = "chebU")]
    ChebU,
    #[serde(rename = "monomial")]
    Monomial,
}

/// One-variable polynomial, either in the Chebyshev-U basis or in monomials.
///
/// The zero polynomial is the empty coefficient vector; otherwise the last
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePoly<T: Coeff = f64> {
    basis: Basis1,
    coeffs: Vec<T>,
}

impl<T: Coeff> UnivariatePoly<T> {
    pub fn new(basis: Basis1, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { basis, coeffs }
    }

    pub fn zero(basis: Basis1) -> Self {
        Self {
            basis,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(basis: Basis1, c: T) -> Self {
        Self::new(basis, vec![c])
    }

    pub fn basis(&self) -> Basis1 {
        self.basis
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of the `i`-th basis element, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.basis,
            self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.basis,
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.basis,
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.basis));
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![T::zero(); n];
        match self.basis {
            Basis1::Monomial => {
                for (i, a) in self.coeffs.iter().enumerate() {
                    for (j, b) in other.coeffs.iter().enumerate() {
                        out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                    }
                }
            }
            Basis1::ChebU => {
                for (i, a) in self.coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in other.coeffs.iter().enumerate() {
                        let ab = a.clone() * b.clone();
                        for c in chebu_linearization(i, j) {
                            out[c] = out[c].clone() + ab.clone();
                        }
                    }
                }
            }
        }
        Ok(Self::new(self.basis, out))
    }

    /// Multiplication by the independent variable.
    pub fn mul_var(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + 1];
        match self.basis {
            Basis1::Monomial => {
                for (i, c) in self.coeffs.iter().enumerate() {
                    out[i + 1] = c.clone();
                }
            }
            Basis1::ChebU => {
                // x U_i = (U_{i+1} + U_{i-1}) / 2
                let half = T::half();
                for (i, c) in self.coeffs.iter().enumerate() {
                    let hc = c.clone() * half.clone();
                    out[i + 1] = out[i + 1].clone() + hc.clone();
                    if i > 0 {
                        out[i - 1] = out[i - 1].clone() + hc;
                    }
                }
            }
        }
        Self::new(self.basis, out)
    }

    pub fn to_basis(&self, basis: Basis1) -> Self {
        match (self.basis, basis) {
            (a, b) if a == b => self.clone(),
            (Basis1::ChebU, Basis1::Monomial) => {
                Self::new(Basis1::Monomial, chebu_to_monomial(&self.coeffs))
            }
            _ => Self::new(Basis1::ChebU, monomial_to_chebu(&self.coeffs)),
        }
    }

    pub fn to_monomial(&self) -> Self {
        self.to_basis(Basis1::Monomial)
    }

    pub fn to_chebu(&self) -> Self {
        self.to_basis(Basis1::ChebU)
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&T) -> S) -> UnivariatePoly<S> {
        UnivariatePoly::new(self.basis, self.coeffs.iter().map(f).collect())
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

impl UnivariatePoly<f64> {
    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis1::Monomial => self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Basis1::ChebU => clenshaw_u(&self.coeffs, x),
        }
    }

    /// Drops trailing coefficients with magnitude at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|v| v.abs() <= tol) {
            c.pop();
        }
        Self::new(self.basis, c)
    }
}

/// `U_n` for any integer `n`, with `U_{-1} = 0` and `U_n = -U_{-n-2}` for
/// `n <= -2`. Returned in the Chebyshev-U basis.
pub fn u_index<T: Coeff>(n: i64) -> UnivariatePoly<T> {
    let (idx, sign) = match n {
        n if n >= 0 => (n as usize, T::one()),
        -1 => return UnivariatePoly::zero(Basis1::ChebU),
        n => ((-n - 2) as usize, -T::one()),
    };
    let mut c = vec![T::zero(); idx + 1];
    c[idx] = sign;
    UnivariatePoly::new(Basis1::ChebU, c)
}

/// Indices `c` with `U_a U_b = sum_c U_c`.
pub fn chebu_linearization(a: usize, b: usize) -> impl Iterator<Item = usize> {
    let lo = a.abs_diff(b);
    (lo..=a + b).step_by(2)
}

/// Monomial coefficients of `U_0 .. U_n`, row `k` holding `U_k`.
pub fn chebu_monomial_table<T: Coeff>(n: usize) -> Vec<Vec<T>> {
    let two = T::from_i64(2);
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    rows.push(vec![T::one()]);
    if n >= 1 {
        rows.push(vec![T::zero(), two.clone()]);
    }
    for k in 2..=n {
        let mut next = vec![T::zero(); k + 1];
        for (i, c) in rows[k - 1].iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + two.clone() * c.clone();
        }
        for (i, c) in rows[k - 2].iter().enumerate() {
            next[i] = next[i].clone() - c.clone();
        }
        rows.push(next);
    }
    rows
}

pub(crate) fn chebu_to_monomial<T: Coeff>(c: &[T]) -> Vec<T> {
    if c.is_empty() {
        return Vec::new();
    }
    let table = chebu_monomial_table::<T>(c.len() - 1);
    let mut out = vec![T::zero(); c.len()];
    for (k, ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        for (i, t) in table[k].iter().enumerate() {
            out[i] = out[i].clone() + ck.clone() * t.clone();
        }
    }
    out
}

pub(crate) fn monomial_to_chebu<T: Coeff>(m: &[T]) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    // x^k = 2^{-k} sum_j (C(k,j) - C(k,j-1)) U_{k-2j}; built by repeated
    // application of x U_i = (U_{i+1} + U_{i-1}) / 2 to stay exact.
    let n = m.len() - 1;
    let half = T::half();
    let mut power = vec![T::one()];
    let mut out = vec![T::zero(); n + 1];
    for (k, mk) in m.iter().enumerate() {
        if k > 0 {
            let mut next = vec![T::zero(); k + 1];
            for (i, c) in power.iter().enumerate() {
                let hc = c.clone() * half.clone();
                next[i + 1] = next[i + 1].clone() + hc.clone();
                if i > 0 {
                    next[i - 1] = next[i - 1].clone() + hc;
                }
            }
            power = next;
        }
        if mk.is_zero() {
            continue;
        }
        for (i, p) in power.iter().enumerate() {
            out[i] = out[i].clone() + mk.clone() * p.clone();
        }
    }
    out
}

/// Clenshaw evaluation of `sum c_k U_k(x)`.
pub fn clenshaw_u(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for ck in c.iter().rev() {
        let b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn u_index_examples() {
        let u2 = u_index::<f64>(2).to_monomial();
        assert_eq!(u2.coeffs(), &[-1.0, 0.0, 4.0]);
        assert!(u_index::<f64>(-1).is_zero());
        assert_eq!(u_index::<f64>(-1).degree(), None);
        assert_eq!(u_index::<f64>(-3).coeffs(), &[0.0, -1.0]);
    }

    #[test]
    fn three_term_recurrence_is_exact() {
        let t = chebu_monomial_table::<BigRational>(30);
        let two = BigRational::from_i64(2);
        for n in 1..30 {
            let mut rhs = vec![BigRational::from_i64(0); n + 2];
            for (i, c) in t[n].iter().enumerate() {
                rhs[i + 1] = rhs[i + 1].clone() + two.clone() * c.clone();
            }
            for (i, c) in t[n - 1].iter().enumerate() {
                rhs[i] = rhs[i].clone() - c.clone();
            }
            assert_eq!(rhs, t[n + 1]);
        }
    }

    #[test]
    fn linearization_u1_squared() {
        let u1 = u_index::<f64>(1);
        let p = u1.mul(&u1).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn clenshaw_matches_trig_definition() {
        for n in 0..12 {
            let u = u_index::<f64>(n);
            for &t in &[0.3_f64, 1.1, 2.5] {
                let expect = ((n as f64 + 1.0) * t).sin() / t.sin();
                assert!((u.eval(t.cos()) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = UnivariatePoly::constant(Basis1::ChebU, 1.0);
        let b = UnivariatePoly::constant(Basis1::Monomial, 1.0);
        assert!(matches!(a.mul(&b), Err(Error::BasisMismatch)));
    }

    #[test]
    fn exact_roundtrip_degree_64() {
        let c: Vec<BigRational> = (0..=64)
            .map(|i| BigRational::new(((i * 7) % 11 - 5).into(), (i % 5 + 1).into()))
            .collect();
        let p = UnivariatePoly::new(Basis1::ChebU, c);
        assert_eq!(p.to_monomial().to_chebu(), p);
    }
}
