use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use super::univariate::{
    chebu_linearization, chebu_to_monomial, clenshaw_u, monomial_to_chebu, Basis1, UnivariatePoly,
};
use crate::error::{Error, Result};

/// Basis of a two-variable polynomial: tensor products of a one-variable
/// basis in `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis2 {
    #[serde(rename = "chebU")]
    ChebUxChebU,
    #[serde(rename = "monomial")]
    MonomialxMonomial,
}

impl Basis2 {
    pub fn axis(self) -> Basis1 {
        match self {
            Basis2::ChebUxChebU => Basis1::ChebU,
            Basis2::MonomialxMonomial => Basis1::Monomial,
        }
    }
}

/// Monomial orderings used to define leading terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering2 {
    Total,
    Lex,
    RevLex,
}

impl Ordering2 {
    /// Compares exponent pairs `(i, j)` of `x^i y^j`.
    pub fn cmp(self, a: (usize, usize), b: (usize, usize)) -> Ordering {
        match self {
            Ordering2::Total => (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0)),
            Ordering2::Lex => a.cmp(&b),
            Ordering2::RevLex => (a.1, a.0).cmp(&(b.1, b.0)),
        }
    }
}

/// Dense coefficient grid; entry `(i, j)` multiplies `basis_i(x) basis_j(y)`.
///
/// Trailing all-zero rows and columns are never stored, so the zero
/// polynomial is the empty `0 x 0` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly<T: Coeff = f64> {
    basis: Basis2,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Coeff> BivariatePoly<T> {
    pub fn zero(basis: Basis2) -> Self {
        Self {
            basis,
            rows: 0,
            cols: 0,
            data: Vec::new(),
        }
    }

    /// Builds from a grid with `rows` x-degrees and `cols` y-degrees.
    pub fn from_grid(basis: Basis2, rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "grid shape mismatch");
        let mut p = Self {
            basis,
            rows,
            cols,
            data,
        };
        p.trim();
        p
    }

    pub fn from_rows(basis: Basis2, rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut data = vec![T::zero(); r * c];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                data[i * c + j] = v;
            }
        }
        Self::from_grid(basis, r, c, data)
    }

    pub fn constant(basis: Basis2, c: T) -> Self {
        Self::from_grid(basis, 1, 1, vec![c])
    }

    /// Single basis element `c * basis_i(x) basis_j(y)`.
    pub fn term(basis: Basis2, i: usize, j: usize, c: T) -> Self {
        let mut data = vec![T::zero(); (i + 1) * (j + 1)];
        data[i * (j + 1) + j] = c;
        Self::from_grid(basis, i + 1, j + 1, data)
    }

    /// `px(x) * py(y)`.
    pub fn tensor(px: &UnivariatePoly<T>, py: &UnivariatePoly<T>) -> Result<Self> {
        if px.basis() != py.basis() {
            return Err(Error::BasisMismatch);
        }
        let basis = match px.basis() {
            Basis1::ChebU => Basis2::ChebUxChebU,
            Basis1::Monomial => Basis2::MonomialxMonomial,
        };
        let (r, c) = (px.coeffs().len(), py.coeffs().len());
        let mut data = Vec::with_capacity(r * c);
        for a in px.coeffs() {
            for b in py.coeffs() {
                data.push(a.clone() * b.clone());
            }
        }
        Ok(Self::from_grid(basis, r, c, data))
    }

    /// Embeds a polynomial in `x` alone.
    pub fn from_x(px: &UnivariatePoly<T>) -> Self {
        let one = UnivariatePoly::constant(px.basis(), T::one());
        Self::tensor(px, &one).expect("same basis")
    }

    /// Embeds a polynomial in `y` alone.
    pub fn from_y(py: &UnivariatePoly<T>) -> Self {
        let one = UnivariatePoly::constant(py.basis(), T::one());
        Self::tensor(&one, py).expect("same basis")
    }

    pub fn basis(&self) -> Basis2 {
        self.basis
    }

    /// Number of stored x-degrees (`xdeg + 1`, or 0 for the zero polynomial).
    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if i < self.rows && j < self.cols {
            self.data[i * self.cols + j].clone()
        } else {
            T::zero()
        }
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows == 0
    }

    pub fn xdeg(&self) -> Option<usize> {
        self.rows.checked_sub(1)
    }

    pub fn ydeg(&self) -> Option<usize> {
        self.cols.checked_sub(1)
    }

    /// Nonzero entries `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k / cols, k % cols, c))
    }

    /// Maximal nonzero exponent pair under `ord`. Coincides with the leading
    /// monomial for both supported bases since the basis change is
    /// triangular in each variable.
    pub fn leading(&self, ord: Ordering2) -> Option<(usize, usize)> {
        self.terms()
            .map(|(i, j, _)| (i, j))
            .max_by(|a, b| ord.cmp(*a, *b))
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn lex_degree(&self) -> Option<(usize, usize)> {
        self.leading(Ordering2::Lex)
    }

    pub fn revlex_degree(&self) -> Option<(usize, usize)> {
        self.leading(Ordering2::RevLex)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_grid(
            self.basis,
            self.rows,
            self.cols,
            self.data.iter().map(|c| c.clone() * s.clone()).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &T, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + s.clone() * b)
    }

    fn combine(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let r = self.rows.max(other.rows);
        let c = self.cols.max(other.cols);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(f(self.get(i, j), other.get(i, j)));
            }
        }
        Ok(Self::from_grid(self.basis, r, c, data))
    }

    /// Exact product; in the Chebyshev basis via `U_a U_b = sum U_c`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.basis));
        }
        let r = self.rows + other.rows - 1;
        let c = self.cols + other.cols - 1;
        let mut data = vec![T::zero(); r * c];
        let a_terms: Vec<_> = self.terms().collect();
        let b_terms: Vec<_> = other.terms().collect();
        match self.basis {
            Basis2::MonomialxMonomial => {
                for &(i, j, a) in &a_terms {
                    for &(k, l, b) in &b_terms {
                        let idx = (i + k) * c + (j + l);
                        data[idx] = data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
            Basis2::ChebUxChebU => {
                for &(i, j, a) in &a_terms {
                    for &(k, l, b) in &b_terms {
                        let ab = a.clone() * b.clone();
                        for p in chebu_linearization(i, k) {
                            for q in chebu_linearization(j, l) {
                                let idx = p * c + q;
                                data[idx] = data[idx].clone() + ab.clone();
                            }
                        }
                    }
                }
            }
        }
        Ok(Self::from_grid(self.basis, r, c, data))
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> Self {
        self.apply_rows(|row| row.mul_var())
    }

    /// Multiplication by `y`.
    pub fn mul_y(&self) -> Self {
        self.swap_xy().mul_x().swap_xy()
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Self::from_grid(self.basis, self.cols, self.rows, data)
    }

    pub fn to_basis(&self, basis: Basis2) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let conv: fn(&[T]) -> Vec<T> = match basis {
            Basis2::MonomialxMonomial => chebu_to_monomial,
            Basis2::ChebUxChebU => monomial_to_chebu,
        };
        let mut p = self.clone();
        p.basis = basis;
        // Columns first (y), then rows (x); both conversions keep lengths.
        let swapped = p.swap_xy().map_rows_raw(conv).swap_xy();
        swapped.map_rows_raw(conv)
    }

    pub fn to_monomial(&self) -> Self {
        self.to_basis(Basis2::MonomialxMonomial)
    }

    pub fn to_chebu(&self) -> Self {
        self.to_basis(Basis2::ChebUxChebU)
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&T) -> S) -> BivariatePoly<S> {
        BivariatePoly::from_grid(self.basis, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    /// Applies a one-variable map to each `x`-row polynomial: the grid is
    /// viewed as `sum_j (sum_i c_ij b_i(x)) b_j(y)`.
    fn apply_rows(&self, f: impl Fn(&UnivariatePoly<T>) -> UnivariatePoly<T>) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let axis = self.basis.axis();
        let cols: Vec<UnivariatePoly<T>> = (0..self.cols)
            .map(|j| {
                let col: Vec<T> = (0..self.rows).map(|i| self.get(i, j)).collect();
                f(&UnivariatePoly::new(axis, col))
            })
            .collect();
        let r = cols.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        let mut data = vec![T::zero(); r * self.cols];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.coeffs().iter().enumerate() {
                data[i * self.cols + j] = v.clone();
            }
        }
        Self::from_grid(self.basis, r, self.cols, data)
    }

    fn map_rows_raw(&self, conv: fn(&[T]) -> Vec<T>) -> Self {
        let mut data = vec![T::zero(); self.rows * self.cols];
        for j in 0..self.cols {
            let col: Vec<T> = (0..self.rows).map(|i| self.get(i, j)).collect();
            for (i, v) in conv(&col).into_iter().enumerate() {
                data[i * self.cols + j] = v;
            }
        }
        Self::from_grid(self.basis, self.rows, self.cols, data)
    }

    fn trim(&mut self) {
        let mut r = self.rows;
        while r > 0 && (0..self.cols).all(|j| self.data[(r - 1) * self.cols + j].is_zero()) {
            r -= 1;
        }
        let mut c = self.cols;
        while c > 0 && (0..r).all(|i| self.data[i * self.cols + c - 1].is_zero()) {
            c -= 1;
        }
        if r == 0 || c == 0 {
            self.rows = 0;
            self.cols = 0;
            self.data.clear();
            return;
        }
        if (r, c) != (self.rows, self.cols) {
            let mut data = Vec::with_capacity(r * c);
            for i in 0..r {
                data.extend_from_slice(&self.data[i * self.cols..i * self.cols + c]);
            }
            self.rows = r;
            self.cols = c;
            self.data = data;
        }
    }
}

impl BivariatePoly<f64> {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let rows = self.rows();
        match self.basis {
            Basis2::ChebUxChebU => {
                let inner: Vec<f64> = rows.iter().map(|r| clenshaw_u(r, y)).collect();
                clenshaw_u(&inner, x)
            }
            Basis2::MonomialxMonomial => rows
                .iter()
                .rev()
                .fold(0.0, |acc, r| acc * x + r.iter().rev().fold(0.0, |a, c| a * y + c)),
        }
    }

    /// Zeroes entries with magnitude at most `tol` (then trims).
    pub fn cleaned(&self, tol: f64) -> Self {
        self.map(|c| if c.abs() <= tol { 0.0 } else { *c })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Maximum coefficient-wise deviation.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let r = self.rows.max(other.rows);
        let c = self.cols.max(other.cols);
        let mut m: f64 = 0.0;
        for i in 0..r {
            for j in 0..c {
                m = m.max((self.get(i, j) - other.get(i, j)).abs());
            }
        }
        m
    }

    /// Leading exponent pair after discarding entries below `tol * max_abs`.
    pub fn leading_tol(&self, ord: Ordering2, rel_tol: f64) -> Option<(usize, usize)> {
        let cut = rel_tol * self.max_abs();
        self.terms()
            .filter(|(_, _, c)| c.abs() > cut)
            .map(|(i, j, _)| (i, j))
            .max_by(|a, b| ord.cmp(*a, *b))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    basis: Basis2,
    coeffs: Vec<Vec<f64>>,
}

impl Serialize for BivariatePoly<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            basis: self.basis,
            coeffs: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Ok(BivariatePoly::from_rows(j.basis, j.coeffs))
    }
}
