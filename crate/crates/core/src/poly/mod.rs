//! Polynomial arithmetic in the tensor Chebyshev-U basis, monomial
//! conversion, and the Laurent-side bookkeeping used by the elimination.

mod bivariate;
mod coeff;
mod laurent;
mod univariate;

pub use bivariate::{Basis2, BivariatePoly, Ordering2};
pub use coeff::{rational_from_f64, Coeff};
pub use laurent::{t_map, t_map_inverse, LaurentPoly};
pub use univariate::{
    chebu_linearization, chebu_monomial_table, clenshaw_u, u_index, Basis1, UnivariatePoly,
};

/// `px(x) * qy(y)` in the Chebyshev basis; the factors may be in either basis.
pub fn cheb_tensor<T: Coeff>(px: &UnivariatePoly<T>, qy: &UnivariatePoly<T>) -> BivariatePoly<T> {
    BivariatePoly::tensor(&px.to_chebu(), &qy.to_chebu()).expect("both in ChebU")
}

/// `U_n(x)` as a two-variable polynomial (negative-index convention applies).
pub fn ux<T: Coeff>(n: i64) -> BivariatePoly<T> {
    BivariatePoly::from_x(&u_index(n))
}

/// `U_n(y)` as a two-variable polynomial.
pub fn uy<T: Coeff>(n: i64) -> BivariatePoly<T> {
    BivariatePoly::from_y(&u_index(n))
}
