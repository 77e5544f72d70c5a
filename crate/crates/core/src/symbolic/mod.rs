//! Exact multivariate polynomials over the rationals and the scalar-field
//! abstraction shared by every other module.

mod parse;
mod polynomial;
mod scalar;

pub use parse::{parse_polynomial, parse_rational};
pub use polynomial::{format_rational, rational_from_f64, rational_to_f64, Monomial, Polynomial};
pub use scalar::{scalar_grad, scalar_grad_exact, ExactField, ScalarField, SmoothField};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Evaluates a polynomial at a floating-point point (`poly_eval`).
pub fn poly_eval(p: &Polynomial, x: &[f64]) -> crate::Result<f64> {
    p.eval_f64(x)
}

/// Exact partial derivative (`poly_diff`).
pub fn poly_diff(p: &Polynomial, var: usize) -> crate::Result<Polynomial> {
    p.diff(var)
}

/// Integer as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `num/den` as a [`Rational`]; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
