//! Exact sparse bivariate polynomials over rationals or truncated jets.

pub(crate) mod graded;
mod jet;
mod literal;
pub mod packed;
mod poly;
mod rational;
mod scalar;
mod unipoly;

pub(crate) use graded::Graded;
pub use jet::Jet;
pub use literal::{poly_from_literals, poly_to_literals, TermLiteral};
pub use poly::{geom_series, BivarPoly, Monomial};
pub use rational::{binomial, format_rational, parse_rational, rat, Rational};
pub use scalar::Scalar;
pub use unipoly::UniPoly;
