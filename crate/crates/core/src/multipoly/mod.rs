//! Monomials, monomial orders, polynomials over the rationals and the dense
//! linear algebra used on graded pieces.

pub mod linalg;
mod monomial;
mod order;
mod parse;
mod polynomial;

pub use linalg::{rank_kernel, RationalMatrix};
pub use monomial::{Monomial, MAX_VARS};
pub use order::MonomialOrder;
pub use parse::{parse_polynomial, parse_polynomial_with, parse_rational};
pub use polynomial::{monomials_of_degree, monomials_of_degree_in_order, Polynomial};
