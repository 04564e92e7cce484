//! Exact sparse multivariate Laurent-polynomial arithmetic over Z, with GCD,
//! substitution, quotient-ring evaluation and a canonical text grammar.
//!
//! Polynomials are immutable values; every operation is a pure function, so
//! values can be shared freely across threads.

mod error;
mod gcd;
mod poly;
mod quotient;
mod rational;
mod subst;
mod table;
pub mod text;

pub use error::RingError;
pub use gcd::{coprime, gcd};
pub use poly::{Exponents, LaurentPolynomial};
pub use quotient::QuotientRingElement;
pub use rational::RationalFunction;
pub use table::{same_table, VariableTable};
pub use text::parse_canonical;
