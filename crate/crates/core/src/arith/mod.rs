//! Prime fields, polynomials, rational functions and Laurent series.

pub mod ff;
pub mod laurent;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod upoly;

pub use ff::{ExtField, FiniteField, PrimeField};
pub use laurent::{laurent_embed, LaurentSeries};
pub use parse::{parse_bivariate, parse_poly, ParseError};
pub use poly::{Factorization, Poly};
pub use ratfunc::RatFunc;
