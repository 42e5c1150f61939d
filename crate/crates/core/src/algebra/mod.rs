//! Scalars, polynomials, factored denominators and rational functions.

pub mod factor;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use factor::{cofactor_divide, expand, FactorBag, FactorKind, LinearFactor};
pub use poly::{poly_arith, PolyOp, Polynomial};
pub use rational::RationalFn;
pub use scalar::{gauss, gauss_int, parse_rational, Exact, Scalar};
