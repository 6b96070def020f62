//! Exact-arithmetic kernel: big rationals, univariate polynomials, truncated
//! formal series on a fractional exponent lattice, and configurable-precision
//! floating point (real and complex) with the special functions the rest of
//! the crate needs.

pub mod float;
pub mod gamma;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod series;

pub use float::{Cplx, Prec, Real};
pub use poly::{Poly, Symbol};
pub use rat::{parse_rat, rat, rat_string, ratio, Rational};
pub use series::ESeries;
