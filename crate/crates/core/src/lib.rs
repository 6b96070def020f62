//! Anharmonic oscillators of arbitrary even and odd degree: exact
//! Rayleigh-Schroedinger perturbation coefficients, instanton actions and
//! decay widths, generalized quantization conditions with their trans-series
//! data, large-order asymptotics, and independent numerical verification via
//! complex-scaling spectra and directional Borel-Pade summation.
//!
//! Even oscillators are `H_N = -1/2 d^2/dq^2 + 1/2 q^2 + g q^N` (N even),
//! odd ones `h_M = -1/2 d^2/dq^2 + 1/2 q^2 + sqrt(g) q^M` (M odd). All
//! symbolic work is done in exact rational arithmetic; numeric evaluation
//! is arbitrary-precision (MPFR) with the decimal precision an explicit
//! parameter everywhere.

pub mod algebra;
pub mod cache;
pub mod error;
pub mod instanton;
pub mod largeorder;
pub mod numerics;
pub mod par;
pub mod quantize;
pub mod rspt;

pub mod acceptance;

pub use error::{Error, Result};
