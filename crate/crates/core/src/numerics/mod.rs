//! Independent numerical ground truth: complex-scaling resonance spectra
//! in a truncated harmonic basis and directional Borel-Pade resummation of
//! the divergent perturbation series.

pub mod banded;
pub mod borel;
pub mod resonance;

pub use banded::{eigen_near, BandLu, BandMatrix};
pub use borel::{borel_pade, BorelSum};
pub use resonance::{
    build_hamiltonian, resonance, ResonanceOptions, ResonanceResult, ScaledHamiltonian,
};
