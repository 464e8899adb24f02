//! Spectral and dynamical toolkit for the SU(1,1) inverted oscillator with
//! a non-Hermitian coupling: imaginary eigenvalue ladders and their dual
//! eigenvector families, the squeeze-type similarity transformation to
//! Hermitian form, the exceptional-point transition to the real spectrum,
//! exact-arithmetic biorthogonal polynomial eigenfunctions, position-grid
//! hermiticity audits with complex-scaled resonances, and the complex
//! classical dynamics with its canonical-transformation correspondence.

pub mod classical;
pub mod cli;
pub mod error;
pub mod exact_eigenfunctions;
pub mod fock_ops;
pub mod grid_resonance;
mod linalg;
pub mod model;
pub mod spectra;

pub use error::{Error, Result};
pub use model::{EffectiveFrequency, ModelParams, Regime};
