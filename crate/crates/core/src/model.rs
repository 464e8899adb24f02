//! Physical parameters, the regime-tagged effective frequency, the squeeze
//! parameter of the similarity transformation, and the potential profile.
//!
//! Everything here is dimensionless (`ħ = 1`, coordinates scaled by the
//! square root of the slope frequency).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Physical parameters of the coupled inverted-well model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Slope frequency of the inverted well, `Ω > 0`.
    pub omega: f64,
    /// Non-Hermitian coupling strength, `G ≥ 0`.
    pub g: f64,
    /// Fock-space truncation dimension.
    pub truncation: usize,
    /// Numerical tolerance; also sets the width of the exceptional-point
    /// detection band `|Ω − G| ≤ tol·Ω`.
    pub tol: f64,
}

impl ModelParams {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(omega: f64, g: f64, truncation: usize, tol: f64) -> Result<Self> {
        let p = Self { omega, g, truncation, tol };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with the default tolerance.
    pub fn with_defaults(omega: f64, g: f64, truncation: usize) -> Result<Self> {
        Self::new(omega, g, truncation, Self::DEFAULT_TOL)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidConfig(format!("omega must be positive, got {}", self.omega)));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidConfig(format!("g must be non-negative, got {}", self.g)));
        }
        if self.truncation < 4 {
            return Err(Error::InvalidConfig(format!(
                "truncation must be at least 4, got {}",
                self.truncation
            )));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Coupling regime relative to the exceptional point `G_c = Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BelowEp,
    AtEp,
    AboveEp,
}

/// Regime tag plus the effective frequency `√|Ω² − G²|` (zero at the
/// exceptional point).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveFrequency {
    pub regime: Regime,
    pub value: f64,
}

/// Regime-tagged effective frequency of the transformed Hamiltonian.
///
/// `AtEp` is detected with the relative band `|Ω − G| ≤ tol·Ω`, since
/// coupling sweeps rarely hit `Ω` exactly in floating point.
pub fn effective_frequency(params: &ModelParams) -> EffectiveFrequency {
    let ModelParams { omega, g, .. } = *params;
    if (omega - g).abs() <= params.tol * omega {
        return EffectiveFrequency { regime: Regime::AtEp, value: 0.0 };
    }
    let value = (omega * omega - g * g).abs().sqrt();
    if g < omega {
        EffectiveFrequency { regime: Regime::BelowEp, value }
    } else {
        EffectiveFrequency { regime: Regime::AboveEp, value }
    }
}

/// Squeeze parameter of the similarity transformation: the positive branch
/// of `sinh η = G/√(Ω²−G²)`, equivalently `tanh η = G/Ω`.
///
/// A real `η` exists only strictly below the exceptional point; at or
/// beyond it this returns [`Error::Regime`].
pub fn eta_from_g(params: &ModelParams) -> Result<f64> {
    let eff = effective_frequency(params);
    if eff.regime != Regime::BelowEp {
        return Err(Error::Regime(format!(
            "real squeeze parameter requires G < Ω; got G = {}, Ω = {}",
            params.g, params.omega
        )));
    }
    Ok((params.g / eff.value).asinh())
}

/// Potential-shape convention emitted by the profile: curvature set by the
/// effective frequency itself or by its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeConvention {
    /// `V(x) = ∓½·√|Ω²−G²|·x²` (transformed-Hamiltonian convention).
    Frequency,
    /// `V(x) = ∓½·|Ω²−G²|·x²` (dimensionful slope).
    FrequencySquared,
}

/// Potential profile in the transformed-Hamiltonian convention:
/// `−½·Γ_I·x²` below the exceptional point, identically zero at it and
/// `+½·Γ·x²` above it.
pub fn potential_profile(params: &ModelParams, xs: &[f64]) -> Vec<(f64, f64)> {
    potential_profile_with(params, xs, SlopeConvention::Frequency)
}

pub fn potential_profile_with(
    params: &ModelParams,
    xs: &[f64],
    convention: SlopeConvention,
) -> Vec<(f64, f64)> {
    let eff = effective_frequency(params);
    let slope = match convention {
        SlopeConvention::Frequency => eff.value,
        SlopeConvention::FrequencySquared => eff.value * eff.value,
    };
    let sign = match eff.regime {
        Regime::BelowEp => -1.0,
        Regime::AtEp => 0.0,
        Regime::AboveEp => 1.0,
    };
    xs.iter().map(|&x| (x, 0.5 * sign * slope * x * x)).collect()
}
