//! Physical constants of the propagation medium.

use serde::{Deserialize, Serialize};

use crate::error::{structural, Result};

/// Which system of units the constants in a [`MediumParams`] belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// ħ = c = ε₀ = 1.
    #[default]
    Natural,
    Si,
    /// Rationalized units where ħ = c = 1 and ε₀ = μ₀ = 1.
    LorentzHeaviside,
}

impl UnitSystem {
    pub(crate) fn code(self) -> u8 {
        match self {
            UnitSystem::Natural => 0,
            UnitSystem::Si => 1,
            UnitSystem::LorentzHeaviside => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(UnitSystem::Natural),
            1 => Some(UnitSystem::Si),
            2 => Some(UnitSystem::LorentzHeaviside),
            _ => None,
        }
    }
}

/// Permittivity, permeability, light speed, reduced Planck constant and
/// ohmic conductivity. `c` is always derived as `1/√(ε₀μ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub epsilon0: f64,
    pub mu0: f64,
    pub c: f64,
    pub hbar: f64,
    pub sigma: f64,
    pub unit_system: UnitSystem,
}

pub const SI_HBAR: f64 = 1.054_571_817e-34;
pub const SI_C: f64 = 299_792_458.0;
pub const SI_EPSILON0: f64 = 8.854_187_812_8e-12;

impl MediumParams {
    pub fn new(epsilon0: f64, mu0: f64, hbar: f64, sigma: f64, unit_system: UnitSystem) -> Result<Self> {
        for (name, v) in [("epsilon0", epsilon0), ("mu0", mu0), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(structural(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(structural(format!("sigma must be finite and non-negative, got {sigma}")));
        }
        Ok(MediumParams {
            epsilon0,
            mu0,
            c: 1.0 / (epsilon0 * mu0).sqrt(),
            hbar,
            sigma,
            unit_system,
        })
    }

    /// Vacuum with ħ = c = ε₀ = μ₀ = 1.
    pub fn natural() -> Self {
        MediumParams {
            epsilon0: 1.0,
            mu0: 1.0,
            c: 1.0,
            hbar: 1.0,
            sigma: 0.0,
            unit_system: UnitSystem::Natural,
        }
    }

    pub fn lorentz_heaviside() -> Self {
        MediumParams {
            unit_system: UnitSystem::LorentzHeaviside,
            ..Self::natural()
        }
    }

    /// CODATA 2018 vacuum. μ₀ is derived from ε₀ and c so that c²ε₀μ₀ = 1.
    pub fn si() -> Self {
        let mu0 = 1.0 / (SI_EPSILON0 * SI_C * SI_C);
        MediumParams {
            epsilon0: SI_EPSILON0,
            mu0,
            c: SI_C,
            hbar: SI_HBAR,
            sigma: 0.0,
            unit_system: UnitSystem::Si,
        }
    }

    /// Default vacuum constants for a unit system.
    pub fn vacuum(unit_system: UnitSystem) -> Self {
        match unit_system {
            UnitSystem::Natural => Self::natural(),
            UnitSystem::Si => Self::si(),
            UnitSystem::LorentzHeaviside => Self::lorentz_heaviside(),
        }
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(self.epsilon0, self.mu0, self.hbar, sigma, self.unit_system)
    }

    /// Damping rate γ = σ/ε₀ of each field mode.
    pub fn gamma(&self) -> f64 {
        self.sigma / self.epsilon0
    }

    pub fn is_free_space(&self) -> bool {
        self.sigma == 0.0
    }
}
