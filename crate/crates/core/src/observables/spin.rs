use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{structural, Result};
use crate::photon::PhotonWaveFunction;
use crate::spectral::CVec3;

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// The spin-1 generators `(S_α)_βγ = -iħ ε_αβγ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub hbar: f64,
    pub s: [Matrix3<Complex64>; 3],
}

/// Largest deviations found by [`SpinMatrices::audit`], in units of ħ (ħ² for
/// the Casimir).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinAudit {
    pub commutator: f64,
    pub hermiticity: f64,
    pub eigenvalues: f64,
    pub casimir: f64,
}

impl SpinAudit {
    pub fn max(&self) -> f64 {
        self.commutator.max(self.hermiticity).max(self.eigenvalues).max(self.casimir)
    }
}

fn max_entry(m: &Matrix3<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl SpinMatrices {
    pub fn new(hbar: f64) -> Self {
        let s = std::array::from_fn(|a| {
            Matrix3::from_fn(|b, c| Complex64::new(0.0, -hbar * levi_civita(a, b, c)))
        });
        SpinMatrices { hbar, s }
    }

    /// `S₁² + S₂² + S₃²`.
    pub fn casimir(&self) -> Matrix3<Complex64> {
        self.s.iter().map(|m| m * m).sum()
    }

    /// `k̂·S`.
    pub fn along(&self, khat: &nalgebra::Vector3<f64>) -> Matrix3<Complex64> {
        (0..3).map(|a| self.s[a] * Complex64::new(khat[a], 0.0)).sum()
    }

    /// Checks the angular-momentum algebra, Hermiticity, the spectrum
    /// `{-ħ, 0, ħ}` of each generator and `S² = 2ħ²`.
    pub fn audit(&self) -> SpinAudit {
        let h = self.hbar;
        let i = Complex64::new(0.0, 1.0);
        let mut commutator = 0.0f64;
        for a in 0..3 {
            for b in 0..3 {
                let lhs = self.s[a] * self.s[b] - self.s[b] * self.s[a];
                let rhs: Matrix3<Complex64> =
                    (0..3).map(|c| self.s[c] * (i * h * levi_civita(a, b, c))).sum();
                commutator = commutator.max(max_entry(&(lhs - rhs)) / (h * h));
            }
        }
        let mut hermiticity = 0.0f64;
        let mut eigenvalues = 0.0f64;
        for m in &self.s {
            hermiticity = hermiticity.max(max_entry(&(m - m.adjoint())) / h);
            let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            for (got, want) in ev.iter().zip([-h, 0.0, h]) {
                eigenvalues = eigenvalues.max((got - want).abs() / h);
            }
        }
        let two = Matrix3::identity() * Complex64::new(2.0 * h * h, 0.0);
        let casimir = max_entry(&(self.casimir() - two)) / (h * h);
        SpinAudit { commutator, hermiticity, eigenvalues, casimir }
    }
}

/// `(S_α φ)_β = -iħ Σ_γ ε_αβγ φ_γ` on every mode; `axis` is 1, 2 or 3.
pub fn spin_apply(axis: usize, phi: &PhotonWaveFunction) -> Result<Vec<CVec3>> {
    if phi.grid.dim() != 3 {
        return Err(structural(format!("spin is defined in three dimensions, grid has {}", phi.grid.dim())));
    }
    if !(1..=3).contains(&axis) {
        return Err(structural(format!("spin axis must be 1, 2 or 3, got {axis}")));
    }
    let m = SpinMatrices::new(phi.medium.hbar).s[axis - 1];
    Ok(phi.phi.iter().map(|v| m * v).collect())
}
