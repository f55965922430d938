use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{structural, Result};
use crate::medium::MediumParams;
use crate::photon::PhotonWaveFunction;
use crate::spectral::{norm_sqr3, to_complex, CVec3, RVec3};
use crate::sum;

/// Orthonormal real pair `(e₁, e₂)` with `e₁ ⊥ k̂`, `e₂ = k̂ × e₁`.
///
/// `e₁` is the Cartesian axis along which `k̂` is smallest (first index on
/// ties), with its `k̂` part removed.
pub fn transverse_pair(khat: &RVec3) -> (RVec3, RVec3) {
    let mut axis = 0;
    for a in 1..3 {
        if khat[a].abs() < khat[axis].abs() {
            axis = a;
        }
    }
    let mut e1 = RVec3::zeros();
    e1[axis] = 1.0;
    e1 -= khat * khat[axis];
    e1 /= e1.norm();
    let e2 = khat.cross(&e1);
    (e1, e2)
}

/// Helicity eigenvectors `(h₋, h₀, h₊)` of `k̂·S` with eigenvalues `-ħ, 0, ħ`:
/// `h± = (e₁ ± ie₂)/√2`, `h₀ = k̂`.
pub fn helicity_basis(khat: &RVec3) -> [CVec3; 3] {
    let (e1, e2) = transverse_pair(khat);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let e1c = to_complex(&e1);
    let e2c = to_complex(&e2);
    [
        (e1c - e2c * i) * Complex64::new(r, 0.0),
        to_complex(khat),
        (e1c + e2c * i) * Complex64::new(r, 0.0),
    ]
}

/// Populations `Σ_k |⟨h_s, φ⟩|² dk³` for `s = -, 0, +`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HelicityPopulations {
    pub minus: f64,
    pub zero: f64,
    pub plus: f64,
}

impl HelicityPopulations {
    pub fn as_array(&self) -> [f64; 3] {
        [self.minus, self.zero, self.plus]
    }

    pub fn total(&self) -> f64 {
        self.minus + self.zero + self.plus
    }
}

pub fn helicity_decompose(phi: &PhotonWaveFunction) -> Result<HelicityPopulations> {
    let grid = &phi.grid;
    if grid.dim() != 3 {
        return Err(structural(format!("helicity needs three dimensions, grid has {}", grid.dim())));
    }
    let mut acc = [sum::Accumulator::default(); 3];
    for (i, v) in phi.phi.iter().enumerate() {
        let k = grid.k_vector(i);
        let kn = k.norm();
        if kn == 0.0 {
            // No direction to project on; whatever sits here counts as longitudinal.
            acc[1].add(norm_sqr3(v));
            continue;
        }
        for (s, h) in helicity_basis(&(k / kn)).iter().enumerate() {
            acc[s].add(h.dotc(v).norm_sqr());
        }
    }
    let cell = grid.k_cell();
    Ok(HelicityPopulations {
        minus: acc[0].value() * cell,
        zero: acc[1].value() * cell,
        plus: acc[2].value() * cell,
    })
}

/// The 3×3 matrix `ħck(δ_αβ - k_α k_β / k²)`.
pub fn hamiltonian_matrix(k: &RVec3, medium: &MediumParams) -> Matrix3<f64> {
    let kn = k.norm();
    if kn == 0.0 {
        return Matrix3::zeros();
    }
    let khat = k / kn;
    (Matrix3::identity() - khat * khat.transpose()) * (medium.hbar * medium.c * kn)
}

/// `max |ħck(e₁e₁ᵀ + e₂e₂ᵀ) - ℍ|` for a given transverse pair, in units of `ħck`.
pub fn transverse_identity_deviation(k: &RVec3, e1: &RVec3, e2: &RVec3, medium: &MediumParams) -> f64 {
    let scale = medium.hbar * medium.c * k.norm();
    let built = (e1 * e1.transpose() + e2 * e2.transpose()) * scale;
    (built - hamiltonian_matrix(k, medium)).abs().max() / scale
}

/// Compares `ℍ` with the sum of outer products of the transverse pair from
/// [`transverse_pair`].
pub fn transverse_energy_identity_check(k: &RVec3, medium: &MediumParams) -> Result<f64> {
    let kn = k.norm();
    if !(kn > 0.0) {
        return Err(structural("the transverse identity needs k ≠ 0"));
    }
    let (e1, e2) = transverse_pair(&(k / kn));
    Ok(transverse_identity_deviation(k, &e1, &e2, medium))
}
