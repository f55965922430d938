use num_complex::Complex64;

use crate::error::{structural, Error, Result};
use crate::medium::MediumParams;
use crate::photon::PhotonWaveFunction;
use crate::spectral::{bilinear, norm_sqr3, reality_violation, RVec3, RealVectorField, SpectralVectorField, REALITY_TOLERANCE};
use crate::sum;

fn check_pair(e: &RealVectorField, b: &RealVectorField) -> Result<()> {
    if e.grid != b.grid || e.values.len() != e.grid.len() || b.values.len() != b.grid.len() {
        return Err(structural("electric and magnetic fields do not share a grid"));
    }
    Ok(())
}

/// `(ε₀/2) Σ_r [|E|² + c²|B|²] dx^d`.
pub fn energy_realspace(e: &RealVectorField, b: &RealVectorField, medium: &MediumParams) -> Result<f64> {
    check_pair(e, b)?;
    let c2 = medium.c * medium.c;
    let s = sum::sum(e.values.iter().zip(&b.values).map(|(ev, bv)| ev.norm_squared() + c2 * bv.norm_squared()));
    Ok(0.5 * medium.epsilon0 * s * e.grid.r_cell())
}

/// `((2π)^d ε₀/2) Σ_k [𝓔(k)·𝓔(-k) + c²𝓑(k)·𝓑(-k)] dk^d` before discarding
/// the imaginary part.
pub fn energy_kspace_complex(e: &SpectralVectorField, b: &SpectralVectorField, medium: &MediumParams) -> Result<Complex64> {
    e.check_compatible(b)?;
    let grid = &e.grid;
    let c2 = medium.c * medium.c;
    let s = sum::sum_complex((0..grid.len()).map(|i| {
        let j = grid.negated(i);
        bilinear(&e.values[i], &e.values[j]) + bilinear(&b.values[i], &b.values[j]) * c2
    }));
    Ok(s * (0.5 * grid.two_pi_d() * medium.epsilon0 * grid.k_cell()))
}

/// Field energy from Hermitian spectra. Fails when either spectrum breaks
/// the reality constraint.
pub fn energy_kspace(e: &SpectralVectorField, b: &SpectralVectorField, medium: &MediumParams) -> Result<f64> {
    for f in [e, b] {
        let v = reality_violation(f);
        if v > REALITY_TOLERANCE {
            return Err(Error::Constraint {
                what: format!("reality of the {:?} spectrum", f.role),
                magnitude: v,
                tolerance: REALITY_TOLERANCE,
            });
        }
    }
    let z = energy_kspace_complex(e, b, medium)?;
    log::debug!("k-space energy imaginary residue {:.3e}", z.im);
    Ok(z.re)
}

/// `Σ_k ħck |φ|² dk^d`.
pub fn energy_phi(phi: &PhotonWaveFunction) -> f64 {
    let grid = &phi.grid;
    let hc = phi.medium.hbar * phi.medium.c;
    sum::sum((0..grid.len()).map(|i| hc * grid.k_vector(i).norm() * norm_sqr3(&phi.phi[i]))) * grid.k_cell()
}

/// `ε₀ Σ_r E×B dx^d`.
pub fn momentum_realspace(e: &RealVectorField, b: &RealVectorField, medium: &MediumParams) -> Result<RVec3> {
    check_pair(e, b)?;
    let s = sum::sum_vec3(e.values.iter().zip(&b.values).map(|(ev, bv)| ev.cross(bv)));
    Ok(s * (medium.epsilon0 * e.grid.r_cell()))
}

/// `ħ Σ_k k |φ|² dk^d`.
pub fn momentum_phi(phi: &PhotonWaveFunction) -> RVec3 {
    let grid = &phi.grid;
    let s = sum::sum_vec3((0..grid.len()).map(|i| grid.k_vector(i) * norm_sqr3(&phi.phi[i])));
    s * (phi.medium.hbar * grid.k_cell())
}
