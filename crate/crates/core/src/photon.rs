//! The photon wave function `φ(k,t)`: the positive-frequency amplitude from
//! which the electric and magnetic spectra are rebuilt.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{structural, Error, Result};
use crate::medium::MediumParams;
use crate::spectral::{
    conj3, czero3, norm_sqr3, rcross, rdot, scale3, CVec3, FieldRole, KGrid, RVec3, SpectralVectorField,
};
use crate::sum;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest relative longitudinal component tolerated by [`phi_from_electric`].
pub const TRANSVERSE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonWaveFunction {
    pub grid: KGrid,
    pub phi: Vec<CVec3>,
    pub time: f64,
    pub medium: MediumParams,
}

/// `n(k) = √(ħck / (2(2π)^d ε₀))`, with `n(0) = 0`.
pub fn normalization_weight(k_mod: f64, medium: &MediumParams, dim: usize) -> Result<f64> {
    if !(k_mod >= 0.0) {
        return Err(structural(format!("|k| must be non-negative, got {k_mod}")));
    }
    let two_pi_d = (2.0 * PI).powi(dim as i32);
    Ok((medium.hbar * medium.c * k_mod / (2.0 * two_pi_d * medium.epsilon0)).sqrt())
}

fn weight(grid: &KGrid, medium: &MediumParams, k: &RVec3) -> f64 {
    let two_pi_d = grid.two_pi_d();
    (medium.hbar * medium.c * k.norm() / (2.0 * two_pi_d * medium.epsilon0)).sqrt()
}

impl PhotonWaveFunction {
    pub fn new(grid: KGrid, phi: Vec<CVec3>, time: f64, medium: MediumParams) -> Result<Self> {
        if phi.len() != grid.len() {
            return Err(structural(format!("φ has {} nodes but the grid has {}", phi.len(), grid.len())));
        }
        Ok(PhotonWaveFunction { grid, phi, time, medium })
    }

    pub fn from_fn(grid: KGrid, medium: MediumParams, f: impl Fn(RVec3) -> CVec3) -> Self {
        let phi = (0..grid.len()).map(|i| f(grid.k_vector(i))).collect();
        PhotonWaveFunction { grid, phi, time: 0.0, medium }
    }

    /// `Σ_k φ*·φ dk^d`.
    pub fn norm(&self) -> f64 {
        sum::sum(self.phi.iter().map(norm_sqr3)) * self.grid.k_cell()
    }

    /// Scales φ to unit norm. A zero φ is left untouched.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let s = 1.0 / n.sqrt();
            for v in &mut self.phi {
                *v = scale3(v, s);
            }
        }
    }

    /// `max_k |k̂·φ| / max_k |φ|`.
    pub fn transversality_residual(&self) -> f64 {
        longitudinal_fraction(&self.grid, &self.phi)
    }

    /// `-ick φ`, the exact time derivative in vacuum.
    pub fn time_derivative(&self) -> Vec<CVec3> {
        let c = self.medium.c;
        (0..self.grid.len())
            .map(|i| self.phi[i] * (-I * c * self.grid.k_vector(i).norm()))
            .collect()
    }

    pub fn as_field(&self) -> SpectralVectorField {
        SpectralVectorField {
            grid: self.grid,
            values: self.phi.clone(),
            time: self.time,
            role: FieldRole::PhotonWf,
        }
    }

    pub fn from_field(field: SpectralVectorField, medium: MediumParams) -> Result<Self> {
        if field.role != FieldRole::PhotonWf {
            return Err(structural(format!("expected a photon wave function, got {:?}", field.role)));
        }
        Self::new(field.grid, field.values, field.time, medium)
    }
}

pub(crate) fn longitudinal_fraction(grid: &KGrid, values: &[CVec3]) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (i, v) in values.iter().enumerate() {
        scale = scale.max(norm_sqr3(v).sqrt());
        let k = grid.k_vector(i);
        let kn = k.norm();
        if kn > 0.0 {
            worst = worst.max(rdot(&k, v).norm() / kn);
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        0.0
    }
}

/// `φ = [𝓔 + (i/ck) ∂𝓔/∂t] / (2n(k))`, the positive-frequency part of a
/// vacuum field. `φ(0) = 0`.
pub fn phi_from_electric(
    e: &SpectralVectorField,
    de_dt: &SpectralVectorField,
    medium: &MediumParams,
) -> Result<PhotonWaveFunction> {
    e.check_compatible(de_dt)?;
    if !medium.is_free_space() {
        return Err(structural("the photon wave function is defined for vacuum fields only (sigma = 0)"));
    }
    for (what, f) in [("transversality of E", e), ("transversality of dE/dt", de_dt)] {
        let v = longitudinal_fraction(&f.grid, &f.values);
        if v > TRANSVERSE_TOLERANCE {
            return Err(Error::Constraint {
                what: what.into(),
                magnitude: v,
                tolerance: TRANSVERSE_TOLERANCE,
            });
        }
    }
    let grid = e.grid;
    let phi = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let k = grid.k_vector(i);
            let n = weight(&grid, medium, &k);
            if n == 0.0 {
                return czero3();
            }
            let w = medium.c * k.norm();
            (e.values[i] + de_dt.values[i] * (I / w)) * Complex64::new(0.5 / n, 0.0)
        })
        .collect();
    PhotonWaveFunction::new(grid, phi, e.time, *medium)
}

/// `𝓔 = n[φ(k) + φ*(-k)]` and `𝓑 = (n/ck) k×[φ(k) - φ*(-k)]`.
pub fn electric_from_phi(phi: &PhotonWaveFunction) -> (SpectralVectorField, SpectralVectorField) {
    let grid = phi.grid;
    let m = &phi.medium;
    let pairs: Vec<(CVec3, CVec3)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let k = grid.k_vector(i);
            let n = weight(&grid, m, &k);
            if n == 0.0 {
                return (czero3(), czero3());
            }
            let partner = conj3(&phi.phi[grid.negated(i)]);
            let e = scale3(&(phi.phi[i] + partner), n);
            let b = scale3(&rcross(&k, &(phi.phi[i] - partner)), n / (m.c * k.norm()));
            (e, b)
        })
        .collect();
    let field = |role, values| SpectralVectorField { grid, values, time: phi.time, role };
    (
        field(FieldRole::Electric, pairs.iter().map(|p| p.0).collect()),
        field(FieldRole::Magnetic, pairs.iter().map(|p| p.1).collect()),
    )
}

/// `∂𝓔/∂t = -iωn[φ(k) - φ*(-k)]` for a vacuum φ.
pub fn electric_derivative_from_phi(phi: &PhotonWaveFunction) -> SpectralVectorField {
    let grid = phi.grid;
    let m = &phi.medium;
    let values = (0..grid.len())
        .map(|i| {
            let k = grid.k_vector(i);
            let n = weight(&grid, m, &k);
            let partner = conj3(&phi.phi[grid.negated(i)]);
            (phi.phi[i] - partner) * (-I * m.c * k.norm() * n)
        })
        .collect();
    SpectralVectorField { grid, values, time: phi.time, role: FieldRole::Electric }
}

/// Vacuum fields of φ with their exact time derivatives
/// `(𝓔, 𝓑, ∂𝓔/∂t, ∂𝓑/∂t)`, the latter from `∂𝓑/∂t` rebuilt out of
/// `∂𝓔/∂t` and `∂²𝓔/∂t² = -(ck)²𝓔`.
pub fn fields_with_derivatives(
    phi: &PhotonWaveFunction,
) -> (SpectralVectorField, SpectralVectorField, SpectralVectorField, SpectralVectorField) {
    let (e, b) = electric_from_phi(phi);
    let de = electric_derivative_from_phi(phi);
    let grid = phi.grid;
    let m = phi.medium;
    let db_values = (0..grid.len())
        .map(|i| {
            let k = grid.k_vector(i);
            let w2 = m.c * m.c * k.norm_squared();
            crate::maxwell::b_mode(&k, &de.values[i], &scale3(&e.values[i], -w2), &m)
        })
        .collect();
    let db = SpectralVectorField { grid, values: db_values, time: phi.time, role: FieldRole::Magnetic };
    (e, b, de, db)
}

/// `ħck (v - k̂(k̂·v))`; the zero mode maps to zero.
pub fn hamiltonian_mode(k: &RVec3, v: &CVec3, medium: &MediumParams) -> CVec3 {
    let kn = k.norm();
    if kn == 0.0 {
        return czero3();
    }
    let khat = k / kn;
    let along = rdot(&khat, v);
    let proj = v - khat.map(|x| along * x);
    scale3(&proj, medium.hbar * medium.c * kn)
}

/// Applies `ℍ_αβ = ħck(δ_αβ - k_α k_β / k²)` mode by mode.
pub fn hamiltonian_apply(phi: &PhotonWaveFunction) -> PhotonWaveFunction {
    let grid = phi.grid;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| hamiltonian_mode(&grid.k_vector(i), &phi.phi[i], &phi.medium))
        .collect();
    PhotonWaveFunction { grid, phi: values, time: phi.time, medium: phi.medium }
}

/// `φ(k, t₀ + t) = φ(k, t₀) e^{-ickt}`.
pub fn evolve_phi(phi: &PhotonWaveFunction, t: f64) -> PhotonWaveFunction {
    let grid = phi.grid;
    let c = phi.medium.c;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let phase = Complex64::from_polar(1.0, -c * grid.k_vector(i).norm() * t);
            phi.phi[i] * phase
        })
        .collect();
    PhotonWaveFunction { grid, phi: values, time: phi.time + t, medium: phi.medium }
}

/// `max_k |ℍφ - iħ ∂φ/∂t|` (component max-norm).
pub fn schrodinger_residual(phi: &PhotonWaveFunction, dphi_dt: &[CVec3]) -> Result<f64> {
    if dphi_dt.len() != phi.phi.len() {
        return Err(structural("time derivative does not share the φ grid"));
    }
    let hphi = hamiltonian_apply(phi);
    let hbar = phi.medium.hbar;
    Ok(hphi
        .phi
        .iter()
        .zip(dphi_dt)
        .flat_map(|(h, d)| (h - d * (I * hbar)).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max))
}

/// Removes the longitudinal part of φ in place; the zero mode is cleared.
pub fn project_transverse(phi: &mut PhotonWaveFunction) {
    let grid = phi.grid;
    for (i, v) in phi.phi.iter_mut().enumerate() {
        let k = grid.k_vector(i);
        let kn = k.norm();
        if kn == 0.0 {
            *v = czero3();
            continue;
        }
        let khat = k / kn;
        let along = rdot(&khat, v);
        *v -= khat.map(|x| along * x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_is_one_at_the_reference_wavenumber() {
        let m = MediumParams::natural();
        let k = 2.0 * (2.0 * PI).powi(3);
        assert!((normalization_weight(k, &m, 3).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(normalization_weight(0.0, &m, 3).unwrap(), 0.0);
        assert!(normalization_weight(-1.0, &m, 3).is_err());
    }

    #[test]
    fn single_mode_fields() {
        let g = KGrid::new(3, 8, 2.0 * PI).unwrap();
        let m = MediumParams::natural();
        let i1 = g.index_of_signed([2, 0, 0]);
        let a = Complex64::new(0.3, 0.4);
        let mut phi = PhotonWaveFunction::new(g, vec![czero3(); g.len()], 0.0, m).unwrap();
        phi.phi[i1] = CVec3::new(czero3()[0], a, czero3()[0]);
        let (e, b) = electric_from_phi(&phi);
        let n = normalization_weight(2.0, &m, 3).unwrap();
        assert!((e.values[i1][1] - a * n).norm() < 1e-15);
        assert!((e.values[g.negated(i1)][1] - a.conj() * n).norm() < 1e-15);
        assert!((b.values[i1][2] - a * n).norm() < 1e-15);
        assert!(b.values[i1][0].norm() + b.values[i1][1].norm() < 1e-15);
    }

    #[test]
    fn half_period_negates() {
        let g = KGrid::new(1, 8, 2.0 * PI).unwrap();
        let m = MediumParams::natural();
        let phi = PhotonWaveFunction::from_fn(g, m, |k| CVec3::new(czero3()[0], Complex64::new(k[0], 1.0), czero3()[0]));
        let i = g.index_of_signed([1, 0, 0]);
        let out = evolve_phi(&phi, PI);
        assert!((out.phi[i] + phi.phi[i]).norm() < 1e-15);
    }

    #[test]
    fn vacuum_is_required() {
        let g = KGrid::new(1, 8, 1.0).unwrap();
        let z = SpectralVectorField::zeros(g, FieldRole::Electric);
        let m = MediumParams::natural().with_sigma(1.0).unwrap();
        assert!(phi_from_electric(&z, &z, &m).is_err());
    }
}
