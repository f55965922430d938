use num_complex::Complex64;
use serde::Serialize;

use super::state::MaxwellState;
use crate::error::{structural, Result};
use crate::medium::MediumParams;
use crate::spectral::{czero3, rcross, rdot, scale3, CVec3, FieldRole, ScalarSpectrum, SpectralVectorField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Max-norm residuals of the four k-space Maxwell equations
///
/// * `ik·𝓔 - ϱ/ε₀`
/// * `ik·𝓑`
/// * `ik×𝓔 + ∂𝓑/∂t`
/// * `ik×𝓑 - μ₀𝓙 - ∂𝓔/∂t / c²`
///
/// `scale` holds, per equation, the largest magnitude of any single term so
/// that [`MaxwellResiduals::relative`] is dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellResiduals {
    pub gauss_e: f64,
    pub gauss_b: f64,
    pub faraday: f64,
    pub ampere: f64,
    pub scale: [f64; 4],
}

impl MaxwellResiduals {
    pub fn absolute(&self) -> [f64; 4] {
        [self.gauss_e, self.gauss_b, self.faraday, self.ampere]
    }

    pub fn max_absolute(&self) -> f64 {
        self.absolute().into_iter().fold(0.0, f64::max)
    }

    /// Each residual divided by its term scale (left absolute when the scale is zero).
    pub fn relative(&self) -> [f64; 4] {
        let abs = self.absolute();
        std::array::from_fn(|i| if self.scale[i] > 0.0 { abs[i] / self.scale[i] } else { abs[i] })
    }

    pub fn max_relative(&self) -> f64 {
        self.relative().into_iter().fold(0.0, f64::max)
    }
}

fn max_component(v: &CVec3) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn vnorm(v: &CVec3) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn same_grid(fields: &[&SpectralVectorField]) -> Result<()> {
    for f in &fields[1..] {
        fields[0].check_compatible(f)?;
    }
    Ok(())
}

/// Evaluates all four equations for a state, its sources and time derivatives.
pub fn maxwell_residuals(
    state: &MaxwellState,
    rho: &ScalarSpectrum,
    current: &SpectralVectorField,
    de_dt: &SpectralVectorField,
    db_dt: &SpectralVectorField,
) -> Result<MaxwellResiduals> {
    let (e, b) = (&state.electric, &state.magnetic);
    same_grid(&[e, b, current, de_dt, db_dt])?;
    if rho.grid != e.grid || rho.values.len() != e.values.len() {
        return Err(structural("charge spectrum does not share the field grid"));
    }
    let m: &MediumParams = &state.medium;
    let inv_c2 = 1.0 / (m.c * m.c);
    let mut out = MaxwellResiduals {
        gauss_e: 0.0,
        gauss_b: 0.0,
        faraday: 0.0,
        ampere: 0.0,
        scale: [0.0; 4],
    };
    for idx in 0..e.grid.len() {
        let k = e.grid.k_vector(idx);
        let kn = k.norm();
        let (ev, bv, jv) = (&e.values[idx], &b.values[idx], &current.values[idx]);
        let (dev, dbv) = (&de_dt.values[idx], &db_dt.values[idx]);
        let r = rho.values[idx] / m.epsilon0;

        out.gauss_e = out.gauss_e.max((I * rdot(&k, ev) - r).norm());
        out.scale[0] = out.scale[0].max((kn * vnorm(ev)).max(r.norm()));

        out.gauss_b = out.gauss_b.max(rdot(&k, bv).norm());
        out.scale[1] = out.scale[1].max(kn * vnorm(bv));

        let ikxe = rcross(&k, ev) * I;
        out.faraday = out.faraday.max(max_component(&(ikxe + dbv)));
        out.scale[2] = out.scale[2].max(max_component(&ikxe).max(max_component(dbv)));

        let ikxb = rcross(&k, bv) * I;
        let mj = jv * Complex64::new(m.mu0, 0.0);
        let de = dev * Complex64::new(inv_c2, 0.0);
        out.ampere = out.ampere.max(max_component(&(ikxb - mj - de)));
        out.scale[3] = out.scale[3]
            .max(max_component(&ikxb))
            .max(max_component(&mj))
            .max(max_component(&de));
    }
    Ok(out)
}

/// Residuals of a source-free state in vacuum (`ϱ = 0`, `𝓙 = 0`).
pub fn free_space_residuals(
    state: &MaxwellState,
    de_dt: &SpectralVectorField,
    db_dt: &SpectralVectorField,
) -> Result<MaxwellResiduals> {
    let grid = state.electric.grid;
    let current = SpectralVectorField::zeros(grid, FieldRole::Current);
    maxwell_residuals(state, &ScalarSpectrum::zeros(grid), &current, de_dt, db_dt)
}

/// `max_k |ik·𝓙 + ∂ϱ/∂t|`.
pub fn continuity_residual(rho_dot: &ScalarSpectrum, current: &SpectralVectorField) -> Result<f64> {
    current.check_len()?;
    if rho_dot.grid != current.grid || rho_dot.values.len() != current.values.len() {
        return Err(structural("charge spectrum does not share the current grid"));
    }
    let grid = &current.grid;
    Ok((0..grid.len())
        .map(|i| (I * rdot(&grid.k_vector(i), &current.values[i]) + rho_dot.values[i]).norm())
        .fold(0.0, f64::max))
}

/// `𝓑 = ik × [σμ₀/k² 𝓔 + ∂𝓔/∂t / (ck)²]`, with `𝓑(0) = 0`.
pub fn b_from_e(e: &SpectralVectorField, de_dt: &SpectralVectorField, medium: &MediumParams) -> Result<SpectralVectorField> {
    e.check_compatible(de_dt)?;
    let grid = e.grid;
    let values = (0..grid.len())
        .map(|i| b_mode(&grid.k_vector(i), &e.values[i], &de_dt.values[i], medium))
        .collect();
    SpectralVectorField::new(grid, values, e.time, FieldRole::Magnetic)
}

pub(crate) fn b_mode(k: &crate::spectral::RVec3, e: &CVec3, de: &CVec3, medium: &MediumParams) -> CVec3 {
    let k2 = k.norm_squared();
    if k2 == 0.0 {
        return czero3();
    }
    let c2k2 = medium.c * medium.c * k2;
    let x = e * Complex64::new(medium.sigma * medium.mu0 / k2, 0.0) + scale3(de, 1.0 / c2k2);
    rcross(k, &x) * I
}
