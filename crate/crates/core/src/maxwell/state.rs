use num_complex::Complex64;
use rayon::prelude::*;

use super::modes::mode_propagator;
use super::residuals::b_mode;
use crate::error::{structural, Result};
use crate::medium::MediumParams;
use crate::spectral::{rcross, rdot, scale3, CVec3, FieldRole, SpectralVectorField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Electric and magnetic spectra at one instant in one medium.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellState {
    pub electric: SpectralVectorField,
    pub magnetic: SpectralVectorField,
    pub medium: MediumParams,
    pub time: f64,
}

/// A state together with its exact time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub state: MaxwellState,
    pub de_dt: SpectralVectorField,
    pub db_dt: SpectralVectorField,
}

impl MaxwellState {
    pub fn new(electric: SpectralVectorField, magnetic: SpectralVectorField, medium: MediumParams) -> Result<Self> {
        electric.check_compatible(&magnetic)?;
        if electric.time != magnetic.time {
            return Err(structural(format!(
                "electric field at t = {} but magnetic field at t = {}",
                electric.time, magnetic.time
            )));
        }
        let time = electric.time;
        Ok(MaxwellState { electric, magnetic, medium, time })
    }

    /// Builds the magnetic field from `𝓔` and `∂𝓔/∂t`.
    pub fn from_electric(electric: SpectralVectorField, de_dt: &SpectralVectorField, medium: MediumParams) -> Result<Self> {
        let magnetic = super::b_from_e(&electric, de_dt, &medium)?;
        Self::new(electric, magnetic, medium)
    }

    /// `∂𝓔/∂t = c²(ik×𝓑 - μ₀σ𝓔)` (Ampère with `𝓙 = σ𝓔`).
    pub fn electric_derivative(&self) -> SpectralVectorField {
        let m = &self.medium;
        let grid = self.electric.grid;
        let values = (0..grid.len())
            .map(|i| {
                let k = grid.k_vector(i);
                let curl = rcross(&k, &self.magnetic.values[i]) * I;
                scale3(&(curl - scale3(&self.electric.values[i], m.mu0 * m.sigma)), m.c * m.c)
            })
            .collect();
        SpectralVectorField { grid, values, time: self.time, role: FieldRole::Electric }
    }

    /// Largest `|k̂·𝓔|` and `|k̂·𝓑|` relative to the largest field magnitude.
    pub fn transversality_residual(&self) -> f64 {
        let grid = &self.electric.grid;
        let mut worst = 0.0f64;
        for i in 0..grid.len() {
            let k = grid.k_vector(i);
            let kn = k.norm();
            if kn == 0.0 {
                continue;
            }
            worst = worst
                .max(rdot(&k, &self.electric.values[i]).norm() / kn)
                .max(rdot(&k, &self.magnetic.values[i]).norm() / kn);
        }
        let scale = self.electric.max_abs().max(self.magnetic.max_abs());
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

/// Advances every mode by `t` with its exact damped-oscillator solution and
/// rebuilds `𝓑` from the evolved `𝓔`. The derivatives returned alongside come
/// from the closed-form mode solution.
pub fn evolve_state_with_derivatives(state: &MaxwellState, t: f64) -> Result<EvolvedState> {
    state.electric.check_compatible(&state.magnetic)?;
    let m = state.medium;
    let grid = state.electric.grid;
    let de0 = state.electric_derivative();
    let gamma = m.gamma();
    let per_mode: Vec<(CVec3, CVec3, CVec3, CVec3)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let k = grid.k_vector(i);
            let w = m.c * k.norm();
            let p = mode_propagator(w, gamma, t);
            let (e0, d0) = (&state.electric.values[i], &de0.values[i]);
            let e = scale3(e0, p[0][0]) + scale3(d0, p[0][1]);
            let de = scale3(e0, p[1][0]) + scale3(d0, p[1][1]);
            let dde = -scale3(&de, gamma) - scale3(&e, w * w);
            let b = b_mode(&k, &e, &de, &m);
            let db = b_mode(&k, &de, &dde, &m);
            (e, de, b, db)
        })
        .collect();
    let time = state.time + t;
    let field = |role, pick: fn(&(CVec3, CVec3, CVec3, CVec3)) -> CVec3| SpectralVectorField {
        grid,
        values: per_mode.iter().map(pick).collect(),
        time,
        role,
    };
    Ok(EvolvedState {
        state: MaxwellState {
            electric: field(FieldRole::Electric, |x| x.0),
            magnetic: field(FieldRole::Magnetic, |x| x.2),
            medium: m,
            time,
        },
        de_dt: field(FieldRole::Electric, |x| x.1),
        db_dt: field(FieldRole::Magnetic, |x| x.3),
    })
}

/// The state at `state.time + t`.
pub fn evolve_state(state: &MaxwellState, t: f64) -> Result<MaxwellState> {
    Ok(evolve_state_with_derivatives(state, t)?.state)
}
