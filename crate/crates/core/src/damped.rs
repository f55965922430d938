//! The wave function in an ohmic medium and its slowly varying envelope
//! approximation `φ = Υ e^{-iω̄t}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{structural, Result};
use crate::maxwell::{damping_regime, mode_propagator, DampingRegime};
use crate::medium::MediumParams;
use crate::photon::PhotonWaveFunction;
use crate::spectral::{czero3, norm_sqr3, CVec3, KGrid};
use crate::sum;

/// Default upper bound on `γ/ω̄` for the envelope approximation.
pub const DEFAULT_ADMISSIBILITY: f64 = 0.1;

/// Solution of `φ̈ + γφ̇ + ω²φ = 0` with `φ̇(0) = -iωφ(0)`, split into the
/// part rotating as `e^{-iω_d t}` and the part rotating as `e^{+iω_d t}`.
/// Critically and overdamped modes do not rotate; all of their content is
/// reported in `positive`.
#[derive(Debug, Clone, PartialEq)]
pub struct OhmicEvolution {
    pub grid: KGrid,
    pub time: f64,
    pub positive: Vec<CVec3>,
    pub negative: Vec<CVec3>,
}

impl OhmicEvolution {
    pub fn total(&self) -> Vec<CVec3> {
        self.positive.iter().zip(&self.negative).map(|(p, n)| p + n).collect()
    }

    /// `Σ|φ|² dk^d` of the full solution.
    pub fn norm(&self) -> f64 {
        sum::sum(self.total().iter().map(norm_sqr3)) * self.grid.k_cell()
    }
}

/// Coefficients `(A, B)` of `φ = A e^{(-γ/2 - iω_d)t} + B e^{(-γ/2 + iω_d)t}`
/// for unit `φ(0)` and `φ̇(0) = -iω`.
fn split_coefficients(omega: f64, gamma: f64) -> (f64, Complex64, Complex64) {
    let half = 0.5 * gamma;
    let wd = ((omega - half) * (omega + half)).sqrt();
    let a = Complex64::new(omega + wd, half) / (2.0 * wd);
    let b = (Complex64::new(-half, omega - wd)) / (Complex64::new(0.0, -2.0 * wd));
    (wd, a, b)
}

pub fn evolve_phi_ohmic(phi: &PhotonWaveFunction, medium: &MediumParams, t: f64) -> OhmicEvolution {
    let grid = phi.grid;
    let gamma = medium.gamma();
    let pairs: Vec<(CVec3, CVec3)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let v = &phi.phi[i];
            let omega = medium.c * grid.k_vector(i).norm();
            match damping_regime(omega, gamma) {
                DampingRegime::Free => (v * Complex64::from_polar(1.0, -omega * t), czero3()),
                DampingRegime::Underdamped => {
                    let (wd, a, b) = split_coefficients(omega, gamma);
                    let decay = (-0.5 * gamma * t).exp();
                    let pos = a * Complex64::from_polar(decay, -wd * t);
                    let neg = b * Complex64::from_polar(decay, wd * t);
                    (v * pos, v * neg)
                }
                DampingRegime::Critical | DampingRegime::Overdamped => {
                    let p = mode_propagator(omega, gamma, t);
                    (v * Complex64::new(p[0][0], -omega * p[0][1]), czero3())
                }
            }
        })
        .collect();
    OhmicEvolution {
        grid,
        time: phi.time + t,
        positive: pairs.iter().map(|p| p.0).collect(),
        negative: pairs.iter().map(|p| p.1).collect(),
    }
}

/// The envelope `Υ(k,t)` together with its carrier and damping.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeState {
    pub grid: KGrid,
    pub upsilon: Vec<CVec3>,
    pub omega_bar: f64,
    pub gamma: f64,
    pub time: f64,
    /// Largest `γ/ω̄` for which the approximation is considered valid.
    pub admissibility: f64,
}

impl EnvelopeState {
    pub fn new(grid: KGrid, upsilon: Vec<CVec3>, omega_bar: f64, gamma: f64) -> Result<Self> {
        if upsilon.len() != grid.len() {
            return Err(structural("envelope length does not match the grid"));
        }
        if !(omega_bar > 0.0) || !(gamma >= 0.0) {
            return Err(structural(format!("need omega_bar > 0 and gamma ≥ 0, got {omega_bar}, {gamma}")));
        }
        Ok(EnvelopeState {
            grid,
            upsilon,
            omega_bar,
            gamma,
            time: 0.0,
            admissibility: DEFAULT_ADMISSIBILITY,
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.gamma / self.omega_bar < self.admissibility
    }

    pub fn norm(&self) -> f64 {
        sum::sum(self.upsilon.iter().map(norm_sqr3)) * self.grid.k_cell()
    }
}

/// `μ = -i(ω² - ω̄²)/(2ω̄) - γ/2`, the envelope growth rate of one mode.
pub fn envelope_rate(omega: f64, omega_bar: f64, gamma: f64) -> Complex64 {
    Complex64::new(-0.5 * gamma, -0.5 * (omega * omega - omega_bar * omega_bar) / omega_bar)
}

/// `|Ϋ| / (ω̄|Υ̇|) = |μ|/ω̄` along an envelope trajectory.
pub fn admissibility_ratio(omega: f64, omega_bar: f64, gamma: f64) -> f64 {
    envelope_rate(omega, omega_bar, gamma).norm() / omega_bar
}

/// `Υ(t) = Υ(0) exp(μt)` mode by mode, with the per-mode frequencies `omega`.
pub fn svea_evolve(env: &EnvelopeState, omega: &[f64], t: f64) -> Result<EnvelopeState> {
    if omega.len() != env.upsilon.len() {
        return Err(structural("one frequency per mode is required"));
    }
    if !env.is_admissible() {
        log::debug!(
            "gamma/omega_bar = {:.3e} is outside the envelope approximation (limit {})",
            env.gamma / env.omega_bar,
            env.admissibility
        );
    }
    let upsilon = env
        .upsilon
        .par_iter()
        .zip(omega.par_iter())
        .map(|(u, &w)| u * (envelope_rate(w, env.omega_bar, env.gamma) * t).exp())
        .collect();
    Ok(EnvelopeState { upsilon, time: env.time + t, ..env.clone() })
}

/// Vacuum dispersion `c|k|` on every node.
pub fn vacuum_frequencies(grid: &KGrid, medium: &MediumParams) -> Vec<f64> {
    (0..grid.len()).map(|i| medium.c * grid.k_vector(i).norm()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SveaErrorPoint {
    pub t: f64,
    pub exact_norm: f64,
    pub svea_norm: f64,
    pub rel_error: f64,
    pub gamma_over_omegabar: f64,
}

pub const ERROR_CURVE_HEADER: &str = "t,exact_norm,svea_norm,rel_error,gamma_over_omegabar";

impl SveaErrorPoint {
    pub fn csv(&self) -> String {
        [self.t, self.exact_norm, self.svea_norm, self.rel_error, self.gamma_over_omegabar]
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn error_curve_csv(points: &[SveaErrorPoint]) -> String {
    let mut out = String::from(ERROR_CURVE_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&p.csv());
        out.push('\n');
    }
    out
}

/// Compares the envelope approximation with the exact ohmic evolution.
///
/// At each time the exact positive-frequency component, re-enveloped by
/// `e^{iω̄t}`, is set against `svea_evolve(φ₀)`; `rel_error` is their L²
/// distance over the L² size of the exact envelope. Norms are `Σ|·|²dk^d`.
pub fn svea_error(phi0: &PhotonWaveFunction, medium: &MediumParams, omega_bar: f64, times: &[f64]) -> Result<Vec<SveaErrorPoint>> {
    let grid = phi0.grid;
    let env0 = EnvelopeState::new(grid, phi0.phi.clone(), omega_bar, medium.gamma())?;
    let omegas = vacuum_frequencies(&grid, medium);
    let cell = grid.k_cell();
    times
        .iter()
        .map(|&t| {
            let exact = evolve_phi_ohmic(phi0, medium, t);
            let carrier = Complex64::from_polar(1.0, omega_bar * t);
            let approx = svea_evolve(&env0, &omegas, t)?;
            let (mut en, mut sn, mut dn) = (sum::Accumulator::default(), sum::Accumulator::default(), sum::Accumulator::default());
            for (p, u) in exact.positive.iter().zip(&approx.upsilon) {
                let e = p * carrier;
                en.add(norm_sqr3(&e));
                sn.add(norm_sqr3(u));
                dn.add(norm_sqr3(&(e - u)));
            }
            let rel_error = if en.value() > 0.0 { (dn.value() / en.value()).sqrt() } else { dn.value().sqrt() };
            Ok(SveaErrorPoint {
                t,
                exact_norm: en.value() * cell,
                svea_norm: sn.value() * cell,
                rel_error,
                gamma_over_omegabar: medium.gamma() / omega_bar,
            })
        })
        .collect()
}

/// First-order slow-damping model of the exact norm of a single mode:
/// `|φ(t)|² ≈ e^{-γt} |φ(0)|² (1 + (γ/2ω) sin 2ωt)`.
pub fn slow_damping_norm(norm0: f64, omega: f64, gamma: f64, t: f64) -> f64 {
    (-gamma * t).exp() * norm0 * (1.0 + gamma / (2.0 * omega) * (2.0 * omega * t).sin())
}
