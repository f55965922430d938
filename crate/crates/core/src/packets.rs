//! Gaussian wave packets, their spatial and spectral moments, and the
//! dispersion of `ω = c|k|`.

use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{structural, Error, Result, Violation};
use crate::medium::MediumParams;
use crate::observables::{energy_phi, momentum_phi};
use crate::photon::{evolve_phi, PhotonWaveFunction};
use crate::spectral::{czero3, norm_sqr3, rcross, rdot, scale3, synthesize_values, to_complex, CVec3, KGrid, RVec3};
use crate::sum;

/// Largest tolerated packet weight outside the k-grid.
pub const K_EDGE_TOLERANCE: f64 = 1e-8;

/// Real-space weight near the box edge above which moments are flagged.
pub const WRAP_WARN_FRACTION: f64 = 1e-6;

/// How the polarization is made transverse mode by mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransverseMode {
    /// `(1 - k̂k̂ᵀ) ε`.
    #[default]
    Projector,
    /// `-k × (k̂₀ × ε) / |k₀|`, which equals `ε` at `k₀` and is polynomial in
    /// `k`, so the packet stays smooth through `k = 0`.
    CrossProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketSpec {
    pub k0: RVec3,
    pub delta_k: f64,
    pub r0: RVec3,
    pub polarization: CVec3,
    pub amplitude: f64,
    pub transverse: TransverseMode,
}

impl WavePacketSpec {
    pub fn new(k0: RVec3, delta_k: f64, r0: RVec3, polarization: CVec3) -> Self {
        WavePacketSpec {
            k0,
            delta_k,
            r0,
            polarization,
            amplitude: 1.0,
            transverse: TransverseMode::Projector,
        }
    }

    pub fn with_transverse(mut self, mode: TransverseMode) -> Self {
        self.transverse = mode;
        self
    }

    /// Every grid-fit bound the packet fails, addressed by field name.
    pub fn violations(&self, grid: &KGrid) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.delta_k.is_finite() && self.delta_k > 0.0) {
            out.push(Violation::new("delta_k", format!("must be positive, got {}", self.delta_k)));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            out.push(Violation::new("amplitude", format!("must be positive, got {}", self.amplitude)));
        }
        let k0n = self.k0.norm();
        if self.delta_k > 0.0 && !(k0n > 3.0 * self.delta_k) {
            out.push(Violation::new(
                "k0",
                format!("|k0| = {k0n} must exceed 3·delta_k = {}", 3.0 * self.delta_k),
            ));
        }
        for a in grid.dim()..3 {
            if self.k0[a] != 0.0 {
                out.push(Violation::new("k0", format!("component {} lies outside a {}-D grid", a + 1, grid.dim())));
            }
            if self.r0[a] != 0.0 {
                out.push(Violation::new("r0", format!("component {} lies outside a {}-D grid", a + 1, grid.dim())));
            }
        }
        let pn = norm_sqr3(&self.polarization).sqrt();
        if !(pn > 0.0) {
            out.push(Violation::new("polarization", "must be non-zero"));
        } else if k0n > 0.0 {
            let along = rdot(&(self.k0 / k0n), &self.polarization).norm() / pn;
            if along > 1e-12 {
                out.push(Violation::new(
                    "polarization",
                    format!("must be orthogonal to k0; relative overlap {along:.3e}"),
                ));
            }
        }
        if self.delta_k > 0.0 {
            let w = k_edge_weight(self, grid);
            if w > K_EDGE_TOLERANCE {
                out.push(Violation::new(
                    "delta_k",
                    format!("packet weight outside the k-grid is {w:.3e} (limit {K_EDGE_TOLERANCE:.0e})"),
                ));
            }
            let w = r_edge_weight(self, grid);
            if w > WRAP_WARN_FRACTION {
                out.push(Violation::new(
                    "r0",
                    format!("packet weight beyond the box edge is {w:.3e} (limit {WRAP_WARN_FRACTION:.0e})"),
                ));
            }
        }
        out
    }

    pub fn validate(&self, grid: &KGrid) -> Result<()> {
        let v = self.violations(grid);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}

/// Weight of the Gaussian density `exp(-|k-k₀|²/Δk²)` falling outside the
/// k-grid, summed over both faces of every axis.
pub fn k_edge_weight(spec: &WavePacketSpec, grid: &KGrid) -> f64 {
    let half = grid.n() as f64 / 2.0;
    let (lo, hi) = (-half * grid.dk(), (half - 1.0) * grid.dk());
    (0..grid.dim())
        .map(|a| {
            let k = spec.k0[a];
            0.5 * erfc((hi - k) / spec.delta_k) + 0.5 * erfc((k - lo) / spec.delta_k)
        })
        .sum()
}

/// Weight of the spatial density `exp(-|r-r₀|²Δk²)` beyond the box faces.
pub fn r_edge_weight(spec: &WavePacketSpec, grid: &KGrid) -> f64 {
    let half = grid.box_length() / 2.0;
    (0..grid.dim())
        .map(|a| {
            let r = spec.r0[a];
            0.5 * erfc((half - r) * spec.delta_k) + 0.5 * erfc((r + half) * spec.delta_k)
        })
        .sum()
}

fn transverse_polarization(mode: TransverseMode, k: &RVec3, k0: &RVec3, pol: &CVec3) -> CVec3 {
    match mode {
        TransverseMode::Projector => {
            let kn = k.norm();
            let khat = k / kn;
            let along = rdot(&khat, pol);
            pol - khat.map(|x| along * x)
        }
        TransverseMode::CrossProduct => {
            let k0n = k0.norm();
            let inner = rcross(&(k0 / k0n), pol);
            -scale3(&rcross(k, &inner), 1.0 / k0n)
        }
    }
}

fn finish(grid: KGrid, medium: &MediumParams, mut phi: Vec<CVec3>, amplitude: f64) -> PhotonWaveFunction {
    for (i, v) in phi.iter_mut().enumerate() {
        if i == 0 || grid.is_nyquist(i) {
            *v = czero3();
        }
    }
    let mut wf = PhotonWaveFunction { grid, phi, time: 0.0, medium: *medium };
    wf.normalize();
    if amplitude != 1.0 {
        for v in &mut wf.phi {
            *v = scale3(v, amplitude);
        }
    }
    wf
}

/// `φ(k) = A·T(k)[ε]·exp(-|k-k₀|²/(2Δk²))·e^{-ik·r₀}`, scaled so that
/// `Σ|φ|²dk^d = A²`. The zero mode and Nyquist nodes are left empty.
pub fn build_gaussian_packet(spec: &WavePacketSpec, grid: &KGrid, medium: &MediumParams) -> Result<PhotonWaveFunction> {
    spec.validate(grid)?;
    let inv = 1.0 / (2.0 * spec.delta_k * spec.delta_k);
    let phi = (0..grid.len())
        .map(|i| {
            let k = grid.k_vector(i);
            if k.norm() == 0.0 {
                return czero3();
            }
            let g = (-(k - spec.k0).norm_squared() * inv).exp();
            let phase = Complex64::from_polar(g, -k.dot(&spec.r0));
            transverse_polarization(spec.transverse, &k, &spec.k0, &spec.polarization) * phase
        })
        .collect();
    Ok(finish(*grid, medium, phi, spec.amplitude))
}

/// A packet whose spectrum lies on a single k-grid axis: Gaussian along
/// `k₀`, zero transverse width, fixed polarization. In real space it is a
/// slab filling the box transversally, and it is an exact eigenstate of
/// helicity and of the spin component along `k₀`.
pub fn build_axial_packet(spec: &WavePacketSpec, grid: &KGrid, medium: &MediumParams) -> Result<PhotonWaveFunction> {
    let mut violations = spec.violations(grid);
    violations.retain(|v| v.field != "r0");
    let axes: Vec<usize> = (0..3).filter(|&a| spec.k0[a] != 0.0).collect();
    if axes.len() != 1 {
        violations.push(Violation::new("k0", "must point along a single grid axis"));
    }
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let axis = axes[0];
    let inv = 1.0 / (2.0 * spec.delta_k * spec.delta_k);
    let phi = (0..grid.len())
        .map(|i| {
            let k = grid.k_vector(i);
            let on_axis = (0..3).all(|a| a == axis || k[a] == 0.0);
            if !on_axis || k.norm() == 0.0 {
                return czero3();
            }
            let g = (-(k - spec.k0).norm_squared() * inv).exp();
            spec.polarization * Complex64::from_polar(g, -k.dot(&spec.r0))
        })
        .collect();
    Ok(finish(*grid, medium, phi, spec.amplitude))
}

/// Position and wave-vector moments of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub time: f64,
    pub mean_r: [f64; 3],
    pub delta_r: f64,
    pub mean_k: [f64; 3],
    pub delta_k: f64,
    pub product: f64,
    /// Share of `|ψ|²` within two points of the box edge.
    pub wrap_weight: f64,
    pub wrap_warning: bool,
}

fn moments(points: impl Fn(usize) -> RVec3, density: &[f64], dim: usize) -> (RVec3, f64) {
    let total = sum::sum(density.iter().copied());
    let mean = sum::sum_vec3(density.iter().enumerate().map(|(i, w)| points(i) * *w)) / total;
    let var = sum::sum(density.iter().enumerate().map(|(i, w)| (points(i) - mean).norm_squared() * w)) / total;
    (mean, (var / dim as f64).sqrt())
}

fn arr(v: RVec3) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

/// Moments of `|ψ(r)|²` with `ψ(r) = Σ_k φ(k) e^{ik·r} dk^d` and of `|φ(k)|²`.
/// Widths are RMS radii divided by `√d`.
pub fn spatial_moments(phi: &PhotonWaveFunction) -> Result<MomentReport> {
    let grid = &phi.grid;
    let psi = synthesize_values(grid, &phi.phi)?;
    let rho: Vec<f64> = psi.iter().map(norm_sqr3).collect();
    let spec: Vec<f64> = phi.phi.iter().map(norm_sqr3).collect();
    if sum::sum(spec.iter().copied()) == 0.0 {
        return Err(structural("moments of a zero wave function are undefined"));
    }
    let (mean_r, delta_r) = moments(|i| grid.r_vector(i), &rho, grid.dim());
    let (mean_k, delta_k) = moments(|i| grid.k_vector(i), &spec, grid.dim());
    let wrap_weight = crate::observables::edge_weight(grid, &psi);
    let wrap_warning = wrap_weight > WRAP_WARN_FRACTION;
    if wrap_warning {
        warn!("{wrap_weight:.3e} of the packet sits at the box edge at t = {}", phi.time);
    }
    Ok(MomentReport {
        time: phi.time,
        mean_r: arr(mean_r),
        delta_r,
        mean_k: arr(mean_k),
        delta_k,
        product: delta_r * delta_k,
        wrap_weight,
        wrap_warning,
    })
}

/// `(⟨r⟩(t₂) - ⟨r⟩(t₁)) / (t₂ - t₁)`, times measured from `phi.time`.
pub fn group_velocity_estimate(phi: &PhotonWaveFunction, t1: f64, t2: f64) -> Result<RVec3> {
    if !(t2 > t1) {
        return Err(structural(format!("need t2 > t1, got t1 = {t1}, t2 = {t2}")));
    }
    let a = spatial_moments(&evolve_phi(phi, t1))?;
    let b = spatial_moments(&evolve_phi(phi, t2))?;
    Ok((RVec3::from(b.mean_r) - RVec3::from(a.mean_r)) / (t2 - t1))
}

/// `(c|k₀+κ|, ω₀ + κ·v_g + ½κᵀHκ)` with `v_g = c k̂₀` and
/// `H = (c/|k₀|)(1 - k̂₀k̂₀ᵀ)`.
pub fn dispersion_expansion_check(k0: &RVec3, kappa: &RVec3, c: f64) -> Result<(f64, f64)> {
    let k0n = k0.norm();
    if !(kappa.norm() < k0n) {
        return Err(structural("the probe must be shorter than k0"));
    }
    let khat = k0 / k0n;
    let exact = c * (k0 + kappa).norm();
    let along = kappa.dot(&khat);
    let hessian = (kappa.norm_squared() - along * along) * c / k0n;
    Ok((exact, c * k0n + c * along + 0.5 * hessian))
}

/// One line of the packet time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSeriesRow {
    pub moments: MomentReport,
    pub energy: f64,
    pub momentum: [f64; 3],
}

pub const TIME_SERIES_HEADER: &str =
    "t,mean_r_1,mean_r_2,mean_r_3,delta_r,mean_k_1,mean_k_2,mean_k_3,delta_k,product,energy,momentum_1,momentum_2,momentum_3";

impl TimeSeriesRow {
    pub fn csv(&self) -> String {
        let m = &self.moments;
        let mut cells = vec![m.time];
        cells.extend(m.mean_r);
        cells.push(m.delta_r);
        cells.extend(m.mean_k);
        cells.extend([m.delta_k, m.product, self.energy]);
        cells.extend(self.momentum);
        cells.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Moments, energy and momentum of `φ` evolved in vacuum to each time.
pub fn time_series(phi: &PhotonWaveFunction, times: &[f64]) -> Result<Vec<TimeSeriesRow>> {
    times
        .iter()
        .map(|&t| {
            let state = evolve_phi(phi, t);
            Ok(TimeSeriesRow {
                moments: spatial_moments(&state)?,
                energy: energy_phi(&state),
                momentum: arr(momentum_phi(&state)),
            })
        })
        .collect()
}

pub fn time_series_csv(rows: &[TimeSeriesRow]) -> String {
    let mut out = String::from(TIME_SERIES_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Unit polarization vector helper for real directions.
pub fn real_polarization(v: RVec3) -> CVec3 {
    to_complex(&(v / v.norm()))
}
