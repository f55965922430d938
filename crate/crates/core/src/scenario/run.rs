use std::fs::{self, File, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::checks::crosscheck;
use super::config::{PacketConfig, PacketKind, ScenarioConfig, ScenarioKind};
use crate::damped::{admissibility_ratio, error_curve_csv, evolve_phi_ohmic, svea_error, SveaErrorPoint};
use crate::error::{structural, Error, Result};
use crate::maxwell::{free_space_residuals, MaxwellState};
use crate::medium::MediumParams;
use crate::observables::{edge_weight, KGradient, energy_kspace, energy_phi, helicity_basis, ObservableReport, SpinMatrices, EDGE_WARN_FRACTION};
use crate::packets::{build_axial_packet, build_gaussian_packet, time_series, time_series_csv};
use crate::photon::{evolve_phi, fields_with_derivatives, PhotonWaveFunction};
use crate::spectral::{nyquist_energy_fraction, synthesize_values, snapshot::snapshot_bytes, KGrid, NYQUIST_WARN_FRACTION};
use crate::sum;

pub const MANIFEST_NAME: &str = "manifest.json";
const LOCK_NAME: &str = ".photon-kspace.lock";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub scenario: String,
    pub seed: u64,
    pub files: Vec<ManifestEntry>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
    /// Names of checks that failed, for scenarios that run checks.
    pub failed_checks: Vec<String>,
}

/// Exclusive claim on an output directory, released on drop.
struct OutputLock(PathBuf);

impl OutputLock {
    fn acquire(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOCK_NAME);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id())?;
                Ok(OutputLock(path))
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(structural(format!(
                "output directory {} is in use by another run (remove {} if it is stale)",
                dir.display(),
                path.display()
            ))),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for OutputLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

struct Outputs {
    dir: PathBuf,
    files: Vec<ManifestEntry>,
    warnings: Vec<String>,
}

impl Outputs {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let mut f = File::create(self.dir.join(name))?;
        f.write_all(bytes)?;
        self.files.push(ManifestEntry {
            path: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len(),
        });
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }
}

pub fn build_packet(cfg: &PacketConfig, grid: &KGrid, medium: &MediumParams) -> Result<PhotonWaveFunction> {
    match cfg.kind {
        PacketKind::Gaussian => build_gaussian_packet(&cfg.spec(), grid, medium),
        PacketKind::Axial => build_axial_packet(&cfg.spec(), grid, medium),
    }
}

/// Runs one scenario and writes its artifacts and `manifest.json` into
/// `config.output_dir`. Output bytes depend only on the configuration.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunSummary> {
    let _lock = OutputLock::acquire(&config.output_dir)?;
    let mut out = Outputs {
        dir: config.output_dir.clone(),
        files: Vec::new(),
        warnings: config.warnings.clone(),
    };
    let mut failed_checks = Vec::new();
    match config.scenario {
        ScenarioKind::PacketUncertainty => packet_uncertainty(config, &mut out)?,
        ScenarioKind::FreeEvolution => free_evolution(config, &mut out)?,
        ScenarioKind::ObservablesReport => observables_report(config, &mut out)?,
        ScenarioKind::SpinAlgebraAudit => {
            let audit = SpinMatrices::new(config.medium.hbar).audit();
            #[derive(Serialize)]
            struct Report {
                #[serde(flatten)]
                audit: crate::observables::SpinAudit,
                tolerance: f64,
                passed: bool,
            }
            let passed = audit.max() < 1e-14;
            if !passed {
                failed_checks.push("spin algebra".to_string());
            }
            out.json("spin_audit.json", &Report { audit, tolerance: 1e-14, passed })?;
        }
        ScenarioKind::OhmicDecay => ohmic_decay(config, &mut out)?,
        ScenarioKind::SveaSweep => svea_sweep(config, &mut out)?,
        ScenarioKind::CrosscheckSuite => {
            let grid = config.kgrid()?;
            let packet = build_packet(config.packet.as_ref().expect("validated"), &grid, &config.medium)?;
            gradient_warnings(&packet, config.output.gradient, &mut out)?;
            let report = crosscheck(&grid, &config.medium, Some(&packet), config.output.gradient, config.seed)?;
            for c in report.failures() {
                out.warn(format!("check failed: {} = {:.3e} (tolerance {:.1e})", c.name, c.value, c.tolerance));
                failed_checks.push(c.name.clone());
            }
            out.json("crosscheck.json", &report)?;
        }
    }
    let manifest = Manifest {
        scenario: config.scenario.name().to_string(),
        seed: config.seed,
        files: out.files,
        warnings: out.warnings,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(config.output_dir.join(MANIFEST_NAME), text)?;
    Ok(RunSummary { output_dir: config.output_dir.clone(), manifest, failed_checks })
}

fn packet_state(config: &ScenarioConfig) -> Result<(KGrid, PhotonWaveFunction)> {
    let grid = config.kgrid()?;
    let packet = config
        .packet
        .as_ref()
        .ok_or_else(|| Error::Validation(vec![crate::Violation::new("packet", "required")]))?;
    let phi = build_packet(packet, &grid, &config.medium)?;
    Ok((grid, phi))
}

fn packet_uncertainty(config: &ScenarioConfig, out: &mut Outputs) -> Result<()> {
    let (_, phi) = packet_state(config)?;
    let rows = time_series(&phi, &config.times)?;
    for r in &rows {
        if r.moments.wrap_warning {
            out.warn(format!("t = {}: {:.3e} of the packet touches the box edge", r.moments.time, r.moments.wrap_weight));
        }
    }
    out.write("time_series.csv", time_series_csv(&rows).as_bytes())?;
    let products: Vec<f64> = rows.iter().map(|r| r.moments.product).collect();
    #[derive(Serialize)]
    struct Summary {
        min_product: f64,
        max_product: f64,
        max_deviation_from_half: f64,
        delta_r_nondecreasing: bool,
    }
    let summary = Summary {
        min_product: products.iter().copied().fold(f64::INFINITY, f64::min),
        max_product: products.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        max_deviation_from_half: products.iter().map(|p| (p - 0.5).abs()).fold(0.0, f64::max),
        delta_r_nondecreasing: rows.windows(2).all(|w| w[1].moments.delta_r >= w[0].moments.delta_r),
    };
    out.json("uncertainty.json", &summary)
}

fn free_evolution(config: &ScenarioConfig, out: &mut Outputs) -> Result<()> {
    let (_, phi) = packet_state(config)?;
    let units = config.medium.unit_system;
    let mut csv = String::from("t,gauss_e,gauss_b,faraday,ampere,max_relative,energy_phi,energy_kspace\n");
    for (idx, &t) in config.times.iter().enumerate() {
        let state = evolve_phi(&phi, t);
        let (e, b, de, db) = fields_with_derivatives(&state);
        let frac = nyquist_energy_fraction(&e);
        if frac > NYQUIST_WARN_FRACTION {
            out.warn(format!("t = {t}: {frac:.3e} of the field energy is on Nyquist nodes"));
        }
        let ms = MaxwellState::new(e, b, config.medium)?;
        let r = free_space_residuals(&ms, &de, &db)?;
        if r.max_relative() > 1e-10 {
            out.warn(format!("t = {t}: Maxwell residual {:.3e} exceeds 1e-10", r.max_relative()));
        }
        let ek = energy_kspace(&ms.electric, &ms.magnetic, &config.medium)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t,
            r.gauss_e,
            r.gauss_b,
            r.faraday,
            r.ampere,
            r.max_relative(),
            energy_phi(&state),
            ek
        ));
        if config.output.snapshots {
            out.write(&format!("phi_{idx:03}.pks"), &snapshot_bytes(&state.as_field(), units)?)?;
            out.write(&format!("electric_{idx:03}.pks"), &snapshot_bytes(&ms.electric, units)?)?;
            out.write(&format!("magnetic_{idx:03}.pks"), &snapshot_bytes(&ms.magnetic, units)?)?;
        }
    }
    out.write("residuals.csv", csv.as_bytes())?;
    let rows = time_series(&phi, &config.times)?;
    for r in &rows {
        if r.moments.wrap_warning {
            out.warn(format!("t = {}: {:.3e} of the packet touches the box edge", r.moments.time, r.moments.wrap_weight));
        }
    }
    out.write("time_series.csv", time_series_csv(&rows).as_bytes())
}

/// The spectral k-gradient is only accurate while the packet stays clear of
/// both the k-grid edge and the real-space box edge.
fn gradient_warnings(state: &PhotonWaveFunction, gradient: KGradient, out: &mut Outputs) -> Result<()> {
    let grid = state.grid;
    let w = edge_weight(&grid, &state.phi);
    if w > EDGE_WARN_FRACTION {
        out.warn(format!("t = {}: {w:.3e} of |phi|^2 sits at the k-grid edge", state.time));
    }
    if gradient == KGradient::Spectral {
        let w = edge_weight(&grid, &synthesize_values(&grid, &state.phi)?);
        if w > EDGE_WARN_FRACTION {
            out.warn(format!(
                "t = {}: {w:.3e} of the real-space weight touches the box edge; spectral k-derivatives are inaccurate",
                state.time
            ));
        }
    }
    Ok(())
}

fn observables_report(config: &ScenarioConfig, out: &mut Outputs) -> Result<()> {
    let (_, phi) = packet_state(config)?;
    let mut csv = format!("t,{}\n", ObservableReport::csv_header());
    for (idx, &t) in config.times.iter().enumerate() {
        let state = evolve_phi(&phi, t);
        gradient_warnings(&state, config.output.gradient, out)?;
        let report = ObservableReport::from_phi(&state, config.output.gradient)?;
        csv.push_str(&format!("{},{}\n", t, report.csv_row()));
        out.json(&format!("report_{idx:03}.json"), &report)?;
    }
    out.write("observables.csv", csv.as_bytes())
}

fn ohmic_decay(config: &ScenarioConfig, out: &mut Outputs) -> Result<()> {
    let (grid, phi) = packet_state(config)?;
    let m = config.medium;
    let gamma = m.gamma();
    let norm0 = phi.norm();
    let cell = grid.k_cell();
    let mut csv = String::from("t,norm,positive_norm,negative_norm,exp_decay_model\n");
    let (mut ts, mut logs) = (Vec::new(), Vec::new());
    for (idx, &t) in config.times.iter().enumerate() {
        let ev = evolve_phi_ohmic(&phi, &m, t);
        let norm = ev.norm();
        let pos = sum::sum(ev.positive.iter().map(crate::spectral::norm_sqr3)) * cell;
        let neg = sum::sum(ev.negative.iter().map(crate::spectral::norm_sqr3)) * cell;
        csv.push_str(&format!("{},{},{},{},{}\n", t, norm, pos, neg, norm0 * (-gamma * t).exp()));
        ts.push(t);
        logs.push(norm.ln());
        if config.output.snapshots {
            let snap = PhotonWaveFunction::new(grid, ev.total(), ev.time, m)?;
            out.write(&format!("phi_{idx:03}.pks"), &snapshot_bytes(&snap.as_field(), m.unit_system)?)?;
        }
    }
    out.write("ohmic_decay.csv", csv.as_bytes())?;
    #[derive(Serialize)]
    struct Summary {
        gamma: f64,
        fitted_norm_decay_rate: Option<f64>,
    }
    let fitted = (ts.len() >= 2 && ts[ts.len() - 1] > ts[0]).then(|| -least_squares_slope(&ts, &logs));
    out.json("ohmic_summary.json", &Summary { gamma, fitted_norm_decay_rate: fitted })
}

pub(crate) fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// A normalized state on the six nodes at `±shell·dk` along the axes, each
/// carrying positive helicity. Every mode has `|k| = shell·dk`.
pub fn on_shell_state(grid: &KGrid, medium: &MediumParams, shell: usize) -> Result<PhotonWaveFunction> {
    if grid.dim() != 3 {
        return Err(structural("the on-shell state needs a three-dimensional grid"));
    }
    let mut phi = PhotonWaveFunction::from_fn(*grid, *medium, |_| crate::spectral::CVec3::zeros());
    let s = shell as i64;
    for a in 0..3 {
        for sign in [1, -1] {
            let mut m = [0i64; 3];
            m[a] = sign * s;
            let idx = grid.index_of_signed(m);
            let k = grid.k_vector(idx);
            phi.phi[idx] = helicity_basis(&(k / k.norm()))[2];
        }
    }
    phi.normalize();
    Ok(phi)
}

fn svea_sweep(config: &ScenarioConfig, out: &mut Outputs) -> Result<()> {
    let grid = config.kgrid()?;
    let s = &config.svea;
    let phi0 = on_shell_state(&grid, &config.medium, s.shell)?;
    let omega_bar = config.medium.c * s.shell as f64 * grid.dk();
    let mut points: Vec<SveaErrorPoint> = Vec::new();
    #[derive(Serialize)]
    struct Row {
        gamma_over_omegabar: f64,
        max_rel_error: f64,
        admissible: bool,
        admissibility_ratio: f64,
    }
    let mut rows = Vec::new();
    for &ratio in &s.gamma_ratios {
        let gamma = ratio * omega_bar;
        let medium = config.medium.with_sigma(gamma * config.medium.epsilon0)?;
        let span = 1.0 / gamma;
        let times: Vec<f64> = (0..s.samples).map(|j| span * j as f64 / (s.samples - 1) as f64).collect();
        let curve = svea_error(&phi0, &medium, omega_bar, &times)?;
        let admissible = ratio < s.admissibility;
        if !admissible {
            out.warn(format!("gamma/omega_bar = {ratio} lies outside the envelope approximation (limit {})", s.admissibility));
        }
        rows.push(Row {
            gamma_over_omegabar: ratio,
            max_rel_error: curve.iter().map(|p| p.rel_error).fold(0.0, f64::max),
            admissible,
            admissibility_ratio: admissibility_ratio(omega_bar, omega_bar, gamma),
        });
        points.extend(curve);
    }
    out.write("svea_error.csv", error_curve_csv(&points).as_bytes())?;
    #[derive(Serialize)]
    struct Summary {
        omega_bar: f64,
        monotone: bool,
        ladder: Vec<Row>,
    }
    let monotone = rows.windows(2).all(|w| w[1].max_rel_error >= w[0].max_rel_error);
    out.json("svea_summary.json", &Summary { omega_bar, monotone, ladder: rows })
}
