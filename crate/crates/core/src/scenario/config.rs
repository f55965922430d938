use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::medium::{MediumParams, UnitSystem};
use crate::observables::KGradient;
use crate::packets::{TransverseMode, WavePacketSpec};
use crate::spectral::{CVec3, KGrid, RVec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    PacketUncertainty,
    FreeEvolution,
    ObservablesReport,
    SpinAlgebraAudit,
    OhmicDecay,
    SveaSweep,
    CrosscheckSuite,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::PacketUncertainty,
        ScenarioKind::FreeEvolution,
        ScenarioKind::ObservablesReport,
        ScenarioKind::SpinAlgebraAudit,
        ScenarioKind::OhmicDecay,
        ScenarioKind::SveaSweep,
        ScenarioKind::CrosscheckSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::PacketUncertainty => "packet_uncertainty",
            ScenarioKind::FreeEvolution => "free_evolution",
            ScenarioKind::ObservablesReport => "observables_report",
            ScenarioKind::SpinAlgebraAudit => "spin_algebra_audit",
            ScenarioKind::OhmicDecay => "ohmic_decay",
            ScenarioKind::SveaSweep => "svea_sweep",
            ScenarioKind::CrosscheckSuite => "crosscheck_suite",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn needs_grid(self) -> bool {
        self != ScenarioKind::SpinAlgebraAudit
    }

    fn needs_packet(self) -> bool {
        matches!(
            self,
            ScenarioKind::PacketUncertainty
                | ScenarioKind::FreeEvolution
                | ScenarioKind::ObservablesReport
                | ScenarioKind::OhmicDecay
                | ScenarioKind::CrosscheckSuite
        )
    }

    fn needs_times(self) -> bool {
        matches!(
            self,
            ScenarioKind::PacketUncertainty
                | ScenarioKind::FreeEvolution
                | ScenarioKind::ObservablesReport
                | ScenarioKind::OhmicDecay
        )
    }

    fn needs_three_dims(self) -> bool {
        matches!(self, ScenarioKind::ObservablesReport | ScenarioKind::CrosscheckSuite | ScenarioKind::SveaSweep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketKind {
    #[default]
    Gaussian,
    Axial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    pub box_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketConfig {
    pub kind: PacketKind,
    pub k0: [f64; 3],
    pub delta_k: f64,
    pub r0: [f64; 3],
    /// `[re, im]` per component.
    pub polarization: [[f64; 2]; 3],
    pub amplitude: f64,
    pub transverse: TransverseMode,
}

impl PacketConfig {
    pub fn spec(&self) -> WavePacketSpec {
        let p = &self.polarization;
        WavePacketSpec {
            k0: RVec3::from(self.k0),
            delta_k: self.delta_k,
            r0: RVec3::from(self.r0),
            polarization: CVec3::new(
                Complex64::new(p[0][0], p[0][1]),
                Complex64::new(p[1][0], p[1][1]),
                Complex64::new(p[2][0], p[2][1]),
            ),
            amplitude: self.amplitude,
            transverse: self.transverse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputOptions {
    /// Write PKS1 snapshots of φ, 𝓔 and 𝓑 at every time.
    pub snapshots: bool,
    pub gradient: KGradient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SveaConfig {
    /// Ladder of `γ/ω̄` values.
    pub gamma_ratios: Vec<f64>,
    /// Radius of the on-shell state in grid steps.
    pub shell: usize,
    /// Time samples per damping time.
    pub samples: usize,
    pub admissibility: f64,
}

impl Default for SveaConfig {
    fn default() -> Self {
        SveaConfig {
            gamma_ratios: vec![1e-4, 1e-3, 1e-2, 1e-1, 0.5],
            shell: 4,
            samples: 21,
            admissibility: crate::damped::DEFAULT_ADMISSIBILITY,
        }
    }
}

/// A validated scenario description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub grid: Option<GridConfig>,
    pub medium: MediumParams,
    pub packet: Option<PacketConfig>,
    pub times: Vec<f64>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub output: OutputOptions,
    pub svea: SveaConfig,
    /// Non-fatal remarks raised during validation.
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn kgrid(&self) -> Result<KGrid> {
        let g = self
            .grid
            .ok_or_else(|| Error::Validation(vec![Violation::new("grid", "required")]))?;
        KGrid::new(g.dim, g.n, g.box_length)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    grid: Option<RawGrid>,
    medium: Option<RawMedium>,
    packet: Option<RawPacket>,
    times: Option<Vec<f64>>,
    output_dir: Option<String>,
    seed: Option<u64>,
    output: Option<RawOutput>,
    svea: Option<RawSvea>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dim: Option<usize>,
    n: Option<usize>,
    box_length: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    unit_system: Option<UnitSystem>,
    epsilon0: Option<f64>,
    mu0: Option<f64>,
    hbar: Option<f64>,
    sigma: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Real(f64),
    Pair([f64; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPacket {
    kind: Option<PacketKind>,
    k0: Option<Vec<f64>>,
    delta_k: Option<f64>,
    r0: Option<Vec<f64>>,
    polarization: Option<Vec<RawComplex>>,
    amplitude: Option<f64>,
    transverse: Option<TransverseMode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    snapshots: Option<bool>,
    gradient: Option<KGradient>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSvea {
    gamma_ratios: Option<Vec<f64>>,
    shell: Option<usize>,
    samples: Option<usize>,
    admissibility: Option<f64>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn vec3(field: &str, v: Option<Vec<f64>>, out: &mut Vec<Violation>) -> [f64; 3] {
    let v = v.unwrap_or_default();
    if v.len() > 3 {
        out.push(Violation::new(field, format!("has {} components, at most 3 allowed", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        out.push(Violation::new(field, "components must be finite"));
    }
    std::array::from_fn(|i| v.get(i).copied().unwrap_or(0.0))
}

/// Parses and validates a TOML scenario description, reporting every
/// problem found rather than stopping at the first.
pub fn validate_config(raw: &str) -> Result<ScenarioConfig> {
    let parsed: RawConfig = toml::from_str(raw).map_err(|e| {
        let mut v = Violation::new("<document>", e.message().to_string());
        if let Some(span) = e.span() {
            let (l, c) = line_col(raw, span.start);
            v.line = Some(l);
            v.column = Some(c);
        }
        Error::Validation(vec![v])
    })?;

    let mut errs = Vec::new();
    let mut warnings = Vec::new();

    let scenario = match parsed.scenario.as_deref() {
        None => {
            errs.push(Violation::new("scenario", "required"));
            None
        }
        Some(s) => {
            let k = ScenarioKind::parse(s);
            if k.is_none() {
                let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                errs.push(Violation::new("scenario", format!("unknown scenario {s:?}; expected one of {}", names.join(", "))));
            }
            k
        }
    };

    let grid = parsed.grid.map(|g| {
        let cfg = GridConfig {
            dim: g.dim.unwrap_or(3),
            n: g.n.unwrap_or(32),
            box_length: g.box_length.unwrap_or(32.0),
        };
        if !(1..=3).contains(&cfg.dim) {
            errs.push(Violation::new("grid.dim", format!("must be 1, 2 or 3, got {}", cfg.dim)));
        }
        if cfg.n < 4 || !cfg.n.is_multiple_of(2) {
            errs.push(Violation::new("grid.n", format!("must be even and at least 4, got {}", cfg.n)));
        }
        if !(cfg.box_length.is_finite() && cfg.box_length > 0.0) {
            errs.push(Violation::new("grid.box_length", format!("must be positive, got {}", cfg.box_length)));
        }
        if cfg.dim == 3 && cfg.n > 16 && !cfg.n.is_power_of_two() {
            warnings.push(format!("grid.n = {} is not a power of two; transforms will be slow", cfg.n));
        }
        cfg
    });
    let kgrid = grid.and_then(|g| KGrid::new(g.dim, g.n, g.box_length).ok());

    let medium = {
        let m = parsed.medium.unwrap_or(RawMedium {
            unit_system: None,
            epsilon0: None,
            mu0: None,
            hbar: None,
            sigma: None,
        });
        let units = m.unit_system.unwrap_or_default();
        let base = MediumParams::vacuum(units);
        let (eps, mu, hbar, sigma) = (
            m.epsilon0.unwrap_or(base.epsilon0),
            m.mu0.unwrap_or(base.mu0),
            m.hbar.unwrap_or(base.hbar),
            m.sigma.unwrap_or(0.0),
        );
        for (name, v) in [("medium.epsilon0", eps), ("medium.mu0", mu), ("medium.hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                errs.push(Violation::new(name, format!("must be positive, got {v}")));
            }
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            errs.push(Violation::new("medium.sigma", format!("must be non-negative, got {sigma}")));
        }
        MediumParams::new(eps, mu, hbar, sigma, units).unwrap_or(base)
    };

    let packet = parsed.packet.map(|p| {
        let polarization = match p.polarization {
            None => {
                errs.push(Violation::new("packet.polarization", "required"));
                [[0.0; 2]; 3]
            }
            Some(v) => {
                if v.len() != 3 {
                    errs.push(Violation::new("packet.polarization", format!("needs 3 components, got {}", v.len())));
                }
                std::array::from_fn(|i| match v.get(i) {
                    Some(RawComplex::Real(x)) => [*x, 0.0],
                    Some(RawComplex::Pair(z)) => *z,
                    None => [0.0, 0.0],
                })
            }
        };
        let cfg = PacketConfig {
            kind: p.kind.unwrap_or_default(),
            k0: vec3("packet.k0", p.k0, &mut errs),
            delta_k: p.delta_k.unwrap_or(f64::NAN),
            r0: vec3("packet.r0", p.r0, &mut errs),
            polarization,
            amplitude: p.amplitude.unwrap_or(1.0),
            transverse: p.transverse.unwrap_or_default(),
        };
        if p.delta_k.is_none() {
            errs.push(Violation::new("packet.delta_k", "required"));
        }
        if let Some(g) = &kgrid {
            let mut found = cfg.spec().violations(g);
            if cfg.kind == PacketKind::Axial {
                found.retain(|v| v.field != "r0");
                if (0..3).filter(|&a| cfg.k0[a] != 0.0).count() != 1 {
                    found.push(Violation::new("k0", "an axial packet must point along a single grid axis"));
                }
            }
            for v in found {
                if v.field == "delta_k" && p.delta_k.is_none() {
                    continue;
                }
                errs.push(Violation::new(format!("packet.{}", v.field), v.message));
            }
        }
        cfg
    });

    let times = parsed.times.unwrap_or_default();
    if times.iter().any(|t| !t.is_finite()) {
        errs.push(Violation::new("times", "must be finite"));
    }
    if times.windows(2).any(|w| !(w[0] <= w[1])) {
        errs.push(Violation::new("times", "must be sorted in ascending order"));
    }

    let output = parsed.output.map_or(
        OutputOptions { snapshots: false, gradient: KGradient::default() },
        |o| OutputOptions {
            snapshots: o.snapshots.unwrap_or(false),
            gradient: o.gradient.unwrap_or_default(),
        },
    );

    let svea = {
        let d = SveaConfig::default();
        match parsed.svea {
            None => d,
            Some(s) => SveaConfig {
                gamma_ratios: s.gamma_ratios.unwrap_or(d.gamma_ratios),
                shell: s.shell.unwrap_or(d.shell),
                samples: s.samples.unwrap_or(d.samples),
                admissibility: s.admissibility.unwrap_or(d.admissibility),
            },
        }
    };
    if svea.gamma_ratios.is_empty() || svea.gamma_ratios.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        errs.push(Violation::new("svea.gamma_ratios", "must be a non-empty list of positive numbers"));
    }
    if svea.gamma_ratios.windows(2).any(|w| !(w[0] < w[1])) {
        errs.push(Violation::new("svea.gamma_ratios", "must be strictly increasing"));
    }
    if svea.samples < 2 {
        errs.push(Violation::new("svea.samples", "must be at least 2"));
    }
    if !(svea.admissibility > 0.0) {
        errs.push(Violation::new("svea.admissibility", "must be positive"));
    }

    if let Some(kind) = scenario {
        if kind.needs_grid() && grid.is_none() {
            errs.push(Violation::new("grid", format!("required by {}", kind.name())));
        }
        if kind.needs_packet() && packet.is_none() {
            errs.push(Violation::new("packet", format!("required by {}", kind.name())));
        }
        if kind.needs_times() && times.is_empty() {
            errs.push(Violation::new("times", format!("required by {}", kind.name())));
        }
        if kind.needs_three_dims() && grid.is_some_and(|g| g.dim != 3) {
            errs.push(Violation::new("grid.dim", format!("{} needs a three-dimensional grid", kind.name())));
        }
        if kind == ScenarioKind::OhmicDecay && medium.sigma <= 0.0 {
            errs.push(Violation::new("medium.sigma", "ohmic_decay needs a positive conductivity"));
        }
        if kind == ScenarioKind::SveaSweep {
            if let Some(g) = grid {
                if svea.shell == 0 || svea.shell + 2 > g.n / 2 {
                    errs.push(Violation::new("svea.shell", format!("must lie in 1..={}", (g.n / 2).saturating_sub(2))));
                }
            }
        }
    }

    if !errs.is_empty() {
        return Err(Error::Validation(errs));
    }
    Ok(ScenarioConfig {
        scenario: scenario.expect("checked above"),
        grid,
        medium,
        packet,
        times,
        output_dir: PathBuf::from(parsed.output_dir.unwrap_or_else(|| "output".into())),
        seed: parsed.seed.unwrap_or(0),
        output,
        svea,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
scenario = "packet_uncertainty"
times = [0.0, 10.0]

[grid]
dim = 1
n = 256
box_length = 256.0

[packet]
k0 = [0.5]
delta_k = 0.05
polarization = [0, 1, 0]
"#;

    fn fields(e: Error) -> Vec<String> {
        match e {
            Error::Validation(v) => v.into_iter().map(|x| x.field).collect(),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = validate_config(MINIMAL).unwrap();
        assert_eq!(c.scenario, ScenarioKind::PacketUncertainty);
        assert_eq!(c.medium, MediumParams::natural());
        assert_eq!(c.seed, 0);
        assert_eq!(c.packet.unwrap().polarization[1], [1.0, 0.0]);
    }

    #[test]
    fn parallel_polarization_and_unsorted_times_are_both_reported() {
        let bad = MINIMAL
            .replace("polarization = [0, 1, 0]", "polarization = [1, 0, 0]")
            .replace("[0.0, 10.0]", "[10.0, 0.0]");
        let f = fields(validate_config(&bad).unwrap_err());
        assert!(f.contains(&"packet.polarization".to_string()), "{f:?}");
        assert!(f.contains(&"times".to_string()), "{f:?}");
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let err = validate_config("scenario = \"spin_algebra_audit\"\n[grid\n").unwrap_err();
        match err {
            Error::Validation(v) => {
                assert_eq!(v[0].line, Some(2));
                assert!(v[0].column.is_some());
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_sections_are_named() {
        let f = fields(validate_config("scenario = \"free_evolution\"").unwrap_err());
        assert!(f.contains(&"grid".to_string()));
        assert!(f.contains(&"packet".to_string()));
        assert!(f.contains(&"times".to_string()));
    }
}
