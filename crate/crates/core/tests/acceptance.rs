//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always show.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use photon_kspace::damped::{svea_error, EnvelopeState};
use photon_kspace::maxwell::{evolve_ohmic_mode, free_space_residuals, MaxwellState};
use photon_kspace::observables::{
    angular_momentum_phi, angular_momentum_realspace, energy_kspace, energy_phi, energy_realspace, helicity_decompose,
    momentum_phi, momentum_realspace, orbital_apply, spin_phi, KGradient, SpinMatrices,
};
use photon_kspace::packets::{build_axial_packet, build_gaussian_packet, spatial_moments, TransverseMode, WavePacketSpec};
use photon_kspace::photon::{electric_from_phi, evolve_phi, fields_with_derivatives, PhotonWaveFunction};
use photon_kspace::random::random_transverse_phi;
use photon_kspace::scenario::{on_shell_state, run_scenario, validate_config};
use photon_kspace::spectral::{synthesize, CVec3, KGrid, RVec3};
use photon_kspace::MediumParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn circular_plus() -> CVec3 {
    CVec3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)) / c(2f64.sqrt(), 0.0)
}

fn within_budget(elapsed: Duration, secs: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < secs, format!("{s:.2} s of {secs} s budget"))
}

fn real_fields(phi: &PhotonWaveFunction) -> Result<(photon_kspace::spectral::RealVectorField, photon_kspace::spectral::RealVectorField), photon_kspace::Error> {
    let (e, b) = electric_from_phi(phi);
    Ok((synthesize(&e)?, synthesize(&b)?))
}

fn spin_algebra() -> Outcome {
    let start = Instant::now();
    let worst = [1.0, 0.5, photon_kspace::medium::SI_HBAR]
        .iter()
        .map(|&h| SpinMatrices::new(h).audit().max())
        .fold(0.0, f64::max);
    let (fast, t) = within_budget(start.elapsed(), 1.0);
    Ok((worst < 1e-14 && fast, format!("max relative deviation {worst:.2e} (< 1e-14); {t}")))
}

fn schrodinger_maxwell() -> Outcome {
    let start = Instant::now();
    let grid = KGrid::new(3, 16, 16.0)?;
    let medium = MediumParams::natural();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut rel, mut abs) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let phi = random_transverse_phi(&grid, &medium, 7, &mut rng);
        let t = rng.gen_range(0.0..20.0);
        let (e, b, de, db) = fields_with_derivatives(&evolve_phi(&phi, t));
        let r = free_space_residuals(&MaxwellState::new(e, b, medium)?, &de, &db)?;
        rel = rel.max(r.max_relative());
        abs = abs.max(r.max_absolute());
    }
    let (fast, t) = within_budget(start.elapsed(), 30.0);
    Ok((
        rel < 1e-10 && abs < 1e-10 && fast,
        format!("worst residual {rel:.2e} relative, {abs:.2e} absolute (< 1e-10); {t}"),
    ))
}

fn photon_energy() -> Outcome {
    let start = Instant::now();
    let mut shell_err = 0.0f64;
    for (medium, box_length) in [
        (MediumParams::natural(), 32.0),
        (MediumParams::lorentz_heaviside(), 20.0),
        (MediumParams::si(), 3.2e-5),
    ] {
        let grid = KGrid::new(3, 32, box_length)?;
        for shell in [1, 5, 12] {
            let phi = on_shell_state(&grid, &medium, shell)?;
            let expected = medium.hbar * medium.c * shell as f64 * grid.dk();
            shell_err = shell_err.max((energy_phi(&phi) - expected).abs() / expected);
        }
    }
    let grid = KGrid::new(3, 32, 32.0)?;
    let medium = MediumParams::natural();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut chain_err = 0.0f64;
    for _ in 0..4 {
        let phi = random_transverse_phi(&grid, &medium, 15, &mut rng);
        let (e, b) = electric_from_phi(&phi);
        let ek = energy_kspace(&e, &b, &medium)?;
        let er = energy_realspace(&synthesize(&e)?, &synthesize(&b)?, &medium)?;
        let ep = energy_phi(&phi);
        chain_err = chain_err.max((er - ek).abs() / ek).max((ek - ep).abs() / ep);
    }
    let (fast, t) = within_budget(start.elapsed(), 60.0);
    Ok((
        shell_err < 1e-12 && chain_err < 1e-10 && fast,
        format!("shell energy vs hbar*c*k0 {shell_err:.2e} (< 1e-12), real/k/phi chain {chain_err:.2e} (< 1e-10); {t}"),
    ))
}

fn momentum() -> Outcome {
    let grid = KGrid::new(3, 64, 64.0)?;
    let medium = MediumParams::natural();
    // 24 nodes out with a width of |k0|/20 keeps the packet clear of both box edges.
    let k0 = RVec3::new(0.0, 0.0, 24.0 * grid.dk());
    let spec = WavePacketSpec::new(k0, k0.norm() / 20.0, RVec3::zeros(), circular_plus());
    let packet = build_gaussian_packet(&spec, &grid, &medium)?;
    let p = momentum_phi(&packet);
    let hk0 = k0 * medium.hbar;
    let carrier_err = (p - hk0).norm() / hk0.norm();

    let mut states = vec![packet];
    let small = KGrid::new(3, 16, 16.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..3 {
        states.push(random_transverse_phi(&small, &medium, 7, &mut rng));
    }
    let mut picture_err = 0.0f64;
    for phi in &states {
        let (e, b) = real_fields(phi)?;
        let pr = momentum_realspace(&e, &b, &medium)?;
        let pp = momentum_phi(phi);
        picture_err = picture_err.max((pr - pp).norm() / pp.norm());
    }
    Ok((
        carrier_err < 1e-3 && picture_err < 1e-10,
        format!("|p - hbar k0|/|hbar k0| {carrier_err:.2e} (< 1e-3), real space vs phi {picture_err:.2e} (< 1e-10)"),
    ))
}

fn uncertainty() -> Outcome {
    let start = Instant::now();
    let medium = MediumParams::natural();
    let line = KGrid::new(1, 4096, 4096.0)?;
    let y = CVec3::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    let spec = WavePacketSpec::new(RVec3::new(0.5, 0.0, 0.0), 0.05, RVec3::new(-1000.0, 0.0, 0.0), y);
    let phi = build_gaussian_packet(&spec, &line, &medium)?;
    let mut dev_1d = 0.0f64;
    for j in 0..=10 {
        let m = spatial_moments(&evolve_phi(&phi, 200.0 * j as f64))?;
        dev_1d = dev_1d.max((m.product - 0.5).abs());
    }

    let cube = KGrid::new(3, 64, 64.0)?;
    let spec = WavePacketSpec::new(RVec3::new(0.0, 0.0, 1.0), 0.25, RVec3::new(0.0, 0.0, -12.0), circular_plus());
    let phi = build_gaussian_packet(&spec, &cube, &medium)?;
    let mut products = Vec::new();
    for j in 0..=12 {
        products.push(spatial_moments(&evolve_phi(&phi, 2.0 * j as f64))?.product);
    }
    let min_3d = products.iter().copied().fold(f64::INFINITY, f64::min);
    let monotone = products.windows(2).all(|w| w[1] >= w[0]);
    let (fast, t) = within_budget(start.elapsed(), 60.0);
    Ok((
        dev_1d < 1e-3 && min_3d >= 0.4995 && monotone && fast,
        format!(
            "1-D |product - 0.5| {dev_1d:.2e} (< 1e-3) over 11 times; 3-D min product {min_3d:.5} (>= 0.4995), \
             nondecreasing {monotone}, final {:.4}; {t}",
            products.last().unwrap()
        ),
    ))
}

fn helicity_of_light() -> Outcome {
    let grid = KGrid::new(3, 64, 64.0)?;
    let medium = MediumParams::natural();
    let k0 = RVec3::new(0.0, 0.0, 1.0);
    let circ = build_axial_packet(&WavePacketSpec::new(k0, 0.15, RVec3::zeros(), circular_plus()), &grid, &medium)?;
    let norm = circ.norm();
    let s3 = spin_phi(&circ)[2] / norm;
    let spin_err = (s3 - medium.hbar).abs() / medium.hbar;
    let pops = helicity_decompose(&circ)?;
    let pop_err = (pops.plus / norm - 1.0).abs();

    let x = CVec3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    let lin = build_axial_packet(&WavePacketSpec::new(k0, 0.15, RVec3::zeros(), x), &grid, &medium)?;
    let lin_spin = spin_phi(&lin).norm() / lin.norm();
    Ok((
        spin_err < 1e-6 && pop_err < 1e-10 && lin_spin < 1e-12,
        format!("M''3/norm - hbar {spin_err:.2e} (< 1e-6), p+ - 1 {pop_err:.2e} (< 1e-10), linear |M''| {lin_spin:.2e} (< 1e-12)"),
    ))
}

fn angular_cross_check() -> Outcome {
    let grid = KGrid::new(3, 32, 32.0)?;
    let medium = MediumParams::natural();
    let spec = WavePacketSpec::new(RVec3::new(0.0, 0.0, 1.0), 0.3, RVec3::zeros(), circular_plus())
        .with_transverse(TransverseMode::CrossProduct);
    let phi = build_gaussian_packet(&spec, &grid, &medium)?;
    let (e, b) = real_fields(&phi)?;
    let m_real = angular_momentum_realspace(&e, &b, &medium, RVec3::zeros())?;
    let m_phi = angular_momentum_phi(&phi, KGradient::Spectral)?.total();
    let err = (m_real - m_phi).norm() / m_phi.norm();
    Ok((err < 1e-6, format!("|M_real - (M' + M'')| / |M| {err:.2e} (< 1e-6)")))
}

fn orbital_operator() -> Outcome {
    let grid = KGrid::new(3, 64, 64.0)?;
    let medium = MediumParams::natural();
    let r = 32.0 * grid.dk();
    let mut worst = 0.0f64;
    for sign in [1.0, -1.0] {
        let phi = PhotonWaveFunction::from_fn(grid, medium, |k| {
            let s = 1.0 - k.norm_squared() / (r * r);
            let g = if s > 0.0 { s.powi(5) } else { 0.0 };
            // g(|k|)·(k1 ± i k2)/|k| with g = |k|(1 - k²/R²)^5
            CVec3::new(c(k[0], sign * k[1]) * g, c(0.0, 0.0), c(0.0, 0.0))
        });
        let l3 = &orbital_apply(&phi, KGradient::FourthOrder)?[2];
        let (mut num, mut den) = (0.0, 0.0);
        for (out, v) in l3.iter().zip(&phi.phi) {
            num += (out - v * c(sign * medium.hbar, 0.0)).norm_squared();
            den += (v * c(medium.hbar, 0.0)).norm_squared();
        }
        worst = worst.max((num / den).sqrt());
    }
    Ok((worst <= 1e-4, format!("|L3 f -/+ hbar f| / |hbar f| {worst:.2e} (<= 1e-4)")))
}

/// Local maxima of `E_x` located by bisection on `dE_x/dt`.
fn peaks(f: impl Fn(f64) -> (f64, f64), t_end: f64, step: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut t = 0.0;
    while t + step <= t_end {
        let (a, b) = (f(t).1, f(t + step).1);
        if a > 0.0 && b <= 0.0 {
            let (mut lo, mut hi) = (t, t + step);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid).1 > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * hi.max(1.0) {
                    break;
                }
            }
            let tp = 0.5 * (lo + hi);
            out.push((tp, f(tp).0));
        }
        t += step;
    }
    out
}

fn damped_dynamics() -> Outcome {
    let k = RVec3::new(0.0, 0.0, 1.0);
    let base = MediumParams::natural();
    let omega = base.c * k.norm();
    let period = 2.0 * PI / omega;
    let e0 = CVec3::new(c(1.0, 0.0), c(-0.4, 0.0), c(0.0, 0.0));
    let de0 = CVec3::new(c(0.3, 0.0), c(0.8, 0.0), c(0.0, 0.0));
    let scale = e0.norm().max(de0.norm() / omega);
    let mut ode_err = 0.0f64;
    let mut decay_err = 0.0f64;
    let mut steps = 0;
    for q in [0.0, 0.1, 1.0, 3.0] {
        let gamma = 2.0 * q * omega;
        let medium = base.with_sigma(gamma * base.epsilon0)?;
        for axis in 0..2 {
            let oracle = common::dopri_oscillator(omega, gamma, e0[axis].re, de0[axis].re, 10.0 * period);
            steps = steps.max(oracle.len());
            for (t, y, dy) in oracle {
                let (e, de) = evolve_ohmic_mode(&e0, &de0, &k, &medium, t);
                ode_err = ode_err.max((e[axis].re - y).abs() / scale).max((de[axis].re - dy).abs() / (omega * scale));
            }
        }
        if q < 0.5 {
            let f = |t: f64| {
                let (e, de) = evolve_ohmic_mode(&e0, &de0, &k, &medium, t);
                (e[0].re, de[0].re)
            };
            let ps = peaks(f, 10.0 * period, period / 64.0);
            let ts: Vec<f64> = ps.iter().map(|p| p.0).collect();
            let ls: Vec<f64> = ps.iter().map(|p| p.1.ln()).collect();
            let n = ts.len() as f64;
            let (mt, ml) = (ts.iter().sum::<f64>() / n, ls.iter().sum::<f64>() / n);
            let slope = ts.iter().zip(&ls).map(|(t, l)| (t - mt) * (l - ml)).sum::<f64>()
                / ts.iter().map(|t| (t - mt) * (t - mt)).sum::<f64>();
            let err = if gamma > 0.0 { (-slope - gamma / 2.0).abs() / (gamma / 2.0) } else { slope.abs() / omega };
            decay_err = decay_err.max(err);
        }
    }
    Ok((
        ode_err < 1e-8 && decay_err < 1e-6,
        format!(
            "vs adaptive ODE {ode_err:.2e} (< 1e-8) at up to {steps} steps for gamma/2ck in {{0, 0.1, 1, 3}}; \
             peak-envelope decay vs gamma/2 {decay_err:.2e} (< 1e-6, oscillating cases)"
        ),
    ))
}

fn svea() -> Outcome {
    let start = Instant::now();
    let grid = KGrid::new(3, 16, 16.0)?;
    let base = MediumParams::natural();
    let shell = 4;
    let phi0 = on_shell_state(&grid, &base, shell)?;
    let omega_bar = base.c * shell as f64 * grid.dk();
    let ladder = [1e-4, 1e-3, 1e-2, 1e-1, 0.5];
    let mut errors = Vec::new();
    let mut admissible_at_half = true;
    for ratio in ladder {
        let gamma = ratio * omega_bar;
        let medium = base.with_sigma(gamma * base.epsilon0)?;
        let times: Vec<f64> = (0..=20).map(|j| j as f64 / (20.0 * gamma)).collect();
        let curve = svea_error(&phi0, &medium, omega_bar, &times)?;
        errors.push(curve.iter().map(|p| p.rel_error).fold(0.0, f64::max));
        if ratio == 0.5 {
            admissible_at_half = EnvelopeState::new(grid, phi0.phi.clone(), omega_bar, gamma)?.is_admissible();
        }
    }
    let monotone = errors.windows(2).all(|w| w[1] >= w[0]);
    let (fast, t) = within_budget(start.elapsed(), 10.0);
    let ok = errors[1] < 1e-3 && monotone && errors[4] > 1e-1 && !admissible_at_half && fast;
    let ladder_text: Vec<String> = ladder.iter().zip(&errors).map(|(r, e)| format!("{r:e}:{e:.2e}")).collect();
    Ok((
        ok,
        format!(
            "errors {} (1e-3 case < 1e-3, 0.5 case > 1e-1), monotone {monotone}, flagged inadmissible {}; {t}",
            ladder_text.join(" "),
            !admissible_at_half
        ),
    ))
}

fn read_tree(dir: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        out.insert(entry.file_name().to_string_lossy().into_owned(), std::fs::read(entry.path())?);
    }
    Ok(out)
}

const DETERMINISM_CONFIGS: &[&str] = &[
    r#"
scenario = "free_evolution"
times = [0.0, 1.5, 3.0]
[grid]
dim = 3
n = 32
box_length = 32.0
[packet]
k0 = [0.0, 0.0, 1.0]
delta_k = 0.3
polarization = [1.0, [0.0, 1.0], 0.0]
[output]
snapshots = true
"#,
    r#"
scenario = "crosscheck_suite"
seed = 11
[grid]
dim = 3
n = 32
box_length = 32.0
[packet]
k0 = [0.0, 0.0, 1.0]
delta_k = 0.3
polarization = [1.0, [0.0, 1.0], 0.0]
transverse = "cross_product"
"#,
    r#"
scenario = "observables_report"
times = [0.0, 1.0]
[grid]
dim = 3
n = 32
box_length = 32.0
[packet]
k0 = [0.0, 0.0, 1.0]
delta_k = 0.3
polarization = [1.0, 0.0, 0.0]
"#,
    r#"
scenario = "ohmic_decay"
times = [0.0, 1.0, 2.0]
[grid]
dim = 3
n = 32
box_length = 32.0
[medium]
sigma = 0.1
[packet]
k0 = [0.0, 0.0, 1.0]
delta_k = 0.3
polarization = [1.0, 0.0, 0.0]
"#,
    r#"
scenario = "svea_sweep"
[grid]
dim = 3
n = 16
box_length = 16.0
"#,
    r#"
scenario = "packet_uncertainty"
times = [0.0, 50.0, 100.0]
[grid]
dim = 1
n = 1024
box_length = 1024.0
[packet]
k0 = [0.5]
delta_k = 0.05
r0 = [-200.0]
polarization = [0.0, 1.0, 0.0]
"#,
    r#"
scenario = "spin_algebra_audit"
"#,
];

fn determinism() -> Outcome {
    let root = tempfile::tempdir()?;
    let mut compared = 0;
    let mut problems = Vec::new();
    for (i, raw) in DETERMINISM_CONFIGS.iter().enumerate() {
        let mut cfg = validate_config(raw)?;
        let mut trees = Vec::new();
        for run in 0..2 {
            cfg.output_dir = root.path().join(format!("{i}-{run}"));
            let summary = run_scenario(&cfg)?;
            let tree = read_tree(&cfg.output_dir)?;
            for entry in &summary.manifest.files {
                let bytes = &tree[&entry.path];
                if hex::encode(Sha256::digest(bytes)) != entry.sha256 || bytes.len() != entry.bytes {
                    problems.push(format!("{}: manifest hash mismatch", entry.path));
                }
            }
            if tree.len() != summary.manifest.files.len() + 1 {
                problems.push(format!("{}: manifest does not list every file", cfg.scenario.name()));
            }
            trees.push(tree);
        }
        if trees[0] != trees[1] {
            problems.push(format!("{}: outputs differ between runs", cfg.scenario.name()));
        }
        compared += trees[0].len();
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!("{compared} files byte-identical across two runs of all 7 scenarios, manifests complete")
    } else {
        problems.join("; ")
    };
    Ok((ok, detail))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("spin algebra", spin_algebra),
        ("Schrodinger-Maxwell equivalence", schrodinger_maxwell),
        ("photon energy", photon_energy),
        ("momentum", momentum),
        ("uncertainty", uncertainty),
        ("helicity and spin of light", helicity_of_light),
        ("angular momentum cross-check", angular_cross_check),
        ("orbital operator", orbital_operator),
        ("damped dynamics", damped_dynamics),
        ("envelope approximation", svea),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let (passed, detail) = match outcome {
            Ok(Ok(r)) => r,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "{} {:>2} {}: {} [{:.2} s]",
            if passed { "PASS" } else { "FAIL" },
            n + 1,
            name,
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
