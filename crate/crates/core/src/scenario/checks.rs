use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::maxwell::{evolve_free_mode, free_space_residuals, MaxwellState};
use crate::medium::MediumParams;
use crate::observables::{
    angular_momentum_phi, angular_momentum_realspace, spin_phi, energy_kspace, energy_phi, energy_realspace, hamiltonian_matrix,
    helicity_decompose, momentum_phi, momentum_realspace, transverse_energy_identity_check, KGradient, SpinMatrices,
};
use crate::photon::{electric_from_phi, evolve_phi, fields_with_derivatives, hamiltonian_apply, schrodinger_residual, PhotonWaveFunction};
use crate::random::{random_band_limited_field, random_transverse_phi};
use crate::spectral::{
    enforce_reality, forward_transform, reality_violation, synthesize, CVec3, FieldRole, KGrid, RVec3, SpectralVectorField,
};

/// One numeric check: passes when `value < tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            passed: value.is_finite() && value < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CheckReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        CheckReport { passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn max_diff(a: &[CVec3], b: &[CVec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &[CVec3]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Cross-picture agreement on a seeded random transverse state, plus the
/// angular-momentum comparison on `packet` when one is given.
pub fn crosscheck(
    grid: &KGrid,
    medium: &MediumParams,
    packet: Option<&PhotonWaveFunction>,
    gradient: KGradient,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let phi = random_transverse_phi(grid, medium, grid.n() / 4, &mut rng);
    let (e, b) = electric_from_phi(&phi);
    let (er, br) = (synthesize(&e)?, synthesize(&b)?);

    let back = forward_transform(&er, FieldRole::Electric)?;
    checks.push(Check::below("transform round trip", max_diff(&back.values, &e.values) / max_abs(&e.values), 1e-12));

    let (w_r, w_k, w_phi) = (energy_realspace(&er, &br, medium)?, energy_kspace(&e, &b, medium)?, energy_phi(&phi));
    checks.push(Check::below("energy: real space vs k-space", rel(w_r, w_k), 1e-10));
    checks.push(Check::below("energy: k-space vs wave function", rel(w_k, w_phi), 1e-10));

    let (p_r, p_phi) = (momentum_realspace(&er, &br, medium)?, momentum_phi(&phi));
    checks.push(Check::below(
        "momentum: real space vs wave function (relative to E/c)",
        (p_r - p_phi).norm() / (w_phi / medium.c),
        1e-10,
    ));

    let t = rng.gen_range(0.0..10.0);
    let later = evolve_phi(&phi, t);
    let (e_t, b_t, de, db) = fields_with_derivatives(&later);
    let res = free_space_residuals(&MaxwellState::new(e_t, b_t, *medium)?, &de, &db)?;
    checks.push(Check::below("Maxwell residuals after evolution (relative)", res.max_relative(), 1e-10));

    let h = hamiltonian_apply(&later);
    let sr = schrodinger_residual(&later, &later.time_derivative())? / max_abs(&h.phi).max(f64::MIN_POSITIVE);
    checks.push(Check::below("Schrodinger residual (relative)", sr, 1e-12));
    checks.push(Check::below("norm drift under evolution", (later.norm() - phi.norm()).abs(), 1e-14));
    checks.push(Check::below("energy drift under evolution", rel(energy_phi(&later), w_phi), 1e-12));

    if grid.dim() == 3 {
        let pops = helicity_decompose(&phi)?;
        let norm = phi.norm();
        checks.push(Check::below("longitudinal helicity population / norm", pops.zero / norm, 1e-10));
        checks.push(Check::below("helicity populations sum to norm", rel(pops.total(), norm), 1e-12));
        let (s0, s1) = (spin_phi(&phi), spin_phi(&later));
        checks.push(Check::below("spin part drift under evolution", (s1 - s0).norm() / norm, 1e-12));
    }

    if let Some(packet) = packet {
        if grid.dim() == 3 {
            let (pe, pb) = electric_from_phi(packet);
            let m_real = angular_momentum_realspace(&synthesize(&pe)?, &synthesize(&pb)?, medium, RVec3::zeros())?;
            let m_phi = angular_momentum_phi(packet, gradient)?.total();
            checks.push(Check::below(
                "angular momentum: real space vs orbital + spin (relative)",
                (m_real - m_phi).norm() / m_phi.norm().max(f64::MIN_POSITIVE),
                1e-6,
            ));
        }
    }

    let audit = SpinMatrices::new(medium.hbar).audit();
    checks.push(Check::below("spin algebra", audit.max(), 1e-14));
    let worst = (0..1000)
        .map(|_| {
            let k = RVec3::from_fn(|_, _| rng.gen_range(-3.0..3.0));
            transverse_energy_identity_check(&k, medium).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    checks.push(Check::below("transverse-pair identity for the Hamiltonian", worst, 1e-12));
    Ok(CheckReport::from_checks(checks))
}

/// Invariant suite on small grids. Seeded, so repeated runs agree exactly.
pub fn run_audit(seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let medium = MediumParams::natural();
    let mut checks = Vec::new();

    checks.push(Check::below("spin algebra", SpinMatrices::new(1.0).audit().max(), 1e-14));

    let mut trip = 0.0f64;
    let mut parseval = 0.0f64;
    for (dim, n) in [(1, 8), (1, 16), (1, 32), (2, 8), (2, 16), (2, 32), (3, 8), (3, 16)] {
        let g = KGrid::new(dim, n, rng.gen_range(1.0..20.0))?;
        let f = random_band_limited_field(&g, n / 2 - 1, &mut rng);
        let s = forward_transform(&f, FieldRole::Electric)?;
        let back = synthesize(&s)?;
        let scale = f.values.iter().map(|v| v.amax()).fold(0.0, f64::max);
        let err = f.values.iter().zip(&back.values).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
        trip = trip.max(err / scale);
        let lhs: f64 = f.values.iter().map(|v| v.norm_squared()).sum::<f64>() * g.r_cell();
        let rhs: f64 = s.values.iter().map(crate::spectral::norm_sqr3).sum::<f64>() * g.k_cell() * g.two_pi_d();
        parseval = parseval.max(rel(lhs, rhs));
    }
    checks.push(Check::below("transform round trip", trip, 1e-12));
    checks.push(Check::below("discrete Parseval", parseval, 1e-10));

    let g = KGrid::new(3, 8, 5.0)?;
    let mut s = SpectralVectorField::from_fn(g, FieldRole::Electric, |_| CVec3::zeros());
    for v in &mut s.values {
        *v = CVec3::from_fn(|_, _| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    enforce_reality(&mut s);
    let once = s.clone();
    enforce_reality(&mut s);
    checks.push(Check::below("reality projection is idempotent", max_diff(&once.values, &s.values), 1e-15));
    checks.push(Check::below("reality violation after projection", reality_violation(&s), 1e-14));

    let mut proj = 0.0f64;
    for _ in 0..1000 {
        let k = RVec3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
        let p = hamiltonian_matrix(&k, &medium) / (medium.hbar * medium.c * k.norm());
        proj = proj.max((p * p - p).abs().max()).max((p - p.transpose()).abs().max()).max((p * k).norm() / k.norm());
    }
    checks.push(Check::below("Hamiltonian is a scaled transverse projector", proj, 1e-14));

    let mut periodic = 0.0f64;
    for _ in 0..100 {
        let k = RVec3::from_fn(|_, _| rng.gen_range(-2.0..2.0));
        let e0 = CVec3::from_fn(|_, _| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let d0 = CVec3::from_fn(|_, _| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let (e, d) = evolve_free_mode(&e0, &d0, &k, &medium, TAU / k.norm());
        periodic = periodic.max((e - e0).norm() / e0.norm()).max((d - d0).norm() / d0.norm());
    }
    checks.push(Check::below("free mode returns after one period", periodic, 1e-13));

    let cross = crosscheck(&KGrid::new(3, 16, 16.0)?, &medium, None, KGradient::Spectral, seed)?;
    let extra: Vec<Check> = cross.checks.into_iter().filter(|c| !checks.iter().any(|d| d.name == c.name)).collect();
    checks.extend(extra);
    Ok(CheckReport::from_checks(checks))
}
