use serde::Serialize;

use crate::medium::MediumParams;
use crate::spectral::{scale3, CVec3, RVec3};

/// Relative distance `|γ - 2ω₀|/(2ω₀)` below which a mode is treated as
/// critically damped.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingRegime {
    Free,
    Underdamped,
    Critical,
    Overdamped,
}

/// Classifies the oscillator `x'' + γx' + ω₀²x = 0`.
pub fn damping_regime(omega0: f64, gamma: f64) -> DampingRegime {
    if gamma == 0.0 {
        DampingRegime::Free
    } else if omega0 > 0.0 && ((gamma - 2.0 * omega0) / (2.0 * omega0)).abs() < CRITICAL_TOLERANCE {
        DampingRegime::Critical
    } else if gamma < 2.0 * omega0 {
        DampingRegime::Underdamped
    } else {
        DampingRegime::Overdamped
    }
}

/// Real 2×2 propagator of `x'' + γx' + ω₀²x = 0`:
/// `(x(t), x'(t)) = P · (x(0), x'(0))`.
///
/// All branches share the form
/// `P = e^{-γt/2} [[C + γS/2, S], [-ω₀²S, C - γS/2]]`
/// with `(C, S)` equal to `(cos ω_d t, sin(ω_d t)/ω_d)`, `(1, t)` or
/// `(cosh βt, sinh(βt)/β)`.
pub fn mode_propagator(omega0: f64, gamma: f64, t: f64) -> [[f64; 2]; 2] {
    let half = 0.5 * gamma;
    let w2 = omega0 * omega0;
    // eC = e^{-γt/2}·C and eS = e^{-γt/2}·S
    let (ec, es) = match damping_regime(omega0, gamma) {
        DampingRegime::Free => {
            if omega0 == 0.0 {
                return [[1.0, t], [0.0, 1.0]];
            }
            let (s, c) = (omega0 * t).sin_cos();
            return [[c, s / omega0], [-omega0 * s, c]];
        }
        DampingRegime::Underdamped => {
            let wd = ((omega0 - half) * (omega0 + half)).sqrt();
            let e = (-half * t).exp();
            let (s, c) = (wd * t).sin_cos();
            (e * c, e * s / wd)
        }
        DampingRegime::Critical => {
            let e = (-half * t).exp();
            (e, e * t)
        }
        DampingRegime::Overdamped => {
            let beta = ((half - omega0) * (half + omega0)).sqrt();
            if (beta * t).abs() < 1.0 {
                let e = (-half * t).exp();
                (e * (beta * t).cosh(), e * (beta * t).sinh() / beta)
            } else {
                // Slow root written without cancellation.
                let r1 = -w2 / (half + beta);
                let r2 = -half - beta;
                let (e1, e2) = ((r1 * t).exp(), (r2 * t).exp());
                (0.5 * (e1 + e2), 0.5 * (e1 - e2) / beta)
            }
        }
    };
    [[ec + half * es, es], [-w2 * es, ec - half * es]]
}

fn apply(p: [[f64; 2]; 2], e0: &CVec3, de0: &CVec3) -> (CVec3, CVec3) {
    (
        scale3(e0, p[0][0]) + scale3(de0, p[0][1]),
        scale3(e0, p[1][0]) + scale3(de0, p[1][1]),
    )
}

/// Exact vacuum evolution of one mode: `E(t) = E₀ cos ωt + (Ė₀/ω) sin ωt`
/// with `ω = c|k|`. The zero mode drifts linearly. Conductivity is ignored.
pub fn evolve_free_mode(e0: &CVec3, de0: &CVec3, k: &RVec3, medium: &MediumParams, t: f64) -> (CVec3, CVec3) {
    apply(mode_propagator(medium.c * k.norm(), 0.0, t), e0, de0)
}

/// Exact evolution of one mode in an ohmic medium, `Ë + γĖ + (ck)²E = 0`
/// with `γ = σ/ε₀`.
pub fn evolve_ohmic_mode(e0: &CVec3, de0: &CVec3, k: &RVec3, medium: &MediumParams, t: f64) -> (CVec3, CVec3) {
    apply(mode_propagator(medium.c * k.norm(), medium.gamma(), t), e0, de0)
}
