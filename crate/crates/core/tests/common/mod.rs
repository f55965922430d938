//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, System, Vector2};
use photon_kspace::spectral::KGrid;

pub type CVec3 = Vector3<Complex64>;

/// `(dx/2π)^d Σ_r f(r) e^{-ik·r}` evaluated term by term.
pub fn direct_analysis(grid: &KGrid, f: &[Vector3<f64>]) -> Vec<CVec3> {
    let w = (grid.dx() / (2.0 * PI)).powi(grid.dim() as i32);
    let rs = grid.r_vectors();
    (0..grid.len())
        .map(|ki| {
            let k = grid.k_vector(ki);
            let mut acc = CVec3::zeros();
            for (r, v) in rs.iter().zip(f) {
                let ph = Complex64::from_polar(1.0, -k.dot(r));
                acc += v.map(|x| Complex64::new(x, 0.0)) * ph;
            }
            acc * Complex64::new(w, 0.0)
        })
        .collect()
}

/// `dk^d Σ_k s(k) e^{ik·r}` evaluated term by term.
pub fn direct_synthesis(grid: &KGrid, s: &[CVec3]) -> Vec<CVec3> {
    let w = grid.dk().powi(grid.dim() as i32);
    let ks = grid.k_vectors();
    (0..grid.len())
        .map(|ri| {
            let r = grid.r_vector(ri);
            let mut acc = CVec3::zeros();
            for (k, v) in ks.iter().zip(s) {
                acc += v * Complex64::from_polar(1.0, k.dot(&r));
            }
            acc * Complex64::new(w, 0.0)
        })
        .collect()
}

struct DampedOscillator {
    gamma: f64,
    omega: f64,
}

impl System<f64, Vector2<f64>> for DampedOscillator {
    fn system(&self, _t: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        dy[0] = y[1];
        dy[1] = -self.gamma * y[1] - self.omega * self.omega * y[0];
    }
}

/// `y'' + γy' + ω²y = 0` integrated by adaptive Dormand–Prince on
/// `[0, t_end]`. Returns `(t, y, y')` at every accepted step, so no value
/// comes from dense-output interpolation.
pub fn dopri_oscillator(omega: f64, gamma: f64, y0: f64, dy0: f64, t_end: f64) -> Vec<(f64, f64, f64)> {
    let mut stepper = Dopri5::new(DampedOscillator { gamma, omega }, 0.0, t_end, t_end, Vector2::new(y0, dy0), 1e-13, 1e-15);
    stepper.set_output(OutputType::Sparse);
    stepper.integrate().expect("integration failed");
    stepper.x_out().iter().zip(stepper.y_out()).map(|(t, y)| (*t, y[0], y[1])).collect()
}

pub fn max_abs_diff(a: &[CVec3], b: &[CVec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max)
}

pub fn max_abs(a: &[CVec3]) -> f64 {
    a.iter().map(|x| x.iter().map(|z| z.norm()).fold(0.0, f64::max)).fold(0.0, f64::max)
}
