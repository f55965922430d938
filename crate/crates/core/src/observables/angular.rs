use log::warn;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Result};
use crate::medium::MediumParams;
use crate::photon::PhotonWaveFunction;
use crate::spectral::{
    analyze_complex, conj3, czero3, norm_sqr3, scale3, synthesize_values, CVec3, KGrid, RVec3, RealVectorField,
};
use crate::sum;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative weight near the edge of a grid above which derivatives are
/// flagged as unreliable.
pub const EDGE_WARN_FRACTION: f64 = 1e-8;

/// How `∇_k` is realized on the k-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KGradient {
    /// Exact for band-limited φ: multiply the synthesized field by `-ir` and
    /// transform back. Needs the real-space field to vanish at the box edge.
    #[default]
    Spectral,
    /// Periodic centred differences with error `O(dk⁴)`.
    FourthOrder,
}

/// Share of `Σ|f|²` on nodes within two points of the grid edge.
pub fn edge_weight(grid: &KGrid, values: &[CVec3]) -> f64 {
    let band = (grid.n() / 2) as i64 - 2;
    let total = sum::sum(values.iter().map(norm_sqr3));
    if total == 0.0 {
        return 0.0;
    }
    let edge = sum::sum(
        values
            .iter()
            .enumerate()
            .filter(|(i, _)| grid.max_abs_signed(*i) >= band)
            .map(|(_, v)| norm_sqr3(v)),
    );
    edge / total
}

fn fourth_order(grid: &KGrid, values: &[CVec3], axis: usize) -> Vec<CVec3> {
    let n = grid.n();
    let w = 1.0 / (12.0 * grid.dk());
    (0..grid.len())
        .map(|idx| {
            let m = grid.multi_index(idx);
            let at = |off: usize| {
                let mut mm = m;
                mm[axis] = (m[axis] + off) % n;
                values[grid.flat_index(mm)]
            };
            scale3(&(at(n - 2) - at(2) + scale3(&(at(1) - at(n - 1)), 8.0)), w)
        })
        .collect()
}

/// `∂f/∂k_j` for `j = 1, 2, 3`; axes beyond the grid dimension give zero.
pub fn k_gradient(grid: &KGrid, values: &[CVec3], method: KGradient) -> Result<[Vec<CVec3>; 3]> {
    if values.len() != grid.len() {
        return Err(structural("field length does not match the grid"));
    }
    let zeros = || vec![czero3(); grid.len()];
    let mut out = [zeros(), zeros(), zeros()];
    match method {
        KGradient::FourthOrder => {
            for (axis, slot) in out.iter_mut().enumerate().take(grid.dim()) {
                *slot = fourth_order(grid, values, axis);
            }
        }
        KGradient::Spectral => {
            let psi = synthesize_values(grid, values)?;
            let edge = edge_weight(grid, &psi);
            if edge > EDGE_WARN_FRACTION {
                warn!("{edge:.3e} of the real-space weight touches the box edge; spectral k-derivatives are inaccurate");
            }
            for (axis, slot) in out.iter_mut().enumerate().take(grid.dim()) {
                let weighted: Vec<CVec3> = psi
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (-I * grid.r_vector(i)[axis]))
                    .collect();
                *slot = analyze_complex(grid, &weighted)?;
            }
        }
    }
    Ok(out)
}

/// `L_α φ = -iħ (k × ∇_k)_α φ` for `α = 1, 2, 3`, acting on each vector
/// component separately.
pub fn orbital_apply(phi: &PhotonWaveFunction, method: KGradient) -> Result<[Vec<CVec3>; 3]> {
    let grid = &phi.grid;
    if grid.dim() != 3 {
        return Err(structural(format!("orbital angular momentum needs three dimensions, grid has {}", grid.dim())));
    }
    let edge = edge_weight(grid, &phi.phi);
    if edge > EDGE_WARN_FRACTION {
        warn!("{edge:.3e} of |φ|² sits at the k-grid edge");
    }
    let d = k_gradient(grid, &phi.phi, method)?;
    let f = -I * phi.medium.hbar;
    let ks = grid.k_vectors();
    let comp = |a: usize, b: usize| -> Vec<CVec3> {
        // (k_a ∂_b - k_b ∂_a)
        (0..grid.len())
            .map(|i| (scale3(&d[b][i], ks[i][a]) - scale3(&d[a][i], ks[i][b])) * f)
            .collect()
    };
    Ok([comp(1, 2), comp(2, 0), comp(0, 1)])
}

/// Orbital and spin parts of the angular momentum computed from φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularMomentum {
    pub orbital: RVec3,
    pub spin: RVec3,
    /// Largest imaginary part discarded from the orbital sums.
    pub orbital_imaginary: f64,
}

impl AngularMomentum {
    pub fn total(&self) -> RVec3 {
        self.orbital + self.spin
    }
}

/// `M′_α = Σ_k φ*·(L_α φ) dk³` and `M″ = -iħ Σ_k φ*×φ dk³`, about the
/// origin of the box-centred coordinates.
pub fn angular_momentum_phi(phi: &PhotonWaveFunction, method: KGradient) -> Result<AngularMomentum> {
    let l = orbital_apply(phi, method)?;
    let cell = phi.grid.k_cell();
    let mut orbital = RVec3::zeros();
    let mut imag = 0.0f64;
    for (a, la) in l.iter().enumerate() {
        let z = sum::sum_complex(phi.phi.iter().zip(la).map(|(p, q)| conj3(p).dot(q))) * cell;
        orbital[a] = z.re;
        imag = imag.max(z.im.abs());
    }
    Ok(AngularMomentum {
        orbital,
        spin: spin_phi(phi),
        orbital_imaginary: imag,
    })
}

/// The spin part `M″` alone; needs no k-derivatives.
pub fn spin_phi(phi: &PhotonWaveFunction) -> RVec3 {
    let cell = phi.grid.k_cell();
    let s = sum::sum_cvec3(phi.phi.iter().map(|p| conj3(p).cross(p))) * (-I * phi.medium.hbar * cell);
    s.map(|z| z.re)
}

/// `ε₀ Σ_r (r - center) × (E × B) dx³`.
pub fn angular_momentum_realspace(
    e: &RealVectorField,
    b: &RealVectorField,
    medium: &MediumParams,
    center: RVec3,
) -> Result<RVec3> {
    let grid = &e.grid;
    if grid.dim() != 3 {
        return Err(structural(format!("angular momentum needs three dimensions, grid has {}", grid.dim())));
    }
    if e.grid != b.grid || e.values.len() != grid.len() || b.values.len() != grid.len() {
        return Err(structural("electric and magnetic fields do not share a grid"));
    }
    let s = sum::sum_vec3((0..grid.len()).map(|i| (grid.r_vector(i) - center).cross(&e.values[i].cross(&b.values[i]))));
    Ok(s * (medium.epsilon0 * grid.r_cell()))
}
