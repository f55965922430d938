use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::field::{conj3, norm_sqr3, to_complex, CVec3, FieldRole, RealVectorField, SpectralVectorField};
use super::grid::KGrid;
use crate::error::{Error, Result};
use crate::sum;

/// Largest tolerated relative Hermitian-symmetry defect before synthesis refuses.
pub const REALITY_TOLERANCE: f64 = 1e-10;

/// Relative energy on unpaired Nyquist nodes above which a warning is logged.
pub const NYQUIST_WARN_FRACTION: f64 = 1e-8;

/// Unnormalized in-place n-dimensional DFT of a scalar array laid out on `grid`.
fn fft_scalar(grid: &KGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let d = grid.dim();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        if stride == 1 {
            for chunk in data.chunks_exact_mut(n) {
                fft.process_with_scratch(chunk, &mut scratch);
            }
            continue;
        }
        let block = stride * n;
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, z) in line.iter_mut().enumerate() {
                    *z = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, z) in line.iter().enumerate() {
                    data[base + j * stride] = *z;
                }
            }
        }
    }
}

/// Transforms the three components independently and scales the result.
pub(crate) fn fft_vector(grid: &KGrid, values: &[CVec3], inverse: bool, scale: f64) -> Vec<CVec3> {
    let comps: Vec<Vec<Complex64>> = (0..3)
        .into_par_iter()
        .map(|c| {
            let mut buf: Vec<Complex64> = values.iter().map(|v| v[c]).collect();
            fft_scalar(grid, &mut buf, inverse);
            buf
        })
        .collect();
    (0..values.len())
        .map(|i| CVec3::new(comps[0][i] * scale, comps[1][i] * scale, comps[2][i] * scale))
        .collect()
}

/// `𝓕(k) = (2π)^{-d} Σ_r f(r) e^{-ik·r} dx^d` applied to complex node values.
pub fn analyze_complex(grid: &KGrid, values: &[CVec3]) -> Result<Vec<CVec3>> {
    check_nodes(grid, values.len())?;
    let scale = grid.r_cell() / grid.two_pi_d();
    Ok(fft_vector(grid, values, false, scale))
}

/// `f(r) = Σ_k 𝓕(k) e^{ik·r} dk^d` without any reality check.
pub fn synthesize_values(grid: &KGrid, values: &[CVec3]) -> Result<Vec<CVec3>> {
    check_nodes(grid, values.len())?;
    Ok(fft_vector(grid, values, true, grid.k_cell()))
}

fn check_nodes(grid: &KGrid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(crate::error::structural(format!(
            "field has {len} nodes but the grid has {}",
            grid.len()
        )));
    }
    Ok(())
}

/// Spectrum of a real vector field.
pub fn forward_transform(field: &RealVectorField, role: FieldRole) -> Result<SpectralVectorField> {
    let complex: Vec<CVec3> = field.values.iter().map(to_complex).collect();
    let values = analyze_complex(&field.grid, &complex)?;
    SpectralVectorField::new(field.grid, values, field.time, role)
}

/// Real field of a Hermitian spectrum.
///
/// Fails with [`Error::Constraint`] when the spectrum breaks `𝓕(-k) = 𝓕*(k)`
/// by more than [`REALITY_TOLERANCE`]. The imaginary part of the synthesized
/// field, which then only holds rounding noise and any anti-Hermitian content
/// of unpaired Nyquist nodes, is discarded.
pub fn synthesize(spec: &SpectralVectorField) -> Result<RealVectorField> {
    spec.check_len()?;
    let violation = reality_violation(spec);
    if violation > REALITY_TOLERANCE {
        return Err(Error::Constraint {
            what: "reality of the spectrum".into(),
            magnitude: violation,
            tolerance: REALITY_TOLERANCE,
        });
    }
    let frac = nyquist_energy_fraction(spec);
    if frac > NYQUIST_WARN_FRACTION {
        warn!("{frac:.3e} of the spectral energy sits on unpaired Nyquist nodes");
    }
    let grid = &spec.grid;
    let complex = synthesize_values(grid, &spec.values)?;
    let values = complex.iter().map(|v| v.map(|z| z.re)).collect();
    RealVectorField::new(*grid, values, spec.time)
}

/// Complex field of an arbitrary spectrum (no Hermitian requirement).
pub fn synthesize_complex(spec: &SpectralVectorField) -> Result<Vec<CVec3>> {
    synthesize_values(&spec.grid, &spec.values)
}

/// `max|𝓕(k) - 𝓕*(-k)| / (1 + max|𝓕|)` over paired nodes.
pub fn reality_violation(spec: &SpectralVectorField) -> f64 {
    let grid = &spec.grid;
    let mut worst = 0.0f64;
    for (i, v) in spec.values.iter().enumerate() {
        if grid.is_nyquist(i) {
            continue;
        }
        let partner = conj3(&spec.values[grid.negated(i)]);
        let diff = (v - partner).iter().map(|z| z.norm()).fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    worst / (1.0 + spec.max_abs())
}

/// Projects onto Hermitian spectra: `𝓕 ← (𝓕(k) + 𝓕*(-k))/2`. Nodes that are
/// their own partner (every axis at 0 or the Nyquist index) keep only their
/// real part.
pub fn enforce_reality(spec: &mut SpectralVectorField) {
    let grid = spec.grid;
    let old = spec.values.clone();
    for (i, v) in spec.values.iter_mut().enumerate() {
        let avg = (old[i] + conj3(&old[grid.negated(i)])) * Complex64::new(0.5, 0.0);
        *v = if grid.negated(i) == i { avg.map(|z| Complex64::new(z.re, 0.0)) } else { avg };
    }
}

/// Share of `Σ|𝓕|²` carried by Nyquist nodes.
pub fn nyquist_energy_fraction(spec: &SpectralVectorField) -> f64 {
    let grid = &spec.grid;
    let total = sum::sum(spec.values.iter().map(norm_sqr3));
    if total == 0.0 {
        return 0.0;
    }
    let nyq = sum::sum(
        spec.values
            .iter()
            .enumerate()
            .filter(|(i, _)| grid.is_nyquist(*i))
            .map(|(_, v)| norm_sqr3(v)),
    );
    nyq / total
}

/// `max|Im f| / (1 + max|f|)` over a synthesized complex field.
pub fn imaginary_residue(values: &[CVec3]) -> f64 {
    let mut im = 0.0f64;
    let mut all = 0.0f64;
    for v in values {
        for z in v.iter() {
            im = im.max(z.im.abs());
            all = all.max(z.norm());
        }
    }
    im / (1.0 + all)
}


#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    #[test]
    fn plane_wave_lands_on_its_node() {
        let g = KGrid::new(2, 8, 4.0).unwrap();
        let dk = g.dk();
        let f = RealVectorField::from_fn(g, |r| Vector3::new((dk * (2.0 * r[0] - r[1])).cos(), 0.0, 0.0));
        let spec = forward_transform(&f, FieldRole::Electric).unwrap();
        let i = g.index_of_signed([2, -1, 0]);
        // cos(k·r) = (e^{ik·r} + e^{-ik·r})/2 and synthesis weights each node by dk^d.
        let expect = 0.5 / g.k_cell();
        assert!((spec.values[i][0].re - expect).abs() < 1e-12 * expect);
        assert!((spec.values[g.negated(i)][0].re - expect).abs() < 1e-12 * expect);
        let back = synthesize(&spec).unwrap();
        for (a, b) in back.values.iter().zip(&f.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_spectrum_is_refused() {
        let g = KGrid::new(1, 8, 1.0).unwrap();
        let mut spec = SpectralVectorField::zeros(g, FieldRole::Electric);
        spec.values[1][2] = Complex64::new(1.0, 0.0);
        assert!(matches!(synthesize(&spec), Err(Error::Constraint { .. })));
        enforce_reality(&mut spec);
        assert!(reality_violation(&spec) == 0.0);
        assert!(synthesize(&spec).is_ok());
    }

    #[test]
    fn length_mismatch_is_structural() {
        let g = KGrid::new(1, 8, 1.0).unwrap();
        let r = analyze_complex(&g, &vec![CVec3::zeros(); 16]);
        assert!(matches!(r, Err(Error::Structural(_))));
    }
}
