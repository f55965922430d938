//! Grids, spectral fields and the Fourier pair
//! `𝓕(k) = (2π)^{-d} ∫ f(r) e^{-ik·r} d^d r`, `f(r) = ∫ 𝓕(k) e^{ik·r} d^d k`.

mod field;
mod grid;
pub mod snapshot;
mod transform;

pub use field::{CVec3, FieldRole, RVec3, RealVectorField, ScalarSpectrum, SpectralVectorField};
pub(crate) use field::{bilinear, conj3, czero3, norm_sqr3, rcross, rdot, scale3, to_complex};
pub use grid::KGrid;
pub use transform::{
    analyze_complex, enforce_reality, forward_transform, imaginary_residue, nyquist_energy_fraction,
    reality_violation, synthesize, synthesize_complex, synthesize_values, NYQUIST_WARN_FRACTION,
    REALITY_TOLERANCE,
};
