//! Free-space electrodynamics on a periodic Fourier grid, the photon wave
//! function built from it, and the observables that go with it.
//!
//! Fields are stored per wave vector on a [`spectral::KGrid`]. Time evolution
//! is exact per mode ([`maxwell::mode_propagator`]); no time stepping is
//! involved. [`photon::PhotonWaveFunction`] packs `E` and `dE/dt` into one
//! positive-frequency amplitude, and [`observables`] computes energy,
//! momentum, spin, orbital angular momentum and helicity from it.
//! [`scenario`] drives reproducible runs from TOML files.
//!
//! ```
//! use photon_kspace::photon::evolve_phi;
//! use photon_kspace::random::random_transverse_phi;
//! use photon_kspace::observables::energy_phi;
//! use photon_kspace::spectral::KGrid;
//! use photon_kspace::MediumParams;
//! use rand::SeedableRng;
//!
//! let grid = KGrid::new(3, 8, 8.0).unwrap();
//! let medium = MediumParams::natural();
//! let phi = random_transverse_phi(&grid, &medium, 2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(0));
//! let later = evolve_phi(&phi, 10.0);
//! assert!((energy_phi(&later) - energy_phi(&phi)).abs() < 1e-12 * energy_phi(&phi));
//! ```

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod damped;
pub mod error;
pub mod maxwell;
pub mod medium;
pub mod observables;
pub mod packets;
pub mod photon;
pub mod random;
pub mod scenario;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result, Violation};
pub use medium::{MediumParams, UnitSystem};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/maxwell.md")]
    mod maxwell {}
    #[doc = include_str!("../../../book/src/photon.md")]
    mod photon {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/packets.md")]
    mod packets {}
    #[doc = include_str!("../../../book/src/damping.md")]
    mod damping {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
