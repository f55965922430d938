//! Maxwell's equations mode by mode in k-space.

mod modes;
mod residuals;
mod state;

pub use modes::{
    damping_regime, evolve_free_mode, evolve_ohmic_mode, mode_propagator, DampingRegime, CRITICAL_TOLERANCE,
};
pub use residuals::{b_from_e, continuity_residual, free_space_residuals, maxwell_residuals, MaxwellResiduals};
pub use state::{evolve_state, evolve_state_with_derivatives, EvolvedState, MaxwellState};
pub(crate) use residuals::b_mode;
