//! Energy, momentum, angular momentum and helicity in the field and
//! wave-function pictures.

mod angular;
mod energy;
mod helicity;
mod report;
mod spin;

pub use angular::{
    angular_momentum_phi, angular_momentum_realspace, spin_phi, edge_weight, k_gradient, orbital_apply, AngularMomentum,
    KGradient, EDGE_WARN_FRACTION,
};
pub use energy::{energy_kspace, energy_kspace_complex, energy_phi, energy_realspace, momentum_phi, momentum_realspace};
pub use helicity::{
    hamiltonian_matrix, helicity_basis, helicity_decompose, transverse_energy_identity_check,
    transverse_identity_deviation, transverse_pair, HelicityPopulations,
};
pub use report::ObservableReport;
pub use spin::{spin_apply, SpinAudit, SpinMatrices};
