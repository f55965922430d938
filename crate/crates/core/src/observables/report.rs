use serde::Serialize;

use super::angular::{angular_momentum_phi, KGradient};
use super::energy::{energy_phi, momentum_phi};
use super::helicity::helicity_decompose;
use crate::error::Result;
use crate::photon::PhotonWaveFunction;

/// Observables of a photon wave function. Angular momentum and helicity are
/// only defined in three dimensions and are `None` otherwise; `M′` is taken
/// about the origin of the box-centred coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableReport {
    pub energy: f64,
    pub momentum: [f64; 3],
    pub m_orbital: Option<[f64; 3]>,
    pub m_spin: Option<[f64; 3]>,
    pub m_total: Option<[f64; 3]>,
    pub helicity: Option<[f64; 3]>,
    pub norm: f64,
}

fn arr(v: nalgebra::Vector3<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

impl ObservableReport {
    pub fn from_phi(phi: &PhotonWaveFunction, gradient: KGradient) -> Result<Self> {
        let (mut m_orbital, mut m_spin, mut m_total, mut helicity) = (None, None, None, None);
        if phi.grid.dim() == 3 {
            let m = angular_momentum_phi(phi, gradient)?;
            m_orbital = Some(arr(m.orbital));
            m_spin = Some(arr(m.spin));
            m_total = Some(arr(m.total()));
            helicity = Some(helicity_decompose(phi)?.as_array());
        }
        Ok(ObservableReport {
            energy: energy_phi(phi),
            momentum: arr(momentum_phi(phi)),
            m_orbital,
            m_spin,
            m_total,
            helicity,
            norm: phi.norm(),
        })
    }

    pub fn csv_header() -> &'static str {
        "energy,momentum_1,momentum_2,momentum_3,m_orbital_1,m_orbital_2,m_orbital_3,\
         m_spin_1,m_spin_2,m_spin_3,m_total_1,m_total_2,m_total_3,p_minus,p_zero,p_plus,norm"
    }

    /// Values in [`Self::csv_header`] order; undefined entries are left empty.
    pub fn csv_row(&self) -> String {
        let mut cells = vec![self.energy.to_string()];
        cells.extend(self.momentum.iter().map(f64::to_string));
        for v in [&self.m_orbital, &self.m_spin, &self.m_total, &self.helicity] {
            match v {
                Some(a) => cells.extend(a.iter().map(f64::to_string)),
                None => cells.extend(std::iter::repeat_n(String::new(), 3)),
            }
        }
        cells.push(self.norm.to_string());
        cells.join(",")
    }
}
