use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::KGrid;
use crate::error::{structural, Result};

pub type CVec3 = Vector3<Complex64>;
pub type RVec3 = Vector3<f64>;

pub(crate) fn czero3() -> CVec3 {
    Vector3::from_element(Complex64::new(0.0, 0.0))
}

pub(crate) fn to_complex(v: &RVec3) -> CVec3 {
    v.map(|x| Complex64::new(x, 0.0))
}

pub(crate) fn conj3(v: &CVec3) -> CVec3 {
    v.map(|z| z.conj())
}

/// `Σ_a a_a b_a` without conjugation.
pub(crate) fn bilinear(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `Σ_a |v_a|²`.
pub(crate) fn norm_sqr3(v: &CVec3) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()
}

pub(crate) fn rcross(k: &RVec3, v: &CVec3) -> CVec3 {
    to_complex(k).cross(v)
}

pub(crate) fn rdot(k: &RVec3, v: &CVec3) -> Complex64 {
    v[0] * k[0] + v[1] * k[1] + v[2] * k[2]
}

/// Physical meaning of a stored vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRole {
    Electric,
    Magnetic,
    Current,
    PhotonWf,
}

impl FieldRole {
    pub(crate) fn code(self) -> u8 {
        match self {
            FieldRole::Electric => 0,
            FieldRole::Magnetic => 1,
            FieldRole::Current => 2,
            FieldRole::PhotonWf => 3,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FieldRole::Electric),
            1 => Some(FieldRole::Magnetic),
            2 => Some(FieldRole::Current),
            3 => Some(FieldRole::PhotonWf),
            _ => None,
        }
    }
}

fn check_len(grid: &KGrid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(structural(format!(
            "field has {len} nodes but the grid has {}",
            grid.len()
        )));
    }
    Ok(())
}

/// A complex 3-vector per k-grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    pub grid: KGrid,
    pub values: Vec<CVec3>,
    pub time: f64,
    pub role: FieldRole,
}

impl SpectralVectorField {
    pub fn new(grid: KGrid, values: Vec<CVec3>, time: f64, role: FieldRole) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(SpectralVectorField { grid, values, time, role })
    }

    pub fn zeros(grid: KGrid, role: FieldRole) -> Self {
        SpectralVectorField {
            grid,
            values: vec![czero3(); grid.len()],
            time: 0.0,
            role,
        }
    }

    /// Builds a field by evaluating `f(k)` on every node.
    pub fn from_fn(grid: KGrid, role: FieldRole, f: impl Fn(RVec3) -> CVec3) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.k_vector(i))).collect();
        SpectralVectorField { grid, values, time: 0.0, role }
    }

    pub(crate) fn check_compatible(&self, other: &SpectralVectorField) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(structural(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        check_len(&self.grid, self.values.len())?;
        check_len(&other.grid, other.values.len())
    }

    pub(crate) fn check_len(&self) -> Result<()> {
        check_len(&self.grid, self.values.len())
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|v| v.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// A real 3-vector per real-space node.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVectorField {
    pub grid: KGrid,
    pub values: Vec<RVec3>,
    pub time: f64,
}

impl RealVectorField {
    pub fn new(grid: KGrid, values: Vec<RVec3>, time: f64) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(RealVectorField { grid, values, time })
    }

    pub fn from_fn(grid: KGrid, f: impl Fn(RVec3) -> RVec3) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.r_vector(i))).collect();
        RealVectorField { grid, values, time: 0.0 }
    }
}

/// A complex scalar per k-grid node, used for charge densities.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSpectrum {
    pub grid: KGrid,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl ScalarSpectrum {
    pub fn new(grid: KGrid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(ScalarSpectrum { grid, values, time })
    }

    pub fn zeros(grid: KGrid) -> Self {
        ScalarSpectrum {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            time: 0.0,
        }
    }
}

/// `s·v` for a real scalar.
pub(crate) fn scale3(v: &CVec3, s: f64) -> CVec3 {
    v.map(|z| z * s)
}
