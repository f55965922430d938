//! Binary snapshots of spectral vector fields.
//!
//! Layout, all little-endian:
//!
//! | offset | size | content                                  |
//! |--------|------|------------------------------------------|
//! | 0      | 4    | magic `PKS1`                             |
//! | 4      | 4    | dimension (u32)                          |
//! | 8      | 4    | points per axis (u32)                    |
//! | 12     | 8    | box length (f64)                         |
//! | 20     | 8    | time (f64)                               |
//! | 28     | 1    | role (0 electric, 1 magnetic, 2 current, 3 photon wave function) |
//! | 29     | 1    | unit system (0 natural, 1 SI, 2 Lorentz-Heaviside) |
//! | 30     | ...  | per node, per component: re (f64), im (f64) |
//!
//! Nodes follow the grid's native order (last axis fastest).

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::{CVec3, FieldRole, SpectralVectorField};
use super::grid::KGrid;
use crate::error::{Error, Result};
use crate::medium::UnitSystem;

pub const MAGIC: &[u8; 4] = b"PKS1";
pub const HEADER_LEN: usize = 30;

pub fn write_snapshot<W: Write>(mut w: W, field: &SpectralVectorField, units: UnitSystem) -> Result<()> {
    field.check_len()?;
    let g = &field.grid;
    let mut buf = Vec::with_capacity(HEADER_LEN + g.len() * 48);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(g.n() as u32).to_le_bytes());
    buf.extend_from_slice(&g.box_length().to_le_bytes());
    buf.extend_from_slice(&field.time.to_le_bytes());
    buf.push(field.role.code());
    buf.push(units.code());
    for v in &field.values {
        for z in v.iter() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn snapshot_bytes(field: &SpectralVectorField, units: UnitSystem) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    write_snapshot(&mut out, field, units)?;
    Ok(out)
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("8-byte slice"))
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("4-byte slice"))
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<(SpectralVectorField, UnitSystem)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let dim = u32_at(&bytes, 4) as usize;
    let n = u32_at(&bytes, 8) as usize;
    let grid = KGrid::new(dim, n, f64_at(&bytes, 12))?;
    let time = f64_at(&bytes, 20);
    let role = FieldRole::from_code(bytes[28])
        .ok_or_else(|| Error::Format(format!("unknown role tag {}", bytes[28])))?;
    let units = UnitSystem::from_code(bytes[29])
        .ok_or_else(|| Error::Format(format!("unknown unit tag {}", bytes[29])))?;
    let expect = HEADER_LEN + grid.len() * 48;
    if bytes.len() != expect {
        return Err(Error::Format(format!("expected {expect} bytes, found {}", bytes.len())));
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(48)
        .map(|c| {
            let z = |j: usize| Complex64::new(f64_at(c, 16 * j), f64_at(c, 16 * j + 8));
            CVec3::new(z(0), z(1), z(2))
        })
        .collect();
    Ok((SpectralVectorField::new(grid, values, time, role)?, units))
}
