use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Result};

/// A cubic periodic box of `n` points per axis in `dim` dimensions together
/// with its dual wave-vector lattice.
///
/// Nodes are stored with the last axis fastest. Along each axis the index `i`
/// maps to the signed integer `i` for `i < n/2` and `i - n` otherwise, so the
/// wave numbers run over `{-n/2, ..., n/2 - 1}·dk` in transform-native order
/// and positions over `{-n/2, ..., n/2 - 1}·dx`, centred on the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGrid {
    dim: usize,
    n: usize,
    box_length: f64,
}

impl KGrid {
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(structural(format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(structural(format!("points per axis must be even and at least 4, got {n}")));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(structural(format!("box length must be positive, got {box_length}")));
        }
        Ok(KGrid { dim, n, box_length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Number of nodes, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `dk^dim`, the k-space quadrature weight.
    pub fn k_cell(&self) -> f64 {
        self.dk().powi(self.dim as i32)
    }

    /// `dx^dim`, the real-space quadrature weight.
    pub fn r_cell(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// `(2π)^dim`.
    pub fn two_pi_d(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    /// The discrete counterpart of `(2π)^d δ(k + k')`: the value of
    /// `Σ_r e^{i(k+k')·r} dx^d` at `k' = -k`, which is `(2π)^d / dk^d`.
    pub fn delta_weight(&self) -> f64 {
        self.two_pi_d() / self.k_cell()
    }

    pub fn signed(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wave numbers of one axis in transform-native order.
    pub fn axis_k_values(&self) -> Vec<f64> {
        let dk = self.dk();
        (0..self.n).map(|i| self.signed(i) as f64 * dk).collect()
    }

    /// Per-axis indices of a node; unused axes are zero.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            out[a] = rest % self.n;
            rest /= self.n;
        }
        out
    }

    pub fn flat_index(&self, m: [usize; 3]) -> usize {
        (0..self.dim).fold(0, |acc, a| acc * self.n + m[a])
    }

    /// Flat index of the node holding the wave vector `s·dk` (signed integers
    /// per axis, wrapped periodically).
    pub fn index_of_signed(&self, s: [i64; 3]) -> usize {
        let n = self.n as i64;
        let mut m = [0usize; 3];
        for a in 0..self.dim {
            m[a] = s[a].rem_euclid(n) as usize;
        }
        self.flat_index(m)
    }

    pub fn k_vector(&self, idx: usize) -> Vector3<f64> {
        let m = self.multi_index(idx);
        let dk = self.dk();
        let mut k = Vector3::zeros();
        for a in 0..self.dim {
            k[a] = self.signed(m[a]) as f64 * dk;
        }
        k
    }

    /// Position of a node in box-centred coordinates.
    pub fn r_vector(&self, idx: usize) -> Vector3<f64> {
        let m = self.multi_index(idx);
        let dx = self.dx();
        let mut r = Vector3::zeros();
        for a in 0..self.dim {
            r[a] = self.signed(m[a]) as f64 * dx;
        }
        r
    }

    pub fn k_vectors(&self) -> Vec<Vector3<f64>> {
        (0..self.len()).map(|i| self.k_vector(i)).collect()
    }

    pub fn r_vectors(&self) -> Vec<Vector3<f64>> {
        (0..self.len()).map(|i| self.r_vector(i)).collect()
    }

    /// Index of the node at `-k`. The Nyquist index `n/2` is its own negative.
    pub fn negated(&self, idx: usize) -> usize {
        let m = self.multi_index(idx);
        let mut neg = [0usize; 3];
        for a in 0..self.dim {
            neg[a] = (self.n - m[a]) % self.n;
        }
        self.flat_index(neg)
    }

    /// True when any axis sits on the unpaired frequency `-n/2·dk`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let m = self.multi_index(idx);
        m[..self.dim].contains(&(self.n / 2))
    }

    /// Largest |signed index| over the axes of a node.
    pub fn max_abs_signed(&self, idx: usize) -> i64 {
        let m = self.multi_index(idx);
        m[..self.dim].iter().map(|&i| self.signed(i).abs()).max().unwrap_or(0)
    }

    pub(crate) fn same_as(&self, other: &KGrid) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_spacings_close_to_two_pi() {
        for n in [8, 16, 32, 64] {
            for l in [1.0, 7.3, 1e-6] {
                let g = KGrid::new(3, n, l).unwrap();
                let prod = g.dx() * g.dk() * n as f64;
                assert!((prod - 2.0 * PI).abs() < 1e-13 * 2.0 * PI);
            }
        }
    }

    #[test]
    fn axis_wavenumbers_are_closed_under_negation_except_nyquist() {
        let g = KGrid::new(1, 8, 2.0 * PI).unwrap();
        let ks = g.axis_k_values();
        assert_eq!(ks, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        for &k in &ks {
            if k != -4.0 {
                assert!(ks.contains(&-k));
            }
        }
        assert!(!ks.contains(&4.0));
    }

    #[test]
    fn negation_and_index_round_trip() {
        let g = KGrid::new(3, 8, 1.0).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.flat_index(g.multi_index(idx)), idx);
            let neg = g.negated(idx);
            assert_eq!(g.negated(neg), idx);
            if !g.is_nyquist(idx) {
                assert!((g.k_vector(idx) + g.k_vector(neg)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(KGrid::new(0, 8, 1.0).is_err());
        assert!(KGrid::new(4, 8, 1.0).is_err());
        assert!(KGrid::new(2, 7, 1.0).is_err());
        assert!(KGrid::new(2, 8, -1.0).is_err());
    }
}
