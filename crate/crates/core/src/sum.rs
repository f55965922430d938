//! Fixed-order compensated reductions.
//!
//! Every observable in the crate is a sum over grid nodes. These helpers keep
//! the summation order fixed (node order) so results are bit-reproducible no
//! matter how the per-node terms were produced.

use nalgebra::Vector3;
use num_complex::Complex64;

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Accumulator::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

pub fn sum_complex<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let (mut re, mut im) = (Accumulator::default(), Accumulator::default());
    for z in it {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

pub fn sum_vec3<I: IntoIterator<Item = Vector3<f64>>>(it: I) -> Vector3<f64> {
    let mut acc = [Accumulator::default(); 3];
    for v in it {
        for (a, x) in acc.iter_mut().zip(v.iter()) {
            a.add(*x);
        }
    }
    Vector3::new(acc[0].value(), acc[1].value(), acc[2].value())
}

pub fn sum_cvec3<I: IntoIterator<Item = Vector3<Complex64>>>(it: I) -> Vector3<Complex64> {
    let mut acc = [Accumulator::default(); 6];
    for v in it {
        for (i, z) in v.iter().enumerate() {
            acc[2 * i].add(z.re);
            acc[2 * i + 1].add(z.im);
        }
    }
    Vector3::new(
        Complex64::new(acc[0].value(), acc[1].value()),
        Complex64::new(acc[2].value(), acc[3].value()),
        Complex64::new(acc[4].value(), acc[5].value()),
    )
}
