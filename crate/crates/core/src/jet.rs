//! Second-order jets of a metric at a point.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// `g_ij`, `d_k g_ij` and `d_k d_l g_ij` at one point, in Cartesian
/// coordinates.
///
/// Storage is row-major: `g[i*n + j]`, `dg[(k*n + i)*n + j]` and
/// `ddg[((k*n + l)*n + i)*n + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet2 {
    dim: usize,
    g: Vec<f64>,
    dg: Vec<f64>,
    ddg: Vec<f64>,
}

impl MetricJet2 {
    /// The Euclidean metric: `g = I`, all derivatives zero.
    pub fn flat(dim: usize) -> Self {
        let mut jet = Self::zeros(dim);
        for i in 0..dim {
            jet.g[i * dim + i] = 1.0;
        }
        jet
    }

    /// All components zero. Not a metric; used as an accumulator and for the
    /// odd part of a parity split.
    pub fn zeros(dim: usize) -> Self {
        MetricJet2 {
            dim,
            g: vec![0.0; dim * dim],
            dg: vec![0.0; dim * dim * dim],
            ddg: vec![0.0; dim * dim * dim * dim],
        }
    }

    pub fn from_parts(dim: usize, g: Vec<f64>, dg: Vec<f64>, ddg: Vec<f64>) -> Result<Self> {
        let n = dim;
        if g.len() != n * n || dg.len() != n * n * n || ddg.len() != n * n * n * n {
            return Err(Error::InvalidArgument(
                "jet component arrays have the wrong length",
            ));
        }
        Ok(MetricJet2 { dim, g, dg, ddg })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.dim + j]
    }

    /// `h_ij = g_ij - delta_ij`.
    #[inline]
    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.g(i, j) - if i == j { 1.0 } else { 0.0 }
    }

    /// `d_k g_ij`.
    #[inline]
    pub fn dg(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.dg[(k * n + i) * n + j]
    }

    /// `d_k d_l g_ij`.
    #[inline]
    pub fn ddg(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.ddg[((k * n + l) * n + i) * n + j]
    }

    pub fn g_slice(&self) -> &[f64] {
        &self.g
    }

    pub fn dg_slice(&self) -> &[f64] {
        &self.dg
    }

    pub fn ddg_slice(&self) -> &[f64] {
        &self.ddg
    }

    /// Sets `g_ij` and `g_ji`.
    pub fn set_g(&mut self, i: usize, j: usize, v: f64) {
        let n = self.dim;
        self.g[i * n + j] = v;
        self.g[j * n + i] = v;
    }

    /// Sets `d_k g_ij` and `d_k g_ji`.
    pub fn set_dg(&mut self, k: usize, i: usize, j: usize, v: f64) {
        let n = self.dim;
        self.dg[(k * n + i) * n + j] = v;
        self.dg[(k * n + j) * n + i] = v;
    }

    /// Sets all four index permutations allowed by the symmetries in `(k,l)`
    /// and `(i,j)`.
    pub fn set_ddg(&mut self, k: usize, l: usize, i: usize, j: usize, v: f64) {
        let n = self.dim;
        for (a, b) in [(k, l), (l, k)] {
            self.ddg[((a * n + b) * n + i) * n + j] = v;
            self.ddg[((a * n + b) * n + j) * n + i] = v;
        }
    }

    /// Component-wise `self + s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &MetricJet2) {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
        for (a, b) in self.g.iter_mut().zip(&other.g) {
            *a += s * b;
        }
        for (a, b) in self.dg.iter_mut().zip(&other.dg) {
            *a += s * b;
        }
        for (a, b) in self.ddg.iter_mut().zip(&other.ddg) {
            *a += s * b;
        }
    }

    /// Multiplies the value, first and second derivative blocks by separate
    /// factors.
    pub fn scale_orders(&mut self, s0: f64, s1: f64, s2: f64) {
        self.g.iter_mut().for_each(|v| *v *= s0);
        self.dg.iter_mut().for_each(|v| *v *= s1);
        self.ddg.iter_mut().for_each(|v| *v *= s2);
    }

    /// Largest absolute deviation between two jets, per derivative order.
    pub fn max_abs_diff(&self, other: &MetricJet2) -> [f64; 3] {
        let d = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| math::abs(x - y))
                .fold(0.0, f64::max)
        };
        [
            d(&self.g, &other.g),
            d(&self.dg, &other.dg),
            d(&self.ddg, &other.ddg),
        ]
    }

    /// Largest deviation from the symmetry invariants of a jet.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(math::abs(self.g(i, j) - self.g(j, i)));
                for k in 0..n {
                    worst = worst.max(math::abs(self.dg(k, i, j) - self.dg(k, j, i)));
                    for l in 0..n {
                        let v = self.ddg(k, l, i, j);
                        worst = worst.max(math::abs(v - self.ddg(k, l, j, i)));
                        worst = worst.max(math::abs(v - self.ddg(l, k, i, j)));
                    }
                }
            }
        }
        worst
    }
}
