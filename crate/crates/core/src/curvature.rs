//! Pointwise curvature of a metric jet.
//!
//! All quantities use the full nonlinear formulas. The linearized scalar
//! curvature is kept separately as a cross-check of the asymptotic expansion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::jet::MetricJet2;
use crate::linalg::spd_inverse;

/// Christoffel symbols, their first derivatives, Ricci, scalar and Einstein
/// tensors at one point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    dim: usize,
    ginv: Vec<f64>,
    det: f64,
    gamma: Vec<f64>,
    dgamma: Vec<f64>,
    ricci: Vec<f64>,
    scalar: f64,
    einstein: Vec<f64>,
}

impl CurvatureBundle {
    pub fn from_jet(jet: &MetricJet2) -> Result<Self> {
        let n = jet.dim();
        let inv = spd_inverse(jet.g_slice(), n)?;
        let ginv = inv.inv;
        let (gamma, dgamma) = christoffel_with_inverse(jet, &ginv);
        let ricci = ricci_from_christoffel(n, &gamma, &dgamma);
        let mut scalar = 0.0;
        for i in 0..n {
            for j in 0..n {
                scalar += ginv[i * n + j] * ricci[i * n + j];
            }
        }
        let mut einstein = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                einstein[i * n + j] = ricci[i * n + j] - 0.5 * scalar * jet.g(i, j);
            }
        }
        Ok(CurvatureBundle {
            dim: n,
            ginv,
            det: inv.det,
            gamma,
            dgamma,
            ricci,
            scalar,
            einstein,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `g^ij`.
    pub fn ginv(&self, i: usize, j: usize) -> f64 {
        self.ginv[i * self.dim + j]
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `Gamma^k_ij`.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.gamma[(k * n + i) * n + j]
    }

    /// `d_l Gamma^k_ij`.
    pub fn dgamma(&self, l: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = self.dim;
        self.dgamma[((l * n + k) * n + i) * n + j]
    }

    pub fn ricci(&self, i: usize, j: usize) -> f64 {
        self.ricci[i * self.dim + j]
    }

    pub fn scalar(&self) -> f64 {
        self.scalar
    }

    /// `(Ric - R g / 2)_ij`.
    pub fn einstein(&self, i: usize, j: usize) -> f64 {
        self.einstein[i * self.dim + j]
    }

    pub fn ricci_slice(&self) -> &[f64] {
        &self.ricci
    }

    pub fn einstein_slice(&self) -> &[f64] {
        &self.einstein
    }

    /// `T(a, b) = T_ij a^i b^j` for the Einstein tensor.
    pub fn einstein_pair(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.einstein[i * n + j] * a[i] * b[j];
            }
        }
        s
    }
}

fn christoffel_with_inverse(jet: &MetricJet2, ginv: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = jet.dim();
    // First kind: Gamma_s,ij = (d_j g_is + d_i g_js - d_s g_ij) / 2
    let mut lower = vec![0.0; n * n * n];
    for s in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = 0.5 * (jet.dg(j, i, s) + jet.dg(i, j, s) - jet.dg(s, i, j));
                lower[(s * n + i) * n + j] = v;
                lower[(s * n + j) * n + i] = v;
            }
        }
    }
    // d_l Gamma_s,ij
    let mut dlower = vec![0.0; n * n * n * n];
    for l in 0..n {
        for s in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = 0.5 * (jet.ddg(l, j, i, s) + jet.ddg(l, i, j, s) - jet.ddg(l, s, i, j));
                    dlower[((l * n + s) * n + i) * n + j] = v;
                    dlower[((l * n + s) * n + j) * n + i] = v;
                }
            }
        }
    }
    // d_l g^ks = -g^ka d_l g_ab g^bs
    let mut dginv = vec![0.0; n * n * n];
    for l in 0..n {
        for k in 0..n {
            for s in k..n {
                let mut v = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        v -= ginv[k * n + a] * jet.dg(l, a, b) * ginv[b * n + s];
                    }
                }
                dginv[(l * n + k) * n + s] = v;
                dginv[(l * n + s) * n + k] = v;
            }
        }
    }

    let mut gamma = vec![0.0; n * n * n];
    let mut dgamma = vec![0.0; n * n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut v = 0.0;
                for s in 0..n {
                    v += ginv[k * n + s] * lower[(s * n + i) * n + j];
                }
                gamma[(k * n + i) * n + j] = v;
                gamma[(k * n + j) * n + i] = v;
                for l in 0..n {
                    let mut dv = 0.0;
                    for s in 0..n {
                        dv += dginv[(l * n + k) * n + s] * lower[(s * n + i) * n + j]
                            + ginv[k * n + s] * dlower[((l * n + s) * n + i) * n + j];
                    }
                    dgamma[((l * n + k) * n + i) * n + j] = dv;
                    dgamma[((l * n + k) * n + j) * n + i] = dv;
                }
            }
        }
    }
    (gamma, dgamma)
}

fn ricci_from_christoffel(n: usize, gamma: &[f64], dgamma: &[f64]) -> Vec<f64> {
    let gm = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    let dgm = |l: usize, k: usize, i: usize, j: usize| dgamma[((l * n + k) * n + i) * n + j];
    // contracted Gamma^k_kl
    let trace: Vec<f64> = (0..n).map(|l| (0..n).map(|k| gm(k, k, l)).sum()).collect();
    let mut ricci = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut v = 0.0;
            for k in 0..n {
                v += dgm(k, k, j, i) - dgm(j, k, k, i);
            }
            for l in 0..n {
                v += trace[l] * gm(l, j, i);
                for k in 0..n {
                    v -= gm(k, j, l) * gm(l, k, i);
                }
            }
            ricci[i * n + j] = v;
            ricci[j * n + i] = v;
        }
    }
    ricci
}

/// `Gamma^k_ij` and `d_l Gamma^k_ij` (stored `[l][k][i][j]`).
pub fn christoffel(jet: &MetricJet2) -> Result<(Vec<f64>, Vec<f64>)> {
    let inv = spd_inverse(jet.g_slice(), jet.dim())?;
    Ok(christoffel_with_inverse(jet, &inv.inv))
}

/// `R_ij = d_k Gamma^k_ji - d_j Gamma^k_ki + Gamma^k_kl Gamma^l_ji - Gamma^k_jl Gamma^l_ki`.
pub fn ricci(jet: &MetricJet2) -> Result<Vec<f64>> {
    let (gamma, dgamma) = christoffel(jet)?;
    Ok(ricci_from_christoffel(jet.dim(), &gamma, &dgamma))
}

pub fn scalar_curvature(jet: &MetricJet2) -> Result<f64> {
    Ok(CurvatureBundle::from_jet(jet)?.scalar())
}

pub fn einstein(jet: &MetricJet2) -> Result<Vec<f64>> {
    Ok(CurvatureBundle::from_jet(jet)?.einstein)
}

/// `sum_{i,k} (g_ik,ik - g_kk,ii)`, the leading part of the scalar curvature
/// for metrics close to the Euclidean one.
pub fn linearized_scalar(jet: &MetricJet2) -> f64 {
    let n = jet.dim();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += jet.ddg(i, k, i, k) - jet.ddg(i, i, k, k);
        }
    }
    s
}
