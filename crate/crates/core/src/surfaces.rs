//! Closed quadrature surfaces: coordinate spheres and axis-aligned ellipsoids.

use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::CurvatureBundle;
use crate::error::{Error, Result};
use crate::jet::MetricJet2;
use crate::linalg::spd_inverse;
use crate::math;
use crate::quadrature::gauss_jacobi_symmetric;

/// Default angular order for `n = 3` surfaces (24 x 48 nodes).
pub const DEFAULT_ORDER: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceLabel {
    Sphere { radius: f64 },
    Ellipsoid { semi_axes: Vec<f64> },
    Custom,
}

/// Weighted nodes on a closed hypersurface of `R^n` with Euclidean outward
/// unit normals and Euclidean area weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSurface {
    dim: usize,
    points: Vec<f64>,
    normals: Vec<f64>,
    weights: Vec<f64>,
    label: SurfaceLabel,
    nominal_radius: f64,
}

/// One quadrature node of a [`QuadSurface`].
#[derive(Debug, Clone, Copy)]
pub struct SurfaceNode<'a> {
    pub x: &'a [f64],
    pub normal: &'a [f64],
    pub weight: f64,
}

impl QuadSurface {
    /// Assembles a surface from explicit nodes. Normals are normalized;
    /// `nominal_radius` is the smallest `|x|` over the nodes.
    pub fn custom(
        dim: usize,
        points: Vec<f64>,
        normals: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let count = weights.len();
        if points.len() != dim * count || normals.len() != dim * count {
            return Err(Error::InvalidArgument("surface arrays disagree in length"));
        }
        let mut normals = normals;
        for nu in normals.chunks_mut(dim) {
            let len = math::norm(nu);
            if !(len > 0.0) {
                return Err(Error::InvalidArgument("zero normal"));
            }
            nu.iter_mut().for_each(|v| *v /= len);
        }
        let nominal_radius = points
            .chunks(dim)
            .map(math::norm)
            .fold(f64::INFINITY, f64::min);
        Ok(QuadSurface {
            dim,
            points,
            normals,
            weights,
            label: SurfaceLabel::Custom,
            nominal_radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn label(&self) -> &SurfaceLabel {
        &self.label
    }

    /// `inf |x|` over the surface.
    pub fn nominal_radius(&self) -> f64 {
        self.nominal_radius
    }

    pub fn nodes(&self) -> impl Iterator<Item = SurfaceNode<'_>> + '_ {
        self.points
            .chunks(self.dim)
            .zip(self.normals.chunks(self.dim))
            .zip(&self.weights)
            .map(|((x, normal), &weight)| SurfaceNode { x, normal, weight })
    }

    pub fn node(&self, i: usize) -> SurfaceNode<'_> {
        let n = self.dim;
        SurfaceNode {
            x: &self.points[i * n..(i + 1) * n],
            normal: &self.normals[i * n..(i + 1) * n],
            weight: self.weights[i],
        }
    }

    /// Sum of the Euclidean area weights.
    pub fn area(&self) -> f64 {
        crate::sum::sum(self.weights.iter().copied())
    }

    /// Compensated quadrature of `f` over the surface, in node order.
    pub fn integrate<F>(&self, mut f: F) -> f64
    where
        F: FnMut(SurfaceNode<'_>) -> f64,
    {
        crate::sum::sum(self.nodes().map(|node| node.weight * f(node)))
    }
}

// Unit-sphere product rule in hyperspherical coordinates, polar axis x_1.
// Returns (points, weights) on S^{n-1}.
fn unit_sphere_rule(n: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let azimuth_count = 2 * order;
    let dphi = 2.0 * core::f64::consts::PI / azimuth_count as f64;
    // (leading coordinates, product of sines, weight)
    let mut partial: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), 1.0, 1.0)];
    for j in 1..=n - 2 {
        // sin^(n-1-j) theta d theta = (1 - t^2)^((n-2-j)/2) dt
        let rule = gauss_jacobi_symmetric(order, (n as f64 - 2.0 - j as f64) / 2.0);
        let mut next = Vec::with_capacity(partial.len() * order);
        for (coords, sines, w) in &partial {
            for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let mut c = coords.clone();
                c.push(sines * t);
                next.push((c, sines * math::sqrt((1.0 - t * t).max(0.0)), w * wt));
            }
        }
        partial = next;
    }
    let mut points = Vec::with_capacity(partial.len() * azimuth_count * n);
    let mut weights = Vec::with_capacity(partial.len() * azimuth_count);
    for (coords, sines, w) in &partial {
        for k in 0..azimuth_count {
            let phi = dphi * (k as f64 + 0.5);
            points.extend_from_slice(coords);
            points.push(sines * math::cos(phi));
            points.push(sines * math::sin(phi));
            weights.push(w * dphi);
        }
    }
    (points, weights)
}

fn check_order(n: usize, order: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if order < 2 {
        return Err(Error::InvalidArgument(
            "quadrature order must be at least 2",
        ));
    }
    Ok(())
}

/// Product Gauss rule on the coordinate sphere `S_r` in `R^n`.
///
/// Each polar angle uses an `order`-point Gauss rule for its `sin^k` weight
/// and the azimuth `2 order` equispaced nodes, so polynomials of degree up to
/// `2 order - 1` are integrated exactly.
pub fn sphere_quadrature(n: usize, r: f64, order: usize) -> Result<QuadSurface> {
    check_order(n, order)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument("sphere radius must be positive"));
    }
    let (unit, unit_weights) = unit_sphere_rule(n, order);
    let scale = math::powi(r, n as i32 - 1);
    Ok(QuadSurface {
        dim: n,
        points: unit.iter().map(|s| r * s).collect(),
        normals: unit,
        weights: unit_weights.iter().map(|w| w * scale).collect(),
        label: SurfaceLabel::Sphere { radius: r },
        nominal_radius: r,
    })
}

/// The ellipsoid `sum (x_i / a_i)^2 = 1` through the scaled spherical chart.
///
/// The area weight is the Gram-determinant Jacobian of the chart, which for
/// `x = A s` reduces to `det A |A^-1 s|` times the unit-sphere weight.
pub fn ellipsoid_quadrature(semi_axes: &[f64], order: usize) -> Result<QuadSurface> {
    let n = semi_axes.len();
    check_order(n, order)?;
    if semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidArgument(
            "ellipsoid semi-axes must be positive",
        ));
    }
    let (unit, unit_weights) = unit_sphere_rule(n, order);
    let det: f64 = semi_axes.iter().product();
    let mut points = Vec::with_capacity(unit.len());
    let mut normals = Vec::with_capacity(unit.len());
    let mut weights = Vec::with_capacity(unit_weights.len());
    for (s, w) in unit.chunks(n).zip(&unit_weights) {
        let conormal: Vec<f64> = s.iter().zip(semi_axes).map(|(si, a)| si / a).collect();
        let len = math::norm(&conormal);
        points.extend(s.iter().zip(semi_axes).map(|(si, a)| si * a));
        normals.extend(conormal.iter().map(|v| v / len));
        weights.push(w * det * len);
    }
    let nominal_radius = semi_axes.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(QuadSurface {
        dim: n,
        points,
        normals,
        weights,
        label: SurfaceLabel::Ellipsoid {
            semi_axes: semi_axes.to_vec(),
        },
        nominal_radius,
    })
}

/// `g`-unit outward normal and `g`-area weight at a node.
///
/// `nu_g^i = g^ij nu_j / |nu|_g` and `w_g = w_e sqrt(det g) |nu|_g`, with
/// `|nu|_g^2 = g^kl nu_k nu_l` for the Euclidean conormal `nu`.
pub fn g_normal_and_area(jet: &MetricJet2, nu_e: &[f64], w_e: f64) -> Result<(Vec<f64>, f64)> {
    let n = jet.dim();
    let inv = spd_inverse(jet.g_slice(), n)?;
    Ok(normal_and_area_from(&inv.inv, inv.det, nu_e, w_e))
}

pub(crate) fn g_normal_and_area_bundle(
    bundle: &CurvatureBundle,
    nu_e: &[f64],
    w_e: f64,
) -> (Vec<f64>, f64) {
    let n = bundle.dim();
    let mut ginv = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            ginv[i * n + j] = bundle.ginv(i, j);
        }
    }
    normal_and_area_from(&ginv, bundle.det(), nu_e, w_e)
}

fn normal_and_area_from(ginv: &[f64], det: f64, nu_e: &[f64], w_e: f64) -> (Vec<f64>, f64) {
    let n = nu_e.len();
    let raised: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| ginv[i * n + j] * nu_e[j]).sum())
        .collect();
    let q: f64 = raised.iter().zip(nu_e).map(|(a, b)| a * b).sum();
    let len = math::sqrt(q);
    let nu_g = raised.iter().map(|v| v / len).collect();
    (nu_g, w_e * math::sqrt(det) * len)
}
