//! Mass and center functionals over quadrature surfaces, and the exact
//! integration-by-parts identities relating their integrands.
//!
//! ADM mass and the Hamiltonian center use the Euclidean normal and area;
//! the intrinsic (Einstein-tensor) versions use the `g`-unit normal and the
//! `g`-area of the same surface.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::curvature::CurvatureBundle;
use crate::error::{Error, Result};
use crate::field::{jet2, MetricField};
use crate::jet::MetricJet2;
use crate::math;
use crate::quadrature::gauss_legendre;
use crate::sum::CompensatedSum;
use crate::surfaces::{g_normal_and_area_bundle, sphere_quadrature, QuadSurface};
use crate::unit_sphere_area;

/// Center functionals refuse masses smaller than this in magnitude.
pub const MIN_CENTER_MASS: f64 = 1e-8;

/// Euclidean conformal Killing fields contracted against the Einstein tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KillingField {
    /// `X = x^i d_i`.
    Dilation,
    /// `Y_(a) = (|x|^2 delta^ai - 2 x^a x^i) d_i`, with a zero-based axis.
    SpecialConformal(usize),
}

impl KillingField {
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        match *self {
            KillingField::Dilation => Ok(field_x(x)),
            KillingField::SpecialConformal(axis) => field_y(axis, x),
        }
    }
}

pub fn field_x(x: &[f64]) -> Vec<f64> {
    x.to_vec()
}

/// `Y_(axis)(x)`; `axis` is zero-based.
pub fn field_y(axis: usize, x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if axis >= n {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: n,
        });
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok((0..n)
        .map(|i| {
            let d = if i == axis { r2 } else { 0.0 };
            d - 2.0 * x[axis] * x[i]
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassPair {
    pub r: f64,
    pub adm: f64,
    pub intrinsic: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterPair {
    pub r: f64,
    pub cs: Vec<f64>,
    pub intrinsic: Vec<f64>,
    pub mass_used: f64,
}

fn check_surface<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<()> {
    if surf.dim() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            found: surf.dim(),
        });
    }
    Ok(())
}

fn check_mass(mass: f64) -> Result<()> {
    if !(math::abs(mass) >= MIN_CENTER_MASS) {
        return Err(Error::UndefinedCenter { mass });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_i (g_ij,j - g_jj,i) nu^i`.
fn adm_flux_density(jet: &MetricJet2, nu: &[f64]) -> f64 {
    let n = jet.dim();
    let mut s = 0.0;
    for i in 0..n {
        let mut c = 0.0;
        for j in 0..n {
            c += jet.dg(j, i, j) - jet.dg(i, j, j);
        }
        s += c * nu[i];
    }
    s
}

/// Integrand of the Hamiltonian center for every axis:
/// `x^a (g_ij,i - g_ii,j) nu^j - (h_ia nu^i - h_ii nu^a)`.
fn cs_density(jet: &MetricJet2, x: &[f64], nu: &[f64], out: &mut [f64]) {
    let n = jet.dim();
    let mut flux = 0.0;
    for j in 0..n {
        let mut c = 0.0;
        for i in 0..n {
            c += jet.dg(i, i, j) - jet.dg(j, i, i);
        }
        flux += c * nu[j];
    }
    let trace_h: f64 = (0..n).map(|i| jet.h(i, i)).sum();
    for a in 0..n {
        let h_nu: f64 = (0..n).map(|i| jet.h(i, a) * nu[i]).sum();
        out[a] = x[a] * flux - (h_nu - trace_h * nu[a]);
    }
}

/// `m(r) = 1 / (2 (n-1) omega_{n-1}) * int (g_ij,j - g_jj,i) nu_e^i dsigma_e`.
pub fn adm_mass_at<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<f64> {
    check_surface(field, surf)?;
    let n = field.dim();
    let mut acc = CompensatedSum::new();
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        acc.add(node.weight * adm_flux_density(&jet, node.normal));
    }
    Ok(acc.value() / (2.0 * (n as f64 - 1.0) * unit_sphere_area(n)))
}

/// `m_I(r) = 1 / ((n-1)(2-n) omega_{n-1}) * int (Ric - R g / 2)(X, nu_g) dsigma_g`.
pub fn intrinsic_mass_at<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<f64> {
    check_surface(field, surf)?;
    let n = field.dim();
    let mut acc = CompensatedSum::new();
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        let bundle = CurvatureBundle::from_jet(&jet)?;
        let (nu_g, w_g) = g_normal_and_area_bundle(&bundle, node.normal, node.weight);
        acc.add(w_g * bundle.einstein_pair(node.x, &nu_g));
    }
    let nf = n as f64;
    Ok(acc.value() / ((nf - 1.0) * (2.0 - nf) * unit_sphere_area(n)))
}

/// Hamiltonian center `c_CS(r)` for a given mass, using `h` rather than `g` in
/// the boundary term.
pub fn cs_center_at<F: MetricField + ?Sized>(
    field: &F,
    surf: &QuadSurface,
    mass: f64,
) -> Result<Vec<f64>> {
    check_mass(mass)?;
    check_surface(field, surf)?;
    let n = field.dim();
    let mut acc = alloc::vec![CompensatedSum::new(); n];
    let mut density = alloc::vec![0.0; n];
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        cs_density(&jet, node.x, node.normal, &mut density);
        for (a, d) in acc.iter_mut().zip(&density) {
            a.add(node.weight * d);
        }
    }
    let norm = 2.0 * (n as f64 - 1.0) * unit_sphere_area(n) * mass;
    Ok(acc.iter().map(|a| a.value() / norm).collect())
}

/// Intrinsic center `c_I(r)`: `(Ric - R g / 2)(Y_(a), nu_g)` integrated
/// against `dsigma_g`, divided by `2 (n-1)(n-2) omega_{n-1} m`.
pub fn intrinsic_center_at<F: MetricField + ?Sized>(
    field: &F,
    surf: &QuadSurface,
    mass: f64,
) -> Result<Vec<f64>> {
    check_mass(mass)?;
    check_surface(field, surf)?;
    let n = field.dim();
    let mut acc = alloc::vec![CompensatedSum::new(); n];
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        let bundle = CurvatureBundle::from_jet(&jet)?;
        let (nu_g, w_g) = g_normal_and_area_bundle(&bundle, node.normal, node.weight);
        for (a, sum) in acc.iter_mut().enumerate() {
            let y = field_y(a, node.x)?;
            sum.add(w_g * bundle.einstein_pair(&y, &nu_g));
        }
    }
    let nf = n as f64;
    let norm = 2.0 * (nf - 1.0) * (nf - 2.0) * unit_sphere_area(n) * mass;
    Ok(acc.iter().map(|a| a.value() / norm).collect())
}

pub fn mass_pair<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<MassPair> {
    let adm = adm_mass_at(field, surf)?;
    let intrinsic = intrinsic_mass_at(field, surf)?;
    Ok(MassPair {
        r: surf.nominal_radius(),
        adm,
        intrinsic,
        difference: adm - intrinsic,
    })
}

pub fn center_pair<F: MetricField + ?Sized>(
    field: &F,
    surf: &QuadSurface,
    mass: f64,
) -> Result<CenterPair> {
    Ok(CenterPair {
        r: surf.nominal_radius(),
        cs: cs_center_at(field, surf, mass)?,
        intrinsic: intrinsic_center_at(field, surf, mass)?,
        mass_used: mass,
    })
}

/// Pointwise `LHS - RHS` of the dilation identity
///
/// `int (-g_ki,kj - g_kj,ki + g_ij,kk + g_kk,ij) x^i nu^j
///   = (n-2) int (g_kj,k - g_kk,j) nu^j + int (-g_kj,kj + g_kk,jj) x^i nu^i`.
fn identity_x_density(jet: &MetricJet2, x: &[f64], nu: &[f64]) -> f64 {
    let n = jet.dim();
    let mut lhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut c = 0.0;
            for k in 0..n {
                c += -jet.ddg(k, j, k, i) - jet.ddg(k, i, k, j)
                    + jet.ddg(k, k, i, j)
                    + jet.ddg(i, j, k, k);
            }
            lhs += c * x[i] * nu[j];
        }
    }
    let mut flux = 0.0;
    for j in 0..n {
        let mut c = 0.0;
        for k in 0..n {
            c += jet.dg(k, k, j) - jet.dg(j, k, k);
        }
        flux += c * nu[j];
    }
    let mut lin = 0.0;
    for k in 0..n {
        for j in 0..n {
            lin += -jet.ddg(k, j, k, j) + jet.ddg(j, j, k, k);
        }
    }
    lhs - (n as f64 - 2.0) * flux - lin * dot(x, nu)
}

/// Pointwise `LHS - RHS` of the special-conformal identity for axis `a`:
///
/// `int (g_ki,kj + g_kj,ki - g_ij,kk - g_kk,ij) Y^i nu^j
///   = int (g_kj,kj - g_kk,jj) Y^i nu^i
///   + 2(n-2) int [x^a (g_ki,k - g_kk,i) nu^i - (h_ka nu^k - h_kk nu^a)]`.
fn identity_y_density(jet: &MetricJet2, x: &[f64], nu: &[f64], axis: usize) -> Result<f64> {
    let n = jet.dim();
    let y = field_y(axis, x)?;
    let mut lhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut c = 0.0;
            for k in 0..n {
                c += jet.ddg(k, j, k, i) + jet.ddg(k, i, k, j)
                    - jet.ddg(k, k, i, j)
                    - jet.ddg(i, j, k, k);
            }
            lhs += c * y[i] * nu[j];
        }
    }
    let mut lin = 0.0;
    for k in 0..n {
        for j in 0..n {
            lin += jet.ddg(k, j, k, j) - jet.ddg(j, j, k, k);
        }
    }
    let mut flux = 0.0;
    for i in 0..n {
        let mut c = 0.0;
        for k in 0..n {
            c += jet.dg(k, k, i) - jet.dg(i, k, k);
        }
        flux += c * nu[i];
    }
    let trace_h: f64 = (0..n).map(|k| jet.h(k, k)).sum();
    let h_nu: f64 = (0..n).map(|k| jet.h(k, axis) * nu[k]).sum();
    let boundary = x[axis] * flux - (h_nu - trace_h * nu[axis]);
    Ok(lhs - lin * dot(&y, nu) - 2.0 * (n as f64 - 2.0) * boundary)
}

fn raw_residual_x<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<f64> {
    check_surface(field, surf)?;
    let mut acc = CompensatedSum::new();
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        acc.add(node.weight * identity_x_density(&jet, node.x, node.normal));
    }
    Ok(acc.value())
}

fn raw_residual_y<F: MetricField + ?Sized>(
    field: &F,
    surf: &QuadSurface,
    axis: usize,
) -> Result<f64> {
    check_surface(field, surf)?;
    if axis >= field.dim() {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: field.dim(),
        });
    }
    let mut acc = CompensatedSum::new();
    for node in surf.nodes() {
        let jet = jet2(field, node.x)?;
        acc.add(node.weight * identity_y_density(&jet, node.x, node.normal, axis)?);
    }
    Ok(acc.value())
}

/// Residual of the dilation identity over `surf`. Requires a field that is
/// smooth on the whole enclosed region; only quadrature error remains.
pub fn ibp_residual_x<F: MetricField + ?Sized>(field: &F, surf: &QuadSurface) -> Result<f64> {
    if !field.globally_smooth() {
        return Err(Error::NotGloballySmooth);
    }
    raw_residual_x(field, surf)
}

/// Residual of the special-conformal identity for the zero-based `axis`.
pub fn ibp_residual_y<F: MetricField + ?Sized>(
    field: &F,
    surf: &QuadSurface,
    axis: usize,
) -> Result<f64> {
    if axis >= field.dim() {
        return Err(Error::IndexOutOfRange {
            index: axis,
            dim: field.dim(),
        });
    }
    if !field.globally_smooth() {
        return Err(Error::NotGloballySmooth);
    }
    raw_residual_y(field, surf, axis)
}

/// Annulus form of [`ibp_residual_x`]: residual over `outer` minus residual
/// over `inner`. Vanishes whenever the field is smooth between the surfaces,
/// whatever happens inside `inner`.
pub fn ibp_annulus_residual_x<F: MetricField + ?Sized>(
    field: &F,
    inner: &QuadSurface,
    outer: &QuadSurface,
) -> Result<f64> {
    Ok(raw_residual_x(field, outer)? - raw_residual_x(field, inner)?)
}

pub fn ibp_annulus_residual_y<F: MetricField + ?Sized>(
    field: &F,
    inner: &QuadSurface,
    outer: &QuadSurface,
    axis: usize,
) -> Result<f64> {
    Ok(raw_residual_y(field, outer, axis)? - raw_residual_y(field, inner, axis)?)
}

/// Weight of a scalar-curvature volume integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    /// `int R_g dv_g`.
    Total,
    /// `int x^i R_g dv_g`, zero-based `i`.
    Coordinate(usize),
}

/// `int R_g dv_g` (or its coordinate moment) over the annulus
/// `r0 <= |x| <= r1`, with an `order`-point radial Gauss rule times the
/// sphere rule of the same order.
pub fn scalar_curvature_moment<F: MetricField + ?Sized>(
    field: &F,
    r0: f64,
    r1: f64,
    moment: Moment,
    order: usize,
) -> Result<f64> {
    if !(r1 > r0) {
        return Err(Error::InvalidArgument("annulus needs r1 > r0"));
    }
    if r0 < field.inner_radius() {
        return Err(Error::Domain {
            radius: r0,
            inner_radius: field.inner_radius(),
        });
    }
    let n = field.dim();
    if let Moment::Coordinate(i) = moment {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
    }
    let unit = sphere_quadrature(n, 1.0, order)?;
    let radial = gauss_legendre(order);
    let half = 0.5 * (r1 - r0);
    let mid = 0.5 * (r1 + r0);
    let mut acc = CompensatedSum::new();
    let mut x = alloc::vec![0.0; n];
    for (t, wt) in radial.nodes.iter().zip(&radial.weights) {
        let rho = mid + half * t;
        let shell_weight = wt * half * math::powi(rho, n as i32 - 1);
        for node in unit.nodes() {
            x.iter_mut().zip(node.x).for_each(|(a, s)| *a = rho * s);
            let jet = jet2(field, &x)?;
            let bundle = CurvatureBundle::from_jet(&jet)?;
            let factor = match moment {
                Moment::Total => 1.0,
                Moment::Coordinate(i) => x[i],
            };
            acc.add(
                shell_weight * node.weight * factor * bundle.scalar() * math::sqrt(bundle.det()),
            );
        }
    }
    Ok(acc.value())
}

/// Per-shell integrals between consecutive radii.
pub fn shell_moments<F: MetricField + ?Sized>(
    field: &F,
    radii: &[f64],
    moment: Moment,
    order: usize,
) -> Result<Vec<f64>> {
    radii
        .windows(2)
        .map(|w| {
            scalar_curvature_moment(field, w[0], w[1], moment, order).map_err(|e| Error::AtRadius {
                radius: w[1],
                source: Box::new(e),
            })
        })
        .collect()
}
