//! Closed-form metric families with known invariants.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldMetadata, MetricField};
use crate::jet::MetricJet2;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parity {
    #[default]
    None,
    Even,
    Odd,
}

/// Gaussian bump `amplitude * pattern_ij * exp(-|x - location|^2 / width^2)`,
/// optionally symmetrized under `x -> -x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub width: f64,
    pub location: Vec<f64>,
    pub parity: Parity,
    /// Symmetric `n x n` tensor pattern, row-major. Defaults to ones on the
    /// diagonal and one half elsewhere.
    pub pattern: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogKind {
    Flat,
    /// Isotropic Schwarzschild slice `u^(4/(n-2)) delta` with
    /// `u = 1 + m / (2 |x - c|^(n-2))`. An empty center means the origin.
    Schwarzschild {
        mass: f64,
        center: Vec<f64>,
    },
    /// `u^(4/(n-2)) delta` with `u = 1 + sum_k coefficients[k-1] |x - c|^-k`.
    Conformal {
        coefficients: Vec<f64>,
        center: Vec<f64>,
    },
    Perturbed {
        base: Box<CatalogKind>,
        bump: Bump,
    },
    /// Flat metric plus the odd term `h_11 = amplitude x_1 / |x|^(n/2 + 1)`.
    RtViolator {
        amplitude: f64,
    },
}

impl CatalogKind {
    pub fn schwarzschild(mass: f64) -> Self {
        CatalogKind::Schwarzschild {
            mass,
            center: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogSpec {
    pub dim: usize,
    pub kind: CatalogKind,
}

impl CatalogSpec {
    pub fn new(dim: usize, kind: CatalogKind) -> Self {
        CatalogSpec { dim, kind }
    }
}

/// A catalog metric with analytic jets.
#[derive(Debug, Clone)]
pub enum CatalogField {
    Flat {
        dim: usize,
    },
    Conformal(ConformalField),
    Perturbed {
        base: Box<CatalogField>,
        bump: BumpField,
    },
    RtViolator {
        dim: usize,
        amplitude: f64,
    },
}

/// Builds the field described by `spec`, validating its parameters.
pub fn build(spec: &CatalogSpec) -> Result<CatalogField> {
    let n = spec.dim;
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    build_kind(n, &spec.kind)
}

fn build_kind(n: usize, kind: &CatalogKind) -> Result<CatalogField> {
    match kind {
        CatalogKind::Flat => Ok(CatalogField::Flat { dim: n }),
        CatalogKind::Schwarzschild { mass, center } => {
            if !mass.is_finite() {
                return Err(Error::InvalidArgument("Schwarzschild mass must be finite"));
            }
            let center = resolve_center(n, center)?;
            let power = (n - 2) as f64;
            let inner_radius = math::norm(&center) + f64::max(1.0, math::abs(*mass));
            let expected_center = if *mass != 0.0 {
                Some(center.clone())
            } else {
                None
            };
            Ok(CatalogField::Conformal(ConformalField {
                dim: n,
                terms: vec![(power, 0.5 * mass)],
                center,
                inner_radius,
                meta: FieldMetadata {
                    expected_mass: Some(*mass),
                    expected_center,
                },
            }))
        }
        CatalogKind::Conformal {
            coefficients,
            center,
        } => {
            if coefficients.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidArgument(
                    "conformal coefficients must be finite",
                ));
            }
            let center = resolve_center(n, center)?;
            let terms: Vec<(f64, f64)> = coefficients
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != 0.0)
                .map(|(k, a)| ((k + 1) as f64, *a))
                .collect();
            // Smallest radius (growing by 1.25) where the correction is at most 1/2,
            // which keeps u >= 1/2 outside it.
            let mut rho: f64 = 1.0;
            while terms
                .iter()
                .map(|(k, a)| math::abs(*a) * math::pow(rho, -k))
                .sum::<f64>()
                > 0.5
            {
                rho *= 1.25;
            }
            let lower_terms_vanish = coefficients.iter().take(n - 3).all(|a| *a == 0.0);
            let expected_mass = if lower_terms_vanish {
                Some(2.0 * coefficients.get(n - 3).copied().unwrap_or(0.0))
            } else {
                None
            };
            let expected_center = match expected_mass {
                Some(m) if m != 0.0 => Some(center.clone()),
                _ => None,
            };
            Ok(CatalogField::Conformal(ConformalField {
                dim: n,
                inner_radius: math::norm(&center) + rho,
                terms,
                center,
                meta: FieldMetadata {
                    expected_mass,
                    expected_center,
                },
            }))
        }
        CatalogKind::Perturbed { base, bump } => {
            let base = build_kind(n, base)?;
            let bump = BumpField::new(n, bump)?;
            Ok(CatalogField::Perturbed {
                base: Box::new(base),
                bump,
            })
        }
        CatalogKind::RtViolator { amplitude } => rt_violator(n, *amplitude),
    }
}

fn resolve_center(n: usize, center: &[f64]) -> Result<Vec<f64>> {
    if center.is_empty() {
        return Ok(vec![0.0; n]);
    }
    if center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: center.len(),
        });
    }
    if center.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("center must be finite"));
    }
    Ok(center.to_vec())
}

/// Negative control for the parity condition: flat plus
/// `h_11 = amplitude x_1 / |x|^(n/2 + 1)`, odd and decaying exactly like
/// `|x|^(-n/2)`.
pub fn rt_violator(n: usize, amplitude: f64) -> Result<CatalogField> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(math::abs(amplitude) < 0.5) {
        return Err(Error::InvalidArgument(
            "rt_violator amplitude must be below 1/2",
        ));
    }
    Ok(CatalogField::RtViolator { dim: n, amplitude })
}

impl MetricField for CatalogField {
    fn dim(&self) -> usize {
        match self {
            CatalogField::Flat { dim } | CatalogField::RtViolator { dim, .. } => *dim,
            CatalogField::Conformal(c) => c.dim,
            CatalogField::Perturbed { base, .. } => base.dim(),
        }
    }

    fn inner_radius(&self) -> f64 {
        match self {
            CatalogField::Flat { .. } | CatalogField::RtViolator { .. } => 1.0,
            CatalogField::Conformal(c) => c.inner_radius,
            CatalogField::Perturbed { base, .. } => base.inner_radius(),
        }
    }

    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        match self {
            CatalogField::Flat { dim } => MetricJet2::flat(*dim),
            CatalogField::Conformal(c) => c.jet(x),
            CatalogField::Perturbed { base, bump } => {
                let mut jet = base.jet_unchecked(x);
                bump.add_to(&mut jet, x);
                jet
            }
            CatalogField::RtViolator { dim, amplitude } => rt_jet(*dim, *amplitude, x),
        }
    }

    fn globally_smooth(&self) -> bool {
        match self {
            CatalogField::Flat { .. } => true,
            CatalogField::Perturbed { base, .. } => base.globally_smooth(),
            CatalogField::Conformal(_) | CatalogField::RtViolator { .. } => false,
        }
    }

    fn metadata(&self) -> FieldMetadata {
        match self {
            CatalogField::Flat { .. } | CatalogField::RtViolator { .. } => FieldMetadata {
                expected_mass: Some(0.0),
                expected_center: None,
            },
            CatalogField::Conformal(c) => c.meta.clone(),
            CatalogField::Perturbed { base, .. } => base.metadata(),
        }
    }
}

/// `u^(4/(n-2)) delta` for a radial `u = 1 + sum a |x - c|^-k`.
#[derive(Debug, Clone)]
pub struct ConformalField {
    dim: usize,
    /// `(k, a)` pairs of `a rho^-k`.
    terms: Vec<(f64, f64)>,
    center: Vec<f64>,
    inner_radius: f64,
    meta: FieldMetadata,
}

impl ConformalField {
    /// `(u, u', u'')` as functions of `rho = |x - c|`.
    pub fn profile(&self, rho: f64) -> (f64, f64, f64) {
        let mut u = 1.0;
        let mut du = 0.0;
        let mut ddu = 0.0;
        for &(k, a) in &self.terms {
            let t = a * math::pow(rho, -k);
            u += t;
            du -= k * t / rho;
            ddu += k * (k + 1.0) * t / (rho * rho);
        }
        (u, du, ddu)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    fn jet(&self, x: &[f64]) -> MetricJet2 {
        let n = self.dim;
        let y: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let rho = math::norm(&y);
        let (u, du, ddu) = self.profile(rho);
        let p = 4.0 / (n as f64 - 2.0);
        let up = math::pow(u, p);
        let up1 = p * math::pow(u, p - 1.0);
        let up2 = p * (p - 1.0) * math::pow(u, p - 2.0);

        let grad: Vec<f64> = y.iter().map(|yk| du * yk / rho).collect();
        let radial = (ddu - du / rho) / (rho * rho);
        let mut jet = MetricJet2::zeros(n);
        for i in 0..n {
            jet.set_g(i, i, up);
        }
        for k in 0..n {
            let psi_k = up1 * grad[k];
            for i in 0..n {
                jet.set_dg(k, i, i, psi_k);
            }
            for l in k..n {
                let mut u_kl = radial * y[k] * y[l];
                if k == l {
                    u_kl += du / rho;
                }
                let psi_kl = up2 * grad[k] * grad[l] + up1 * u_kl;
                for i in 0..n {
                    jet.set_ddg(k, l, i, i, psi_kl);
                }
            }
        }
        jet
    }
}

fn rt_jet(n: usize, amplitude: f64, x: &[f64]) -> MetricJet2 {
    let s = n as f64 / 2.0 + 1.0;
    let rho = math::norm(x);
    let r_s = math::pow(rho, -s);
    let r_s2 = r_s / (rho * rho);
    let r_s4 = r_s2 / (rho * rho);
    let mut jet = MetricJet2::flat(n);
    jet.set_g(0, 0, 1.0 + amplitude * x[0] * r_s);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for k in 0..n {
        let d = delta(k, 0) * r_s - s * x[0] * x[k] * r_s2;
        jet.set_dg(k, 0, 0, amplitude * d);
        for l in k..n {
            let dd = -s * (delta(k, 0) * x[l] + delta(l, 0) * x[k] + x[0] * delta(k, l)) * r_s2
                + s * (s + 2.0) * x[0] * x[k] * x[l] * r_s4;
            jet.set_ddg(k, l, 0, 0, amplitude * dd);
        }
    }
    jet
}

/// Validated [`Bump`] ready for evaluation.
#[derive(Debug, Clone)]
pub struct BumpField {
    amplitude: f64,
    width: f64,
    location: Vec<f64>,
    parity: Parity,
    pattern: Vec<f64>,
}

impl BumpField {
    fn new(n: usize, bump: &Bump) -> Result<Self> {
        if !(bump.width > 0.0) || !bump.width.is_finite() {
            return Err(Error::InvalidArgument("bump width must be positive"));
        }
        let location = resolve_center(n, &bump.location)?;
        let pattern = match &bump.pattern {
            Some(p) => {
                if p.len() != n * n {
                    return Err(Error::DimensionMismatch {
                        expected: n * n,
                        found: p.len(),
                    });
                }
                for i in 0..n {
                    for j in 0..n {
                        if p[i * n + j] != p[j * n + i] {
                            return Err(Error::InvalidArgument("bump pattern must be symmetric"));
                        }
                    }
                }
                p.clone()
            }
            None => (0..n * n)
                .map(|ij| if ij / n == ij % n { 1.0 } else { 0.5 })
                .collect(),
        };
        let row_sum = (0..n)
            .map(|i| (0..n).map(|j| math::abs(pattern[i * n + j])).sum::<f64>())
            .fold(0.0, f64::max);
        if !(math::abs(bump.amplitude) * row_sum < 0.5) {
            return Err(Error::InvalidArgument(
                "bump amplitude too large: |amplitude| * max row sum of pattern must be below 1/2",
            ));
        }
        Ok(BumpField {
            amplitude: bump.amplitude,
            width: bump.width,
            location,
            parity: bump.parity,
            pattern,
        })
    }

    // (phi, d phi, dd phi) of the scalar envelope at x, row-major second derivatives.
    fn envelope(&self, x: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let n = x.len();
        let w2 = self.width * self.width;
        let y: Vec<f64> = x.iter().zip(&self.location).map(|(a, b)| a - b).collect();
        let phi = math::exp(-y.iter().map(|v| v * v).sum::<f64>() / w2);
        let d = y.iter().map(|yk| -2.0 * yk / w2 * phi).collect();
        let mut dd = vec![0.0; n * n];
        for k in 0..n {
            for l in k..n {
                let mut v = 4.0 * y[k] * y[l] / (w2 * w2);
                if k == l {
                    v -= 2.0 / w2;
                }
                dd[k * n + l] = v * phi;
                dd[l * n + k] = v * phi;
            }
        }
        (phi, d, dd)
    }

    fn add_to(&self, jet: &mut MetricJet2, x: &[f64]) {
        let n = x.len();
        let (mut phi, mut d, mut dd) = self.envelope(x);
        if self.parity != Parity::None {
            let sign = if self.parity == Parity::Even {
                1.0
            } else {
                -1.0
            };
            let minus: Vec<f64> = x.iter().map(|v| -v).collect();
            let (phi_m, d_m, dd_m) = self.envelope(&minus);
            phi = 0.5 * (phi + sign * phi_m);
            // d_k [phi(-x)] = -(d_k phi)(-x)
            d.iter_mut()
                .zip(&d_m)
                .for_each(|(a, b)| *a = 0.5 * (*a - sign * b));
            dd.iter_mut()
                .zip(&dd_m)
                .for_each(|(a, b)| *a = 0.5 * (*a + sign * b));
        }
        for i in 0..n {
            for j in i..n {
                let c = self.amplitude * self.pattern[i * n + j];
                if c == 0.0 {
                    continue;
                }
                jet.set_g(i, j, jet.g(i, j) + c * phi);
                for k in 0..n {
                    jet.set_dg(k, i, j, jet.dg(k, i, j) + c * d[k]);
                    for l in k..n {
                        jet.set_ddg(k, l, i, j, jet.ddg(k, l, i, j) + c * dd[k * n + l]);
                    }
                }
            }
        }
    }
}
