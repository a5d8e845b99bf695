//! Metrics as evaluatable fields on the exterior of a ball.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::MetricJet2;
use crate::math;
use crate::surfaces;

/// Optional closed-form values known for a field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldMetadata {
    pub expected_mass: Option<f64>,
    pub expected_center: Option<Vec<f64>>,
}

/// A Riemannian metric on `{|x| >= inner_radius}` in `R^n`, evaluated through
/// its second-order jet.
///
/// Implementations must be deterministic and reentrant.
pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    fn inner_radius(&self) -> f64;

    /// Jet at `x` without the domain check. Callers go through [`jet2`].
    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2;

    /// True when the same closed form is smooth and positive definite on all
    /// of `R^n`, so identities obtained by integrating over the enclosed
    /// region hold exactly.
    fn globally_smooth(&self) -> bool {
        false
    }

    fn metadata(&self) -> FieldMetadata {
        FieldMetadata::default()
    }
}

impl<F: MetricField + ?Sized> MetricField for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn inner_radius(&self) -> f64 {
        (**self).inner_radius()
    }
    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        (**self).jet_unchecked(x)
    }
    fn globally_smooth(&self) -> bool {
        (**self).globally_smooth()
    }
    fn metadata(&self) -> FieldMetadata {
        (**self).metadata()
    }
}

impl<F: MetricField + ?Sized> MetricField for alloc::boxed::Box<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn inner_radius(&self) -> f64 {
        (**self).inner_radius()
    }
    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        (**self).jet_unchecked(x)
    }
    fn globally_smooth(&self) -> bool {
        (**self).globally_smooth()
    }
    fn metadata(&self) -> FieldMetadata {
        (**self).metadata()
    }
}

pub(crate) fn check_point<F: MetricField + ?Sized>(field: &F, x: &[f64]) -> Result<()> {
    if x.len() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            found: x.len(),
        });
    }
    let radius = math::norm(x);
    if radius < field.inner_radius() || !radius.is_finite() {
        return Err(Error::Domain {
            radius,
            inner_radius: field.inner_radius(),
        });
    }
    Ok(())
}

/// The field's jet at `x`, rejecting points inside the excluded ball.
pub fn jet2<F: MetricField + ?Sized>(field: &F, x: &[f64]) -> Result<MetricJet2> {
    check_point(field, x)?;
    Ok(field.jet_unchecked(x))
}

/// Relative finite-difference step, `max(1e-4, 1e-4 |x|)`.
pub fn default_fd_step(x: &[f64]) -> f64 {
    f64::max(1e-4, 1e-4 * math::norm(x))
}

/// Jet of a metric known only through its values, by second-order central
/// differences.
///
/// `values` returns the row-major `n x n` metric at a point; it is sampled at
/// `x +- h e_k` and `x +- h e_k +- h e_l`.
pub fn fd_jet2<V>(values: V, x: &[f64], h: f64) -> Result<MetricJet2>
where
    V: Fn(&[f64]) -> Vec<f64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(
            "finite-difference step must be positive",
        ));
    }
    let n = x.len();
    let at = |offsets: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(k, s) in offsets {
            y[k] += s;
        }
        let v = values(&y);
        assert_eq!(v.len(), n * n, "metric values must be n x n");
        v
    };
    let centre = at(&[]);
    let plus: Vec<Vec<f64>> = (0..n).map(|k| at(&[(k, h)])).collect();
    let minus: Vec<Vec<f64>> = (0..n).map(|k| at(&[(k, -h)])).collect();

    let mut jet = MetricJet2::zeros(n);
    for i in 0..n {
        for j in i..n {
            let ij = i * n + j;
            jet.set_g(i, j, centre[ij]);
            for k in 0..n {
                jet.set_dg(k, i, j, (plus[k][ij] - minus[k][ij]) / (2.0 * h));
                jet.set_ddg(
                    k,
                    k,
                    i,
                    j,
                    (plus[k][ij] - 2.0 * centre[ij] + minus[k][ij]) / (h * h),
                );
            }
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            let pp = at(&[(k, h), (l, h)]);
            let pm = at(&[(k, h), (l, -h)]);
            let mp = at(&[(k, -h), (l, h)]);
            let mm = at(&[(k, -h), (l, -h)]);
            for i in 0..n {
                for j in i..n {
                    let ij = i * n + j;
                    let v = (pp[ij] - pm[ij] - mp[ij] + mm[ij]) / (4.0 * h * h);
                    jet.set_ddg(k, l, i, j, v);
                }
            }
        }
    }
    Ok(jet)
}

/// A field given by metric values only; jets come from [`fd_jet2`] with the
/// default relative step.
pub struct FdField<V> {
    dim: usize,
    inner_radius: f64,
    values: V,
}

impl<V> FdField<V>
where
    V: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    pub fn new(dim: usize, inner_radius: f64, values: V) -> Self {
        FdField {
            dim,
            inner_radius,
            values,
        }
    }
}

impl<V> MetricField for FdField<V>
where
    V: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        fd_jet2(&self.values, x, default_fd_step(x)).expect("default step is positive")
    }
}

fn negated(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v).collect()
}

/// Even and odd parts of every jet entry viewed as a function of the point:
/// `even = (J(x) + J(-x)) / 2`, `odd = (J(x) - J(-x)) / 2`.
///
/// Note that the derivative entries of `odd` are the odd parts of `d g`, not
/// the derivatives of the odd part of `g`; see [`odd_part_jet`] for the latter.
pub fn parity_split<F: MetricField + ?Sized>(
    field: &F,
    x: &[f64],
) -> Result<(MetricJet2, MetricJet2)> {
    let here = jet2(field, x)?;
    let there = jet2(field, &negated(x))?;
    let mut even = here.clone();
    even.add_scaled(1.0, &there);
    even.scale_orders(0.5, 0.5, 0.5);
    let mut odd = here;
    odd.add_scaled(-1.0, &there);
    odd.scale_orders(0.5, 0.5, 0.5);
    Ok((even, odd))
}

/// Jet of the function `g^odd(x) = (g(x) - g(-x)) / 2` itself.
pub fn odd_part_jet<F: MetricField + ?Sized>(field: &F, x: &[f64]) -> Result<MetricJet2> {
    let here = jet2(field, x)?;
    let there = jet2(field, &negated(x))?;
    let mut odd = here;
    // d^a [f(-x)] = (-1)^|a| (d^a f)(-x)
    let mut reflected = there;
    reflected.scale_orders(1.0, -1.0, 1.0);
    odd.add_scaled(-1.0, &reflected);
    odd.scale_orders(0.5, 0.5, 0.5);
    Ok(odd)
}

/// Pull-back of a field under the isometry `x -> -x`: `g~_ij(x) = g_ij(-x)`.
pub struct Reflected<F>(pub F);

impl<F: MetricField> MetricField for Reflected<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn inner_radius(&self) -> f64 {
        self.0.inner_radius()
    }

    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        let mut jet = self.0.jet_unchecked(&negated(x));
        jet.scale_orders(1.0, -1.0, 1.0);
        jet
    }

    fn globally_smooth(&self) -> bool {
        self.0.globally_smooth()
    }
}

/// A field translated by `shift`: `g~(x) = g(x - shift)`.
pub struct Translated<F> {
    inner: F,
    shift: Vec<f64>,
    inner_radius: f64,
}

impl<F: MetricField> Translated<F> {
    pub fn new(inner: F, shift: Vec<f64>) -> Result<Self> {
        if shift.len() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                found: shift.len(),
            });
        }
        let inner_radius = inner.inner_radius() + math::norm(&shift);
        Ok(Translated {
            inner,
            shift,
            inner_radius,
        })
    }
}

impl<F: MetricField> MetricField for Translated<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    fn jet_unchecked(&self, x: &[f64]) -> MetricJet2 {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.inner.jet_unchecked(&y)
    }

    fn globally_smooth(&self) -> bool {
        self.inner.globally_smooth()
    }

    fn metadata(&self) -> FieldMetadata {
        let meta = self.inner.metadata();
        FieldMetadata {
            expected_mass: meta.expected_mass,
            expected_center: meta
                .expected_center
                .map(|c| c.iter().zip(&self.shift).map(|(a, b)| a + b).collect()),
        }
    }
}

/// Which part of `h = g - delta` a decay check looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayPart {
    All,
    Odd,
}

/// Quadrature order of the angular sample set used for decay suprema.
pub const DECAY_SAMPLE_ORDER: usize = 8;

/// Relative drop required between consecutive suprema to count as decreasing.
pub const DECAY_MARGIN: f64 = 1e-6;

/// Suprema at or below this are treated as already vanished.
pub const DECAY_FLOOR: f64 = 1e-12;

/// Empirical check of `h = o_2(|x|^-tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub tau: f64,
    pub part: DecayPart,
    pub radii: Vec<f64>,
    /// Per radius: sup of `|x|^(|a| + tau) |d^a h|` for `|a| = 0, 1, 2`.
    pub sups: Vec<[f64; 3]>,
    /// Per derivative order: decreasing over the last half of the schedule.
    pub verdict: [bool; 3],
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.verdict.iter().all(|&v| v)
    }
}

/// Decreasing-tail test shared with the curvature decay sweeps.
pub fn decreasing_tail(values: &[f64]) -> bool {
    values[values.len() / 2..]
        .windows(2)
        .all(|w| w[1] <= DECAY_FLOOR || w[1] < w[0] * (1.0 - DECAY_MARGIN))
}

pub fn decay_report<F: MetricField + ?Sized>(
    field: &F,
    radii: &[f64],
    tau: f64,
    part: DecayPart,
) -> Result<DecayReport> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("decay schedule is empty"));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "decay radii must be strictly increasing",
        ));
    }
    let n = field.dim();
    let mut sups = Vec::with_capacity(radii.len());
    for &r in radii {
        let surf = surfaces::sphere_quadrature(n, r, DECAY_SAMPLE_ORDER)?;
        let mut sup = [0.0f64; 3];
        for node in surf.nodes() {
            let jet = match part {
                DecayPart::All => jet2(field, node.x),
                DecayPart::Odd => odd_part_jet(field, node.x),
            }
            .map_err(|e| Error::AtRadius {
                radius: r,
                source: alloc::boxed::Box::new(e),
            })?;
            let rx = math::norm(node.x);
            let scale = [
                math::pow(rx, tau),
                math::pow(rx, tau + 1.0),
                math::pow(rx, tau + 2.0),
            ];
            let h0 = match part {
                DecayPart::All => (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| math::abs(jet.h(i, j)))
                    .fold(0.0, f64::max),
                DecayPart::Odd => jet
                    .g_slice()
                    .iter()
                    .map(|v| math::abs(*v))
                    .fold(0.0, f64::max),
            };
            let h1 = jet
                .dg_slice()
                .iter()
                .map(|v| math::abs(*v))
                .fold(0.0, f64::max);
            let h2 = jet
                .ddg_slice()
                .iter()
                .map(|v| math::abs(*v))
                .fold(0.0, f64::max);
            for (s, (v, c)) in sup.iter_mut().zip([h0, h1, h2].iter().zip(scale)) {
                *s = s.max(v * c);
            }
        }
        sups.push(sup);
    }
    let mut verdict = [true; 3];
    for (order, v) in verdict.iter_mut().enumerate() {
        let seq: Vec<f64> = sups.iter().map(|s| s[order]).collect();
        *v = decreasing_tail(&seq);
    }
    Ok(DecayReport {
        tau,
        part,
        radii: radii.to_vec(),
        sups,
        verdict,
    })
}
