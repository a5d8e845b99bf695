//! Radius sweeps and power-law extrapolation of the large-radius limits.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::MetricField;
use crate::invariants;
use crate::math;
use crate::surfaces::{self, QuadSurface};

/// Default absolute tolerance for limits of order one.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// Two consecutive quadrature orders agreeing to this (relative to
/// `max(1, |value|)`) settle the value at a radius.
pub const REFINE_TOLERANCE: f64 = 1e-8;

/// Smallest fitted rate accepted as evidence of convergence. Slower fits are
/// indistinguishable from logarithmic or power-law growth over a finite
/// schedule.
pub const MIN_RATE: f64 = 0.1;

/// `r_k = 10 * 2^k`, `k = 0..=6`.
pub fn default_radii() -> Vec<f64> {
    (0..7).map(|k| 10.0 * (1u32 << k) as f64).collect()
}

/// A surface functional evaluated along a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    AdmMass,
    IntrinsicMass,
    /// `m(r) - m_I(r)` on the same surface.
    MassDifference,
    CsCenter {
        mass: f64,
    },
    IntrinsicCenter {
        mass: f64,
    },
    /// `c_CS(r) - c_I(r)` on the same surface.
    CenterDifference {
        mass: f64,
    },
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::AdmMass => "adm_mass",
            Functional::IntrinsicMass => "intrinsic_mass",
            Functional::MassDifference => "mass_difference",
            Functional::CsCenter { .. } => "cs_center",
            Functional::IntrinsicCenter { .. } => "intrinsic_center",
            Functional::CenterDifference { .. } => "center_difference",
        }
    }

    /// Looks a functional up by name. Center functionals need `mass`.
    pub fn parse(name: &str, mass: Option<f64>) -> Result<Self> {
        let need_mass = || mass.ok_or(Error::InvalidArgument("center functionals need a mass"));
        Ok(match name {
            "adm_mass" => Functional::AdmMass,
            "intrinsic_mass" => Functional::IntrinsicMass,
            "mass_difference" => Functional::MassDifference,
            "cs_center" => Functional::CsCenter { mass: need_mass()? },
            "intrinsic_center" => Functional::IntrinsicCenter { mass: need_mass()? },
            "center_difference" => Functional::CenterDifference { mass: need_mass()? },
            other => return Err(Error::UnknownFunctional(other.to_string())),
        })
    }

    /// Evaluates on one surface. Scalars come back as one-element vectors.
    pub fn evaluate<F: MetricField + ?Sized>(
        &self,
        field: &F,
        surf: &QuadSurface,
    ) -> Result<Vec<f64>> {
        match *self {
            Functional::AdmMass => Ok(vec![invariants::adm_mass_at(field, surf)?]),
            Functional::IntrinsicMass => Ok(vec![invariants::intrinsic_mass_at(field, surf)?]),
            Functional::MassDifference => Ok(vec![invariants::mass_pair(field, surf)?.difference]),
            Functional::CsCenter { mass } => invariants::cs_center_at(field, surf, mass),
            Functional::IntrinsicCenter { mass } => {
                invariants::intrinsic_center_at(field, surf, mass)
            }
            Functional::CenterDifference { mass } => {
                let pair = invariants::center_pair(field, surf, mass)?;
                Ok(pair
                    .cs
                    .iter()
                    .zip(&pair.intrinsic)
                    .map(|(a, b)| a - b)
                    .collect())
            }
        }
    }
}

/// Family of surfaces indexed by a radius.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// Coordinate spheres `S_r`.
    Spheres { radii: Vec<f64> },
    /// Ellipsoids with semi-axes `scales[i] * r`.
    Ellipsoids { scales: Vec<f64>, radii: Vec<f64> },
}

impl Schedule {
    pub fn spheres(radii: Vec<f64>) -> Self {
        Schedule::Spheres { radii }
    }

    pub fn radii(&self) -> &[f64] {
        match self {
            Schedule::Spheres { radii } | Schedule::Ellipsoids { radii, .. } => radii,
        }
    }

    pub fn len(&self) -> usize {
        self.radii().len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii().is_empty()
    }

    /// Replaces the radii, keeping the surface shape.
    pub fn with_radii(&self, radii: Vec<f64>) -> Self {
        match self {
            Schedule::Spheres { .. } => Schedule::Spheres { radii },
            Schedule::Ellipsoids { scales, .. } => Schedule::Ellipsoids {
                scales: scales.clone(),
                radii,
            },
        }
    }

    pub fn surface(&self, n: usize, index: usize, order: usize) -> Result<QuadSurface> {
        let r = self.radii()[index];
        match self {
            Schedule::Spheres { .. } => surfaces::sphere_quadrature(n, r, order),
            Schedule::Ellipsoids { scales, .. } => {
                if scales.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: scales.len(),
                    });
                }
                let axes: Vec<f64> = scales.iter().map(|s| s * r).collect();
                surfaces::ellipsoid_quadrature(&axes, order)
            }
        }
    }

    /// `inf |x|` of the surface at `index`, the abscissa used for fitting.
    pub fn nominal_radius(&self, index: usize) -> f64 {
        let r = self.radii()[index];
        match self {
            Schedule::Spheres { .. } => r,
            Schedule::Ellipsoids { scales, .. } => {
                r * scales.iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn validate(&self, min_entries: usize) -> Result<()> {
        let radii = self.radii();
        if radii.len() < min_entries {
            return Err(Error::InvalidArgument("schedule has too few radii"));
        }
        if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidArgument("schedule radii must be positive"));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "schedule radii must be strictly increasing",
            ));
        }
        if let Schedule::Ellipsoids { scales, .. } = self {
            if scales.iter().any(|s| !(*s > 0.0)) {
                return Err(Error::InvalidArgument("ellipsoid scales must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub order: usize,
    pub tolerance: f64,
    /// Double the order until two consecutive orders agree to
    /// [`REFINE_TOLERANCE`].
    pub refine: bool,
    pub max_doublings: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            order: surfaces::DEFAULT_ORDER,
            tolerance: DEFAULT_TOLERANCE,
            refine: true,
            max_doublings: 2,
        }
    }
}

/// Value of `functional` on schedule entry `index`, refining the quadrature
/// order as requested by `opts`.
pub fn evaluate_entry<F: MetricField + ?Sized>(
    field: &F,
    functional: Functional,
    schedule: &Schedule,
    index: usize,
    opts: &SweepOptions,
) -> Result<Vec<f64>> {
    let n = field.dim();
    let annotate = |e: Error| Error::AtRadius {
        radius: schedule.radii()[index],
        source: Box::new(e),
    };
    let eval = |order: usize| -> Result<Vec<f64>> {
        let surf = schedule.surface(n, index, order)?;
        functional.evaluate(field, &surf)
    };
    let mut order = opts.order;
    let mut value = eval(order).map_err(annotate)?;
    if !opts.refine {
        return Ok(value);
    }
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_doublings {
        order *= 2;
        let finer = eval(order).map_err(annotate)?;
        change = value
            .iter()
            .zip(&finer)
            .map(|(a, b)| math::abs(a - b) / f64::max(1.0, math::abs(*b)))
            .fold(0.0, f64::max);
        value = finer;
        if change <= REFINE_TOLERANCE {
            return Ok(value);
        }
    }
    Err(annotate(Error::QuadratureNonConvergence { order, change }))
}

/// Fitted `value(r) ~ limit + amplitude * r^-rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub limit: f64,
    pub amplitude: f64,
    pub rate: f64,
    /// Root-mean-square residual over the fitted samples.
    pub residual: f64,
    /// Samples constant to rounding; `rate` is then reported as 0.
    pub constant: bool,
}

impl PowerLawFit {
    pub fn predict(&self, r: f64) -> f64 {
        if self.constant {
            self.limit
        } else {
            self.limit + self.amplitude * math::pow(r, -self.rate)
        }
    }
}

/// Number of trailing samples used by [`fit_power_law`].
pub fn fit_window(len: usize) -> usize {
    usize::min(len, usize::max(len.div_ceil(2), 3))
}

/// Least-squares fit of `L + A r^-p` to the last [`fit_window`] samples.
///
/// Variable projection over `p` locates the basin; Gauss–Newton on
/// `(L, B, p)` with `B = A r_max^-p` then polishes, which is exact for data
/// drawn from the model.
pub fn fit_power_law(radii: &[f64], values: &[f64]) -> Result<PowerLawFit> {
    if radii.len() != values.len() {
        return Err(Error::InvalidArgument("radii and values differ in length"));
    }
    if radii.len() < 3 {
        return Err(Error::InvalidArgument(
            "power-law fit needs at least 3 samples",
        ));
    }
    let k = fit_window(radii.len());
    let rs = &radii[radii.len() - k..];
    let vs = &values[values.len() - k..];
    if vs.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite sample"));
    }

    let scale = vs.iter().map(|v| math::abs(*v)).fold(0.0, f64::max);
    let lo = vs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-13 * scale {
        let mean = crate::sum::sum(vs.iter().copied()) / k as f64;
        return Ok(PowerLawFit {
            limit: mean,
            amplitude: 0.0,
            rate: 0.0,
            residual: rms(vs.iter().map(|v| v - mean)),
            constant: true,
        });
    }

    let r_ref = rs[k - 1];
    let logs: Vec<f64> = rs.iter().map(|r| math::ln(r / r_ref)).collect();

    // Variable projection: for fixed p the model is linear in (L, B).
    let linear = |p: f64| -> (f64, f64, f64) {
        let s: Vec<f64> = logs.iter().map(|l| math::exp(-p * l)).collect();
        let (n, sx, sxx) = (
            k as f64,
            s.iter().sum::<f64>(),
            s.iter().map(|v| v * v).sum::<f64>(),
        );
        let sy: f64 = vs.iter().sum();
        let sxy: f64 = s.iter().zip(vs).map(|(a, b)| a * b).sum();
        let det = n * sxx - sx * sx;
        let b = if det != 0.0 {
            (n * sxy - sx * sy) / det
        } else {
            0.0
        };
        let l = (sy - b * sx) / n;
        let ssr: f64 = s.iter().zip(vs).map(|(si, v)| sq(l + b * si - v)).sum();
        (l, b, ssr)
    };
    let (p_min, p_max) = (1e-3_f64, 12.0_f64);
    let steps = 240;
    let grid = |i: usize| p_min * math::pow(p_max / p_min, i as f64 / steps as f64);
    let mut best = 0;
    let mut best_ssr = f64::INFINITY;
    for i in 0..=steps {
        let (_, _, ssr) = linear(grid(i));
        if ssr < best_ssr {
            best_ssr = ssr;
            best = i;
        }
    }
    // Golden section on the bracketing grid cells.
    let (mut a, mut b) = (
        grid(best.saturating_sub(1)),
        grid(usize::min(best + 1, steps)),
    );
    let phi = 0.5 * (math::sqrt(5.0) - 1.0);
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if linear(c).2 < linear(d).2 {
            b = d;
        } else {
            a = c;
        }
    }
    let mut p = 0.5 * (a + b);
    let (mut l, mut bb, mut ssr) = linear(p);

    // Gauss-Newton polish on (L, B, p).
    for _ in 0..50 {
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        for (lg, v) in logs.iter().zip(vs) {
            let s = math::exp(-p * lg);
            let res = l + bb * s - v;
            let row = [1.0, s, -bb * s * lg];
            for i in 0..3 {
                jtr[i] += row[i] * res;
                for j in 0..3 {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }
        let Some(step) = solve3(jtj, jtr) else { break };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let (nl, nb, np) = (l - t * step[0], bb - t * step[1], p - t * step[2]);
            let nssr: f64 = logs
                .iter()
                .zip(vs)
                .map(|(lg, v)| sq(nl + nb * math::exp(-np * lg) - v))
                .sum();
            if nssr <= ssr {
                let done = nssr == ssr;
                l = nl;
                bb = nb;
                p = np;
                ssr = nssr;
                improved = !done;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Ok(PowerLawFit {
        limit: l,
        amplitude: bb * math::pow(r_ref, p),
        rate: p,
        residual: math::sqrt(ssr / k as f64),
        constant: false,
    })
}

#[inline]
fn sq(v: f64) -> f64 {
    v * v
}

fn rms<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut n = 0usize;
    let mut s = 0.0;
    for v in it {
        n += 1;
        s += v * v;
    }
    if n == 0 {
        0.0
    } else {
        math::sqrt(s / n as f64)
    }
}

// Gaussian elimination with partial pivoting; None if singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a
        .iter()
        .flatten()
        .map(|v| math::abs(*v))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv =
            (col..3).max_by(|&i, &j| math::abs(a[i][col]).total_cmp(&math::abs(a[j][col])))?;
        if math::abs(a[piv][col]) <= 1e-300 + 1e-15 * scale * f64::EPSILON {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for c in row + 1..3 {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Sampled functional values over a schedule with fitted limits.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub quantity: String,
    /// Abscissae (nominal radii), increasing.
    pub radii: Vec<f64>,
    /// One vector per radius; scalars have length one.
    pub values: Vec<Vec<f64>>,
    /// One fit per component.
    pub fits: Vec<PowerLawFit>,
    pub fitted_limit: Vec<f64>,
    /// Smallest fitted rate over non-constant components (0 if all constant).
    pub fitted_rate: f64,
    /// Largest fit residual over components.
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: bool,
}

impl ConvergenceReport {
    pub fn components(&self) -> usize {
        self.fitted_limit.len()
    }

    /// Tolerance applied to a limit of the given size: absolute up to unit
    /// magnitude, relative beyond.
    pub fn scaled_tolerance(&self, limit: f64) -> f64 {
        self.tolerance * f64::max(1.0, math::abs(limit))
    }

    /// Builds a report whose verdict says the sequence converges. Each
    /// component must be constant, settled (every fitted sample within
    /// tolerance of the limit), or have a fitted rate of at least
    /// [`MIN_RATE`] with a fit that reproduces the outermost sample within
    /// tolerance.
    pub fn from_samples(
        quantity: &str,
        radii: Vec<f64>,
        values: Vec<Vec<f64>>,
        tolerance: f64,
    ) -> Result<Self> {
        let mut report = Self::fitted(quantity, radii, values, tolerance)?;
        let last = report.radii.len() - 1;
        report.verdict = report.fits.iter().enumerate().all(|(c, fit)| {
            fit.constant
                || report.settled(c)
                || (fit.rate >= MIN_RATE
                    && math::abs(fit.predict(report.radii[last]) - report.values[last][c])
                        <= report.scaled_tolerance(fit.limit))
        });
        Ok(report)
    }

    /// Every sample in the fit window lies within tolerance of the limit.
    fn settled(&self, component: usize) -> bool {
        let limit = self.fits[component].limit;
        let start = self.radii.len() - fit_window(self.radii.len());
        self.values[start..]
            .iter()
            .all(|v| math::abs(v[component] - limit) <= self.scaled_tolerance(limit))
    }

    fn fitted(
        quantity: &str,
        radii: Vec<f64>,
        values: Vec<Vec<f64>>,
        tolerance: f64,
    ) -> Result<Self> {
        if radii.len() != values.len() || radii.is_empty() {
            return Err(Error::InvalidArgument("one sample per radius required"));
        }
        let width = values[0].len();
        if values.iter().any(|v| v.len() != width) {
            return Err(Error::InvalidArgument("samples differ in length"));
        }
        let mut fits = Vec::with_capacity(width);
        for c in 0..width {
            let column: Vec<f64> = values.iter().map(|v| v[c]).collect();
            fits.push(fit_power_law(&radii, &column)?);
        }
        let fitted_limit = fits.iter().map(|f| f.limit).collect();
        let fitted_rate = fits
            .iter()
            .filter(|f| !f.constant)
            .map(|f| f.rate)
            .fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.min(r)))
            })
            .unwrap_or(0.0);
        let residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
        Ok(ConvergenceReport {
            quantity: quantity.to_string(),
            radii,
            values,
            fits,
            fitted_limit,
            fitted_rate,
            residual,
            tolerance,
            verdict: false,
        })
    }
}

/// Evaluates `functional` on every schedule entry (sequentially, in order) and
/// fits the limit.
pub fn sweep<F: MetricField + ?Sized>(
    field: &F,
    functional: Functional,
    schedule: &Schedule,
    opts: &SweepOptions,
) -> Result<ConvergenceReport> {
    schedule.validate(4)?;
    let values = (0..schedule.len())
        .map(|i| evaluate_entry(field, functional, schedule, i, opts))
        .collect::<Result<Vec<_>>>()?;
    let radii = (0..schedule.len())
        .map(|i| schedule.nominal_radius(i))
        .collect();
    ConvergenceReport::from_samples(functional.name(), radii, values, opts.tolerance)
}

/// Per-radius difference `a - b` with its fitted limit; the verdict says the
/// difference tends to zero. Each component's tolerance scales with the larger
/// of the two compared limits, as in [`ConvergenceReport::scaled_tolerance`].
pub fn compare(a: &ConvergenceReport, b: &ConvergenceReport) -> Result<ConvergenceReport> {
    if a.radii != b.radii || a.components() != b.components() {
        return Err(Error::ScheduleMismatch);
    }
    let values = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect();
    let mut name = a.quantity.clone();
    name.push('-');
    name.push_str(&b.quantity);
    let scales: Vec<f64> = a
        .fitted_limit
        .iter()
        .zip(&b.fitted_limit)
        .map(|(p, q)| f64::max(math::abs(*p), math::abs(*q)))
        .collect();
    let mut report = ConvergenceReport::fitted(&name, a.radii.clone(), values, a.tolerance)?;
    report.verdict = vanishes(&report, &scales);
    Ok(report)
}

fn vanishes(report: &ConvergenceReport, scales: &[f64]) -> bool {
    report
        .fits
        .iter()
        .zip(scales)
        .enumerate()
        .all(|(c, (fit, scale))| {
            math::abs(fit.limit) <= report.scaled_tolerance(*scale)
                && (fit.constant || fit.rate >= MIN_RATE || report.settled(c))
        })
}

/// Report on a sequence expected to vanish: verdict iff every component's
/// fitted limit is within the absolute tolerance of zero and it is not
/// diverging.
pub fn difference_report(
    quantity: &str,
    radii: Vec<f64>,
    values: Vec<Vec<f64>>,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    let mut report = ConvergenceReport::fitted(quantity, radii, values, tolerance)?;
    let scales = vec![0.0; report.components()];
    report.verdict = vanishes(&report, &scales);
    Ok(report)
}
