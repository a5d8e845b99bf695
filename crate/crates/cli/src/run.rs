//! Evaluation of the requested checks.

use adm_core::analysis::{
    compare, evaluate_entry, ConvergenceReport, Functional, Schedule, SweepOptions,
};
use adm_core::field::{decay_report, DecayPart, DECAY_FLOOR};
use adm_core::invariants::{
    ibp_annulus_residual_x, ibp_annulus_residual_y, ibp_residual_x, ibp_residual_y, shell_moments,
    Moment, MIN_CENTER_MASS,
};
use adm_core::{build, CatalogField, Error, MetricField, QuadSurface};
use rayon::prelude::*;

use crate::config::{FunctionalName, RunConfig};
use crate::error::RunError;

/// What a subcommand evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Mass,
    Center,
    Compare,
    Identities,
    Decay,
    /// Everything listed in the config.
    Sweep,
}

/// One output table: a radius column followed by value columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<(f64, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub functional: String,
    pub fitted_limit: Vec<f64>,
    pub fitted_rate: Option<f64>,
    pub residual: Option<f64>,
    pub verdict: bool,
    pub tolerance: f64,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }

    fn push_report(&mut self, table: &str, report: &ConvergenceReport) {
        self.tables.push(Table {
            name: table.to_string(),
            columns: value_columns(report.components()),
            rows: report
                .radii
                .iter()
                .copied()
                .zip(report.values.iter().cloned())
                .collect(),
        });
        self.checks.push(Check {
            functional: table.to_string(),
            fitted_limit: report.fitted_limit.clone(),
            fitted_rate: Some(report.fitted_rate),
            residual: Some(report.residual),
            verdict: report.verdict,
            tolerance: report.tolerance,
        });
    }
}

fn value_columns(width: usize) -> Vec<String> {
    if width == 1 {
        vec!["value".to_string()]
    } else {
        (1..=width).map(|i| format!("value_{i}")).collect()
    }
}

fn requested(command: Command, config: &RunConfig) -> Vec<FunctionalName> {
    use FunctionalName::*;
    match command {
        Command::Mass => vec![AdmMass, IntrinsicMass],
        Command::Center => vec![CsCenter, IntrinsicCenter],
        Command::Compare => vec![AdmMass, IntrinsicMass, CsCenter, IntrinsicCenter],
        Command::Identities => vec![IdentityResiduals],
        Command::Decay => vec![DecayChecks],
        Command::Sweep => FunctionalName::ALL
            .into_iter()
            .filter(|f| config.functionals.contains(f))
            .collect(),
    }
}

/// Sweep with the radii evaluated in parallel. Results are collected in
/// schedule order, so the output does not depend on scheduling.
fn parallel_sweep(
    field: &CatalogField,
    functional: Functional,
    schedule: &Schedule,
    opts: &SweepOptions,
) -> Result<ConvergenceReport, RunError> {
    let values = (0..schedule.len())
        .into_par_iter()
        .map(|i| evaluate_entry(field, functional, schedule, i, opts))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(RunError::eval(functional.name()))?;
    let radii = (0..schedule.len())
        .map(|i| schedule.nominal_radius(i))
        .collect();
    ConvergenceReport::from_samples(functional.name(), radii, values, opts.tolerance)
        .map_err(RunError::eval(functional.name()))
}

pub fn run(config: &RunConfig, command: Command) -> Result<Outcome, RunError> {
    config.validate()?;
    let field =
        build(&config.metric.spec()).map_err(|e| RunError::Config(format!("metric: {e}")))?;
    let schedule = config.schedule.schedule();
    if let Schedule::Ellipsoids { scales, .. } = &schedule {
        if scales.len() != field.dim() {
            return Err(RunError::Config(format!(
                "schedule: {} ellipsoid scales for dimension {}",
                scales.len(),
                field.dim()
            )));
        }
    }
    let innermost = schedule.nominal_radius(0);
    if innermost < field.inner_radius() {
        return Err(RunError::Config(format!(
            "schedule: innermost surface reaches |x| = {innermost} inside the metric's domain (inner radius {})",
            field.inner_radius()
        )));
    }
    let opts = SweepOptions {
        order: config.order,
        tolerance: config.tolerances.certification,
        ..SweepOptions::default()
    };
    let wanted = requested(command, config);
    let has = |f: FunctionalName| wanted.contains(&f);
    let mut out = Outcome::default();

    let needs_mass = has(FunctionalName::AdmMass)
        || ((has(FunctionalName::CsCenter) || has(FunctionalName::IntrinsicCenter))
            && config.center_mass.is_none());
    let adm = if needs_mass {
        Some(parallel_sweep(
            &field,
            Functional::AdmMass,
            &schedule,
            &opts,
        )?)
    } else {
        None
    };
    if has(FunctionalName::AdmMass) {
        out.push_report("adm_mass", adm.as_ref().unwrap());
    }
    if has(FunctionalName::IntrinsicMass) {
        let intrinsic = parallel_sweep(&field, Functional::IntrinsicMass, &schedule, &opts)?;
        out.push_report("intrinsic_mass", &intrinsic);
        if let Some(adm) = &adm {
            let diff = compare(adm, &intrinsic).map_err(RunError::eval("mass_difference"))?;
            out.push_report("mass_difference", &diff);
        }
    }

    if has(FunctionalName::CsCenter) || has(FunctionalName::IntrinsicCenter) {
        let mass = config
            .center_mass
            .unwrap_or_else(|| adm.as_ref().unwrap().fitted_limit[0]);
        let name = if has(FunctionalName::CsCenter) {
            "cs_center"
        } else {
            "intrinsic_center"
        };
        if mass.is_nan() || mass.abs() < MIN_CENTER_MASS {
            return Err(RunError::eval(name)(Error::UndefinedCenter { mass }));
        }
        let mut cs = None;
        if has(FunctionalName::CsCenter) {
            let report = parallel_sweep(&field, Functional::CsCenter { mass }, &schedule, &opts)?;
            out.push_report("cs_center", &report);
            cs = Some(report);
        }
        if has(FunctionalName::IntrinsicCenter) {
            let report = parallel_sweep(
                &field,
                Functional::IntrinsicCenter { mass },
                &schedule,
                &opts,
            )?;
            out.push_report("intrinsic_center", &report);
            if let Some(cs) = &cs {
                let diff = compare(cs, &report).map_err(RunError::eval("center_difference"))?;
                out.push_report("center_difference", &diff);
            }
        }
    }

    if has(FunctionalName::IdentityResiduals) {
        identities(&field, &schedule, config, &mut out)?;
    }
    if has(FunctionalName::ScalarMoments) {
        scalar_moments(&field, &schedule, config, &mut out)?;
    }
    if has(FunctionalName::DecayChecks) {
        decay(&field, &schedule, &mut out)?;
    }
    Ok(out)
}

fn residual_row(
    field: &CatalogField,
    inner: Option<&QuadSurface>,
    surf: &QuadSurface,
) -> Result<Vec<f64>, Error> {
    let n = field.dim();
    let mut row = Vec::with_capacity(n + 1);
    match inner {
        None => {
            row.push(ibp_residual_x(field, surf)?);
            for axis in 0..n {
                row.push(ibp_residual_y(field, surf, axis)?);
            }
        }
        Some(inner) => {
            row.push(ibp_annulus_residual_x(field, inner, surf)?);
            for axis in 0..n {
                row.push(ibp_annulus_residual_y(field, inner, surf, axis)?);
            }
        }
    }
    Ok(row)
}

/// Dilation and special-conformal identity residuals per surface. Fields that
/// are singular inside use the annulus between the first surface and each
/// later one.
fn identities(
    field: &CatalogField,
    schedule: &Schedule,
    config: &RunConfig,
    out: &mut Outcome,
) -> Result<(), RunError> {
    const NAME: &str = "identity_residuals";
    let n = field.dim();
    let surface = |i: usize| schedule.surface(n, i, config.order);
    let smooth = field.globally_smooth();
    let inner = if smooth {
        None
    } else {
        Some(surface(0).map_err(RunError::eval(NAME))?)
    };
    let first = if smooth { 0 } else { 1 };
    let rows = (first..schedule.len())
        .into_par_iter()
        .map(|i| {
            let surf = surface(i)?;
            residual_row(field, inner.as_ref(), &surf).map(|row| (schedule.nominal_radius(i), row))
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(RunError::eval(NAME))?;
    let mut columns = vec!["x".to_string()];
    columns.extend((1..=n).map(|a| format!("y_{a}")));
    let worst: Vec<f64> = (0..=n)
        .map(|c| rows.iter().map(|(_, row)| row[c].abs()).fold(0.0, f64::max))
        .collect();
    let tolerance = config.tolerances.identity;
    out.checks.push(Check {
        functional: NAME.to_string(),
        verdict: worst.iter().all(|v| *v <= tolerance),
        fitted_limit: worst,
        fitted_rate: None,
        residual: None,
        tolerance,
    });
    out.tables.push(Table {
        name: NAME.to_string(),
        columns,
        rows,
    });
    Ok(())
}

/// Cumulative `int R_g dv_g` and its coordinate moments from the first radius
/// outward, with a fitted limit.
fn scalar_moments(
    field: &CatalogField,
    schedule: &Schedule,
    config: &RunConfig,
    out: &mut Outcome,
) -> Result<(), RunError> {
    const NAME: &str = "scalar_moments";
    let n = field.dim();
    let radii = schedule.radii();
    let moments: Vec<Moment> = std::iter::once(Moment::Total)
        .chain((0..n).map(Moment::Coordinate))
        .collect();
    let shells = moments
        .par_iter()
        .map(|m| shell_moments(field, radii, *m, config.order))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(RunError::eval(NAME))?;
    let mut running = vec![0.0; moments.len()];
    let mut values = Vec::with_capacity(radii.len() - 1);
    for k in 0..radii.len() - 1 {
        for (acc, column) in running.iter_mut().zip(&shells) {
            *acc += column[k];
        }
        values.push(running.clone());
    }
    let report = ConvergenceReport::from_samples(
        NAME,
        radii[1..].to_vec(),
        values,
        config.tolerances.certification,
    )
    .map_err(RunError::eval(NAME))?;
    out.push_report(NAME, &report);
    let mut columns = vec!["total".to_string()];
    columns.extend((1..=n).map(|i| format!("x_{i}")));
    out.tables.last_mut().unwrap().columns = columns;
    Ok(())
}

/// Decay of `h` at the rate needed for the mass statement and of its odd part
/// at the rate needed for the center statement.
fn decay(field: &CatalogField, schedule: &Schedule, out: &mut Outcome) -> Result<(), RunError> {
    const NAME: &str = "decay_checks";
    let n = field.dim() as f64;
    let radii = schedule.radii();
    let (all, odd) = rayon::join(
        || decay_report(field, radii, 0.5 * (n - 2.0), DecayPart::All),
        || decay_report(field, radii, 0.5 * n, DecayPart::Odd),
    );
    let all = all.map_err(RunError::eval(NAME))?;
    let odd = odd.map_err(RunError::eval(NAME))?;
    let rows = radii
        .iter()
        .zip(all.sups.iter().zip(&odd.sups))
        .map(|(r, (a, o))| (*r, a.iter().chain(o).copied().collect()))
        .collect::<Vec<_>>();
    for (label, report) in [("decay_all", &all), ("decay_odd", &odd)] {
        out.checks.push(Check {
            functional: label.to_string(),
            fitted_limit: report.sups.last().unwrap().to_vec(),
            fitted_rate: None,
            residual: None,
            verdict: report.passed(),
            tolerance: DECAY_FLOOR,
        });
    }
    out.tables.push(Table {
        name: NAME.to_string(),
        columns: ["all_0", "all_1", "all_2", "odd_0", "odd_1", "odd_2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    });
    Ok(())
}
