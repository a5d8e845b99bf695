use alloc::boxed::Box;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation point lies inside the excluded ball of the field.
    Domain {
        radius: f64,
        inner_radius: f64,
    },
    /// Metric not invertible, or condition number above the guard.
    SingularMetric {
        condition: f64,
    },
    /// A center functional was asked to divide by a vanishing mass.
    UndefinedCenter {
        mass: f64,
    },
    /// An exact integral identity was requested over a region where the field
    /// is not known to be smooth.
    NotGloballySmooth,
    UnsupportedDimension(usize),
    IndexOutOfRange {
        index: usize,
        dim: usize,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    InvalidArgument(&'static str),
    UnknownFunctional(alloc::string::String),
    ScheduleMismatch,
    QuadratureNonConvergence {
        order: usize,
        change: f64,
    },
    /// Failure while evaluating a functional at one entry of a radius schedule.
    AtRadius {
        radius: f64,
        source: Box<Error>,
    },
}

impl Error {
    /// The innermost error, skipping radius annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtRadius { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures of the numerics (singular metric, quadrature) as
    /// opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::SingularMetric { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::UndefinedCenter { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain {
                radius,
                inner_radius,
            } => write!(
                f,
                "point at |x| = {radius} is inside the excluded ball of radius {inner_radius}"
            ),
            Error::SingularMetric { condition } => {
                write!(
                    f,
                    "metric is singular or ill-conditioned (condition {condition:e})"
                )
            }
            Error::UndefinedCenter { mass } => {
                write!(f, "center of mass undefined for mass {mass:e}")
            }
            Error::NotGloballySmooth => {
                write!(
                    f,
                    "field is not smooth on the enclosed region; use the annulus form"
                )
            }
            Error::UnsupportedDimension(n) => write!(f, "unsupported dimension {n} (need n >= 3)"),
            Error::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::UnknownFunctional(name) => write!(f, "unknown functional `{name}`"),
            Error::ScheduleMismatch => write!(f, "reports were produced on different schedules"),
            Error::QuadratureNonConvergence { order, change } => write!(
                f,
                "quadrature did not settle up to order {order} (last change {change:e})"
            ),
            Error::AtRadius { radius, source } => write!(f, "at r = {radius}: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
