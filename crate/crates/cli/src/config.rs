//! Run configuration, read from JSON.

use std::path::{Path, PathBuf};

use adm_core::analysis::{Schedule, DEFAULT_TOLERANCE};
use adm_core::catalog::{Bump, CatalogKind, CatalogSpec, Parity};
use adm_core::surfaces::DEFAULT_ORDER;
use serde::{Deserialize, Serialize};

use crate::error::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalName {
    AdmMass,
    IntrinsicMass,
    CsCenter,
    IntrinsicCenter,
    IdentityResiduals,
    ScalarMoments,
    DecayChecks,
}

impl FunctionalName {
    pub const ALL: [FunctionalName; 7] = [
        FunctionalName::AdmMass,
        FunctionalName::IntrinsicMass,
        FunctionalName::CsCenter,
        FunctionalName::IntrinsicCenter,
        FunctionalName::IdentityResiduals,
        FunctionalName::ScalarMoments,
        FunctionalName::DecayChecks,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub dim: usize,
    pub kind: KindConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KindConfig {
    Flat,
    Schwarzschild {
        mass: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Conformal {
        coefficients: Vec<f64>,
        #[serde(default)]
        center: Vec<f64>,
    },
    Perturbed {
        base: Box<KindConfig>,
        bump: BumpConfig,
    },
    RtViolator {
        amplitude: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub amplitude: f64,
    pub width: f64,
    pub location: Vec<f64>,
    #[serde(default)]
    pub parity: ParityConfig,
    #[serde(default)]
    pub pattern: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityConfig {
    #[default]
    None,
    Even,
    Odd,
}

impl KindConfig {
    fn to_kind(&self) -> CatalogKind {
        match self {
            KindConfig::Flat => CatalogKind::Flat,
            KindConfig::Schwarzschild { mass, center } => CatalogKind::Schwarzschild {
                mass: *mass,
                center: center.clone(),
            },
            KindConfig::Conformal {
                coefficients,
                center,
            } => CatalogKind::Conformal {
                coefficients: coefficients.clone(),
                center: center.clone(),
            },
            KindConfig::Perturbed { base, bump } => CatalogKind::Perturbed {
                base: Box::new(base.to_kind()),
                bump: Bump {
                    amplitude: bump.amplitude,
                    width: bump.width,
                    location: bump.location.clone(),
                    parity: match bump.parity {
                        ParityConfig::None => Parity::None,
                        ParityConfig::Even => Parity::Even,
                        ParityConfig::Odd => Parity::Odd,
                    },
                    pattern: bump.pattern.clone(),
                },
            },
            KindConfig::RtViolator { amplitude } => CatalogKind::RtViolator {
                amplitude: *amplitude,
            },
        }
    }
}

impl MetricConfig {
    pub fn spec(&self) -> CatalogSpec {
        CatalogSpec::new(self.dim, self.kind.to_kind())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleConfig {
    Spheres { radii: Vec<f64> },
    Ellipsoids { ellipsoid: EllipsoidConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidConfig {
    pub scales: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig::Spheres {
            radii: adm_core::analysis::default_radii(),
        }
    }
}

impl ScheduleConfig {
    pub fn schedule(&self) -> Schedule {
        match self {
            ScheduleConfig::Spheres { radii } => Schedule::spheres(radii.clone()),
            ScheduleConfig::Ellipsoids { ellipsoid } => Schedule::Ellipsoids {
                scales: ellipsoid.scales.clone(),
                radii: ellipsoid.radii.clone(),
            },
        }
    }

    pub fn set_radii(&mut self, new: Vec<f64>) {
        match self {
            ScheduleConfig::Spheres { radii } => *radii = new,
            ScheduleConfig::Ellipsoids { ellipsoid } => ellipsoid.radii = new,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Limit tolerance for mass and center certifications.
    pub certification: f64,
    /// Bound on identity residuals.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            certification: DEFAULT_TOLERANCE,
            identity: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_out")]
    pub path: PathBuf,
}

fn default_out() -> PathBuf {
    PathBuf::from("admtool-out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: Format::Csv,
            path: default_out(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub metric: MetricConfig,
    pub functionals: Vec<FunctionalName>,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Mass used to normalize centers; defaults to the fitted ADM mass.
    #[serde(default)]
    pub center_mass: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("parse error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            RunError::Config(msg) => RunError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks that do not need the metric to be built.
    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: &str| Err(RunError::Config(m.to_string()));
        if self.functionals.is_empty() {
            return bad("at least one functional is required");
        }
        if self.order == 0 {
            return bad("quadrature order must be positive");
        }
        let t = self.tolerances;
        if t.certification.is_nan()
            || t.identity.is_nan()
            || t.certification <= 0.0
            || t.identity <= 0.0
        {
            return bad("tolerances must be positive");
        }
        if let Some(m) = self.center_mass {
            if !m.is_finite() {
                return bad("center_mass must be finite");
            }
        }
        self.schedule
            .schedule()
            .validate(4)
            .map_err(|e| RunError::Config(format!("schedule: {e}")))
    }
}
