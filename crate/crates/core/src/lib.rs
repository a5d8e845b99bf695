//! Mass and center of mass of asymptotically flat Riemannian metrics.
//!
//! Two families of surface functionals are evaluated on the same quadrature
//! surfaces so that their large-radius limits can be compared:
//!
//! * the classical flux integrals: the ADM mass [`invariants::adm_mass_at`]
//!   and the Hamiltonian (Regge–Teitelboim / Corvino–Schoen) center
//!   [`invariants::cs_center_at`], built from first derivatives of the metric
//!   with Euclidean normals and area;
//! * the curvature integrals: [`invariants::intrinsic_mass_at`] and
//!   [`invariants::intrinsic_center_at`], which contract the Einstein tensor
//!   `Ric - R g / 2` with the Euclidean conformal Killing fields and use the
//!   `g`-unit normal and `g`-area.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. IO, configuration and the command-line front end live in the
//! `adm-tool` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// Negated comparisons reject NaN; tensor code indexes by component.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod analysis;
pub mod catalog;
pub mod curvature;
mod error;
pub mod field;
pub mod invariants;
pub mod jet;
mod linalg;
mod math;
pub mod quadrature;
pub mod sum;
pub mod surfaces;

pub use catalog::{build, rt_violator, CatalogField, CatalogKind, CatalogSpec};
pub use curvature::CurvatureBundle;
pub use error::{Error, Result};
pub use field::{jet2, MetricField};
pub use jet::MetricJet2;
pub use surfaces::QuadSurface;

/// Area of the unit `(n-1)`-sphere in `R^n`, `2 pi^(n/2) / Gamma(n/2)`.
pub fn unit_sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * math::pow(core::f64::consts::PI, half) / libm::tgamma(half)
}
