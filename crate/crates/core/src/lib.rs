//! Numerics for three isometric two-dimensional Randers spaces: the Funk
//! disk, the Finsler-Poincaré disk and the Finsler-Poincaré upper half
//! plane.
//!
//! ```
//! use randers::{evaluate, ModelKind, ModelPoint, TangentVector, Vec2};
//!
//! let x = ModelPoint::new(ModelKind::PoincareDisk, 0.5, 0.0)?;
//! let m = evaluate(ModelKind::PoincareDisk, &TangentVector::new(x, Vec2::new(1.0, 0.0))?)?;
//! assert!((m.f - 24.0 / 5.0).abs() < 1e-14);
//! # Ok::<(), randers::Error>(())
//! ```
//!
//! The guide under `book/` walks through each module; its code blocks are
//! compiled as doc-tests of this crate.

pub mod dd;
pub mod duality;
pub mod error;
pub mod formulas;
pub mod geometry;
pub mod isometry;
pub mod linalg;
pub mod measure;
pub mod mesh;
pub mod metrics;
pub mod paths;
pub mod quadrature;
pub mod spectrum;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/isometries.md")]
    mod isometries {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/measure.md")]
    mod measure {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use error::{Error, Result};
pub use geometry::{
    in_domain, sample_points, sample_tangents, CotangentVector, ModelId, ModelKind, ModelPoint,
    TangentVector, Truncation, DOMAIN_GUARD,
};
pub use isometry::{
    check_commutativity, check_isometry, jacobian, map_point, pushforward, IsometryMap,
    IsometryReport, Precision,
};
pub use duality::{co_metric, finsler_gradient, legendre, ScalarField};
pub use linalg::{Mat2, Vec2};
pub use measure::{density_sigma, finsler_laplacian, integrate, weak_form_residual};
pub use mesh::{build_mesh, Mesh};
pub use paths::{distance_estimate, path_length, Polyline};
pub use spectrum::{
    gap_experiment, h1_norm, minimize_quotient, rayleigh_quotient, DiscreteField, RayleighTrace,
};
pub use metrics::{
    drift_field, evaluate, fundamental_tensor, randers_bound, reversibility_defect,
    FundamentalTensor, MetricValue,
};
