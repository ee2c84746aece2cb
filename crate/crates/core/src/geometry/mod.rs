//! Riemannian geometry in coordinates: charts, curvature, directional Ricci operators
//! and Jacobi fields.

pub mod chart;
pub mod curvature;
pub mod dirop;
pub mod jacobi;
pub mod search;

use thiserror::Error;

pub use chart::{AmbientMetric, Chart, Euclidean, FlatChart, FnMetric, MetricField, PulledBack, SphereProductChart};
pub use curvature::{
    christoffel, curvature, raw_curvature, sectional, Christoffel, CurvatureAtPoint, CURVATURE_TOL, DEFAULT_STEP,
};
pub use dirop::{directional_operator, ksum_min, DirOp};
pub use jacobi::{
    curvature_along, jacobi_integrate, parallel_frame, riccati_and_omega, Curve, JacobiState, JacobiSystem,
    ParallelFrame, SphereProductSpace, JACOBI_TOL,
};
pub use search::{ric_k_min, ric_k_min_at, RicKReport, REFINE_STEPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("singular metric: {0}")]
    SingularGram(String),
    #[error("curvature symmetrization defect {defect:.3e} exceeds tolerance")]
    NumericalFailure { defect: f64 },
    #[error("degenerate plane")]
    DegeneratePlane,
    #[error("no directions transverse to x in the given subspace")]
    NotTransverse,
    #[error("integration step too large: error estimate {estimate:.3e}")]
    StepTooLarge { estimate: f64 },
    #[error("bad input: {0}")]
    BadInput(String),
}
