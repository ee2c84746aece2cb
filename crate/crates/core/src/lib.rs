//! Quaternionic group diagrams, curvature engines and the scenarios built on them.

pub mod diagram;
pub mod geometry;
pub mod group;
pub mod linalg;
pub mod quat;
pub mod sampling;
pub mod scenarios;
pub mod spaces;

pub use diagram::{GroupDiagram, ObstructionReport, SubgroupDesc};
pub use geometry::{CurvatureAtPoint, DirOp, GeometryError, MetricField, RicKReport};
pub use group::{AlgVec, FactorKind, GroupElem, GroupSpec};
pub use quat::{ImUnit, Quat};
pub use scenarios::{Criterion, ReportFormat, ScenarioError, ScenarioResult};
