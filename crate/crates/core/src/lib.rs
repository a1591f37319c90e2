//! Sheaf-theoretic contextuality analysis of empirical models, with an exact
//! rational LP solver and a multi-agent epistemic logic over the same data.

pub mod builders;
pub mod contextuality;
pub mod empirical;
pub mod modal;
pub mod ratlp;
pub mod scalar;
pub mod scenario;

pub use scalar::Rational;

/// Exact rational linear program.
pub type ExactLp = ratlp::LinearProgram<Rational>;
/// Certified optimum of an [`ExactLp`].
pub type ExactSolution = ratlp::LpSolution<Rational>;
/// Floating-point linear program, for quick estimates.
pub type FloatLp = ratlp::LinearProgram<f64>;

pub use contextuality::{classify, ContextualityReport, HierarchyLevel};
pub use empirical::{EmpiricalModel, SemiringTag};
pub use scenario::{Context, GlobalSection, MeasurementScenario, Section};
