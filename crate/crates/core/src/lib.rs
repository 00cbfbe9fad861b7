//! Dimensional-transformation algebra, cosmic cascade engine and the
//! three-value space code.

pub mod algebra;
pub mod cascade;
pub mod constants;
pub mod hybrid;
pub mod report;
pub mod scenario;

pub use algebra::{Kind, ParticleState};
pub use cascade::{run_pipeline, Ensemble, EnsembleEntry, PipelineReport};
pub use constants::{load_constants, AlphaPower, PhysicalConstants};

/// Version string stamped into every report.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
