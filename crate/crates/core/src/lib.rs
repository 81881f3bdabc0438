//! Evolution of closed plane curves under curve-shortening flow and the
//! area-preserving (conserved) mean-curvature flow.
//!
//! Curves are closed polygons discretized by flowing finite volumes and
//! advanced with a semi-implicit backward Euler scheme. See [`stepper`] for
//! the scheme, [`geometry`] for the discrete quantities and [`analysis`] for
//! reference solutions and study harnesses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod stepper;
pub mod tridiag;

pub use analysis::{
    circle_radius, convergence_study, run_examples, CircleOracle, CircleState, RunRecord,
    StudyReport,
};
pub use config::{parse_config, CurveSpec, RunSpec};
pub use error::{Error, Result};
pub use flow::{forcing_value, nonlocal_force, FlowModel};
pub use geometry::{
    curve_length, discrete_curvature, dual_lengths, enclosed_area, segment_lengths,
    shape_diagnostics, CurveState, GeometryCache, Orientation, Point, ShapeDiagnostics,
    DEFAULT_EPSILON_GEOM,
};
pub use io::{load_polyline, write_snapshot};
pub use stepper::{evolve, step, Outcome, Snapshot, SolverConfig, StepDiagnostics, Trajectory};
pub use tridiag::{solve_cyclic_tridiagonal, CyclicTridiagonal};
