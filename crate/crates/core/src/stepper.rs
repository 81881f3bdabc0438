//! Semi-implicit time stepping of the flowing finite-volume scheme.
//!
//! Each node obeys
//!
//! ```text
//! dX_i/dt = 2/(d_i + d_{i+1}) * ((X_{i+1} - X_i)/d_{i+1} - (X_i - X_{i-1})/d_i)
//!         + F (X_{i+1} - X_{i-1})^perp / (d_i + d_{i+1})
//! ```
//!
//! The second-difference term is taken at the new time level while the
//! lengths `d_i`, the forcing `F` and the normal term are frozen at the old
//! one. Both coordinates then share a single cyclic tridiagonal matrix.

use crate::error::{Error, Result};
use crate::flow::{forcing_value, FlowModel};
use crate::geometry::{
    curvature_vector_and_normal, curve_length, enclosed_area, raw_curvature,
    raw_segment_lengths, shape_diagnostics_from, CurveState, GeometryCache, Point,
    DEFAULT_EPSILON_GEOM,
};
use crate::tridiag::CyclicTridiagonal;

pub const DEFAULT_TAU: f64 = 1e-4;
pub const DEFAULT_SNAPSHOT_EVERY: usize = 100;

/// A run is declared extinct once the curve length falls below
/// `max(EXTINCTION_FACTOR * epsilon_geom, EXTINCTION_RELATIVE * L(0))`.
pub const EXTINCTION_FACTOR: f64 = 100.0;
pub const EXTINCTION_RELATIVE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tau: f64,
    pub t_final: f64,
    pub model: FlowModel,
    pub snapshot_every: usize,
    pub epsilon_geom: f64,
}

impl SolverConfig {
    pub fn new(model: FlowModel, tau: f64, t_final: f64) -> Self {
        SolverConfig {
            tau,
            t_final,
            model,
            snapshot_every: DEFAULT_SNAPSHOT_EVERY,
            epsilon_geom: DEFAULT_EPSILON_GEOM,
        }
    }

    pub fn with_snapshot_every(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig("tau > 0".into()));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig("t_final >= 0".into()));
        }
        if self.snapshot_every == 0 {
            return Err(Error::InvalidConfig("snapshot_every >= 1".into()));
        }
        if !(self.epsilon_geom > 0.0 && self.epsilon_geom.is_finite()) {
            return Err(Error::InvalidConfig("epsilon_geom > 0".into()));
        }
        if let FlowModel::ConstantForce(force) = self.model {
            if !force.is_finite() {
                return Err(Error::InvalidConfig("force must be finite".into()));
            }
        }
        Ok(())
    }

    /// Number of steps of size `tau` needed to reach `t_final`.
    pub fn step_count(&self) -> usize {
        let ratio = self.t_final / self.tau;
        // absorb round-off such as 0.5 / 1e-4 = 5000.000000000001
        (ratio - 1e-9 * ratio.max(1.0)).ceil().max(0.0) as usize
    }
}

/// Right-hand side of the semi-discrete system at every node.
pub fn explicit_velocity(curve: &CurveState, model: FlowModel, epsilon: f64) -> Result<Vec<Point>> {
    let geo = GeometryCache::new(curve, epsilon)?;
    let force = forcing_value(model, &geo.kappa, &geo.d)?;
    let nodes = curve.nodes();
    Ok((0..nodes.len())
        .map(|i| {
            let (k, n) = curvature_vector_and_normal(nodes, &geo.d, i);
            k + n * force
        })
        .collect())
}

/// Advances `curve` by one time step of size `config.tau`.
pub fn step(curve: &CurveState, config: &SolverConfig) -> Result<CurveState> {
    let geo = GeometryCache::new(curve, config.epsilon_geom)?;
    let force = forcing_value(config.model, &geo.kappa, &geo.d)?;
    let nodes = curve.nodes();
    let m = nodes.len();
    let tau = config.tau;
    let d = &geo.d;

    // row i: lower * X_{i-1} + diag * X_i + upper * X_{i+1}
    let mut lower = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut rhs_x = vec![0.0; m];
    let mut rhs_y = vec![0.0; m];
    for i in 0..m {
        let next = (i + 1) % m;
        let span = d[i] + d[next];
        lower[i] = -tau * 2.0 / (span * d[i]);
        upper[i] = -tau * 2.0 / (span * d[next]);
        diag[i] = 1.0 - lower[i] - upper[i];
        let normal = (nodes[next] - nodes[(i + m - 1) % m]).perp() * (1.0 / span);
        let explicit = nodes[i] + normal * (tau * force);
        rhs_x[i] = explicit.x;
        rhs_y[i] = explicit.y;
    }

    let matrix = CyclicTridiagonal::new(&lower[1..], &diag, &upper[..m - 1], (lower[0], upper[m - 1]))?;
    let xs = matrix.solve(&rhs_x)?;
    let ys = matrix.solve(&rhs_y)?;
    CurveState::from_points(xs.into_iter().zip(ys).map(|(x, y)| Point::new(x, y)).collect())
}

/// Scalar measurements of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub t: f64,
    pub total_length: f64,
    pub area: f64,
    pub forcing: f64,
    pub isoperimetric_ratio: f64,
    pub uniformity_ratio: f64,
    pub min_segment: f64,
}

impl StepDiagnostics {
    /// Never fails; quantities that are undefined on a degenerate curve come
    /// out non-finite.
    pub fn measure(t: f64, curve: &CurveState, model: FlowModel) -> Self {
        let d = raw_segment_lengths(curve.nodes());
        let kappa = raw_curvature(curve.nodes(), &d);
        let area = enclosed_area(curve);
        let shape = shape_diagnostics_from(&d, area);
        StepDiagnostics {
            t,
            total_length: curve_length(&d),
            area,
            forcing: forcing_value(model, &kappa, &d).unwrap_or(f64::NAN),
            isoperimetric_ratio: shape.isoperimetric_ratio,
            uniformity_ratio: shape.uniformity_ratio,
            min_segment: d.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub curve: CurveState,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Completed,
    /// The curve shrank to a point; `time` is the first step time at which
    /// its length fell below the extinction threshold.
    Extinct { time: f64 },
    /// A step failed; the last snapshot holds the last valid state at `time`.
    Aborted { time: f64, error: Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub outcome: Outcome,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory always holds the initial state")
    }

    pub fn extinction_time(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Extinct { time } => Some(time),
            _ => None,
        }
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self.outcome, Outcome::Aborted { .. })
    }

    fn record(&mut self, t: f64, curve: &CurveState, model: FlowModel) {
        if self.snapshots.last().is_some_and(|s| s.t == t) {
            return;
        }
        self.diagnostics.push(StepDiagnostics::measure(t, curve, model));
        self.snapshots.push(Snapshot { t, curve: curve.clone() });
    }
}

/// Runs the time loop from `t = 0` to `config.t_final`.
///
/// Only an invalid configuration is returned as `Err`; failures during the
/// run end the trajectory with [`Outcome::Aborted`].
pub fn evolve(initial: &CurveState, config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let model = config.model;
    let mut trajectory = Trajectory {
        snapshots: Vec::new(),
        diagnostics: Vec::new(),
        outcome: Outcome::Completed,
        steps: 0,
    };
    trajectory.record(0.0, initial, model);

    let initial_length = curve_length(&raw_segment_lengths(initial.nodes()));
    let extinction_length =
        (EXTINCTION_FACTOR * config.epsilon_geom).max(EXTINCTION_RELATIVE * initial_length);
    if initial_length < extinction_length {
        trajectory.outcome = Outcome::Extinct { time: 0.0 };
        return Ok(trajectory);
    }

    let total = config.step_count();
    let mut curve = initial.clone();
    for k in 1..=total {
        let previous_t = (k - 1) as f64 * config.tau;
        match step(&curve, config) {
            Ok(next) => curve = next,
            Err(error) => {
                trajectory.record(previous_t, &curve, model);
                trajectory.outcome = Outcome::Aborted { time: previous_t, error };
                return Ok(trajectory);
            }
        }
        trajectory.steps = k;
        let t = k as f64 * config.tau;
        if curve_length(&raw_segment_lengths(curve.nodes())) < extinction_length {
            trajectory.record(t, &curve, model);
            trajectory.outcome = Outcome::Extinct { time: t };
            return Ok(trajectory);
        }
        if k % config.snapshot_every == 0 || k == total {
            trajectory.record(t, &curve, model);
        }
    }
    Ok(trajectory)
}
