//! Reference solutions and study harnesses.

use std::fmt;
use std::fmt::Write as _;
use std::thread;

use crate::error::{Error, Result};
use crate::flow::FlowModel;
use crate::geometry::{discrete_curvature, segment_lengths, CurveState, DEFAULT_EPSILON_GEOM};
use crate::io::load_polyline;
use crate::stepper::{evolve, Outcome, SolverConfig, StepDiagnostics, Trajectory, DEFAULT_TAU};

/// Nonconvex test curve shaped like the letter pi, 200 nodes.
pub const PI_SHAPE_POLYLINE: &str = include_str!("../fixtures/pi_shape.txt");

pub const EXAMPLE_NODES: usize = 200;
/// Node count of the circle used by the temporal refinement study.
pub const TEMPORAL_STUDY_NODES: usize = 200;

/// Exact evolution of a circle of initial radius `r0` under `v = -kappa + F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOracle {
    pub r0: f64,
    pub law: FlowModel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleState {
    Radius(f64),
    Extinct { time: f64 },
}

impl CircleOracle {
    pub fn new(r0: f64, law: FlowModel) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidRadius(r0));
        }
        Ok(CircleOracle { r0, law })
    }

    fn constant_force(&self) -> Option<f64> {
        match self.law {
            FlowModel::CurveShortening => Some(0.0),
            FlowModel::ConstantForce(f) => Some(f),
            FlowModel::AreaPreserving => None,
        }
    }

    /// Time at which the circle collapses, if it does.
    pub fn extinction_time(&self) -> Option<f64> {
        let force = self.constant_force()?;
        let r0 = self.r0;
        if force == 0.0 {
            Some(0.5 * r0 * r0)
        } else if force * r0 < 1.0 {
            // t(r) = [r/F + ln|F r - 1| / F^2] from r0 to 0
            Some(-r0 / force - (1.0 - force * r0).ln() / (force * force))
        } else {
            None
        }
    }

    pub fn radius(&self, t: f64) -> CircleState {
        let Some(force) = self.constant_force() else {
            return CircleState::Radius(self.r0);
        };
        let r0 = self.r0;
        if let Some(t_ext) = self.extinction_time() {
            if t >= t_ext {
                return CircleState::Extinct { time: t_ext };
            }
        }
        if force == 0.0 {
            return CircleState::Radius((r0 * r0 - 2.0 * t).sqrt());
        }
        if force * r0 == 1.0 {
            return CircleState::Radius(r0);
        }
        // invert the elapsed-time integral t(r) = g(r) - g(r0) by bisection
        let g = |r: f64| r / force + (force * r - 1.0).abs().ln() / (force * force);
        let elapsed = |r: f64| g(r) - g(r0);
        let (mut lo, mut hi) = if force * r0 < 1.0 {
            (0.0, r0)
        } else {
            (r0, r0 + force * t)
        };
        let shrinking = force * r0 < 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let before = elapsed(mid) < t;
            // elapsed time grows as r moves away from r0
            if before == shrinking {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        CircleState::Radius(0.5 * (lo + hi))
    }
}

pub fn circle_radius(oracle: &CircleOracle, t: f64) -> CircleState {
    oracle.radius(t)
}

/// Summary of one completed (or failed) evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub label: String,
    pub initial_curve: String,
    pub nodes: usize,
    pub tau: f64,
    pub t_final: f64,
    pub model: FlowModel,
    pub initial_area: f64,
    pub final_area: f64,
    /// `|A(end) - A(0)| / |A(0)|`.
    pub area_drift: f64,
    pub final_time: f64,
    pub final_isoperimetric_ratio: f64,
    pub max_uniformity_ratio: f64,
    pub extinction_time: Option<f64>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn from_trajectory(
        label: &str,
        initial_curve: &str,
        config: &SolverConfig,
        nodes: usize,
        trajectory: Trajectory,
    ) -> Self {
        let first = trajectory.diagnostics[0];
        let last = *trajectory.diagnostics.last().unwrap();
        RunRecord {
            label: label.to_string(),
            initial_curve: initial_curve.to_string(),
            nodes,
            tau: config.tau,
            t_final: config.t_final,
            model: config.model,
            initial_area: first.area,
            final_area: last.area,
            area_drift: (last.area - first.area).abs() / first.area.abs(),
            final_time: last.t,
            final_isoperimetric_ratio: last.isoperimetric_ratio,
            max_uniformity_ratio: trajectory
                .diagnostics
                .iter()
                .map(|d| d.uniformity_ratio)
                .fold(f64::NEG_INFINITY, f64::max),
            extinction_time: trajectory.extinction_time(),
            error: match &trajectory.outcome {
                Outcome::Aborted { time, error } => Some(format!("aborted at t={time}: {error}")),
                _ => None,
            },
            diagnostics: trajectory.diagnostics,
        }
    }

    fn failed(label: &str, initial_curve: &str, config: &SolverConfig, error: Error) -> Self {
        RunRecord {
            label: label.to_string(),
            initial_curve: initial_curve.to_string(),
            nodes: 0,
            tau: config.tau,
            t_final: config.t_final,
            model: config.model,
            initial_area: f64::NAN,
            final_area: f64::NAN,
            area_drift: f64::NAN,
            final_time: 0.0,
            final_isoperimetric_ratio: f64::NAN,
            max_uniformity_ratio: f64::NAN,
            extinction_time: None,
            diagnostics: Vec::new(),
            error: Some(error.to_string()),
        }
    }

    pub fn uniformity_history(&self) -> Vec<(f64, f64)> {
        self.diagnostics.iter().map(|d| (d.t, d.uniformity_ratio)).collect()
    }

    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

/// Errors measured across a refinement sequence and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementSeries {
    pub quantity: String,
    /// Name of the refined parameter, `nodes` or `tau`.
    pub parameter: String,
    pub samples: Vec<(f64, f64)>,
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StudyReport {
    pub runs: Vec<RunRecord>,
    pub refinements: Vec<RefinementSeries>,
}

impl StudyReport {
    pub fn run(&self, label: &str) -> Option<&RunRecord> {
        self.runs.iter().find(|r| r.label == label)
    }

    pub fn refinement(&self, parameter: &str) -> Option<&RefinementSeries> {
        self.refinements.iter().find(|r| r.parameter == parameter)
    }

    /// Per-run rows in the CSV layout used by the command line tool.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from(
            "label,initial_curve,model,nodes,tau,t_final,initial_area,final_area,area_drift,final_time,final_isoperimetric_ratio,max_uniformity_ratio,extinction_time,status\n",
        );
        for r in &self.runs {
            let extinction = r.extinction_time.map(|t| format!("{t:.16e}")).unwrap_or_default();
            let status = r.error.as_deref().unwrap_or("ok").replace(',', ";");
            let _ = writeln!(
                out,
                "{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                r.label,
                r.initial_curve,
                r.model,
                r.nodes,
                r.tau,
                r.t_final,
                r.initial_area,
                r.final_area,
                r.area_drift,
                r.final_time,
                r.final_isoperimetric_ratio,
                r.max_uniformity_ratio,
                extinction,
                status
            );
        }
        out
    }

    pub fn refinements_csv(&self) -> String {
        let mut out = String::from("quantity,parameter,value,error,fitted_order\n");
        for s in &self.refinements {
            for (value, error) in &s.samples {
                let _ = writeln!(
                    out,
                    "{},{},{:.16e},{:.16e},{:.16e}",
                    s.quantity, s.parameter, value, error, s.order
                );
            }
        }
        out
    }
}

impl fmt::Display for StudyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.runs {
            write!(
                f,
                "{:<10} {:<28} {:<16} M={:<4} tau={:e} A0={:.6} A1={:.6} drift={:.4}% iso={:.6} max_unif={:.4}",
                r.label,
                r.initial_curve,
                r.model.to_string(),
                r.nodes,
                r.tau,
                r.initial_area,
                r.final_area,
                100.0 * r.area_drift,
                r.final_isoperimetric_ratio,
                r.max_uniformity_ratio
            )?;
            if let Some(t) = r.extinction_time {
                write!(f, " extinct_at={t:.5}")?;
            }
            if let Some(e) = &r.error {
                write!(f, " ERROR: {e}")?;
            }
            writeln!(f)?;
        }
        for s in &self.refinements {
            writeln!(f, "{} vs {}: fitted order {:.4}", s.quantity, s.parameter, s.order)?;
            for (value, error) in &s.samples {
                writeln!(f, "  {} = {:e}  error = {:.6e}", s.parameter, value, error)?;
            }
        }
        Ok(())
    }
}

/// Least-squares slope of `ln(error)` against `ln(h)`.
pub fn fit_order(samples: &[(f64, f64)]) -> f64 {
    let n = samples.len() as f64;
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(h, e)| (h.ln(), e.ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Initial data of one study run.
#[derive(Debug, Clone, PartialEq)]
pub enum StudyCurve {
    Radial { folds: u32, amplitude: f64, nodes: usize },
    PiShape,
}

impl StudyCurve {
    pub fn build(&self) -> Result<CurveState> {
        match *self {
            StudyCurve::Radial { folds, amplitude, nodes } => CurveState::radial(folds, amplitude, nodes),
            StudyCurve::PiShape => load_polyline(PI_SHAPE_POLYLINE),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StudyCurve::Radial { folds, amplitude, .. } => format!("radial(n={folds} a={amplitude})"),
            StudyCurve::PiShape => "pi_shape polyline".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyCase {
    pub label: String,
    pub curve: StudyCurve,
    pub config: SolverConfig,
}

impl StudyCase {
    pub fn run(&self) -> RunRecord {
        let describe = self.curve.describe();
        let result = self
            .curve
            .build()
            .and_then(|curve| evolve(&curve, &self.config).map(|t| (curve.len(), t)));
        match result {
            Ok((nodes, trajectory)) => {
                RunRecord::from_trajectory(&self.label, &describe, &self.config, nodes, trajectory)
            }
            Err(e) => RunRecord::failed(&self.label, &describe, &self.config, e),
        }
    }
}

/// Runs cases on scoped threads; records come back in case order.
pub fn run_cases(cases: &[StudyCase]) -> Vec<RunRecord> {
    thread::scope(|scope| {
        let handles: Vec<_> = cases.iter().map(|c| scope.spawn(move || c.run())).collect();
        handles
            .into_iter()
            .zip(cases)
            .map(|(h, c)| {
                h.join().unwrap_or_else(|_| {
                    RunRecord::failed(
                        &c.label,
                        &c.curve.describe(),
                        &c.config,
                        Error::SolverFailure("run panicked".into()),
                    )
                })
            })
            .collect()
    })
}

/// The four published studies. The first runs past `t = 0.5` so that the
/// collapse of the four-folded curve is observed; the fourth uses the
/// bundled pi-shaped polyline.
pub fn example_cases() -> Vec<StudyCase> {
    let snapshot_every = 10;
    let radial = |folds, amplitude| StudyCurve::Radial { folds, amplitude, nodes: EXAMPLE_NODES };
    vec![
        StudyCase {
            label: "example1".into(),
            curve: radial(4, 0.4),
            config: SolverConfig::new(FlowModel::CurveShortening, DEFAULT_TAU, 0.6)
                .with_snapshot_every(snapshot_every),
        },
        StudyCase {
            label: "example2".into(),
            curve: radial(5, 0.65),
            config: SolverConfig::new(FlowModel::AreaPreserving, DEFAULT_TAU, 0.5)
                .with_snapshot_every(snapshot_every),
        },
        StudyCase {
            label: "example3".into(),
            curve: radial(10, 0.45),
            config: SolverConfig::new(FlowModel::AreaPreserving, DEFAULT_TAU, 0.5)
                .with_snapshot_every(snapshot_every),
        },
        StudyCase {
            label: "example4".into(),
            curve: StudyCurve::PiShape,
            config: SolverConfig::new(FlowModel::AreaPreserving, DEFAULT_TAU, 1.25)
                .with_snapshot_every(snapshot_every),
        },
    ]
}

pub fn run_examples() -> StudyReport {
    StudyReport {
        runs: run_cases(&example_cases()),
        refinements: Vec::new(),
    }
}

/// Maximum curvature error of the regular `nodes`-gon on the unit circle.
pub fn circle_curvature_error(nodes: usize) -> Result<f64> {
    let circle = CurveState::circle(1.0, nodes)?;
    let d = segment_lengths(&circle, DEFAULT_EPSILON_GEOM)?;
    let kappa = discrete_curvature(&circle, &d)?;
    Ok(kappa.iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max))
}

/// Spatial refinement of the circle curvature over `base_nodes * 2^k` and
/// temporal refinement of the unit-circle extinction time over
/// `base_tau / 2^k`, `k = 0 .. levels`.
pub fn convergence_study(base_nodes: usize, base_tau: f64, levels: usize) -> Result<StudyReport> {
    if levels < 3 {
        return Err(Error::InvalidConfig("convergence study needs levels >= 3".into()));
    }
    if base_nodes < crate::geometry::MIN_NODES {
        return Err(Error::TooFewNodes(base_nodes));
    }
    let oracle = CircleOracle::new(1.0, FlowModel::CurveShortening)?;
    let t_ext = oracle.extinction_time().expect("shrinking circle");
    if !(base_tau > 0.0) || base_tau >= t_ext {
        return Err(Error::InvalidConfig(format!(
            "coarsest time step {base_tau} already reaches extinction at t={t_ext}"
        )));
    }

    let mut spatial = Vec::with_capacity(levels);
    for k in 0..levels {
        let nodes = base_nodes << k;
        spatial.push((nodes as f64, circle_curvature_error(nodes)?));
    }
    // error ~ M^-p, so the slope against h = 1/M is p
    let spatial_order = fit_order(&spatial.iter().map(|&(m, e)| (1.0 / m, e)).collect::<Vec<_>>());

    let cases: Vec<StudyCase> = (0..levels)
        .map(|k| {
            let tau = base_tau / (1u64 << k) as f64;
            StudyCase {
                label: format!("circle_tau{k}"),
                curve: StudyCurve::Radial { folds: 1, amplitude: 0.0, nodes: TEMPORAL_STUDY_NODES },
                config: SolverConfig::new(FlowModel::CurveShortening, tau, 1.2 * t_ext)
                    .with_snapshot_every(usize::MAX),
            }
        })
        .collect();
    let runs = run_cases(&cases);
    let mut temporal = Vec::with_capacity(levels);
    for (case, run) in cases.iter().zip(&runs) {
        if let Some(e) = &run.error {
            return Err(Error::SolverFailure(format!("{}: {e}", case.label)));
        }
        let t = run.extinction_time.ok_or_else(|| {
            Error::SolverFailure(format!("{}: no extinction before t={}", case.label, case.config.t_final))
        })?;
        temporal.push((case.config.tau, (t - t_ext).abs()));
    }
    let temporal_order = fit_order(&temporal);

    Ok(StudyReport {
        runs,
        refinements: vec![
            RefinementSeries {
                quantity: "circle curvature max error".into(),
                parameter: "nodes".into(),
                samples: spatial,
                order: spatial_order,
            },
            RefinementSeries {
                quantity: "circle extinction time error".into(),
                parameter: "tau".into(),
                samples: temporal,
                order: temporal_order,
            },
        ],
    })
}
