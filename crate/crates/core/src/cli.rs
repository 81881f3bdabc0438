//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when the solver aborts.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::analysis::{circle_radius, convergence_study, run_examples, CircleOracle, CircleState, StudyReport};
use crate::config::parse_config;
use crate::error::Error;
use crate::flow::FlowModel;
use crate::geometry::CurveState;
use crate::io::{write_snapshot, write_summary};
use crate::stepper::{evolve, step, Outcome, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "curveflow", version, about = "Curve-shortening and area-preserving curvature flow of closed plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one curve described by a config file.
    Run { config: PathBuf },
    /// Check the solver against exact circle solutions.
    Oracle {
        #[arg(long, default_value_t = 1e-5)]
        tau: f64,
        #[arg(long, default_value_t = 200)]
        nodes: usize,
    },
    /// Run the four reference studies.
    Examples {
        /// Directory for study.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Fit spatial and temporal convergence orders on the circle.
    Convergence {
        #[arg(long, default_value_t = 50)]
        base_nodes: usize,
        #[arg(long, default_value_t = 4e-5)]
        base_tau: f64,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Directory for convergence.csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::DegenerateSegment { .. } | Error::NotDiagonallyDominant { .. } | Error::SolverFailure(_) => EXIT_SOLVER,
        _ => EXIT_INVALID,
    }
}

fn fail(error: Error) -> i32 {
    eprintln!("error: {error}");
    exit_code(&error)
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    match cli.command {
        Command::Run { config } => run(&config),
        Command::Oracle { tau, nodes } => oracle(tau, nodes),
        Command::Examples { out_dir } => examples(out_dir.as_deref()),
        Command::Convergence { base_nodes, base_tau, levels, out_dir } => {
            convergence(base_nodes, base_tau, levels, out_dir.as_deref())
        }
    }
}

fn run(config_path: &Path) -> i32 {
    let text = match fs::read_to_string(config_path) {
        Ok(text) => text,
        Err(e) => return fail(Error::io(config_path, e)),
    };
    let spec = match parse_config(&text) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {}: {e}", config_path.display());
            return EXIT_INVALID;
        }
    };
    let curve = match spec.build_curve() {
        Ok(curve) => curve,
        Err(e) => {
            eprintln!("error: initial curve: {e}");
            return EXIT_INVALID;
        }
    };
    let trajectory = match evolve(&curve, &spec.solver_config()) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };

    if let Err(e) = fs::create_dir_all(&spec.out_dir) {
        return fail(Error::io(&spec.out_dir, e));
    }
    for (k, snapshot) in trajectory.snapshots.iter().enumerate() {
        let path = spec.out_dir.join(format!("snapshot_{k:05}.dat"));
        if let Err(e) = write_snapshot(snapshot.t, &snapshot.curve, &path) {
            return fail(e);
        }
    }
    if let Err(e) = write_summary(&trajectory.diagnostics, &spec.out_dir.join("summary.csv")) {
        return fail(e);
    }

    let last = trajectory.diagnostics.last().expect("initial state is always recorded");
    println!(
        "{} steps, {} snapshots written to {}",
        trajectory.steps,
        trajectory.snapshots.len(),
        spec.out_dir.display()
    );
    println!(
        "t={} length={:.9} area={:.9} isoperimetric_ratio={:.9}",
        last.t, last.total_length, last.area, last.isoperimetric_ratio
    );
    match trajectory.outcome {
        Outcome::Completed => EXIT_OK,
        Outcome::Extinct { time } => {
            println!("curve shrank to a point at t={time}");
            EXIT_OK
        }
        Outcome::Aborted { time, error } => {
            eprintln!("error: solver aborted after t={time}: {error}");
            EXIT_SOLVER
        }
    }
}

fn oracle(tau: f64, nodes: usize) -> i32 {
    let circle = match CurveState::circle(1.0, nodes) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let exact = CircleOracle::new(1.0, FlowModel::CurveShortening).expect("unit radius");
    let t_exact = exact.extinction_time().expect("shrinking circle");
    let config = SolverConfig::new(FlowModel::CurveShortening, tau, 1.2 * t_exact).with_snapshot_every(100);
    let trajectory = match evolve(&circle, &config) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    if let Outcome::Aborted { error, .. } = trajectory.outcome {
        return fail(error);
    }
    let Some(t_ext) = trajectory.extinction_time() else {
        eprintln!("error: circle did not shrink to a point by t={}", config.t_final);
        return EXIT_SOLVER;
    };
    let tracking = trajectory
        .snapshots
        .iter()
        .filter(|s| s.t <= 0.9 * t_exact)
        .filter_map(|s| match circle_radius(&exact, s.t) {
            CircleState::Radius(r) => Some(s.curve.nodes().iter().map(|p| (p.norm() - r).abs()).fold(0.0, f64::max)),
            CircleState::Extinct { .. } => None,
        })
        .fold(0.0, f64::max);
    println!("shrinking unit circle, M={nodes}, tau={tau:e}");
    println!("  extinction time {t_ext:.8} (exact {t_exact}), error {:.3e}", (t_ext - t_exact).abs());
    println!("  max radius error up to t={:.3}: {tracking:.3e}", 0.9 * t_exact);

    let conserved = SolverConfig::new(FlowModel::AreaPreserving, tau, 1.0);
    match step(&circle, &conserved) {
        Ok(next) => {
            let moved = circle
                .nodes()
                .iter()
                .zip(next.nodes())
                .map(|(a, b)| (*a - *b).norm())
                .fold(0.0, f64::max);
            println!("area-preserving unit circle, one step of tau={tau:e}: max node displacement {moved:.3e}");
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}

fn write_report(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

fn examples(out_dir: Option<&Path>) -> i32 {
    let report: StudyReport = run_examples();
    print!("{report}");
    if let Some(dir) = out_dir {
        if let Err(e) = write_report(dir, "study.csv", &report.runs_csv()) {
            return fail(e);
        }
    }
    if report.runs.iter().all(|r| r.succeeded()) {
        EXIT_OK
    } else {
        EXIT_SOLVER
    }
}

fn convergence(base_nodes: usize, base_tau: f64, levels: usize, out_dir: Option<&Path>) -> i32 {
    match convergence_study(base_nodes, base_tau, levels) {
        Ok(report) => {
            for s in &report.refinements {
                println!("{} vs {}: fitted order {:.4}", s.quantity, s.parameter, s.order);
                for (value, error) in &s.samples {
                    println!("  {} = {value:e}  error = {error:.6e}", s.parameter);
                }
            }
            if let Some(dir) = out_dir {
                if let Err(e) = write_report(dir, "convergence.csv", &report.refinements_csv()) {
                    return fail(e);
                }
            }
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}
