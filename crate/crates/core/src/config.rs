//! `key = value` run configuration.
//!
//! One pair per line; `#` starts a comment. Recognized keys:
//!
//! | key              | meaning                                   | default |
//! |------------------|-------------------------------------------|---------|
//! | `curve`          | `radial`, `circle` or `polyline`          | inferred from the curve keys |
//! | `folds`          | radial curve fold count `n`               | required for radial |
//! | `amplitude`      | radial curve amplitude `a`, `\|a\| < 1`   | required for radial |
//! | `radius`         | circle radius                             | required for circle |
//! | `polyline_path`  | polyline file                             | required for polyline |
//! | `model`          | `csf`, `constant` or `area_preserving`    | required |
//! | `force`          | constant force for `model = constant`     | required for constant |
//! | `nodes`          | node count for radial and circle curves   | 200 |
//! | `tau`            | time step                                 | 1e-4 |
//! | `t_final`        | final time                                | required |
//! | `snapshot_every` | steps between recorded snapshots          | 100 |
//! | `out_dir`        | output directory                          | `out` |

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::flow::FlowModel;
use crate::geometry::{CurveState, DEFAULT_EPSILON_GEOM, MIN_NODES};
use crate::io::read_polyline;
use crate::stepper::{SolverConfig, DEFAULT_SNAPSHOT_EVERY, DEFAULT_TAU};

pub const KEYS: [&str; 12] = [
    "curve",
    "folds",
    "amplitude",
    "radius",
    "polyline_path",
    "model",
    "force",
    "nodes",
    "tau",
    "t_final",
    "snapshot_every",
    "out_dir",
];

pub const DEFAULT_NODES: usize = 200;
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Radial { folds: u32, amplitude: f64 },
    Circle { radius: f64 },
    Polyline { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub curve: CurveSpec,
    pub model: FlowModel,
    pub nodes: usize,
    pub tau: f64,
    pub t_final: f64,
    pub snapshot_every: usize,
    pub out_dir: PathBuf,
}

impl RunSpec {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tau: self.tau,
            t_final: self.t_final,
            model: self.model,
            snapshot_every: self.snapshot_every,
            epsilon_geom: DEFAULT_EPSILON_GEOM,
        }
    }

    pub fn build_curve(&self) -> Result<CurveState> {
        match &self.curve {
            CurveSpec::Radial { folds, amplitude } => CurveState::radial(*folds, *amplitude, self.nodes),
            CurveSpec::Circle { radius } => CurveState::circle(*radius, self.nodes),
            CurveSpec::Polyline { path } => read_polyline(path),
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn invalid(message: &str) -> Error {
    Error::InvalidConfig(message.to_string())
}

fn number(entries: &BTreeMap<&str, Entry>, key: &str) -> Result<Option<f64>> {
    entries
        .get(key)
        .map(|e| {
            e.value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: e.line,
                    message: format!("{key}: expected a finite number, found {:?}", e.value),
                })
        })
        .transpose()
}

fn count<T: std::str::FromStr>(entries: &BTreeMap<&str, Entry>, key: &str) -> Result<Option<T>> {
    entries
        .get(key)
        .map(|e| {
            e.value.parse::<T>().map_err(|_| Error::Parse {
                line: e.line,
                message: format!("{key}: expected a non-negative integer, found {:?}", e.value),
            })
        })
        .transpose()
}

pub fn parse_config(text: &str) -> Result<RunSpec> {
    let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, found {content:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let known = KEYS.iter().find(|k| **k == key).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown key {key:?}"),
        })?;
        if value.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("{key}: missing value"),
            });
        }
        if let Some(previous) = entries.get(known) {
            return Err(Error::Parse {
                line,
                message: format!("{key}: already set on line {}", previous.line),
            });
        }
        entries.insert(known, Entry { line, value: value.to_string() });
    }

    let model = match entries.get("model") {
        None => return Err(invalid("model is required")),
        Some(e) => match e.value.as_str() {
            "csf" => FlowModel::CurveShortening,
            "area_preserving" => FlowModel::AreaPreserving,
            "constant" => {
                let force = number(&entries, "force")?
                    .ok_or_else(|| invalid("model = constant requires force"))?;
                FlowModel::ConstantForce(force)
            }
            other => {
                return Err(Error::Parse {
                    line: e.line,
                    message: format!("model: expected csf, constant or area_preserving, found {other:?}"),
                })
            }
        },
    };
    if entries.contains_key("force") && !matches!(model, FlowModel::ConstantForce(_)) {
        return Err(invalid("force applies only to model = constant"));
    }

    let mut kinds: Vec<&str> = Vec::new();
    if let Some(e) = entries.get("curve") {
        match e.value.as_str() {
            "radial" | "circle" | "polyline" => kinds.push(&e.value),
            other => {
                return Err(Error::Parse {
                    line: e.line,
                    message: format!("curve: expected radial, circle or polyline, found {other:?}"),
                })
            }
        }
    }
    if entries.contains_key("folds") || entries.contains_key("amplitude") {
        kinds.push("radial");
    }
    if entries.contains_key("radius") {
        kinds.push("circle");
    }
    if entries.contains_key("polyline_path") {
        kinds.push("polyline");
    }
    kinds.sort_unstable();
    kinds.dedup();
    if kinds.len() != 1 {
        return Err(invalid("exactly one initial curve"));
    }

    let curve = match kinds[0] {
        "radial" => {
            let folds: u32 = count(&entries, "folds")?.ok_or_else(|| invalid("radial curve requires folds"))?;
            let amplitude =
                number(&entries, "amplitude")?.ok_or_else(|| invalid("radial curve requires amplitude"))?;
            if folds == 0 {
                return Err(invalid("folds >= 1"));
            }
            if !(amplitude.abs() < 1.0) {
                return Err(invalid("|amplitude| < 1"));
            }
            CurveSpec::Radial { folds, amplitude }
        }
        "circle" => {
            let radius = number(&entries, "radius")?.ok_or_else(|| invalid("circle requires radius"))?;
            if !(radius > 0.0) {
                return Err(invalid("radius > 0"));
            }
            CurveSpec::Circle { radius }
        }
        _ => {
            if entries.contains_key("nodes") {
                return Err(invalid("nodes applies only to radial and circle curves"));
            }
            CurveSpec::Polyline {
                path: PathBuf::from(&entries["polyline_path"].value),
            }
        }
    };

    let nodes = count(&entries, "nodes")?.unwrap_or(DEFAULT_NODES);
    if nodes < MIN_NODES {
        return Err(invalid("nodes >= 4"));
    }
    let tau = number(&entries, "tau")?.unwrap_or(DEFAULT_TAU);
    if !(tau > 0.0) {
        return Err(invalid("tau > 0"));
    }
    let t_final = number(&entries, "t_final")?.ok_or_else(|| invalid("t_final is required"))?;
    if !(t_final >= 0.0) {
        return Err(invalid("t_final >= 0"));
    }
    let snapshot_every = count(&entries, "snapshot_every")?.unwrap_or(DEFAULT_SNAPSHOT_EVERY);
    if snapshot_every == 0 {
        return Err(invalid("snapshot_every >= 1"));
    }
    let out_dir = entries
        .get("out_dir")
        .map(|e| PathBuf::from(&e.value))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));

    Ok(RunSpec {
        curve,
        model,
        nodes,
        tau,
        t_final,
        snapshot_every,
        out_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_2: &str = "\
# five-folded curve under the area-preserving flow
folds = 5
amplitude = 0.65
model = area_preserving
nodes = 200
t_final = 0.5
";

    #[test]
    fn example_two_config() {
        let spec = parse_config(EXAMPLE_2).unwrap();
        assert_eq!(spec.curve, CurveSpec::Radial { folds: 5, amplitude: 0.65 });
        assert_eq!(spec.model, FlowModel::AreaPreserving);
        assert_eq!(spec.nodes, 200);
        assert_eq!(spec.t_final, 0.5);
        assert_eq!(spec.tau, 1e-4);
        assert_eq!(spec.snapshot_every, 100);
        assert_eq!(spec.out_dir, PathBuf::from("out"));
        assert_eq!(spec.build_curve().unwrap().len(), 200);
        assert!(spec.solver_config().validate().is_ok());
    }

    #[test]
    fn negative_tau() {
        let text = format!("{EXAMPLE_2}tau = -1\n");
        assert_eq!(parse_config(&text), Err(Error::InvalidConfig("tau > 0".into())));
    }

    #[test]
    fn two_initial_curves() {
        let text = format!("{EXAMPLE_2}polyline_path = shape.txt\n");
        assert_eq!(parse_config(&text), Err(Error::InvalidConfig("exactly one initial curve".into())));
        let text = "curve = circle\nfolds = 3\namplitude = 0.1\nmodel = csf\nt_final = 1\n";
        assert_eq!(parse_config(text), Err(Error::InvalidConfig("exactly one initial curve".into())));
        let text = "model = csf\nt_final = 1\n";
        assert_eq!(parse_config(text), Err(Error::InvalidConfig("exactly one initial curve".into())));
    }

    #[test]
    fn explicit_curve_kind_and_constant_force() {
        let spec = parse_config(
            "curve = circle  # unit\nradius = 1\nmodel = constant\nforce = 2.5\nt_final = 0.1\nsnapshot_every = 5\nout_dir = runs/a\n",
        )
        .unwrap();
        assert_eq!(spec.curve, CurveSpec::Circle { radius: 1.0 });
        assert_eq!(spec.model, FlowModel::ConstantForce(2.5));
        assert_eq!(spec.snapshot_every, 5);
        assert_eq!(spec.out_dir, PathBuf::from("runs/a"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_config("model = csf\n\nspeed = 3\n"),
            Err(Error::Parse { line: 3, message: "unknown key \"speed\"".into() })
        );
        assert!(matches!(parse_config("model csf\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_config("model = csf\nmodel = csf\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("radius = 1\nmodel = csf\nt_final = abc\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_config("radius = 1\nmodel = csf\nt_final = 1\nnodes = -4\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(parse_config("model = fast\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("tau =\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn validation_messages() {
        let base = "model = csf\nt_final = 1\n";
        let cases = [
            ("folds = 3\namplitude = 1.0\n", "|amplitude| < 1"),
            ("folds = 0\namplitude = 0.1\n", "folds >= 1"),
            ("folds = 3\n", "radial curve requires amplitude"),
            ("radius = 0\n", "radius > 0"),
            ("radius = 1\nnodes = 3\n", "nodes >= 4"),
            ("radius = 1\nsnapshot_every = 0\n", "snapshot_every >= 1"),
            ("radius = 1\nforce = 1\n", "force applies only to model = constant"),
            ("polyline_path = p.txt\nnodes = 10\n", "nodes applies only to radial and circle curves"),
        ];
        for (extra, message) in cases {
            assert_eq!(
                parse_config(&format!("{base}{extra}")),
                Err(Error::InvalidConfig(message.into())),
                "{extra}"
            );
        }
        assert_eq!(
            parse_config("radius = 1\nmodel = constant\nt_final = 1\n"),
            Err(Error::InvalidConfig("model = constant requires force".into()))
        );
        assert_eq!(
            parse_config("radius = 1\nmodel = csf\nt_final = -2\n"),
            Err(Error::InvalidConfig("t_final >= 0".into()))
        );
        assert_eq!(parse_config("radius = 1\nmodel = csf\n"), Err(Error::InvalidConfig("t_final is required".into())));
    }
}
