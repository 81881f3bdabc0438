//! Plain-text file formats.
//!
//! Polylines: one `x y` pair per line, `#` comments and blank lines ignored,
//! closure implied. Snapshots: a `# t=<t> M=<M>` header followed by one
//! `i x y kappa` row per node (`i` from 1). Summaries: `summary.csv` with
//! columns `t,length,area,F,isoperimetric_ratio,uniformity_ratio`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{raw_curvature, raw_segment_lengths, CurveState, Point};
use crate::stepper::StepDiagnostics;

pub const SUMMARY_HEADER: &str = "t,length,area,F,isoperimetric_ratio,uniformity_ratio";

fn parse_number(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number {token:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite number {token:?}"),
        });
    }
    Ok(value)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_polyline(text: &str) -> Result<Vec<Point>> {
    data_lines(text)
        .map(|(line, content)| {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected \"x y\", found {} fields", fields.len()),
                });
            }
            Ok(Point::new(parse_number(fields[0], line)?, parse_number(fields[1], line)?))
        })
        .collect()
}

/// Parses polyline text into a validated curve.
pub fn load_polyline(text: &str) -> Result<CurveState> {
    CurveState::from_points(parse_polyline(text)?)
}

pub fn read_polyline(path: &Path) -> Result<CurveState> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_polyline(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Io {
            path: path.to_path_buf(),
            message: format!("line {line}: {message}"),
        },
        other => other,
    })
}

pub fn format_polyline(curve: &CurveState) -> String {
    let mut out = String::new();
    for p in curve.nodes() {
        let _ = writeln!(out, "{:.16e} {:.16e}", p.x, p.y);
    }
    out
}

pub fn format_snapshot(t: f64, curve: &CurveState, kappa: &[f64]) -> String {
    let mut out = format!("# t={t} M={}\n", curve.len());
    for (i, (p, k)) in curve.nodes().iter().zip(kappa).enumerate() {
        let _ = writeln!(out, "{} {:.16e} {:.16e} {:.16e}", i + 1, p.x, p.y, k);
    }
    out
}

/// Writes a snapshot file; the curvature column is computed from `curve`.
pub fn write_snapshot(t: f64, curve: &CurveState, path: &Path) -> Result<()> {
    let d = raw_segment_lengths(curve.nodes());
    let kappa = raw_curvature(curve.nodes(), &d);
    fs::write(path, format_snapshot(t, curve, &kappa)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub t: f64,
    pub nodes: Vec<Point>,
    pub kappa: Vec<f64>,
}

pub fn parse_snapshot(text: &str) -> Result<SnapshotFile> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let bad_header = || Error::Parse {
        line: 1,
        message: "expected header \"# t=<t> M=<M>\"".into(),
    };
    let mut t = None;
    let mut m = None;
    for field in header.trim_start_matches('#').split_whitespace() {
        if let Some(v) = field.strip_prefix("t=") {
            t = Some(parse_number(v, 1)?);
        } else if let Some(v) = field.strip_prefix("M=") {
            m = Some(v.parse::<usize>().map_err(|_| bad_header())?);
        }
    }
    let (t, m) = t.zip(m).ok_or_else(bad_header)?;

    let mut nodes = Vec::with_capacity(m);
    let mut kappa = Vec::with_capacity(m);
    for (line, content) in data_lines(text).filter(|(l, _)| *l > 1) {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("expected \"i x y kappa\", found {} fields", fields.len()),
            });
        }
        if fields[0].parse::<usize>().ok() != Some(nodes.len() + 1) {
            return Err(Error::Parse {
                line,
                message: format!("expected node index {}", nodes.len() + 1),
            });
        }
        nodes.push(Point::new(parse_number(fields[1], line)?, parse_number(fields[2], line)?));
        // a degenerate state may carry non-finite curvature
        kappa.push(fields[3].parse().map_err(|_| Error::Parse {
            line,
            message: format!("invalid number {:?}", fields[3]),
        })?);
    }
    if nodes.len() != m {
        return Err(Error::Parse {
            line: 1,
            message: format!("header announces {m} nodes, found {}", nodes.len()),
        });
    }
    Ok(SnapshotFile { t, nodes, kappa })
}

pub fn format_summary(diagnostics: &[StepDiagnostics]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for d in diagnostics {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            d.t, d.total_length, d.area, d.forcing, d.isoperimetric_ratio, d.uniformity_ratio
        );
    }
    out
}

pub fn write_summary(diagnostics: &[StepDiagnostics], path: &Path) -> Result<()> {
    fs::write(path, format_summary(diagnostics)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{enclosed_area, Orientation};

    const SQUARE: &str = "# unit square\n0 0\n1 0\n\n1 1\n0 1\n";

    #[test]
    fn square_polyline() {
        let c = load_polyline(SQUARE).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.orientation(), Orientation::Counterclockwise);
        assert_eq!(enclosed_area(&c), 1.0);
    }

    #[test]
    fn polyline_errors_carry_line_numbers() {
        assert_eq!(
            parse_polyline("0 0\n1 x\n").unwrap_err(),
            Error::Parse { line: 2, message: "invalid number \"x\"".into() }
        );
        assert!(matches!(parse_polyline("0 0\n\n1 2 3\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_polyline("0 inf\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(load_polyline("0 0\n1 0\n0 1\n").unwrap_err(), Error::TooFewNodes(3));
        assert_eq!(
            load_polyline("0 0\n1 0\n1 0\n1 1\n0 1\n").unwrap_err(),
            Error::DuplicateNode { index: 2 }
        );
    }

    #[test]
    fn square_snapshot_layout() {
        let c = load_polyline(SQUARE).unwrap();
        let text = format_snapshot(0.0, &c, &[1.0, 2.0, 3.0, 4.0]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# t=0 M=4");
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[2],
            "2 1.0000000000000000e0 0.0000000000000000e0 2.0000000000000000e0"
        );
        let parsed = parse_snapshot(&text).unwrap();
        assert_eq!(parsed.t, 0.0);
        assert_eq!(parsed.nodes, c.nodes());
        assert_eq!(parsed.kappa, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn snapshot_rejects_inconsistent_files() {
        assert!(parse_snapshot("1 0 0 0\n").is_err());
        assert!(parse_snapshot("# t=0 M=2\n1 0 0 0\n").is_err());
        assert!(parse_snapshot("# t=0 M=2\n1 0 0 0\n3 1 1 0\n").is_err());
    }

    #[test]
    fn summary_layout() {
        let d = StepDiagnostics {
            t: 0.5,
            total_length: 2.0,
            area: 0.25,
            forcing: -1.0,
            isoperimetric_ratio: 1.0,
            uniformity_ratio: 3.0,
            min_segment: 0.1,
        };
        let text = format_summary(&[d]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SUMMARY_HEADER));
        assert_eq!(
            lines.next(),
            Some("5.0000000000000000e-1,2.0000000000000000e0,2.5000000000000000e-1,-1.0000000000000000e0,1.0000000000000000e0,3.0000000000000000e0")
        );
    }
}
