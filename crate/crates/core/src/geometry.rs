//! Discrete closed curves and their geometry.
//!
//! A curve is stored as `M` nodes `X_0 .. X_{M-1}` with cyclic indexing, so
//! the segment ending at node `i` joins `X_{i-1}` to `X_i` and node `0`
//! closes the loop with node `M-1`. For each node the dual segment covers
//! half of each adjacent segment, with length `(d_i + d_{i+1}) / 2`.
//!
//! The discrete normal at node `i` is `(X_{i+1} - X_{i-1})^perp / (d_i + d_{i+1})`
//! with `(x, y)^perp = (y, -x)`. It points outward on counterclockwise curves
//! and its length is slightly below one on a curved polygon.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Segments shorter than this are rejected by the geometry routines.
pub const DEFAULT_EPSILON_GEOM: f64 = 1e-12;

/// Smallest admissible node count.
pub const MIN_NODES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// `(x, y) -> (y, -x)`: a clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(self.y, -self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Counterclockwise => f.write_str("counterclockwise"),
            Orientation::Clockwise => f.write_str("clockwise"),
        }
    }
}

/// An ordered closed polygon with cyclic node indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveState {
    nodes: Vec<Point>,
    orientation: Orientation,
}

impl CurveState {
    /// Builds a curve from its nodes; the last node connects back to the first.
    ///
    /// Rejects fewer than [`MIN_NODES`] points, non-finite coordinates and
    /// consecutive duplicates (including the closing pair).
    pub fn from_points(nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < MIN_NODES {
            return Err(Error::TooFewNodes(nodes.len()));
        }
        if let Some(index) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteNode { index });
        }
        let m = nodes.len();
        for i in 0..m {
            if nodes[i] == nodes[(i + m - 1) % m] {
                return Err(Error::DuplicateNode { index: i });
            }
        }
        let orientation = if shoelace(&nodes) < 0.0 {
            Orientation::Clockwise
        } else {
            Orientation::Counterclockwise
        };
        Ok(CurveState { nodes, orientation })
    }

    /// Samples `r(u) = 1 + a cos(2 pi n u)` at `u_i = i / M`, placing node `i`
    /// at `r(u_i) (cos 2 pi u_i, sin 2 pi u_i)`.
    pub fn radial(folds: u32, amplitude: f64, nodes: usize) -> Result<Self> {
        if folds == 0 {
            return Err(Error::InvalidFolds);
        }
        if !(amplitude.abs() < 1.0) {
            return Err(Error::InvalidAmplitude(amplitude));
        }
        if nodes < MIN_NODES {
            return Err(Error::TooFewNodes(nodes));
        }
        let points = (0..nodes)
            .map(|i| {
                let u = i as f64 / nodes as f64;
                let r = 1.0 + amplitude * (2.0 * PI * folds as f64 * u).cos();
                let theta = 2.0 * PI * u;
                Point::new(r * theta.cos(), r * theta.sin())
            })
            .collect();
        CurveState::from_points(points)
    }

    /// Regular counterclockwise `nodes`-gon inscribed in the circle of the
    /// given radius around the origin.
    pub fn circle(radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(radius));
        }
        if nodes < MIN_NODES {
            return Err(Error::TooFewNodes(nodes));
        }
        let points = (0..nodes)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / nodes as f64;
                Point::new(radius * theta.cos(), radius * theta.sin())
            })
            .collect();
        CurveState::from_points(points)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn into_nodes(self) -> Vec<Point> {
        self.nodes
    }

    /// Same polygon traversed in the opposite direction, starting from node 0.
    pub fn reversed(&self) -> CurveState {
        let m = self.nodes.len();
        let nodes = (0..m).map(|i| self.nodes[(m - i) % m]).collect();
        let orientation = match self.orientation {
            Orientation::Counterclockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::Counterclockwise,
        };
        CurveState { nodes, orientation }
    }

    /// Applies `f` to every node and revalidates the result.
    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<CurveState> {
        CurveState::from_points(self.nodes.iter().map(|&p| f(p)).collect())
    }
}

fn shoelace(nodes: &[Point]) -> f64 {
    let m = nodes.len();
    let twice: f64 = (0..m)
        .map(|i| {
            let a = nodes[i];
            let b = nodes[(i + 1) % m];
            a.x * b.y - b.x * a.y
        })
        .sum();
    0.5 * twice
}

/// Signed shoelace area of the node polygon; positive iff counterclockwise.
pub fn enclosed_area(curve: &CurveState) -> f64 {
    shoelace(&curve.nodes)
}

/// Lengths `d_i = |X_i - X_{i-1}|` with no degeneracy check.
pub(crate) fn raw_segment_lengths(nodes: &[Point]) -> Vec<f64> {
    let m = nodes.len();
    (0..m)
        .map(|i| (nodes[i] - nodes[(i + m - 1) % m]).norm())
        .collect()
}

/// Segment lengths `d_i = |X_i - X_{i-1}|`, failing if any falls below `epsilon`.
pub fn segment_lengths(curve: &CurveState, epsilon: f64) -> Result<Vec<f64>> {
    let d = raw_segment_lengths(&curve.nodes);
    if let Some((index, &length)) = d
        .iter()
        .enumerate()
        .find(|(_, &l)| !(l >= epsilon && l.is_finite()))
    {
        return Err(Error::DegenerateSegment {
            index,
            length,
            threshold: epsilon,
        });
    }
    Ok(d)
}

/// Dual lengths `(d_i + d_{i+1}) / 2`.
pub fn dual_lengths(d: &[f64]) -> Vec<f64> {
    let m = d.len();
    (0..m).map(|i| 0.5 * (d[i] + d[(i + 1) % m])).collect()
}

pub fn curve_length(d: &[f64]) -> f64 {
    d.iter().sum()
}

/// Curvature vector and discrete normal at node `i`, both built from `d`.
#[inline]
pub(crate) fn curvature_vector_and_normal(nodes: &[Point], d: &[f64], i: usize) -> (Point, Point) {
    let m = nodes.len();
    let prev = nodes[(i + m - 1) % m];
    let next = nodes[(i + 1) % m];
    let here = nodes[i];
    let d_here = d[i];
    let d_next = d[(i + 1) % m];
    let span = d_here + d_next;
    let k = ((next - here) * (1.0 / d_next) - (here - prev) * (1.0 / d_here)) * (2.0 / span);
    let n = (next - prev).perp() * (1.0 / span);
    (k, n)
}

/// Discrete curvature `kappa_i = -k_i . n_i`, positive on convex
/// counterclockwise curves.
pub fn discrete_curvature(curve: &CurveState, d: &[f64]) -> Result<Vec<f64>> {
    if d.len() != curve.len() {
        return Err(Error::LengthMismatch {
            left: curve.len(),
            right: d.len(),
        });
    }
    if let Some((index, &length)) = d
        .iter()
        .enumerate()
        .find(|(_, &l)| !(l > 0.0 && l.is_finite()))
    {
        return Err(Error::DegenerateSegment {
            index,
            length,
            threshold: 0.0,
        });
    }
    Ok(raw_curvature(&curve.nodes, d))
}

pub(crate) fn raw_curvature(nodes: &[Point], d: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            let (k, n) = curvature_vector_and_normal(nodes, d, i);
            -k.dot(n)
        })
        .collect()
}

/// Per-node geometry of one curve state.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryCache {
    pub d: Vec<f64>,
    pub dual: Vec<f64>,
    pub kappa: Vec<f64>,
    pub total_length: f64,
    pub area: f64,
}

impl GeometryCache {
    pub fn new(curve: &CurveState, epsilon: f64) -> Result<Self> {
        let d = segment_lengths(curve, epsilon)?;
        let kappa = discrete_curvature(curve, &d)?;
        Ok(GeometryCache {
            dual: dual_lengths(&d),
            total_length: curve_length(&d),
            area: enclosed_area(curve),
            d,
            kappa,
        })
    }

    pub fn min_segment(&self) -> f64 {
        self.d.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeDiagnostics {
    /// `L^2 / (4 pi A)`, one for a circle.
    pub isoperimetric_ratio: f64,
    /// `max d_i / min d_i`, one for equally spaced nodes.
    pub uniformity_ratio: f64,
}

pub fn shape_diagnostics(curve: &CurveState) -> Result<ShapeDiagnostics> {
    let area = enclosed_area(curve);
    if !(area > 0.0) {
        return Err(Error::NonPositiveArea(area));
    }
    let d = raw_segment_lengths(&curve.nodes);
    Ok(shape_diagnostics_from(&d, area))
}

pub(crate) fn shape_diagnostics_from(d: &[f64], area: f64) -> ShapeDiagnostics {
    let length = curve_length(d);
    let (lo, hi) = d
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    ShapeDiagnostics {
        isoperimetric_ratio: length * length / (4.0 * PI * area),
        uniformity_ratio: hi / lo,
    }
}
