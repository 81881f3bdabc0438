#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use curveflow::geometry::MIN_NODES;
use curveflow::{CurveState, Point};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Area and length of the polar curve `r = 1 + a cos(n theta)` by quadrature.
pub fn radial_area_and_length(folds: u32, amplitude: f64) -> (f64, f64) {
    let n = folds as f64;
    let r = |t: f64| 1.0 + amplitude * (n * t).cos();
    let dr = |t: f64| -amplitude * n * (n * t).sin();
    let area = simpson(|t| 0.5 * r(t) * r(t), 0.0, 2.0 * PI, 200_000);
    let length = simpson(|t| r(t).hypot(dr(t)), 0.0, 2.0 * PI, 200_000);
    (area, length)
}

/// Star-shaped polygon from angle increments and radii.
pub fn star_polygon() -> impl Strategy<Value = CurveState> {
    prop::collection::vec((0.2f64..1.0, 0.5f64..2.0), MIN_NODES..48).prop_map(|spec| {
        let total: f64 = spec.iter().map(|s| s.0).sum();
        let mut theta = 0.0;
        let pts = spec
            .iter()
            .map(|&(inc, r)| {
                theta += inc / total * 2.0 * PI;
                Point::new(r * theta.cos(), r * theta.sin())
            })
            .collect();
        CurveState::from_points(pts).unwrap()
    })
}

pub struct System {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub corners: (f64, f64),
    pub rhs: Vec<f64>,
}

impl System {
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let sub: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sup: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let corners = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let diag = (0..n)
            .map(|i| {
                let left: f64 = if i == 0 { corners.0 } else { sub[i - 1] };
                let right: f64 = if i == n - 1 { corners.1 } else { sup[i] };
                let margin = rng.gen_range(0.05..2.0);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                sign * (left.abs() + right.abs() + margin)
            })
            .collect();
        let rhs = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        System { sub, diag, sup, corners, rhs }
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.diag.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            if i + 1 < n {
                a[i][i + 1] = self.sup[i];
                a[i + 1][i] = self.sub[i];
            }
        }
        a[0][n - 1] = self.corners.0;
        a[n - 1][0] = self.corners.1;
        a
    }
}

/// Gaussian elimination with partial pivoting on the dense matrix.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
