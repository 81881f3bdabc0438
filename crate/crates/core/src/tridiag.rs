//! Cyclic tridiagonal systems.
//!
//! The periodic matrix is split as `A = T + u v^T`, where `T` is an ordinary
//! tridiagonal matrix with modified first and last diagonal entries and the
//! rank-one term carries the two corner entries. `T` is factored once with
//! the Thomas algorithm, so any number of right-hand sides can be solved in
//! `O(n)` each.

use crate::error::{Error, Result};

/// Factored cyclic tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct CyclicTridiagonal {
    sub: Vec<f64>,
    // Thomas factors of T: modified super-diagonal and pivots
    upper: Vec<f64>,
    pivot: Vec<f64>,
    // T^{-1} u and the scalars of the Sherman-Morrison correction
    z: Vec<f64>,
    v_last: f64,
    denom: f64,
}

impl CyclicTridiagonal {
    /// `sub[i] = A[i+1][i]` and `sup[i] = A[i][i+1]` (length `n - 1`);
    /// `corners = (A[0][n-1], A[n-1][0])`.
    ///
    /// Every row must be strictly diagonally dominant.
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64], corners: (f64, f64)) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        if sub.len() != n - 1 {
            return Err(Error::LengthMismatch { left: n - 1, right: sub.len() });
        }
        if sup.len() != n - 1 {
            return Err(Error::LengthMismatch { left: n - 1, right: sup.len() });
        }
        let (top_right, bottom_left) = corners;
        for row in 0..n {
            let left = if row == 0 { top_right } else { sub[row - 1] };
            let right = if row == n - 1 { bottom_left } else { sup[row] };
            let off = left.abs() + right.abs();
            if !(diag[row].abs() > off) || !off.is_finite() {
                return Err(Error::NotDiagonallyDominant { row });
            }
        }

        let gamma = -diag[0];
        let mut modified = diag.to_vec();
        modified[0] -= gamma;
        modified[n - 1] -= bottom_left * top_right / gamma;

        let mut upper = vec![0.0; n];
        let mut pivot = vec![0.0; n];
        pivot[0] = modified[0];
        for i in 1..n {
            upper[i - 1] = sup[i - 1] / pivot[i - 1];
            pivot[i] = modified[i] - sub[i - 1] * upper[i - 1];
            if pivot[i] == 0.0 || !pivot[i].is_finite() {
                return Err(Error::SolverFailure(format!("zero pivot in row {i}")));
            }
        }

        let mut factored = CyclicTridiagonal {
            sub: sub.to_vec(),
            upper,
            pivot,
            z: Vec::new(),
            v_last: top_right / gamma,
            denom: 0.0,
        };
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = bottom_left;
        factored.z = factored.solve_plain(&u);
        factored.denom = 1.0 + factored.z[0] + factored.v_last * factored.z[n - 1];
        if factored.denom == 0.0 || !factored.denom.is_finite() {
            return Err(Error::SolverFailure("singular rank-one correction".into()));
        }
        Ok(factored)
    }

    pub fn len(&self) -> usize {
        self.pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_empty()
    }

    fn solve_plain(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.pivot.len();
        let mut y = vec![0.0; n];
        y[0] = rhs[0] / self.pivot[0];
        for i in 1..n {
            y[i] = (rhs[i] - self.sub[i - 1] * y[i - 1]) / self.pivot[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= self.upper[i] * y[i + 1];
        }
        y
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::LengthMismatch { left: n, right: rhs.len() });
        }
        let mut x = self.solve_plain(rhs);
        let factor = (x[0] + self.v_last * x[n - 1]) / self.denom;
        for (xi, zi) in x.iter_mut().zip(&self.z) {
            *xi -= factor * zi;
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::SolverFailure(format!("non-finite solution entry {i}")));
        }
        Ok(x)
    }
}

/// One-shot solve of a cyclic tridiagonal system; see [`CyclicTridiagonal::new`]
/// for the storage convention.
pub fn solve_cyclic_tridiagonal(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    corners: (f64, f64),
    rhs: &[f64],
) -> Result<Vec<f64>> {
    CyclicTridiagonal::new(sub, diag, sup, corners)?.solve(rhs)
}
