//! Normal-velocity laws `v = -kappa + F`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowModel {
    /// `v = -kappa`.
    CurveShortening,
    /// `v = -kappa + F0` for a prescribed constant `F0`.
    ConstantForce(f64),
    /// `v = -kappa + <kappa>`, the length-weighted mean curvature.
    AreaPreserving,
}

impl fmt::Display for FlowModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowModel::CurveShortening => f.write_str("csf"),
            FlowModel::ConstantForce(force) => write!(f, "constant({force})"),
            FlowModel::AreaPreserving => f.write_str("area_preserving"),
        }
    }
}

/// Length-weighted mean of the nodal curvatures,
/// `F = sum_j kappa_j (d_j + d_{j+1}) / 2 / sum_j d_j`.
///
/// The sum is taken relative to `kappa_0`, which makes a constant curvature
/// field reproduce its value exactly.
pub fn nonlocal_force(kappa: &[f64], d: &[f64]) -> Result<f64> {
    if kappa.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: kappa.len(),
            right: d.len(),
        });
    }
    let m = d.len();
    if m == 0 {
        return Err(Error::TooFewNodes(0));
    }
    let base = kappa[0];
    let weighted: f64 = (0..m)
        .map(|j| (kappa[j] - base) * 0.5 * (d[j] + d[(j + 1) % m]))
        .sum();
    let length: f64 = d.iter().sum();
    Ok(base + weighted / length)
}

pub fn forcing_value(model: FlowModel, kappa: &[f64], d: &[f64]) -> Result<f64> {
    match model {
        FlowModel::CurveShortening => Ok(0.0),
        FlowModel::ConstantForce(force) => Ok(force),
        FlowModel::AreaPreserving => nonlocal_force(kappa, d),
    }
}
