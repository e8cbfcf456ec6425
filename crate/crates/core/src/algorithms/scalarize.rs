//! Distance to the reference point and the augmented achievement function.

use crate::error::{check_len, Error, Result};
use crate::normalization::denominator;

/// Weighted Euclidean distance from `f` to `z` after dividing each gap by
/// the estimated objective range.
pub fn weighted_distance_dr(f: &[f64], z: &[f64], w: &[f64], z_lb: &[f64], z_ub: &[f64]) -> Result<f64> {
    let m = f.len();
    for len in [z.len(), w.len(), z_lb.len(), z_ub.len()] {
        check_len(m, len)?;
    }
    Ok(dr_unchecked(f, z, w, z_lb, z_ub))
}

#[inline]
pub(crate) fn dr_unchecked(f: &[f64], z: &[f64], w: &[f64], z_lb: &[f64], z_ub: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..f.len() {
        let g = (f[i] - z[i]) / denominator(z_lb[i], z_ub[i]);
        acc += w[i] * g * g;
    }
    acc.sqrt()
}

/// `max_i w_i (f~_i - z~_i) + rho * sum_i (f~_i - z~_i)` where `~` is the
/// normalization by `[z_lb, z_ub]`.
pub fn aasf(f: &[f64], z: &[f64], w: &[f64], rho: f64, z_lb: &[f64], z_ub: &[f64]) -> Result<f64> {
    let m = f.len();
    for len in [z.len(), w.len(), z_lb.len(), z_ub.len()] {
        check_len(m, len)?;
    }
    if w.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::Argument("AASF weights must be non-negative".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::Argument(format!("rho must be positive, got {rho}")));
    }
    let zn: Vec<f64> = (0..m).map(|i| (z[i] - z_lb[i]) / denominator(z_lb[i], z_ub[i])).collect();
    Ok(aasf_normalized(f, &zn, w, rho, z_lb, z_ub))
}

/// AASF with the reference point already normalized.
#[inline]
pub(crate) fn aasf_normalized(f: &[f64], zn: &[f64], w: &[f64], rho: f64, z_lb: &[f64], z_ub: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for i in 0..f.len() {
        let d = (f[i] - z_lb[i]) / denominator(z_lb[i], z_ub[i]) - zn[i];
        worst = worst.max(w[i] * d);
        sum += d;
    }
    worst + rho * sum
}
