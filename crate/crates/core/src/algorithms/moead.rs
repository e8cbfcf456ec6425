//! MOEA/D with reference-point-shifted weights.

use super::config::AlgorithmConfig;
use super::scalarize::aasf_normalized;
use super::weights::WeightSet;
use crate::error::{check_len, Result};
use crate::normalization::{denominator, NormalizationState};
use crate::types::Individual;

/// Smallest weight component before taking reciprocals.
const WEIGHT_FLOOR: f64 = 1e-6;

/// AASF weights for a direction on the simplex.
///
/// The max term of the AASF is minimized along `z + t * (1/w)`, so the
/// coefficients are the normalized reciprocals of the direction.
pub fn aasf_coefficients(direction: &[f64]) -> Vec<f64> {
    let inv: Vec<f64> = direction.iter().map(|&v| 1.0 / v.max(WEIGHT_FLOOR)).collect();
    let s: f64 = inv.iter().sum();
    inv.into_iter().map(|v| v / s).collect()
}

/// The reference point in the estimator's normalized coordinates.
pub fn normalized_reference(z: &[f64], state: &NormalizationState) -> Result<Vec<f64>> {
    check_len(state.z_lb().len(), z.len())?;
    let (lb, ub) = (state.z_lb(), state.z_ub());
    Ok(z.iter()
        .zip(lb.iter().zip(ub.iter()))
        .map(|(v, (lo, hi))| (v - lo) / denominator(*lo, *hi))
        .collect())
}

/// Neighborhood replacement: the trial takes the slot of each neighbor
/// (visited in neighborhood order) whose AASF value it strictly improves,
/// at most `max_replace` times. `weights` is the shifted set; returns the
/// number of replacements.
pub fn moead_nums_replacement(
    trial: &Individual,
    neighborhood: &[usize],
    population: &mut [Individual],
    weights: &WeightSet,
    z: &[f64],
    state: &NormalizationState,
    cfg: &AlgorithmConfig,
) -> Result<usize> {
    let zn = normalized_reference(z, state)?;
    check_len(zn.len(), trial.f.len())?;
    let (lb, ub) = (state.z_lb().as_slice(), state.z_ub().as_slice());
    let mut replaced = 0;
    for &k in neighborhood {
        if replaced >= cfg.max_replace {
            break;
        }
        let coef = aasf_coefficients(&weights.vectors[k]);
        let new = aasf_normalized(&trial.f, &zn, &coef, cfg.rho, lb, ub);
        let old = aasf_normalized(&population[k].f, &zn, &coef, cfg.rho, lb, ub);
        if new < old {
            population[k] = trial.clone();
            replaced += 1;
        }
    }
    Ok(replaced)
}
