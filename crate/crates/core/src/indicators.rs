//! ROI-restricted IGD⁺ and normalization-error indicators.

use crate::error::{check_len, Error, Result};
use crate::types::{distance, ObjectiveVector};

/// Ground-truth ideal and nadir used to put indicator inputs on a common scale.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueScaler {
    z_ideal: ObjectiveVector,
    z_nadir: ObjectiveVector,
}

impl TrueScaler {
    pub fn new(z_ideal: ObjectiveVector, z_nadir: ObjectiveVector) -> Result<Self> {
        check_len(z_ideal.len(), z_nadir.len())?;
        if z_ideal.iter().zip(z_nadir.iter()).any(|(a, b)| !(a < b)) {
            return Err(Error::Argument("true ideal must lie strictly below the true nadir".into()));
        }
        Ok(Self { z_ideal, z_nadir })
    }

    pub fn ideal(&self) -> &ObjectiveVector {
        &self.z_ideal
    }

    pub fn nadir(&self) -> &ObjectiveVector {
        &self.z_nadir
    }

    pub fn dim(&self) -> usize {
        self.z_ideal.len()
    }

    pub fn normalize(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), f.len())?;
        Ok(self.normalize_unchecked(f))
    }

    fn normalize_unchecked(&self, f: &[f64]) -> Vec<f64> {
        f.iter()
            .zip(self.z_ideal.iter().zip(self.z_nadir.iter()))
            .map(|(v, (lo, hi))| (v - lo) / (hi - lo))
            .collect()
    }

    fn ratios(&self, v: &[f64], anchor: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        Ok(v.iter()
            .zip(anchor)
            .zip(self.z_ideal.iter().zip(self.z_nadir.iter()))
            .map(|((a, b), (lo, hi))| (a - b) / (hi - lo))
            .collect())
    }
}

/// The part of the reference front around the point closest to `z`, stored
/// in normalized coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RoiReferenceSet {
    pub s_prime: Vec<ObjectiveVector>,
    pub center: ObjectiveVector,
    pub radius: f64,
}

/// Members of the normalized samples strictly closer than `r` to the sample
/// nearest the normalized reference point. Ties for the center go to the
/// lowest index.
pub fn build_roi_reference_set<V: AsRef<[f64]>>(
    pf_samples: &[V],
    z: &[f64],
    r: f64,
    scaler: &TrueScaler,
) -> Result<RoiReferenceSet> {
    if pf_samples.is_empty() {
        return Err(Error::Argument("reference front is empty".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Argument(format!("ROI radius must be positive, got {r}")));
    }
    let zn = scaler.normalize(z)?;
    let s: Vec<Vec<f64>> = pf_samples
        .iter()
        .map(|p| scaler.normalize(p.as_ref()))
        .collect::<Result<_>>()?;
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in s.iter().enumerate() {
        let d = distance(p, &zn);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    let center = s[best].clone();
    let s_prime = s
        .into_iter()
        .filter(|p| distance(p, &center) < r)
        .map(ObjectiveVector::new)
        .collect();
    Ok(RoiReferenceSet {
        s_prime,
        center: ObjectiveVector::new(center),
        radius: r,
    })
}

/// Mean over the ROI members of the smallest `dist⁺` to a normalized solution.
pub fn igd_plus_c<V: AsRef<[f64]>>(solutions: &[V], roi: &RoiReferenceSet, scaler: &TrueScaler) -> Result<f64> {
    if solutions.is_empty() {
        return Err(Error::Argument("solution set is empty".into()));
    }
    if roi.s_prime.is_empty() {
        return Err(Error::Argument("ROI reference set is empty".into()));
    }
    let xs: Vec<Vec<f64>> = solutions
        .iter()
        .map(|x| scaler.normalize(x.as_ref()))
        .collect::<Result<_>>()?;
    let total: f64 = roi
        .s_prime
        .iter()
        .map(|s| {
            xs.iter()
                .map(|x| dist_plus(x, s))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / roi.s_prime.len() as f64)
}

#[inline]
fn dist_plus(x: &[f64], s: &[f64]) -> f64 {
    x.iter()
        .zip(s)
        .map(|(a, b)| {
            let d = (a - b).max(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Squared normalized error of an ideal-point estimate.
pub fn e_ideal(z_lb: &[f64], scaler: &TrueScaler) -> Result<f64> {
    Ok(scaler.ratios(z_lb, &scaler.z_ideal)?.iter().map(|r| r * r).sum())
}

/// Squared normalized error of a nadir-point estimate.
pub fn e_nadir(z_ub: &[f64], scaler: &TrueScaler) -> Result<f64> {
    Ok(scaler.ratios(z_ub, &scaler.z_nadir)?.iter().map(|r| r * r).sum())
}

/// Population standard deviation of the estimated-to-true range ratios.
pub fn ore(z_lb: &[f64], z_ub: &[f64], scaler: &TrueScaler) -> Result<f64> {
    check_len(z_lb.len(), z_ub.len())?;
    let ratios = scaler.ratios(z_ub, z_lb)?;
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    Ok((ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n).sqrt())
}
