//! Decomposition weight vectors and the nonuniform mapping toward a
//! reference point.

use crate::error::{Error, Result};
use crate::lattice::uniform_simplex_points;
use crate::rng::RandomEngine;
use crate::types::{distance, ObjectiveVector};

/// Weight vectors on the unit simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    pub vectors: Vec<ObjectiveVector>,
}

impl WeightSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Indices of the `t` closest vectors to each vector, itself first.
    /// Ties are broken by index.
    pub fn neighborhoods(&self, t: usize) -> Vec<Vec<usize>> {
        let n = self.vectors.len();
        let t = t.min(n);
        (0..n)
            .map(|i| {
                let mut order: Vec<(f64, usize)> = (0..n)
                    .map(|j| (distance(&self.vectors[i], &self.vectors[j]), j))
                    .collect();
                order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                order.into_iter().take(t).map(|(_, j)| j).collect()
            })
            .collect()
    }
}

/// `mu` weight vectors: a Das-Dennis lattice when one has exactly `mu`
/// points, otherwise the largest smaller lattice completed by farthest-point
/// sampling.
pub fn generate_uniform_weights(m: usize, mu: usize, engine: &mut RandomEngine) -> Result<WeightSet> {
    if m < 2 {
        return Err(Error::config("m", format!("need at least 2 objectives, got {m}")));
    }
    if mu < m {
        return Err(Error::config("mu", format!("need at least {m} weight vectors, got {mu}")));
    }
    Ok(WeightSet {
        vectors: uniform_simplex_points(m, mu, engine)
            .into_iter()
            .map(ObjectiveVector::new)
            .collect(),
    })
}

/// Point on the simplex that the weights are pulled toward: `z` with negative
/// entries dropped, divided by its sum. Falls back to the simplex center when
/// nothing positive remains.
pub fn simplex_pivot(z: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = z.iter().map(|v| if v.is_finite() { v.max(0.0) } else { 0.0 }).collect();
    let s: f64 = clipped.iter().sum();
    if s > 0.0 && s.is_finite() {
        clipped.iter().map(|v| v / s).collect()
    } else {
        vec![1.0 / z.len() as f64; z.len()]
    }
}

/// Contracts every weight toward the simplex pivot of `z`:
/// `w' = p + tau (w - p)`. `tau = 1` is the identity and smaller values
/// concentrate the set around `p`.
pub fn nums_shift(weights: &WeightSet, z: &[f64], tau: f64) -> Result<WeightSet> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::config("tau", format!("must lie in (0, 1], got {tau}")));
    }
    let p = simplex_pivot(z);
    let vectors = weights
        .vectors
        .iter()
        .map(|w| {
            if w.len() != p.len() {
                return Err(Error::Dimension { expected: p.len(), actual: w.len() });
            }
            let mut v: Vec<f64> = w.iter().zip(&p).map(|(wi, pi)| pi + tau * (wi - pi)).collect();
            for e in &mut v {
                *e = e.max(0.0);
            }
            let s: f64 = v.iter().sum();
            Ok(ObjectiveVector::new(v.into_iter().map(|e| e / s).collect()))
        })
        .collect::<Result<_>>()?;
    Ok(WeightSet { vectors })
}
