//! Vector and individual types shared across the crate.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};

/// Objective values of one solution. All entries are finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()), "non-finite objective {values:?}");
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        Self::new(v)
    }
}

/// Decision variables of one solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionVector(Vec<f64>);

impl DecisionVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DecisionVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DecisionVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// A decision vector together with its cached evaluation.
///
/// `rank` and `score` are scratch fields written by environmental selection;
/// the meaning of `score` depends on the algorithm (crowding distance or the
/// weighted distance to the reference point).
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub x: DecisionVector,
    pub f: ObjectiveVector,
    pub rank: Option<usize>,
    pub score: Option<f64>,
}

impl Individual {
    pub fn new(x: DecisionVector, f: ObjectiveVector) -> Self {
        Self {
            x,
            f,
            rank: None,
            score: None,
        }
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Individual {
    /// The objective vector.
    fn as_ref(&self) -> &[f64] {
        &self.f
    }
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_len(a.len(), b.len())?;
    Ok(distance(a, b))
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
