//! Bundled reference points for the benchmark problems.
//!
//! Balanced and extreme points are stored for DTLZ at m = 3, 5, 8 and 10
//! (DTLZ7 only has a balanced point at m = 3). The scaled suite multiplies
//! the DTLZ point by `10^i`, the inverted suite reuses it as is. Balanced
//! points for other objective counts are reconstructed, see
//! [`reconstruct_balanced`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{sample_pf, Problem, Suite};
use crate::rng::RandomEngine;
use crate::types::ObjectiveVector;

/// Which preference the decision maker expresses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceSetting {
    #[default]
    Balanced,
    Extreme,
}

/// Where a reference point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Table,
    Reconstructed,
    Override,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Table => "table",
            Provenance::Reconstructed => "reconstructed",
            Provenance::Override => "override",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePoint {
    pub z: ObjectiveVector,
    pub provenance: Provenance,
}

/// Front sample size and stream used by the reconstruction.
const RECONSTRUCTION_SAMPLES: usize = 2000;
const RECONSTRUCTION_SEED: u64 = 0x7a_5eed;
const RECONSTRUCTION_FACTOR: f64 = 1.2;

fn balanced_table(variant: u8, m: usize) -> Option<&'static [f64]> {
    let row: &'static [f64] = match (variant, m) {
        (1, 3) => &[0.24, 0.18, 0.18],
        (2..=4, 3) => &[0.8, 0.6, 0.6],
        (5 | 6, 3) => &[0.65, 0.65, 0.74],
        (7, 3) => &[0.75, 0.15, 6.0],
        (1, 5) => &[0.134, 0.12, 0.16, 0.12, 0.134],
        (2..=4, 5) => &[0.556, 0.5, 0.666, 0.5, 0.556],
        (5 | 6, 5) => &[0.4, 0.4, 0.56, 0.8, 0.7],
        (1, 8) => &[0.08, 0.08, 0.074, 0.08, 0.086, 0.074, 0.068, 0.068],
        (2..=4, 8) => &[0.45, 0.45, 0.415, 0.45, 0.486, 0.415, 0.381, 0.381],
        (5 | 6, 8) => &[0.12, 0.12, 0.17, 0.24, 0.34, 0.48, 0.68, 0.42],
        (1, 10) => &[0.06, 0.065, 0.06, 0.0436, 0.0545, 0.049, 0.0545, 0.049, 0.06, 0.049],
        (2..=4, 10) => &[0.4, 0.437, 0.4, 0.29, 0.364, 0.328, 0.364, 0.328, 0.4, 0.328],
        (5 | 6, 10) => &[0.0, 0.0, 0.0, 0.0035, 0.01, 0.031, 0.0963, 0.29, 0.88, 0.7],
        _ => return None,
    };
    Some(row)
}

fn extreme_table(variant: u8, m: usize) -> Option<&'static [f64]> {
    let row: &'static [f64] = match (variant, m) {
        (1, 3) => &[0.15, 0.15, 0.45],
        (2..=4, 3) => &[0.4, 1.2, 0.4],
        (5 | 6, 3) => &[0.4, 0.4, 1.2],
        (1, 5) => &[0.03, 0.18, 0.33, 0.03, 0.03],
        (2..=4, 5) => &[0.15, 1.2, 0.187, 0.168, 0.15],
        (5 | 6, 5) => &[0.18, 0.18, 0.255, 0.36, 1.05],
        (1, 8) => &[0.3, 0.042, 0.048, 0.042, 0.042, 0.036, 0.048, 0.042],
        (2..=4, 8) => &[0.15, 0.128, 0.173, 0.15, 1.071, 0.15, 0.173, 0.15],
        (5 | 6, 8) => &[0.07, 0.07, 0.1, 0.1415, 0.2, 0.283, 0.4, 1.2],
        (1, 10) => &[0.03, 0.036, 0.03, 0.036, 0.036, 0.3, 0.03, 0.036, 0.03, 0.036],
        (2..=4, 10) => &[0.14, 0.14, 1.164, 0.117, 0.14, 0.117, 0.14, 0.117, 0.14, 0.117],
        (5 | 6, 10) => &[0.0, 0.0, 0.0, 0.0, 0.0144, 0.04, 0.12, 0.37, 1.13, 0.12],
        _ => return None,
    };
    Some(row)
}

fn to_suite(problem: &Problem, base: &[f64]) -> ObjectiveVector {
    let mut z = base.to_vec();
    if problem.suite() == Suite::Sdtlz {
        let mut factor = 1.0;
        for v in &mut z {
            *v *= factor;
            factor *= 10.0;
        }
    }
    ObjectiveVector::new(z)
}

/// The bundled reference point for `problem`.
///
/// Extreme points exist only for tabulated objective counts.
pub fn bundled_reference_point(problem: &Problem, setting: ReferenceSetting) -> Result<ReferencePoint> {
    let (v, m) = (problem.variant(), problem.num_objectives());
    let row = match setting {
        ReferenceSetting::Balanced => balanced_table(v, m),
        ReferenceSetting::Extreme => extreme_table(v, m),
    };
    match (row, setting) {
        (Some(row), _) => Ok(ReferencePoint {
            z: to_suite(problem, row),
            provenance: Provenance::Table,
        }),
        (None, ReferenceSetting::Balanced) => Ok(ReferencePoint {
            z: to_suite(problem, &reconstruct_balanced(v, m)?),
            provenance: Provenance::Reconstructed,
        }),
        (None, ReferenceSetting::Extreme) => Err(Error::config(
            "reference_setting",
            format!("no extreme reference point for {} with m = {m}; give one explicitly", problem.name()),
        )),
    }
}

/// Balanced point of DTLZ`variant` with `m` objectives: the front sample
/// closest to the diagonal of the normalized objective space, pushed away
/// from the ideal point by a factor 1.2.
pub fn reconstruct_balanced(variant: u8, m: usize) -> Result<Vec<f64>> {
    let base = Problem::new(Suite::Dtlz, variant, m)?;
    let mut engine = RandomEngine::new(RECONSTRUCTION_SEED);
    let front = sample_pf(&base, RECONSTRUCTION_SAMPLES, &mut engine)?;
    let (ideal, nadir) = (base.true_ideal(), base.true_nadir());
    let u = 1.0 / (m as f64).sqrt();
    let off_diagonal = |f: &ObjectiveVector| {
        let q: Vec<f64> = (0..m).map(|i| (f[i] - ideal[i]) / (nadir[i] - ideal[i])).collect();
        let along: f64 = q.iter().sum::<f64>() * u;
        q.iter().map(|v| (v - along * u).powi(2)).sum::<f64>()
    };
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, f) in front.iter().enumerate() {
        let d = off_diagonal(f);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    let p = &front[best];
    Ok((0..m).map(|i| ideal[i] + RECONSTRUCTION_FACTOR * (p[i] - ideal[i])).collect())
}
