//! Ideal/nadir estimation and the practical normalization transform.
//!
//! | kind | ideal estimate            | nadir estimate                        |
//! |------|---------------------------|---------------------------------------|
//! | PP   | min over P ∪ Q            | max over P ∪ Q                        |
//! | BP   | best-so-far min           | max over P ∪ Q                        |
//! | BA   | best-so-far min           | max over the bounded archive          |
//! | NO   | 0                         | 1 (identity transform)                |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::ranking::{compare, Dominance};
use crate::types::ObjectiveVector;

/// Smallest denominator used by [`normalize_value`].
pub const EPS_DEN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationKind {
    Pp,
    Bp,
    Ba,
    No,
}

impl NormalizationKind {
    pub const ALL: [NormalizationKind; 4] = [Self::Pp, Self::Bp, Self::Ba, Self::No];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pp => "pp",
            Self::Bp => "bp",
            Self::Ba => "ba",
            Self::No => "no",
        }
    }
}

impl fmt::Display for NormalizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormalizationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pp" => Ok(Self::Pp),
            "bp" => Ok(Self::Bp),
            "ba" => Ok(Self::Ba),
            "no" => Ok(Self::No),
            _ => Err(Error::config("normalization", format!("unknown normalization `{s}`"))),
        }
    }
}

fn fold<V: AsRef<[f64]>>(vs: &[V], pick: fn(f64, f64) -> f64) -> Result<ObjectiveVector> {
    let first = vs
        .first()
        .ok_or_else(|| Error::Argument("cannot estimate from an empty set".into()))?
        .as_ref();
    let mut acc = first.to_vec();
    for v in &vs[1..] {
        let v = v.as_ref();
        check_len(acc.len(), v.len())?;
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = pick(*a, b);
        }
    }
    Ok(ObjectiveVector::new(acc))
}

/// Componentwise minimum over `P ∪ Q`.
pub fn estimate_ideal_pop<V: AsRef<[f64]>>(union_pq: &[V]) -> Result<ObjectiveVector> {
    fold(union_pq, f64::min)
}

/// Componentwise maximum over `P ∪ Q`.
pub fn estimate_nadir_pop<V: AsRef<[f64]>>(union_pq: &[V]) -> Result<ObjectiveVector> {
    fold(union_pq, f64::max)
}

/// Folds the batch minimum into the running best-so-far minimum.
pub fn estimate_ideal_bsf<V: AsRef<[f64]>>(
    best_so_far: &mut Option<ObjectiveVector>,
    union_pq: &[V],
) -> Result<ObjectiveVector> {
    let batch = estimate_ideal_pop(union_pq)?;
    let next = match best_so_far.take() {
        None => batch,
        Some(prev) => {
            check_len(prev.len(), batch.len())?;
            ObjectiveVector::new(prev.iter().zip(batch.iter()).map(|(a, b)| a.min(*b)).collect())
        }
    };
    *best_so_far = Some(next.clone());
    Ok(next)
}

/// Bounded external archive update.
///
/// `Y` is the set of members of `B ∪ X` that no member of `B ∪ X` dominates,
/// in that order; the new archive holds, for each objective, the first member
/// of `Y` that attains the maximum. Entries may repeat.
pub fn update_bounded_archive<T: AsRef<[f64]> + Clone>(archive_b: &[T], new_solutions: &[T]) -> Result<Vec<T>> {
    if new_solutions.is_empty() {
        return Err(Error::Argument("archive update needs at least one new solution".into()));
    }
    let cand: Vec<&T> = archive_b.iter().chain(new_solutions).collect();
    let m = cand[0].as_ref().len();
    for c in &cand {
        check_len(m, c.as_ref().len())?;
    }
    // dominance status is resolved lazily, most candidates are never asked
    let mut status: Vec<Option<bool>> = vec![None; cand.len()];
    let in_y = |i: usize, status: &mut Vec<Option<bool>>| -> bool {
        *status[i].get_or_insert_with(|| {
            let fi = cand[i].as_ref();
            !cand.iter().any(|c| compare(c.as_ref(), fi) == Dominance::Dominates)
        })
    };
    let mut order: Vec<usize> = (0..cand.len()).collect();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        order.sort_by(|&a, &b| {
            cand[b].as_ref()[k]
                .total_cmp(&cand[a].as_ref()[k])
                .then(a.cmp(&b))
        });
        let chosen = order
            .iter()
            .copied()
            .find(|&i| in_y(i, &mut status))
            .expect("a maximal element of a finite set is non-dominated");
        out.push(cand[chosen].clone());
    }
    Ok(out)
}

/// Componentwise maximum over the archive members.
pub fn estimate_nadir_archive<V: AsRef<[f64]>>(archive_b: &[V]) -> Result<ObjectiveVector> {
    if archive_b.is_empty() {
        return Err(Error::State("bounded archive is empty".into()));
    }
    fold(archive_b, f64::max)
}

/// `(f - z_lb) / (z_ub - z_lb)` per coordinate, with the denominator floored at [`EPS_DEN`].
pub fn normalize_value(f: &[f64], z_lb: &[f64], z_ub: &[f64]) -> Result<ObjectiveVector> {
    check_len(f.len(), z_lb.len())?;
    check_len(f.len(), z_ub.len())?;
    Ok(ObjectiveVector::new(
        f.iter()
            .zip(z_lb.iter().zip(z_ub))
            .map(|(&v, (&lo, &hi))| (v - lo) / denominator(lo, hi))
            .collect(),
    ))
}

/// Inverse of [`normalize_value`].
pub fn denormalize(g: &[f64], z_lb: &[f64], z_ub: &[f64]) -> Result<ObjectiveVector> {
    check_len(g.len(), z_lb.len())?;
    check_len(g.len(), z_ub.len())?;
    Ok(ObjectiveVector::new(
        g.iter()
            .zip(z_lb.iter().zip(z_ub))
            .map(|(&v, (&lo, &hi))| lo + v * denominator(lo, hi))
            .collect(),
    ))
}

#[inline]
pub(crate) fn denominator(lo: f64, hi: f64) -> f64 {
    let d = hi - lo;
    if d < EPS_DEN {
        EPS_DEN
    } else {
        d
    }
}

/// Estimator state of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationState {
    kind: NormalizationKind,
    z_lb: ObjectiveVector,
    z_ub: ObjectiveVector,
    best_so_far_min: Option<ObjectiveVector>,
    archive_b: Vec<ObjectiveVector>,
    updates: usize,
}

impl NormalizationState {
    /// Fresh state. Until the first update the bounds are `0` and `1`.
    pub fn new(kind: NormalizationKind, m: usize) -> Self {
        Self {
            kind,
            z_lb: ObjectiveVector::new(vec![0.0; m]),
            z_ub: ObjectiveVector::new(vec![1.0; m]),
            best_so_far_min: None,
            archive_b: Vec::new(),
            updates: 0,
        }
    }

    pub fn kind(&self) -> NormalizationKind {
        self.kind
    }

    pub fn z_lb(&self) -> &ObjectiveVector {
        &self.z_lb
    }

    pub fn z_ub(&self) -> &ObjectiveVector {
        &self.z_ub
    }

    pub fn best_so_far_min(&self) -> Option<&ObjectiveVector> {
        self.best_so_far_min.as_ref()
    }

    pub fn archive(&self) -> &[ObjectiveVector] {
        &self.archive_b
    }

    /// Number of updates applied so far.
    pub fn updates(&self) -> usize {
        self.updates
    }

    /// Applies one generation's estimator update.
    ///
    /// The archive receives the offspring, or the population when no offspring
    /// are given (the initial call).
    pub fn update<V: AsRef<[f64]>>(&mut self, population: &[V], offspring: &[V]) -> Result<()> {
        if population.is_empty() {
            return Err(Error::Precondition("population must be non-empty".into()));
        }
        let m = self.z_lb.len();
        let union: Vec<&[f64]> = population.iter().chain(offspring).map(|v| v.as_ref()).collect();
        for f in &union {
            check_len(m, f.len())?;
        }
        match self.kind {
            NormalizationKind::No => {}
            NormalizationKind::Pp => {
                self.z_lb = estimate_ideal_pop(&union)?;
                self.z_ub = estimate_nadir_pop(&union)?;
            }
            NormalizationKind::Bp => {
                self.z_lb = estimate_ideal_bsf(&mut self.best_so_far_min, &union)?;
                self.z_ub = estimate_nadir_pop(&union)?;
            }
            NormalizationKind::Ba => {
                self.z_lb = estimate_ideal_bsf(&mut self.best_so_far_min, &union)?;
                let fresh: Vec<ObjectiveVector> = if offspring.is_empty() { population } else { offspring }
                    .iter()
                    .map(|v| ObjectiveVector::new(v.as_ref().to_vec()))
                    .collect();
                self.archive_b = update_bounded_archive(&self.archive_b, &fresh)?;
                self.z_ub = estimate_nadir_archive(&self.archive_b)?;
            }
        }
        self.updates += 1;
        Ok(())
    }

    pub fn normalize(&self, f: &[f64]) -> Result<ObjectiveVector> {
        normalize_value(f, &self.z_lb, &self.z_ub)
    }
}

/// Functional form of [`NormalizationState::update`].
pub fn update_state<V: AsRef<[f64]>>(
    mut state: NormalizationState,
    population: &[V],
    offspring: &[V],
) -> Result<NormalizationState> {
    state.update(population, offspring)?;
    Ok(state)
}
