//! Dominance relations, non-dominated sorting and crowding distance.

use std::cmp::Ordering;

use crate::error::{check_len, Error, Result};

/// Outcome of comparing two objective vectors under Pareto dominance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dominance {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

#[inline]
pub(crate) fn compare(a: &[f64], b: &[f64]) -> Dominance {
    let mut better = false;
    let mut worse = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            better = true;
        } else if x > y {
            worse = true;
        }
        if better && worse {
            return Dominance::Incomparable;
        }
    }
    match (better, worse) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        (false, false) => Dominance::Equal,
        (true, true) => Dominance::Incomparable,
    }
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_len(a.len(), b.len())?;
    Ok(compare(a, b) == Dominance::Dominates)
}

/// `a` is no worse than `b` in every objective.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_len(a.len(), b.len())?;
    Ok(a.iter().zip(b).all(|(x, y)| x <= y))
}

/// Partition of population indices into successive non-domination levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    /// Level of every index.
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        let mut r = vec![usize::MAX; n];
        for (level, front) in self.fronts.iter().enumerate() {
            for &i in front {
                r[i] = level;
            }
        }
        r
    }
}

/// Fast non-dominated sorting. Indices inside a front keep input order.
pub fn nondominated_sort<V: AsRef<[f64]>>(objs: &[V]) -> FrontPartition {
    sort_by_relation(objs.len(), |i, j| compare(objs[i].as_ref(), objs[j].as_ref()) == Dominance::Dominates)
}

/// Level sorting under an arbitrary strict "i beats j" relation.
///
/// When the relation has cycles some indices are never freed; those left over
/// are placed by their remaining beaten-by count, smallest count first.
pub(crate) fn sort_by_relation(n: usize, beats: impl Fn(usize, usize) -> bool) -> FrontPartition {
    let mut beaten_by = vec![0usize; n];
    let mut beats_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if beats(i, j) {
                beats_list[i].push(j);
                beaten_by[j] += 1;
            } else if beats(j, i) {
                beats_list[j].push(i);
                beaten_by[i] += 1;
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut remaining = n;
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| beaten_by[i] == 0).collect();
    while remaining > 0 {
        if current.is_empty() {
            let least = (0..n)
                .filter(|&i| !assigned[i])
                .map(|i| beaten_by[i])
                .min()
                .expect("unassigned index exists");
            current = (0..n).filter(|&i| !assigned[i] && beaten_by[i] == least).collect();
        }
        for &i in &current {
            assigned[i] = true;
        }
        remaining -= current.len();
        let mut next = Vec::new();
        for &i in &current {
            for &j in &beats_list[i] {
                if assigned[j] {
                    continue;
                }
                beaten_by[j] -= 1;
                if beaten_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    FrontPartition { fronts }
}

/// NSGA-II crowding distance of each member of one front.
///
/// Boundary members get `+inf`; an objective with zero range contributes 0.
pub fn crowding_distance<V: AsRef<[f64]>>(front: &[V]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut dist = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| {
            front[a].as_ref()[k]
                .partial_cmp(&front[b].as_ref()[k])
                .unwrap_or(Ordering::Equal)
        });
        let lo = front[order[0]].as_ref()[k];
        let hi = front[order[n - 1]].as_ref()[k];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (front[order[w + 1]].as_ref()[k] - front[order[w - 1]].as_ref()[k]) / range;
            }
        }
    }
    dist
}

/// r-dominance between two solutions given their weighted distances to the
/// reference point and the population's distance range.
///
/// Returns `Less` when `a` r-dominates `b`, `Greater` when `b` r-dominates
/// `a`, and `None` otherwise. A zero distance range makes the distance term
/// vanish, leaving plain Pareto dominance.
pub fn r_dominance_compare(
    a: &[f64],
    b: &[f64],
    dr_a: f64,
    dr_b: f64,
    dr_min: f64,
    dr_max: f64,
    delta: f64,
) -> Result<Option<Ordering>> {
    check_len(a.len(), b.len())?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Argument(format!("delta must lie in [0, 1], got {delta}")));
    }
    if dr_max < dr_min {
        return Err(Error::Argument(format!("distance range [{dr_min}, {dr_max}] is reversed")));
    }
    Ok(r_compare(compare(a, b), dr_a, dr_b, dr_max - dr_min, delta))
}

#[inline]
pub(crate) fn r_compare(pareto: Dominance, dr_a: f64, dr_b: f64, range: f64, delta: f64) -> Option<Ordering> {
    match pareto {
        Dominance::Dominates => Some(Ordering::Less),
        Dominance::DominatedBy => Some(Ordering::Greater),
        Dominance::Equal => None,
        Dominance::Incomparable => {
            let d = if range > 0.0 { (dr_a - dr_b) / range } else { 0.0 };
            if d < -delta {
                Some(Ordering::Less)
            } else if -d < -delta {
                Some(Ordering::Greater)
            } else {
                None
            }
        }
    }
}
