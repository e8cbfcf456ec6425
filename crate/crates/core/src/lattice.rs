//! Simplex lattices and farthest-point completion.
//!
//! Used both for decomposition weight vectors and for sampling linear and
//! spherical Pareto fronts.

use crate::rng::RandomEngine;
use crate::types::distance;

/// Number of points in the Das-Dennis lattice with `divisions` layers in `m`
/// dimensions, i.e. `C(divisions + m - 1, m - 1)`; saturates on overflow.
pub fn lattice_size(m: usize, divisions: usize) -> usize {
    let k = m - 1;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (divisions + k - i) as u128 / (i + 1) as u128;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// All points `(a_1/H, ..., a_m/H)` with non-negative integers summing to `H`,
/// in lexicographically descending order of the integer compositions.
pub fn das_dennis(m: usize, divisions: usize) -> Vec<Vec<f64>> {
    assert!(m >= 1 && divisions >= 1);
    let mut out = Vec::with_capacity(lattice_size(m, divisions));
    let mut current = vec![0usize; m];
    compose(&mut out, &mut current, 0, divisions, divisions);
    out
}

fn compose(out: &mut Vec<Vec<f64>>, cur: &mut [usize], pos: usize, left: usize, h: usize) {
    if pos == cur.len() - 1 {
        cur[pos] = left;
        out.push(cur.iter().map(|&a| a as f64 / h as f64).collect());
        return;
    }
    for a in (0..=left).rev() {
        cur[pos] = a;
        compose(out, cur, pos + 1, left - a, h);
    }
}

/// Largest layer count whose lattice has at most `max_points` points, if any.
pub fn largest_divisions(m: usize, max_points: usize) -> Option<usize> {
    if m > max_points {
        return None;
    }
    let mut h = 1;
    while lattice_size(m, h + 1) <= max_points {
        h += 1;
    }
    Some(h)
}

/// Greedily appends the pool member farthest from everything selected so far
/// until `target` points are selected. Ties go to the lowest pool index.
pub fn farthest_point_extend(
    mut selected: Vec<Vec<f64>>,
    pool: &[Vec<f64>],
    target: usize,
) -> Vec<Vec<f64>> {
    if selected.len() >= target || pool.is_empty() {
        return selected;
    }
    let mut nearest: Vec<f64> = pool
        .iter()
        .map(|p| {
            selected
                .iter()
                .map(|s| distance(p, s))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut taken = vec![false; pool.len()];
    while selected.len() < target {
        let mut best: Option<usize> = None;
        for (i, &d) in nearest.iter().enumerate() {
            if taken[i] {
                continue;
            }
            if best.is_none_or(|b| d > nearest[b]) {
                best = Some(i);
            }
        }
        let Some(b) = best else { break };
        taken[b] = true;
        let chosen = pool[b].clone();
        for (i, d) in nearest.iter_mut().enumerate() {
            if !taken[i] {
                *d = d.min(distance(&pool[i], &chosen));
            }
        }
        selected.push(chosen);
    }
    selected
}

/// Exactly `count` points on the unit simplex: the largest Das-Dennis lattice
/// that fits, completed by farthest-point sampling from random simplex points.
pub fn uniform_simplex_points(m: usize, count: usize, engine: &mut RandomEngine) -> Vec<Vec<f64>> {
    let base = match largest_divisions(m, count) {
        Some(h) => das_dennis(m, h),
        None => vec![vec![1.0 / m as f64; m]],
    };
    if base.len() >= count {
        let mut base = base;
        base.truncate(count);
        return base;
    }
    let missing = count - base.len();
    let pool: Vec<Vec<f64>> = (0..10 * missing + 100).map(|_| engine.simplex_point(m)).collect();
    farthest_point_extend(base, &pool, count)
}
