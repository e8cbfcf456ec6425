//! Pareto-front samplers used to build indicator reference sets.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use super::{Problem, Suite};
use crate::error::{Error, Result};
use crate::lattice::{farthest_point_extend, uniform_simplex_points};
use crate::rng::RandomEngine;
use crate::types::ObjectiveVector;

/// `count` objective vectors spread over the true Pareto front.
///
/// Linear fronts use simplex lattice points, spherical fronts use the same
/// points projected onto the unit sphere. The DTLZ5/6 front (a curve for
/// every `m`) is sampled at equal arc length. DTLZ7 draws candidates from the
/// product of its non-dominated coordinate intervals, including every corner,
/// and thins them by farthest-point sampling.
pub fn sample_pf(problem: &Problem, count: usize, engine: &mut RandomEngine) -> Result<Vec<ObjectiveVector>> {
    if count == 0 {
        return Err(Error::Argument("front sample count must be at least 1".into()));
    }
    let m = problem.num_objectives();
    let raw: Vec<Vec<f64>> = match problem.variant() {
        1 => uniform_simplex_points(m, count, engine)
            .into_iter()
            .map(|w| w.into_iter().map(|v| 0.5 * v).collect())
            .collect(),
        2..=4 => uniform_simplex_points(m, count, engine)
            .into_iter()
            .map(|w| {
                let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                w.into_iter().map(|v| v / norm).collect()
            })
            .collect(),
        5 | 6 => degenerate_curve(m, count),
        7 => disconnected_front(m, count, engine),
        _ => unreachable!("variant validated at construction"),
    };
    Ok(raw
        .into_iter()
        .map(|f| {
            let f = match problem.suite() {
                Suite::Dtlz => f,
                Suite::Sdtlz => problem.scale(f),
                Suite::Idtlz => {
                    let top = if problem.variant() == 1 { 0.5 } else { 1.0 };
                    f.into_iter().map(|v| top - v).collect()
                }
            };
            ObjectiveVector::new(f)
        })
        .collect())
}

/// Front point of DTLZ5/6 (g = 0) for the first angle `theta`.
fn curve_point(m: usize, theta: f64) -> Vec<f64> {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let mut f = vec![0.0; m];
    f[0] = theta.cos() * c.powi(m as i32 - 2);
    for (i, v) in f.iter_mut().enumerate().take(m - 1).skip(1) {
        *v = theta.cos() * c.powi((m - 1 - i) as i32);
    }
    f[m - 1] = theta.sin();
    f
}

fn degenerate_curve(m: usize, count: usize) -> Vec<Vec<f64>> {
    if count == 1 {
        return vec![curve_point(m, FRAC_PI_2 / 2.0)];
    }
    // all coordinates are affine in (cos t, sin t): the curve is an ellipse
    // arc, so arc length is integrated on a fine grid and inverted linearly
    let grid = 64 * count;
    let thetas: Vec<f64> = (0..=grid).map(|i| FRAC_PI_2 * i as f64 / grid as f64).collect();
    let pts: Vec<Vec<f64>> = thetas.iter().map(|&t| curve_point(m, t)).collect();
    let mut arc = vec![0.0; pts.len()];
    for i in 1..pts.len() {
        arc[i] = arc[i - 1] + crate::types::distance(&pts[i - 1], &pts[i]);
    }
    let total = arc[grid];
    let mut out = Vec::with_capacity(count);
    let mut j = 0;
    for s in 0..count {
        let target = total * s as f64 / (count - 1) as f64;
        while j + 1 < grid && arc[j + 1] < target {
            j += 1;
        }
        let span = arc[j + 1] - arc[j];
        let frac = if span > 0.0 { ((target - arc[j]) / span).clamp(0.0, 1.0) } else { 0.0 };
        let theta = thetas[j] + frac * (thetas[j + 1] - thetas[j]);
        out.push(curve_point(m, theta));
    }
    out
}

/// Per-coordinate structure of the DTLZ7 front at g = 0.
///
/// With `H(t) = t (1 + sin 3πt)` the last objective is `2m - Σ H(t_i)`, so a
/// coordinate value is Pareto optimal exactly when `H` at that value beats
/// every smaller value.
#[derive(Debug)]
pub(crate) struct Dtlz7Front {
    intervals: Vec<(f64, f64)>,
}

fn dtlz7_term(t: f64) -> f64 {
    t * (1.0 + (3.0 * PI * t).sin())
}

fn dtlz7_slope(t: f64) -> f64 {
    1.0 + (3.0 * PI * t).sin() + 3.0 * PI * t * (3.0 * PI * t).cos()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl Dtlz7Front {
    pub(crate) fn get() -> &'static Self {
        static FRONT: OnceLock<Dtlz7Front> = OnceLock::new();
        FRONT.get_or_init(Self::compute)
    }

    fn compute() -> Self {
        let steps = 10_000;
        let mut maxima = Vec::new();
        for i in 0..steps {
            let (a, b) = (i as f64 / steps as f64, (i + 1) as f64 / steps as f64);
            if dtlz7_slope(a) > 0.0 && dtlz7_slope(b) <= 0.0 {
                maxima.push(bisect(a, b, dtlz7_slope));
            }
        }
        let mut intervals = Vec::new();
        let mut best = f64::NEG_INFINITY;
        let mut prev = 0.0;
        for &peak in &maxima {
            let value = dtlz7_term(peak);
            if value <= best {
                continue;
            }
            let start = if intervals.is_empty() {
                0.0
            } else {
                // first point past the previous peak that beats it
                let mut lo = prev;
                let mut hi = peak;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if dtlz7_term(mid) > best {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                // step inside so the gain over the previous peak survives rounding
                hi + 1e-9
            };
            intervals.push((start, peak));
            best = value;
            prev = peak;
        }
        Self { intervals }
    }

    /// Largest Pareto-optimal coordinate value.
    pub(crate) fn t_max(&self) -> f64 {
        self.intervals.last().map(|iv| iv.1).unwrap_or(0.0)
    }

    /// `H(t_max)`, the largest reduction of the last objective per coordinate.
    pub(crate) fn best_term(&self) -> f64 {
        dtlz7_term(self.t_max())
    }

    pub(crate) fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Maps `u` in `[0, 1]` onto the union of intervals by length.
    fn pick(&self, u: f64) -> f64 {
        let mut rest = u * self.total_length();
        for &(a, b) in &self.intervals {
            if rest <= b - a {
                return a + rest;
            }
            rest -= b - a;
        }
        self.t_max()
    }

    pub(crate) fn point(&self, t: &[f64]) -> Vec<f64> {
        let m = t.len() + 1;
        let mut f = t.to_vec();
        f.push(2.0 * m as f64 - t.iter().map(|&v| dtlz7_term(v)).sum::<f64>());
        f
    }
}

fn disconnected_front(m: usize, count: usize, engine: &mut RandomEngine) -> Vec<Vec<f64>> {
    let front = Dtlz7Front::get();
    let d = m - 1;
    let ends: Vec<f64> = front.intervals().iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut pool: Vec<Vec<f64>> = Vec::new();
    // every combination of interval endpoints
    let corners = ends.len().pow(d as u32);
    if corners <= 4 * count.max(64) {
        for mut code in 0..corners {
            let mut t = Vec::with_capacity(d);
            for _ in 0..d {
                t.push(ends[code % ends.len()]);
                code /= ends.len();
            }
            pool.push(front.point(&t));
        }
    }
    let random = 3 * count;
    for s in 0..random {
        let t: Vec<f64> = if d == 1 {
            vec![front.pick(s as f64 / (random - 1).max(1) as f64)]
        } else {
            (0..d).map(|_| front.pick(engine.next_f64())).collect()
        };
        pool.push(front.point(&t));
    }
    let seed = pool.swap_remove(0);
    farthest_point_extend(vec![seed], &pool, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_problem, problem_names};
    use crate::ranking::dominates;

    fn mutually_nondominated(pts: &[ObjectiveVector]) -> bool {
        pts.iter().enumerate().all(|(i, a)| {
            pts.iter()
                .enumerate()
                .all(|(j, b)| i == j || !dominates(a, b).unwrap())
        })
    }

    #[test]
    fn dtlz2_samples_lie_on_the_unit_circle() {
        let p = make_problem("dtlz2", 2).unwrap();
        let s = sample_pf(&p, 5, &mut RandomEngine::new(0)).unwrap();
        assert_eq!(s.len(), 5);
        for f in &s {
            assert!((f[0] * f[0] + f[1] * f[1] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dtlz7_samples_are_mutually_nondominated() {
        let p = make_problem("dtlz7", 2).unwrap();
        let s = sample_pf(&p, 1000, &mut RandomEngine::new(0)).unwrap();
        assert_eq!(s.len(), 1000);
        assert!(mutually_nondominated(&s));
        let p = make_problem("dtlz7", 4).unwrap();
        let s = sample_pf(&p, 300, &mut RandomEngine::new(0)).unwrap();
        assert!(mutually_nondominated(&s));
    }

    #[test]
    fn inverted_linear_samples_lie_on_the_inverted_plane() {
        let p = make_problem("idtlz1", 3).unwrap();
        let s = sample_pf(&p, 100, &mut RandomEngine::new(0)).unwrap();
        for f in &s {
            // f'_i = 1/2 - f_i with Σ f_i = 1/2
            assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(f.iter().all(|&v| (-1e-12..=0.5 + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn samples_stay_inside_the_true_bounds() {
        for name in problem_names() {
            for m in 2..=6 {
                let p = make_problem(&name, m).unwrap();
                let s = sample_pf(&p, 60, &mut RandomEngine::new(1)).unwrap();
                assert_eq!(s.len(), 60, "{}", p.id());
                assert!(mutually_nondominated(&s), "{}", p.id());
                for f in &s {
                    for i in 0..m {
                        assert!(f[i] >= p.true_ideal()[i] - 1e-9, "{} {:?}", p.id(), f);
                        assert!(f[i] <= p.true_nadir()[i] + 1e-9, "{} {:?}", p.id(), f);
                    }
                }
            }
        }
    }

    #[test]
    fn sample_extremes_match_stored_ideal_and_nadir() {
        for name in ["dtlz1", "dtlz2", "dtlz5", "dtlz7", "sdtlz3", "idtlz1", "idtlz4"] {
            for m in [2, 3, 4, 6] {
                let p = make_problem(name, m).unwrap();
                let s = sample_pf(&p, 2000, &mut RandomEngine::new(2)).unwrap();
                for i in 0..m {
                    let range = p.true_nadir()[i] - p.true_ideal()[i];
                    let lo = s.iter().map(|f| f[i]).fold(f64::INFINITY, f64::min);
                    let hi = s.iter().map(|f| f[i]).fold(f64::NEG_INFINITY, f64::max);
                    assert!(((lo - p.true_ideal()[i]) / range).abs() < 1e-2, "{} min {i}", p.id());
                    assert!(((hi - p.true_nadir()[i]) / range).abs() < 1e-2, "{} max {i}", p.id());
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = make_problem("dtlz7", 3).unwrap();
        let a = sample_pf(&p, 50, &mut RandomEngine::new(4)).unwrap();
        let b = sample_pf(&p, 50, &mut RandomEngine::new(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_count_is_rejected() {
        let p = make_problem("dtlz2", 2).unwrap();
        assert!(sample_pf(&p, 0, &mut RandomEngine::new(0)).is_err());
    }

    #[test]
    fn dtlz7_intervals() {
        let iv = Dtlz7Front::get().intervals();
        assert_eq!(iv.len(), 2);
        assert!((iv[0].1 - 0.2514).abs() < 1e-3, "{iv:?}");
        assert!((iv[1].0 - 0.6316).abs() < 1e-3, "{iv:?}");
        assert!((iv[1].1 - 0.8594).abs() < 1e-3, "{iv:?}");
    }
}
