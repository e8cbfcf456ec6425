//! DTLZ, scaled DTLZ and inverted DTLZ test problems.
//!
//! Variable counts follow the usual `n = m + k - 1` convention with `k = 5`
//! for DTLZ1, `k = 10` for DTLZ2-6 and `k = 20` for DTLZ7. All variables are
//! bounded in `[0, 1]`.
//!
//! The scaled suite multiplies objective `i` (zero-based) by `10^i`. The
//! inverted suite uses `f'_i = (1 + g)/2 - f_i` for the linear front and
//! `f'_i = 1 + g - f_i` for the spherical ones.

mod front;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::types::ObjectiveVector;

pub use front::sample_pf;

/// Problem family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dtlz,
    Sdtlz,
    Idtlz,
}

impl Suite {
    pub fn prefix(self) -> &'static str {
        match self {
            Suite::Dtlz => "dtlz",
            Suite::Sdtlz => "sdtlz",
            Suite::Idtlz => "idtlz",
        }
    }

    pub fn variants(self) -> std::ops::RangeInclusive<u8> {
        match self {
            Suite::Dtlz => 1..=7,
            Suite::Sdtlz | Suite::Idtlz => 1..=4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtlz" => Ok(Suite::Dtlz),
            "sdtlz" => Ok(Suite::Sdtlz),
            "idtlz" => Ok(Suite::Idtlz),
            other => Err(Error::config("suite", format!("unknown suite `{other}`"))),
        }
    }
}

/// A configured benchmark instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    suite: Suite,
    variant: u8,
    m: usize,
    k: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    ideal: ObjectiveVector,
    nadir: ObjectiveVector,
}

/// Builds the named problem, e.g. `make_problem("sdtlz2", 3)`.
pub fn make_problem(name: &str, m: usize) -> Result<Problem> {
    let (suite, variant) = parse_name(name)?;
    Problem::new(suite, variant, m)
}

fn parse_name(name: &str) -> Result<(Suite, u8)> {
    let lower = name.trim().to_ascii_lowercase();
    let split = lower
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::config("problem", format!("unknown problem `{name}`")))?;
    let suite: Suite = lower[..split]
        .parse()
        .map_err(|_| Error::config("problem", format!("unknown problem `{name}`")))?;
    let variant: u8 = lower[split..]
        .parse()
        .map_err(|_| Error::config("problem", format!("unknown problem `{name}`")))?;
    if !suite.variants().contains(&variant) {
        return Err(Error::config("problem", format!("unknown problem `{name}`")));
    }
    Ok((suite, variant))
}

/// Parses a registry id such as `sdtlz2_m3` into a problem.
pub fn problem_from_id(id: &str) -> Result<Problem> {
    let (name, m) = id
        .rsplit_once("_m")
        .ok_or_else(|| Error::config("problem", format!("expected `<name>_m<count>`, got `{id}`")))?;
    let m: usize = m
        .parse()
        .map_err(|_| Error::config("problem", format!("bad objective count in `{id}`")))?;
    make_problem(name, m)
}

/// Every problem name in the registry.
pub fn problem_names() -> Vec<String> {
    [Suite::Dtlz, Suite::Sdtlz, Suite::Idtlz]
        .into_iter()
        .flat_map(|s| s.variants().map(move |v| format!("{}{}", s.prefix(), v)))
        .collect()
}

impl Problem {
    pub fn new(suite: Suite, variant: u8, m: usize) -> Result<Self> {
        if !suite.variants().contains(&variant) {
            return Err(Error::config(
                "problem",
                format!("{suite}{variant} is not part of the {suite} suite"),
            ));
        }
        if m < 2 {
            return Err(Error::config("m", format!("need at least 2 objectives, got {m}")));
        }
        let k = match variant {
            1 => 5,
            7 => 20,
            _ => 10,
        };
        let n = m + k - 1;
        let (ideal, nadir) = base_bounds(suite, variant, m);
        let mut p = Self {
            suite,
            variant,
            m,
            k,
            lower: vec![0.0; n],
            upper: vec![1.0; n],
            ideal: ObjectiveVector::new(ideal),
            nadir: ObjectiveVector::new(nadir),
        };
        if suite == Suite::Sdtlz {
            let ideal = p.scale(p.ideal.to_vec());
            let nadir = p.scale(p.nadir.to_vec());
            p.ideal = ObjectiveVector::new(ideal);
            p.nadir = ObjectiveVector::new(nadir);
        }
        Ok(p)
    }

    pub fn suite(&self) -> Suite {
        self.suite
    }

    pub fn variant(&self) -> u8 {
        self.variant
    }

    /// Lower-case name without the objective count, e.g. `sdtlz2`.
    pub fn name(&self) -> String {
        format!("{}{}", self.suite.prefix(), self.variant)
    }

    /// Registry id including the objective count, e.g. `sdtlz2_m3`.
    pub fn id(&self) -> String {
        format!("{}_m{}", self.name(), self.m)
    }

    pub fn num_objectives(&self) -> usize {
        self.m
    }

    pub fn num_variables(&self) -> usize {
        self.lower.len()
    }

    pub fn lower_bounds(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[f64] {
        &self.upper
    }

    pub fn true_ideal(&self) -> &ObjectiveVector {
        &self.ideal
    }

    pub fn true_nadir(&self) -> &ObjectiveVector {
        &self.nadir
    }

    /// Objective vector of `x`; `x` must lie inside the box bounds.
    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        check_len(self.num_variables(), x.len())?;
        for (i, (&v, (&lo, &hi))) in x.iter().zip(self.lower.iter().zip(&self.upper)).enumerate() {
            if !(lo..=hi).contains(&v) {
                return Err(Error::Precondition(format!(
                    "variable {i} = {v} outside [{lo}, {hi}]"
                )));
            }
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> ObjectiveVector {
        let m = self.m;
        let (mut f, g) = base_objectives(self.variant, m, self.k, x);
        match self.suite {
            Suite::Dtlz => {}
            Suite::Sdtlz => f = self.scale(f),
            Suite::Idtlz => {
                let top = if self.variant == 1 { 0.5 * (1.0 + g) } else { 1.0 + g };
                for v in &mut f {
                    *v = top - *v;
                }
            }
        }
        ObjectiveVector::new(f)
    }

    /// Applies the scaled-suite factors `10^i`; identity for other suites.
    pub(crate) fn scale(&self, mut f: Vec<f64>) -> Vec<f64> {
        if self.suite == Suite::Sdtlz {
            let mut factor = 1.0;
            for v in &mut f {
                *v *= factor;
                factor *= 10.0;
            }
        }
        f
    }
}

/// Raw DTLZ objectives and the distance function value `g`.
fn base_objectives(variant: u8, m: usize, k: usize, x: &[f64]) -> (Vec<f64>, f64) {
    let (head, tail) = x.split_at(m - 1);
    debug_assert_eq!(tail.len(), k);
    match variant {
        1 => {
            let g = rastrigin_g(tail, k);
            let mut f = vec![0.0; m];
            for (i, fi) in f.iter_mut().enumerate() {
                let mut v = 0.5 * (1.0 + g);
                for &xj in &head[..m - 1 - i] {
                    v *= xj;
                }
                if i > 0 {
                    v *= 1.0 - head[m - 1 - i];
                }
                *fi = v;
            }
            (f, g)
        }
        2..=4 => {
            let g = if variant == 3 { rastrigin_g(tail, k) } else { sphere_g(tail) };
            let theta: Vec<f64> = head
                .iter()
                .map(|&xj| {
                    let xj = if variant == 4 { xj.powi(100) } else { xj };
                    xj * FRAC_PI_2
                })
                .collect();
            (spherical(&theta, 1.0 + g, m), g)
        }
        5 | 6 => {
            let g = if variant == 5 {
                sphere_g(tail)
            } else {
                tail.iter().map(|v| v.powf(0.1)).sum()
            };
            let mut theta = Vec::with_capacity(m - 1);
            theta.push(head[0] * FRAC_PI_2);
            for &xj in &head[1..] {
                theta.push(PI / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * xj));
            }
            (spherical(&theta, 1.0 + g, m), g)
        }
        7 => {
            let g = 1.0 + 9.0 / k as f64 * tail.iter().sum::<f64>();
            let mut f: Vec<f64> = head.to_vec();
            let h = m as f64
                - head
                    .iter()
                    .map(|&fi| fi / (1.0 + g) * (1.0 + (3.0 * PI * fi).sin()))
                    .sum::<f64>();
            f.push((1.0 + g) * h);
            (f, g)
        }
        _ => unreachable!("variant validated at construction"),
    }
}

fn rastrigin_g(tail: &[f64], k: usize) -> f64 {
    100.0
        * (k as f64
            + tail
                .iter()
                .map(|&v| (v - 0.5).powi(2) - (20.0 * PI * (v - 0.5)).cos())
                .sum::<f64>())
}

fn sphere_g(tail: &[f64]) -> f64 {
    tail.iter().map(|&v| (v - 0.5).powi(2)).sum()
}

fn spherical(theta: &[f64], radius: f64, m: usize) -> Vec<f64> {
    let mut f = vec![0.0; m];
    for (i, fi) in f.iter_mut().enumerate() {
        let mut v = radius;
        for &t in &theta[..m - 1 - i] {
            v *= t.cos();
        }
        if i > 0 {
            v *= theta[m - 1 - i].sin();
        }
        *fi = v;
    }
    f
}

/// True ideal and nadir of the unscaled problem.
fn base_bounds(suite: Suite, variant: u8, m: usize) -> (Vec<f64>, Vec<f64>) {
    match (suite, variant) {
        (_, 1) => (vec![0.0; m], vec![0.5; m]),
        (_, 2..=4) => (vec![0.0; m], vec![1.0; m]),
        (_, 5 | 6) => {
            let mut nadir = vec![0.0; m];
            nadir[0] = FRAC_1_SQRT_2.powi(m as i32 - 2);
            for (i, v) in nadir.iter_mut().enumerate().take(m - 1).skip(1) {
                *v = FRAC_1_SQRT_2.powi((m - 1 - i) as i32);
            }
            nadir[m - 1] = 1.0;
            (vec![0.0; m], nadir)
        }
        (_, 7) => {
            let d = front::Dtlz7Front::get();
            let mut ideal = vec![0.0; m];
            ideal[m - 1] = 2.0 * m as f64 - (m - 1) as f64 * d.best_term();
            let mut nadir = vec![d.t_max(); m];
            nadir[m - 1] = 2.0 * m as f64;
            (ideal, nadir)
        }
        _ => unreachable!("variant validated at construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mid(n: usize) -> Vec<f64> {
        vec![0.5; n]
    }

    #[test]
    fn variable_counts_follow_the_k_convention() {
        assert_eq!(make_problem("dtlz1", 3).unwrap().num_variables(), 7);
        assert_eq!(make_problem("dtlz2", 3).unwrap().num_variables(), 12);
        assert_eq!(make_problem("idtlz4", 5).unwrap().num_variables(), 14);
        assert_eq!(make_problem("dtlz7", 3).unwrap().num_variables(), 22);
    }

    #[test]
    fn dtlz2_bounds() {
        let p = make_problem("DTLZ2", 3).unwrap();
        assert_eq!(p.true_ideal().as_slice(), &[0.0, 0.0, 0.0]);
        assert_eq!(p.true_nadir().as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn sdtlz2_nadir_is_scaled() {
        let p = make_problem("sdtlz2", 3).unwrap();
        assert_eq!(p.true_nadir().as_slice(), &[1.0, 10.0, 100.0]);
    }

    #[test]
    fn unknown_names_and_small_m_are_rejected() {
        for (name, m) in [("dtlz8", 3), ("sdtlz5", 3), ("idtlz7", 3), ("zdt1", 2), ("dtlz", 2), ("dtlz2", 1)] {
            let err = make_problem(name, m).unwrap_err();
            assert!(err.is_config(), "{name}: {err}");
        }
    }

    #[test]
    fn registry_ids_round_trip() {
        let p = problem_from_id("idtlz3_m4").unwrap();
        assert_eq!(p.id(), "idtlz3_m4");
        assert_eq!(problem_names().len(), 15);
        assert!(problem_from_id("dtlz2").is_err());
    }

    #[test]
    fn dtlz1_symmetric_optimum() {
        let p = make_problem("dtlz1", 2).unwrap();
        let f = p.evaluate(&mid(p.num_variables())).unwrap();
        assert_eq!(f.as_slice(), &[0.25, 0.25]);
    }

    #[test]
    fn dtlz1_optimal_points_lie_on_the_plane() {
        let p = make_problem("dtlz1", 2).unwrap();
        let mut e = crate::rng::RandomEngine::new(1);
        for _ in 0..100 {
            let mut x = mid(p.num_variables());
            x[0] = e.next_f64();
            let f = p.evaluate(&x).unwrap();
            assert!((f[0] + f[1] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn dtlz2_boundary_angle() {
        let p = make_problem("dtlz2", 2).unwrap();
        let mut x = mid(p.num_variables());
        x[0] = 0.0;
        assert_eq!(p.evaluate(&x).unwrap().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn scaled_suite_multiplies_by_powers_of_ten() {
        let mut e = crate::rng::RandomEngine::new(2);
        for v in 1..=4u8 {
            for m in 2..=6 {
                let base = Problem::new(Suite::Dtlz, v, m).unwrap();
                let scaled = Problem::new(Suite::Sdtlz, v, m).unwrap();
                let x: Vec<f64> = (0..base.num_variables()).map(|_| e.next_f64()).collect();
                let fb = base.evaluate(&x).unwrap();
                let fs = scaled.evaluate(&x).unwrap();
                for i in 0..m {
                    assert_eq!(fs[i], fb[i] * 10f64.powi(i as i32));
                }
            }
        }
    }

    #[test]
    fn inverted_linear_front_sums_to_constant() {
        let p = make_problem("idtlz1", 3).unwrap();
        let mut x = mid(p.num_variables());
        x[0] = 0.3;
        x[1] = 0.8;
        let f = p.evaluate(&x).unwrap();
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(f.iter().all(|&v| (0.0..=0.5).contains(&v)));
    }

    #[test]
    fn out_of_bounds_input_is_a_precondition_violation() {
        let p = make_problem("dtlz2", 2).unwrap();
        let mut x = mid(p.num_variables());
        x[3] = 1.5;
        assert!(matches!(p.evaluate(&x), Err(Error::Precondition(_))));
        assert!(matches!(p.evaluate(&x[1..]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn ideal_strictly_below_nadir() {
        for name in problem_names() {
            for m in 2..=6 {
                let p = make_problem(&name, m).unwrap();
                for (lo, hi) in p.true_ideal().iter().zip(p.true_nadir().iter()) {
                    assert!(lo < hi, "{} {lo} {hi}", p.id());
                }
            }
        }
    }

    #[test]
    fn dtlz7_two_objective_bounds() {
        let p = make_problem("dtlz7", 2).unwrap();
        let ideal = p.true_ideal();
        let nadir = p.true_nadir();
        assert_eq!(ideal[0], 0.0);
        let best = (0..=1_000_000)
            .map(|i| {
                let t = i as f64 / 1e6;
                t * (1.0 + (3.0 * std::f64::consts::PI * t).sin())
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((ideal[1] - (4.0 - best)).abs() < 1e-9, "{}", ideal[1]);
        assert!((nadir[0] - 0.8594).abs() < 1e-3, "{}", nadir[0]);
        assert_eq!(nadir[1], 4.0);
    }
}
