//! Variation operators: SBX, polynomial mutation, DE/rand/1 and bound repair.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::rng::RandomEngine;
use crate::types::{DecisionVector, Individual};

const EPS: f64 = 1e-14;

/// Parameters of the SBX + polynomial mutation pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaOperatorConfig {
    pub crossover_prob: f64,
    pub sbx_eta: f64,
    /// Per-gene mutation probability; `None` means `1/n`.
    pub mutation_prob: Option<f64>,
    pub pm_eta: f64,
}

impl Default for GaOperatorConfig {
    fn default() -> Self {
        Self {
            crossover_prob: 1.0,
            sbx_eta: 30.0,
            mutation_prob: None,
            pm_eta: 20.0,
        }
    }
}

impl GaOperatorConfig {
    pub fn validate(&self) -> Result<()> {
        check_prob("crossover_prob", self.crossover_prob)?;
        check_eta("sbx_eta", self.sbx_eta)?;
        check_eta("pm_eta", self.pm_eta)?;
        if let Some(p) = self.mutation_prob {
            check_prob("mutation_prob", p)?;
        }
        Ok(())
    }

    pub fn mutation_prob_for(&self, n: usize) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / n.max(1) as f64)
    }
}

/// Parameters of the DE/rand/1/bin + polynomial mutation pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeOperatorConfig {
    pub scale_f: f64,
    pub crossover_rate: f64,
    pub pm_eta: f64,
    /// Per-gene mutation probability; `None` means `1/n`.
    pub mutation_prob: Option<f64>,
}

impl Default for DeOperatorConfig {
    fn default() -> Self {
        Self {
            scale_f: 0.5,
            crossover_rate: 1.0,
            pm_eta: 20.0,
            mutation_prob: None,
        }
    }
}

impl DeOperatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale_f > 0.0 && self.scale_f.is_finite()) {
            return Err(Error::config("scale_f", format!("must be positive, got {}", self.scale_f)));
        }
        check_prob("crossover_rate", self.crossover_rate)?;
        check_eta("pm_eta", self.pm_eta)?;
        if let Some(p) = self.mutation_prob {
            check_prob("mutation_prob", p)?;
        }
        Ok(())
    }

    pub fn mutation_prob_for(&self, n: usize) -> f64 {
        self.mutation_prob.unwrap_or(1.0 / n.max(1) as f64)
    }
}

fn check_prob(field: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::config(field, format!("probability must lie in [0, 1], got {p}")))
    }
}

fn check_eta(field: &str, eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("distribution index must be positive, got {eta}")))
    }
}

/// Bounded simulated binary crossover.
///
/// Each variable is recombined with probability 1/2 and the two children swap
/// that variable with probability 1/2, as in the reference NSGA-II code.
pub fn sbx_crossover(
    p1: &[f64],
    p2: &[f64],
    lower: &[f64],
    upper: &[f64],
    cfg: &GaOperatorConfig,
    engine: &mut RandomEngine,
) -> Result<(DecisionVector, DecisionVector)> {
    check_len(p1.len(), p2.len())?;
    check_len(p1.len(), lower.len())?;
    check_len(p1.len(), upper.len())?;
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if !engine.bernoulli(cfg.crossover_prob) {
        return Ok((c1.into(), c2.into()));
    }
    let eta = cfg.sbx_eta;
    for i in 0..p1.len() {
        if engine.next_f64() > 0.5 || (p1[i] - p2[i]).abs() <= EPS {
            continue;
        }
        let (yl, yu) = (lower[i], upper[i]);
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let u = engine.next_f64();

        let beta = 1.0 + 2.0 * (y1 - yl) / (y2 - y1);
        let mut a = 2.0 - beta.powf(-(eta + 1.0));
        let betaq = spread(u, a, eta);
        let mut v1 = 0.5 * ((y1 + y2) - betaq * (y2 - y1));

        let beta = 1.0 + 2.0 * (yu - y2) / (y2 - y1);
        a = 2.0 - beta.powf(-(eta + 1.0));
        let betaq = spread(u, a, eta);
        let mut v2 = 0.5 * ((y1 + y2) + betaq * (y2 - y1));

        v1 = v1.clamp(yl, yu);
        v2 = v2.clamp(yl, yu);
        if engine.next_f64() <= 0.5 {
            std::mem::swap(&mut v1, &mut v2);
        }
        c1[i] = v1;
        c2[i] = v2;
    }
    Ok((c1.into(), c2.into()))
}

fn spread(u: f64, alpha: f64, eta: f64) -> f64 {
    if u <= 1.0 / alpha {
        (u * alpha).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
    }
}

/// Bounded polynomial mutation applied gene by gene with probability `prob`.
pub fn polynomial_mutation(
    x: &[f64],
    lower: &[f64],
    upper: &[f64],
    prob: f64,
    eta: f64,
    engine: &mut RandomEngine,
) -> Result<DecisionVector> {
    check_len(x.len(), lower.len())?;
    check_len(x.len(), upper.len())?;
    let mut y = x.to_vec();
    let pow = 1.0 / (eta + 1.0);
    for i in 0..y.len() {
        if !engine.bernoulli(prob) {
            continue;
        }
        let (yl, yu) = (lower[i], upper[i]);
        if yu - yl <= 0.0 {
            continue;
        }
        let v = y[i];
        let d1 = (v - yl) / (yu - yl);
        let d2 = (yu - v) / (yu - yl);
        let u = engine.next_f64();
        let dq = if u < 0.5 {
            let xy = 1.0 - d1;
            let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
            val.powf(pow) - 1.0
        } else {
            let xy = 1.0 - d2;
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
            1.0 - val.powf(pow)
        };
        y[i] = (v + dq * (yu - yl)).clamp(yl, yu);
    }
    Ok(y.into())
}

/// DE/rand/1 with binomial crossover against the target.
///
/// `r1`, `r2`, `r3` are distinct positions in `neighborhood`, drawn in that
/// order by rejection; then the forced gene `jrand` is drawn, then one uniform
/// per gene. The result is not repaired.
pub fn de_rand_1(
    target_index: usize,
    population: &[Individual],
    neighborhood: &[usize],
    cfg: &DeOperatorConfig,
    engine: &mut RandomEngine,
) -> Result<DecisionVector> {
    let mut distinct = neighborhood.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Argument(format!(
            "DE needs at least 3 distinct neighbors, got {}",
            distinct.len()
        )));
    }
    if let Some(&bad) = neighborhood.iter().find(|&&i| i >= population.len()) {
        return Err(Error::Argument(format!("neighbor index {bad} outside population")));
    }
    let target = population
        .get(target_index)
        .ok_or_else(|| Error::Argument(format!("target index {target_index} outside population")))?;
    let mut picks = [0usize; 3];
    for k in 0..3 {
        loop {
            let c = neighborhood[engine.index(neighborhood.len())];
            if !picks[..k].contains(&c) {
                picks[k] = c;
                break;
            }
        }
    }
    let (a, b, c) = (&population[picks[0]].x, &population[picks[1]].x, &population[picks[2]].x);
    let n = target.x.len();
    check_len(n, a.len())?;
    let jrand = engine.index(n);
    let trial: Vec<f64> = (0..n)
        .map(|j| {
            let u = engine.next_f64();
            if u < cfg.crossover_rate || j == jrand {
                a[j] + cfg.scale_f * (b[j] - c[j])
            } else {
                target.x[j]
            }
        })
        .collect();
    Ok(trial.into())
}

/// Clamps every out-of-range gene to the bound it violates.
pub fn repair_to_bounds(x: &[f64], lower: &[f64], upper: &[f64]) -> Result<DecisionVector> {
    check_len(x.len(), lower.len())?;
    check_len(x.len(), upper.len())?;
    Ok(x.iter()
        .zip(lower.iter().zip(upper))
        .map(|(&v, (&lo, &hi))| v.max(lo).min(hi))
        .collect::<Vec<_>>()
        .into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ObjectiveVector;

    fn unit(n: usize) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; n], vec![1.0; n])
    }

    fn individual(x: Vec<f64>) -> Individual {
        Individual::new(x.into(), ObjectiveVector::new(vec![0.0, 0.0]))
    }

    #[test]
    fn sbx_identical_parents_are_copied() {
        let (lo, hi) = unit(4);
        let p = vec![0.1, 0.4, 0.9, 0.5];
        for seed in 0..20 {
            let (a, b) = sbx_crossover(&p, &p, &lo, &hi, &GaOperatorConfig::default(), &mut RandomEngine::new(seed)).unwrap();
            assert_eq!(a.as_slice(), p.as_slice());
            assert_eq!(b.as_slice(), p.as_slice());
        }
    }

    #[test]
    fn sbx_disabled_returns_parents() {
        let (lo, hi) = unit(3);
        let cfg = GaOperatorConfig { crossover_prob: 0.0, ..Default::default() };
        let (p1, p2) = (vec![0.1, 0.2, 0.3], vec![0.9, 0.8, 0.7]);
        let (a, b) = sbx_crossover(&p1, &p2, &lo, &hi, &cfg, &mut RandomEngine::new(3)).unwrap();
        assert_eq!(a.as_slice(), p1.as_slice());
        assert_eq!(b.as_slice(), p2.as_slice());
    }

    #[test]
    fn sbx_children_center_on_parent_midpoint() {
        let (lo, hi) = unit(1);
        let mut e = RandomEngine::new(11);
        let cfg = GaOperatorConfig::default();
        let mut sum = 0.0;
        let draws = 100_000;
        for _ in 0..draws / 2 {
            let (a, b) = sbx_crossover(&[0.3], &[0.7], &lo, &hi, &cfg, &mut e).unwrap();
            sum += a[0] + b[0];
        }
        assert!((sum / draws as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn pm_disabled_is_identity() {
        let (lo, hi) = unit(5);
        let x = vec![0.1, 0.2, 0.3, 0.4, 0.5];
        let y = polynomial_mutation(&x, &lo, &hi, 0.0, 20.0, &mut RandomEngine::new(0)).unwrap();
        assert_eq!(y.as_slice(), x.as_slice());
    }

    #[test]
    fn pm_at_lower_bound_moves_up_only() {
        let (lo, hi) = unit(1);
        let mut e = RandomEngine::new(5);
        let mut moved = 0;
        for _ in 0..10_000 {
            let y = polynomial_mutation(&[0.0], &lo, &hi, 1.0, 20.0, &mut e).unwrap();
            assert!(y[0] >= 0.0);
            if y[0] > 0.0 {
                moved += 1;
            }
        }
        assert!(moved > 1000);
    }

    #[test]
    fn pm_of_center_point_is_symmetric() {
        let (lo, hi) = unit(1);
        let mut e = RandomEngine::new(6);
        let draws = 100_000;
        let mut sum = 0.0;
        let (mut up, mut down) = (0usize, 0usize);
        for _ in 0..draws {
            let y = polynomial_mutation(&[0.5], &lo, &hi, 1.0, 20.0, &mut e).unwrap()[0];
            sum += y;
            if y > 0.5 {
                up += 1;
            } else if y < 0.5 {
                down += 1;
            }
        }
        assert!((sum / draws as f64 - 0.5).abs() < 0.01);
        assert!((up as f64 - down as f64).abs() / (draws as f64) < 0.01);
    }

    #[test]
    fn de_with_zero_scale_copies_the_base_vector() {
        let pop: Vec<Individual> = (0..5).map(|i| individual(vec![i as f64 * 0.1; 3])).collect();
        let cfg = DeOperatorConfig { scale_f: 1e-300, ..Default::default() };
        let mut e = RandomEngine::new(1);
        let mut probe = e.clone();
        let trial = de_rand_1(0, &pop, &[0, 1, 2, 3, 4], &cfg, &mut e).unwrap();
        let r1 = probe.index(5);
        assert_eq!(trial.as_slice(), pop[r1].x.as_slice());
    }

    #[test]
    fn de_on_identical_population_returns_the_common_vector() {
        let pop: Vec<Individual> = (0..4).map(|_| individual(vec![0.2, 0.7])).collect();
        let trial = de_rand_1(1, &pop, &[0, 1, 2, 3], &DeOperatorConfig::default(), &mut RandomEngine::new(9)).unwrap();
        assert_eq!(trial.as_slice(), &[0.2, 0.7]);
    }

    #[test]
    fn de_matches_single_step_oracle() {
        let mut g = RandomEngine::new(77);
        let pop: Vec<Individual> = (0..10).map(|_| individual((0..6).map(|_| g.next_f64()).collect())).collect();
        let hood = [2usize, 4, 5, 7, 9];
        let cfg = DeOperatorConfig { scale_f: 0.7, crossover_rate: 0.4, ..Default::default() };
        for seed in 0..50 {
            let mut e = RandomEngine::new(seed);
            let mut o = e.clone();
            let trial = de_rand_1(4, &pop, &hood, &cfg, &mut e).unwrap();

            let mut r = Vec::new();
            while r.len() < 3 {
                let c = hood[o.index(hood.len())];
                if !r.contains(&c) {
                    r.push(c);
                }
            }
            let jrand = o.index(6);
            for j in 0..6 {
                let u = o.next_f64();
                let expect = if u < 0.4 || j == jrand {
                    pop[r[0]].x[j] + 0.7 * (pop[r[1]].x[j] - pop[r[2]].x[j])
                } else {
                    pop[4].x[j]
                };
                assert_eq!(trial[j], expect);
            }
        }
    }

    #[test]
    fn de_rejects_small_neighborhoods() {
        let pop: Vec<Individual> = (0..4).map(|_| individual(vec![0.0])).collect();
        let r = de_rand_1(0, &pop, &[1, 2, 2], &DeOperatorConfig::default(), &mut RandomEngine::new(0));
        assert!(matches!(r, Err(Error::Argument(_))));
    }

    #[test]
    fn repair_examples() {
        let (lo, hi) = unit(2);
        assert_eq!(repair_to_bounds(&[-0.2, 0.5], &lo, &hi).unwrap().as_slice(), &[0.0, 0.5]);
        assert_eq!(repair_to_bounds(&[1.7, 0.5], &lo, &hi).unwrap().as_slice(), &[1.0, 0.5]);
        assert_eq!(repair_to_bounds(&[0.3, 0.9], &lo, &hi).unwrap().as_slice(), &[0.3, 0.9]);
    }

    #[test]
    fn repaired_outputs_stay_in_bounds_under_fuzzing() {
        let lo = vec![-1.0, 0.0, 2.0];
        let hi = vec![1.0, 0.5, 3.0];
        let mut e = RandomEngine::new(21);
        let ga = GaOperatorConfig::default();
        let de = DeOperatorConfig::default();
        let inside = |v: &[f64]| v.iter().zip(lo.iter().zip(&hi)).all(|(x, (a, b))| a <= x && x <= b);
        let mut on_bound = 0usize;
        for _ in 0..25_000 {
            let draw = |e: &mut RandomEngine| -> Vec<f64> { (0..3).map(|i| e.uniform(lo[i], hi[i]).unwrap()).collect() };
            let (p1, p2) = (draw(&mut e), draw(&mut e));
            let (a, b) = sbx_crossover(&p1, &p2, &lo, &hi, &ga, &mut e).unwrap();
            let a = polynomial_mutation(&a, &lo, &hi, 1.0 / 3.0, 20.0, &mut e).unwrap();
            assert!(inside(&a) && inside(&b));
            let pop: Vec<Individual> = (0..4).map(|_| individual(draw(&mut e))).collect();
            let t = de_rand_1(0, &pop, &[0, 1, 2, 3], &de, &mut e).unwrap();
            let t = repair_to_bounds(&t, &lo, &hi).unwrap();
            let t = polynomial_mutation(&t, &lo, &hi, 1.0 / 3.0, 20.0, &mut e).unwrap();
            assert!(inside(&t));
            on_bound += t.iter().zip(lo.iter().zip(&hi)).filter(|(x, (a, b))| *x == *a || *x == *b).count();
        }
        // clamping leaves genes exactly on the bounds
        assert!(on_bound > 0);
    }

    #[test]
    fn operators_replay_under_identical_engine_state() {
        let (lo, hi) = unit(4);
        let run = |seed| {
            let mut e = RandomEngine::new(seed);
            let (a, _) = sbx_crossover(&[0.1, 0.2, 0.3, 0.4], &[0.9, 0.1, 0.5, 0.6], &lo, &hi, &GaOperatorConfig::default(), &mut e).unwrap();
            polynomial_mutation(&a, &lo, &hi, 0.5, 20.0, &mut e).unwrap()
        };
        assert_eq!(run(8), run(8));
    }

    #[test]
    fn config_validation() {
        assert!(GaOperatorConfig::default().validate().is_ok());
        assert!(GaOperatorConfig { crossover_prob: 1.5, ..Default::default() }.validate().unwrap_err().is_config());
        assert!(GaOperatorConfig { sbx_eta: 0.0, ..Default::default() }.validate().is_err());
        assert!(DeOperatorConfig { scale_f: -1.0, ..Default::default() }.validate().is_err());
        assert_eq!(GaOperatorConfig::default().mutation_prob_for(12), 1.0 / 12.0);
    }
}
