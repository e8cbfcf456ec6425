//! Per-run state and the generation loop.

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::moead::moead_nums_replacement;
use super::nsga::{nsga2_environmental_selection, r2nsga2_environmental_selection, rnsga2_environmental_selection, tournament};
use super::moead::normalized_reference;
use super::weights::{generate_uniform_weights, nums_shift, WeightSet};
use crate::error::{check_len, Error, Result};
use crate::normalization::{NormalizationKind, NormalizationState};
use crate::problems::Problem;
use crate::rng::RandomEngine;
use crate::types::{DecisionVector, Individual, ObjectiveVector};
use crate::variation::{de_rand_1, polynomial_mutation, repair_to_bounds, sbx_crossover};

/// Reference point and importance weights of the distance to it.
#[derive(Clone, Debug, PartialEq)]
pub struct Preference {
    pub z: ObjectiveVector,
    pub w: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Advanced { evaluations: usize },
    BudgetExhausted,
}

#[derive(Clone, Debug)]
struct Decomposition {
    weights: WeightSet,
    neighborhoods: Vec<Vec<usize>>,
}

/// Everything one run owns: population, estimator state and random stream.
#[derive(Clone, Debug)]
pub struct RunState {
    problem: Problem,
    cfg: AlgorithmConfig,
    pref: Preference,
    population: Vec<Individual>,
    norm: NormalizationState,
    engine: RandomEngine,
    evaluations: usize,
    budget: usize,
    generation: usize,
    decomposition: Option<Decomposition>,
}

impl RunState {
    /// Samples and evaluates the initial population and applies the first
    /// estimator update. NSGA-II ignores the reference point, so it may be
    /// omitted there.
    pub fn new(
        problem: Problem,
        cfg: AlgorithmConfig,
        normalization: NormalizationKind,
        reference_point: Option<ObjectiveVector>,
        budget: usize,
        mut engine: RandomEngine,
    ) -> Result<Self> {
        let m = problem.num_objectives();
        cfg.validate_for(m)?;
        let z = match reference_point {
            Some(z) => {
                check_len(m, z.len())?;
                z
            }
            None if cfg.name.uses_reference_point() => {
                return Err(Error::config("reference_point", format!("{} needs a reference point", cfg.name)));
            }
            None => ObjectiveVector::new(problem.true_ideal().to_vec()),
        };
        let pref = Preference {
            z,
            w: cfg.importance_weights(m),
        };
        let decomposition = if cfg.name == AlgorithmKind::MoeadNums {
            let weights = generate_uniform_weights(m, cfg.mu, &mut engine)?;
            let neighborhoods = weights.neighborhoods(cfg.neighborhood_t);
            Some(Decomposition { weights, neighborhoods })
        } else {
            None
        };
        let (lo, hi) = (problem.lower_bounds().to_vec(), problem.upper_bounds().to_vec());
        let population = (0..cfg.mu)
            .map(|_| {
                let x: Vec<f64> = lo.iter().zip(&hi).map(|(&a, &b)| engine.uniform_unchecked(a, b)).collect();
                let f = problem.evaluate(&x)?;
                Ok(Individual::new(x.into(), f))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut norm = NormalizationState::new(normalization, m);
        norm.update(&population, &[])?;
        let mut state = Self {
            problem,
            evaluations: population.len(),
            population,
            norm,
            engine,
            budget,
            generation: 0,
            decomposition,
            cfg,
            pref,
        };
        if state.decomposition.is_none() {
            state.population = state.select(&state.population.clone(), &[])?;
        }
        Ok(state)
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn config(&self) -> &AlgorithmConfig {
        &self.cfg
    }

    pub fn preference(&self) -> &Preference {
        &self.pref
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn normalization(&self) -> &NormalizationState {
        &self.norm
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Offspring produced per generation.
    pub fn lambda(&self) -> usize {
        self.cfg.mu
    }

    pub fn is_exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// One generation of the configured algorithm.
    pub fn step(&mut self) -> Result<StepOutcome> {
        if self.is_exhausted() {
            return Ok(StepOutcome::BudgetExhausted);
        }
        match self.cfg.name {
            AlgorithmKind::MoeadNums => self.moead_sweep()?,
            _ => self.nsga_generation()?,
        }
        self.generation += 1;
        Ok(StepOutcome::Advanced {
            evaluations: self.evaluations,
        })
    }

    fn evaluate(&mut self, x: DecisionVector) -> Result<Individual> {
        let f = self.problem.evaluate(&x)?;
        self.evaluations += 1;
        Ok(Individual::new(x, f))
    }

    fn select(&mut self, parents: &[Individual], offspring: &[Individual]) -> Result<Vec<Individual>> {
        match self.cfg.name {
            AlgorithmKind::Nsga2 => Ok(nsga2_environmental_selection(parents, offspring, self.cfg.mu)),
            AlgorithmKind::Rnsga2 => {
                rnsga2_environmental_selection(parents, offspring, &self.norm, &self.pref, &self.cfg, &mut self.engine)
            }
            AlgorithmKind::R2nsga2 => r2nsga2_environmental_selection(parents, offspring, &self.norm, &self.pref, &self.cfg),
            AlgorithmKind::MoeadNums => Err(Error::State("MOEA/D has no environmental selection".into())),
        }
    }

    fn nsga_generation(&mut self) -> Result<()> {
        let lo = self.problem.lower_bounds().to_vec();
        let hi = self.problem.upper_bounds().to_vec();
        let pm = self.cfg.ga.mutation_prob_for(lo.len());
        let lambda = self.lambda();
        let mut children = Vec::with_capacity(lambda + 1);
        while children.len() < lambda {
            let a = tournament(&self.population, self.cfg.name, &mut self.engine);
            let b = tournament(&self.population, self.cfg.name, &mut self.engine);
            let (c1, c2) = sbx_crossover(&self.population[a].x, &self.population[b].x, &lo, &hi, &self.cfg.ga, &mut self.engine)?;
            for c in [c1, c2] {
                children.push(polynomial_mutation(&c, &lo, &hi, pm, self.cfg.ga.pm_eta, &mut self.engine)?);
            }
        }
        children.truncate(lambda);
        let offspring = children
            .into_iter()
            .map(|x| self.evaluate(x))
            .collect::<Result<Vec<_>>>()?;
        self.norm.update(&self.population, &offspring)?;
        let parents = std::mem::take(&mut self.population);
        self.population = self.select(&parents, &offspring)?;
        Ok(())
    }

    fn moead_sweep(&mut self) -> Result<()> {
        let dec = self.decomposition.as_ref().expect("decomposition set for MOEA/D").clone();
        let lo = self.problem.lower_bounds().to_vec();
        let hi = self.problem.upper_bounds().to_vec();
        let pm = self.cfg.de.mutation_prob_for(lo.len());
        let zn = normalized_reference(&self.pref.z, &self.norm)?;
        let shifted = nums_shift(&dec.weights, &zn, self.cfg.tau)?;
        let mut trials = Vec::with_capacity(self.cfg.mu);
        for i in 0..self.cfg.mu {
            let hood = &dec.neighborhoods[i];
            let v = de_rand_1(i, &self.population, hood, &self.cfg.de, &mut self.engine)?;
            let v = repair_to_bounds(&v, &lo, &hi)?;
            let v = polynomial_mutation(&v, &lo, &hi, pm, self.cfg.de.pm_eta, &mut self.engine)?;
            let trial = self.evaluate(v)?;
            moead_nums_replacement(&trial, hood, &mut self.population, &shifted, &self.pref.z, &self.norm, &self.cfg)?;
            trials.push(trial);
        }
        self.norm.update(&self.population, &trials)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_problem;

    fn run(kind: AlgorithmKind, norm: NormalizationKind, problem: &str, m: usize, budget: usize, seed: u64) -> RunState {
        let p = make_problem(problem, m).unwrap();
        let z = ObjectiveVector::new(p.true_nadir().iter().zip(p.true_ideal().iter()).map(|(a, b)| 0.5 * (a + b)).collect());
        let cfg = AlgorithmConfig::new(kind);
        let mut s = RunState::new(p, cfg, norm, Some(z), budget, RandomEngine::new(seed)).unwrap();
        while s.step().unwrap() != StepOutcome::BudgetExhausted {}
        s
    }

    #[test]
    fn each_step_costs_lambda_evaluations() {
        for kind in AlgorithmKind::ALL {
            let p = make_problem("dtlz2", 3).unwrap();
            let cfg = AlgorithmConfig::new(kind);
            let mut s = RunState::new(p, cfg, NormalizationKind::Ba, Some(ObjectiveVector::new(vec![0.5; 3])), 1000, RandomEngine::new(1)).unwrap();
            assert_eq!(s.evaluations(), 100);
            for g in 1..=3 {
                assert_eq!(s.step().unwrap(), StepOutcome::Advanced { evaluations: 100 * (g + 1) });
                assert_eq!(s.population().len(), 100);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_a_no_op() {
        let s = run(AlgorithmKind::Rnsga2, NormalizationKind::Pp, "dtlz1", 2, 500, 3);
        assert_eq!(s.evaluations(), 500);
        let mut s2 = s.clone();
        assert_eq!(s2.step().unwrap(), StepOutcome::BudgetExhausted);
        assert_eq!(s2.evaluations(), 500);
    }

    #[test]
    fn replay_is_bit_exact() {
        for kind in AlgorithmKind::ALL {
            let a = run(kind, NormalizationKind::No, "dtlz2", 2, 2000, 9);
            let b = run(kind, NormalizationKind::No, "dtlz2", 2, 2000, 9);
            assert_eq!(a.population(), b.population());
            let c = run(kind, NormalizationKind::No, "dtlz2", 2, 2000, 10);
            assert_ne!(a.population(), c.population());
        }
    }

    #[test]
    fn cached_objectives_match_reevaluation() {
        for kind in AlgorithmKind::ALL {
            let s = run(kind, NormalizationKind::Ba, "sdtlz1", 3, 3000, 4);
            for ind in s.population() {
                assert_eq!(s.problem().evaluate(&ind.x).unwrap(), ind.f);
            }
        }
    }

    #[test]
    fn ideal_estimate_never_increases_under_best_so_far_kinds() {
        for norm in [NormalizationKind::Bp, NormalizationKind::Ba] {
            for kind in AlgorithmKind::ALL {
                let p = make_problem("dtlz3", 3).unwrap();
                let mut s = RunState::new(p, AlgorithmConfig::new(kind), norm, Some(ObjectiveVector::new(vec![0.4; 3])), 3000, RandomEngine::new(2)).unwrap();
                let mut prev = s.normalization().z_lb().clone();
                while s.step().unwrap() != StepOutcome::BudgetExhausted {
                    let cur = s.normalization().z_lb().clone();
                    assert!(cur.iter().zip(prev.iter()).all(|(a, b)| a <= b));
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn nsga2_spreads_over_the_dtlz2_front() {
        let s = run(AlgorithmKind::Nsga2, NormalizationKind::Pp, "dtlz2", 2, 50_000, 1);
        for i in 0..2 {
            let lo = s.population().iter().map(|p| p.f[i]).fold(f64::INFINITY, f64::min);
            let hi = s.population().iter().map(|p| p.f[i]).fold(f64::NEG_INFINITY, f64::max);
            assert!(lo < 0.05, "{lo}");
            assert!((hi - 1.0).abs() < 0.05, "{hi}");
        }
    }

    #[test]
    fn missing_reference_point_is_a_config_error() {
        let p = make_problem("dtlz2", 2).unwrap();
        let err = RunState::new(p.clone(), AlgorithmConfig::new(AlgorithmKind::Rnsga2), NormalizationKind::Ba, None, 100, RandomEngine::new(0)).unwrap_err();
        assert!(err.is_config());
        assert!(RunState::new(p, AlgorithmConfig::new(AlgorithmKind::Nsga2), NormalizationKind::Ba, None, 100, RandomEngine::new(0)).is_ok());
    }
}
