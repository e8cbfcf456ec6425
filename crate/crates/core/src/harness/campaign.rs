use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ProblemCell};
use crate::algorithms::{AlgorithmConfig, AlgorithmKind, RunState, StepOutcome};
use crate::error::{Error, Result};
use crate::indicators::{build_roi_reference_set, e_ideal, e_nadir, igd_plus_c, ore, RoiReferenceSet, TrueScaler};
use crate::normalization::NormalizationKind;
use crate::problems::{make_problem, sample_pf, Problem, Suite};
use crate::rng::RandomEngine;
use crate::types::ObjectiveVector;

/// Seed and stream of the front samples behind every ROI reference set.
const FRONT_SEED: u64 = 0xf0_5eed;
const FRONT_STREAM: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RunIdentity {
    pub problem: String,
    pub m: usize,
    pub algorithm: AlgorithmKind,
    pub normalization: NormalizationKind,
    pub run: usize,
    pub seed: u64,
}

impl RunIdentity {
    pub fn suite(&self) -> Option<Suite> {
        make_problem(&self.problem, self.m).ok().map(|p| p.suite())
    }

    /// `algorithm/normalization`, the unit being ranked.
    pub fn treatment(&self) -> String {
        format!("{}/{}", self.algorithm, self.normalization)
    }

    /// File stem shared by the trace and population files.
    pub fn stem(&self) -> String {
        format!(
            "{}_m{}__{}__{}__run{:03}",
            self.problem, self.m, self.algorithm, self.normalization, self.run
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub checkpoint: usize,
    /// Evaluations spent at the generation boundary where the record was taken.
    pub evaluations: usize,
    pub igd_plus_c: f64,
    pub e_ideal: f64,
    pub e_nadir: f64,
    pub ore: f64,
    pub z_lb: Vec<f64>,
    pub z_ub: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub identity: RunIdentity,
    pub records: Vec<CheckpointRecord>,
    pub final_population: Vec<ObjectiveVector>,
}

impl RunTrace {
    pub fn record_at(&self, checkpoint: usize) -> Option<&CheckpointRecord> {
        self.records.iter().find(|r| r.checkpoint == checkpoint)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub identity: RunIdentity,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct CampaignOutcome {
    pub traces: Vec<RunTrace>,
    pub failures: Vec<RunFailure>,
}

/// Ground truth needed to score one problem.
#[derive(Clone, Debug)]
pub struct IndicatorContext {
    pub scaler: TrueScaler,
    pub roi: RoiReferenceSet,
}

impl IndicatorContext {
    pub fn new(problem: &Problem, z: &[f64], radius: f64, samples: usize) -> Result<Self> {
        let scaler = TrueScaler::new(problem.true_ideal().clone(), problem.true_nadir().clone())?;
        let mut engine = RandomEngine::with_stream(FRONT_SEED, FRONT_STREAM);
        let front = sample_pf(problem, samples, &mut engine)?;
        let roi = build_roi_reference_set(&front, z, radius, &scaler)?;
        Ok(Self { scaler, roi })
    }
}

/// One run to execute.
#[derive(Clone, Debug)]
pub struct RunSpec<'a> {
    pub problem: &'a Problem,
    pub algorithm: &'a AlgorithmConfig,
    pub normalization: NormalizationKind,
    pub reference_point: &'a ObjectiveVector,
    pub budget: usize,
    pub checkpoints: &'a [usize],
    pub run: usize,
    pub seed: u64,
}

impl RunSpec<'_> {
    pub fn identity(&self) -> RunIdentity {
        RunIdentity {
            problem: self.problem.name(),
            m: self.problem.num_objectives(),
            algorithm: self.algorithm.name,
            normalization: self.normalization,
            run: self.run,
            seed: self.seed,
        }
    }
}

fn record(state: &RunState, checkpoint: usize, ctx: &IndicatorContext) -> Result<CheckpointRecord> {
    let norm = state.normalization();
    let objectives: Vec<&ObjectiveVector> = state.population().iter().map(|p| &p.f).collect();
    Ok(CheckpointRecord {
        checkpoint,
        evaluations: state.evaluations(),
        igd_plus_c: igd_plus_c(&objectives, &ctx.roi, &ctx.scaler)?,
        e_ideal: e_ideal(norm.z_lb(), &ctx.scaler)?,
        e_nadir: e_nadir(norm.z_ub(), &ctx.scaler)?,
        ore: ore(norm.z_lb(), norm.z_ub(), &ctx.scaler)?,
        z_lb: norm.z_lb().to_vec(),
        z_ub: norm.z_ub().to_vec(),
    })
}

/// Runs to the budget, recording at the first generation boundary whose
/// evaluation count reaches each checkpoint.
pub fn execute_run(spec: &RunSpec<'_>, ctx: &IndicatorContext) -> Result<RunTrace> {
    let z = spec.algorithm.name.uses_reference_point().then(|| spec.reference_point.clone());
    let mut state = RunState::new(
        spec.problem.clone(),
        spec.algorithm.clone(),
        spec.normalization,
        z,
        spec.budget,
        RandomEngine::new(spec.seed),
    )?;
    let mut records = Vec::with_capacity(spec.checkpoints.len());
    let mut pending = spec.checkpoints.iter().copied().peekable();
    loop {
        while let Some(&c) = pending.peek() {
            if state.evaluations() < c {
                break;
            }
            records.push(record(&state, c, ctx)?);
            pending.next();
        }
        if pending.peek().is_none() && state.is_exhausted() {
            break;
        }
        if state.step()? == StepOutcome::BudgetExhausted {
            if let Some(c) = pending.next() {
                return Err(Error::State(format!(
                    "budget of {} exhausted before checkpoint {c}",
                    spec.budget
                )));
            }
            break;
        }
    }
    Ok(RunTrace {
        identity: spec.identity(),
        records,
        final_population: state.population().iter().map(|p| p.f.clone()).collect(),
    })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "run panicked".into())
}

/// Every (problem, algorithm, normalization, run) combination, with run `r`
/// seeded by `seed + r`. Traces come back sorted by identity whatever the
/// completion order; failed runs are reported next to them.
pub fn execute_campaign(cfg: &ExperimentConfig, workers: usize) -> Result<CampaignOutcome> {
    cfg.validate()?;
    let cells: Vec<ProblemCell> = cfg.problem_cells()?;
    let checkpoints = cfg.checkpoint_grid();
    let contexts = cells
        .iter()
        .map(|c| IndicatorContext::new(&c.problem, &c.reference.z, cfg.roi_radius, cfg.pf_samples))
        .collect::<Result<Vec<_>>>()?;

    let mut jobs = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        for algorithm in &cfg.algorithms {
            for &normalization in &cfg.normalizations {
                for run in 0..cfg.runs {
                    let spec = RunSpec {
                        problem: &cell.problem,
                        algorithm,
                        normalization,
                        reference_point: &cell.reference.z,
                        budget: cfg.budget,
                        checkpoints: &checkpoints,
                        run,
                        seed: cfg.seed.wrapping_add(run as u64),
                    };
                    jobs.push((ci, spec));
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::State(format!("cannot start worker pool: {e}")))?;
    let results: Vec<std::result::Result<RunTrace, RunFailure>> = pool.install(|| {
        jobs.par_iter()
            .map(|(ci, spec)| {
                let outcome = catch_unwind(AssertUnwindSafe(|| execute_run(spec, &contexts[*ci])));
                let message = match outcome {
                    Ok(Ok(trace)) => return Ok(trace),
                    Ok(Err(e)) => e.to_string(),
                    Err(p) => panic_message(p),
                };
                Err(RunFailure {
                    identity: spec.identity(),
                    message,
                })
            })
            .collect()
    });

    let mut out = CampaignOutcome::default();
    for r in results {
        match r {
            Ok(t) => out.traces.push(t),
            Err(f) => out.failures.push(f),
        }
    }
    out.traces.sort_by(|a, b| a.identity.cmp(&b.identity));
    out.failures.sort_by(|a, b| a.identity.cmp(&b.identity));
    Ok(out)
}
