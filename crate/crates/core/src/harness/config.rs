use std::path::Path;

use serde::{Deserialize, Serialize};

use super::refpoints::{bundled_reference_point, Provenance, ReferencePoint, ReferenceSetting};
use crate::algorithms::AlgorithmConfig;
use crate::error::{Error, Result};
use crate::normalization::NormalizationKind;
use crate::problems::{make_problem, Problem};
use crate::types::ObjectiveVector;

/// How per-run indicator values are combined in the summary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Mean,
    Median,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemEntry {
    pub name: String,
    pub m: usize,
    /// Replaces the bundled reference point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemEntry>,
    pub algorithms: Vec<AlgorithmConfig>,
    pub normalizations: Vec<NormalizationKind>,
    pub runs: usize,
    pub budget: usize,
    /// `None` selects the default grid cut at the budget.
    pub checkpoints: Option<Vec<usize>>,
    pub reference_setting: ReferenceSetting,
    pub roi_radius: f64,
    pub seed: u64,
    /// Size of the sampled Pareto front behind IGD+-C.
    pub pf_samples: usize,
    pub aggregation: Aggregation,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problems: Vec::new(),
            algorithms: Vec::new(),
            normalizations: NormalizationKind::ALL.to_vec(),
            runs: 31,
            budget: 50_000,
            checkpoints: None,
            reference_setting: ReferenceSetting::Balanced,
            roi_radius: 0.1,
            seed: 0,
            pf_samples: 10_000,
            aggregation: Aggregation::Mean,
        }
    }
}

/// 1000, 3000, 5000, 8000, 10000 and then every 5000 up to the budget.
pub fn default_checkpoints(budget: usize) -> Vec<usize> {
    let mut grid = vec![1000, 3000, 5000, 8000, 10_000];
    let mut c = 15_000;
    while c <= budget {
        grid.push(c);
        c += 5000;
    }
    grid.retain(|&c| c <= budget);
    grid
}

/// A configured problem with its resolved reference point.
#[derive(Clone, Debug)]
pub struct ProblemCell {
    pub problem: Problem,
    pub reference: ReferencePoint,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let field = e
                .span()
                .map(|s| locate_field(text, s.start))
                .unwrap_or_else(|| "<document>".into());
            Error::config(field, msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn checkpoint_grid(&self) -> Vec<usize> {
        self.checkpoints.clone().unwrap_or_else(|| default_checkpoints(self.budget))
    }

    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() {
            return Err(Error::config("problems", "at least one problem is required"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "at least one algorithm is required"));
        }
        if self.normalizations.is_empty() {
            return Err(Error::config("normalizations", "at least one normalization is required"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs", "must be at least 1"));
        }
        if self.budget == 0 {
            return Err(Error::config("budget", "must be positive"));
        }
        if !(self.roi_radius > 0.0) {
            return Err(Error::config("roi_radius", format!("must be positive, got {}", self.roi_radius)));
        }
        if self.pf_samples == 0 {
            return Err(Error::config("pf_samples", "must be positive"));
        }
        let grid = self.checkpoint_grid();
        if grid.is_empty() {
            return Err(Error::config("checkpoints", format!("no checkpoint fits in a budget of {}", self.budget)));
        }
        if grid[0] == 0 {
            return Err(Error::config("checkpoints[0]", "must be positive"));
        }
        if let Some(i) = grid.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::config(format!("checkpoints[{}]", i + 1), "checkpoints must be strictly ascending"));
        }
        if *grid.last().unwrap() > self.budget {
            return Err(Error::config(
                format!("checkpoints[{}]", grid.len() - 1),
                format!("exceeds the budget of {}", self.budget),
            ));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            a.validate().map_err(|e| prefix(e, &format!("algorithms[{i}]")))?;
        }
        let cells = self.problem_cells()?;
        for (i, cell) in cells.iter().enumerate() {
            for (j, a) in self.algorithms.iter().enumerate() {
                a.validate_for(cell.problem.num_objectives())
                    .map_err(|e| prefix(e, &format!("algorithms[{j}] (with problems[{i}])")))?;
            }
        }
        Ok(())
    }

    /// Builds every configured problem and resolves its reference point.
    pub fn problem_cells(&self) -> Result<Vec<ProblemCell>> {
        let mut seen = std::collections::HashSet::new();
        self.problems
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let field = format!("problems[{i}]");
                let problem = make_problem(&entry.name, entry.m).map_err(|e| Error::config(&field, e.to_string()))?;
                if !seen.insert(problem.id()) {
                    return Err(Error::config(field, format!("{} listed twice", problem.id())));
                }
                let reference = match &entry.reference_point {
                    Some(z) => {
                        if z.len() != entry.m || z.iter().any(|v| !v.is_finite()) {
                            return Err(Error::config(
                                format!("{field}.reference_point"),
                                format!("expected {} finite values", entry.m),
                            ));
                        }
                        ReferencePoint {
                            z: ObjectiveVector::new(z.clone()),
                            provenance: Provenance::Override,
                        }
                    }
                    None => bundled_reference_point(&problem, self.reference_setting)
                        .map_err(|e| prefix(e, &field))?,
                };
                Ok(ProblemCell { problem, reference })
            })
            .collect()
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::from_toml_str(&text)
}

fn prefix(e: Error, at: &str) -> Error {
    match e {
        Error::Config { field, message } => Error::config(format!("{at}.{field}"), message),
        other => Error::config(at, other.to_string()),
    }
}

/// Best-effort dotted path of the key whose value starts at `offset`.
fn locate_field(text: &str, offset: usize) -> String {
    let mut table = String::new();
    let mut counts: std::collections::HashMap<String, usize> = Default::default();
    let mut key = String::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let t = line.trim();
        if pos > offset {
            break;
        }
        if let Some(name) = t.strip_prefix("[[").and_then(|s| s.strip_suffix("]]")) {
            let name = name.trim().to_string();
            let n = counts.entry(name.clone()).or_insert(0);
            table = format!("{name}[{n}]");
            *n += 1;
            key.clear();
        } else if let Some(name) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            table = name.trim().to_string();
            key.clear();
        } else if let Some((k, _)) = t.split_once('=') {
            key = k.trim().to_string();
        }
        pos += line.len();
    }
    match (table.is_empty(), key.is_empty()) {
        (true, true) => "<document>".into(),
        (true, false) => key,
        (false, true) => table,
        (false, false) => format!("{table}.{key}"),
    }
}
