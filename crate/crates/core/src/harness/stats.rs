use std::collections::{BTreeMap, BTreeSet};

use super::campaign::RunTrace;
use super::config::Aggregation;
use crate::error::{Error, Result};
use crate::problems::Suite;

/// Ascending ranks starting at 1; tied values share the mean of their ranks.
/// NaN sorts last.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Rows are problems, columns treatments; lower values are better.
/// Returns the per-problem midranks and their column means.
pub fn average_ranks(table: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let k = table
        .first()
        .map(|r| r.len())
        .ok_or_else(|| Error::IncompleteDesign("no problems to rank over".into()))?;
    if k == 0 {
        return Err(Error::IncompleteDesign("no treatments to rank".into()));
    }
    if let Some(i) = table.iter().position(|r| r.len() != k) {
        return Err(Error::IncompleteDesign(format!("row {i} has {} treatments, expected {k}", table[i].len())));
    }
    let ranks: Vec<Vec<f64>> = table.iter().map(|r| midranks(r)).collect();
    let avg = (0..k)
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / ranks.len() as f64)
        .collect();
    Ok((ranks, avg))
}

/// Problems entering a ranking: one suite, optionally one objective count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProblemGroup {
    pub suite: Suite,
    pub m: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankTable {
    pub group: ProblemGroup,
    pub checkpoint: usize,
    pub treatments: Vec<String>,
    /// `(problem, m)` of each row of `ranks`.
    pub problems: Vec<(String, usize)>,
    pub ranks: Vec<Vec<f64>>,
    pub average: Vec<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample standard deviation; 0 for a single value.
fn std_dev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mu = mean(v);
    (v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

type CellKey = ((String, usize), String);
/// Problem, checkpoint, treatment.
type SummaryKey = ((String, usize), usize, String);

/// IGD+-C values at `checkpoint`, keyed by problem and treatment.
fn cells_at<'a>(traces: impl Iterator<Item = &'a RunTrace>, checkpoint: usize) -> Result<BTreeMap<CellKey, Vec<f64>>> {
    let mut cells: BTreeMap<CellKey, Vec<f64>> = BTreeMap::new();
    for t in traces {
        let id = &t.identity;
        let rec = t.record_at(checkpoint).ok_or_else(|| {
            Error::IncompleteDesign(format!("{} has no record at checkpoint {checkpoint}", id.stem()))
        })?;
        cells
            .entry(((id.problem.clone(), id.m), id.treatment()))
            .or_default()
            .push(rec.igd_plus_c);
    }
    Ok(cells)
}

/// Ranks every treatment by mean IGD+-C on each problem of the group and
/// averages the ranks over the group.
pub fn friedman_average_ranks(traces: &[RunTrace], group: ProblemGroup, checkpoint: usize) -> Result<RankTable> {
    let selected = traces
        .iter()
        .filter(|t| t.identity.suite() == Some(group.suite) && group.m.is_none_or(|m| t.identity.m == m));
    let cells = cells_at(selected, checkpoint)?;
    let problems: Vec<(String, usize)> = cells.keys().map(|(p, _)| p.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let treatments: Vec<String> = cells.keys().map(|(_, t)| t.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    if problems.is_empty() {
        return Err(Error::IncompleteDesign(format!("no {} traces to rank", group.suite)));
    }
    let mut table = Vec::with_capacity(problems.len());
    for p in &problems {
        let row = treatments
            .iter()
            .map(|t| {
                cells
                    .get(&(p.clone(), t.clone()))
                    .map(|v| mean(v))
                    .ok_or_else(|| Error::IncompleteDesign(format!("{t} missing on {} m={}", p.0, p.1)))
            })
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    let (ranks, average) = average_ranks(&table)?;
    Ok(RankTable {
        group,
        checkpoint,
        treatments,
        problems,
        ranks,
        average,
    })
}

/// One line of the campaign summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub m: usize,
    pub treatment: String,
    pub checkpoint: usize,
    pub runs: usize,
    pub mean_igdpc: f64,
    pub std_igdpc: f64,
    /// Midrank of `mean_igdpc` among the treatments on this problem and checkpoint.
    pub rank: f64,
    pub e_ideal: f64,
    pub e_nadir: f64,
    pub ore: f64,
}

/// Per cell and checkpoint: IGD+-C mean and standard deviation over runs and
/// the aggregated estimator errors.
pub fn summarize(traces: &[RunTrace], aggregation: Aggregation) -> Vec<SummaryRow> {
    let agg = |v: &[f64]| match aggregation {
        Aggregation::Mean => mean(v),
        Aggregation::Median => median(v),
    };
    let mut groups: BTreeMap<SummaryKey, Vec<[f64; 4]>> = BTreeMap::new();
    for t in traces {
        for r in &t.records {
            groups
                .entry(((t.identity.problem.clone(), t.identity.m), r.checkpoint, t.identity.treatment()))
                .or_default()
                .push([r.igd_plus_c, r.e_ideal, r.e_nadir, r.ore]);
        }
    }
    let mut rows: Vec<SummaryRow> = groups
        .into_iter()
        .map(|(((problem, m), checkpoint, treatment), v)| {
            let col = |i: usize| v.iter().map(|r| r[i]).collect::<Vec<f64>>();
            let igd = col(0);
            SummaryRow {
                problem,
                m,
                treatment,
                checkpoint,
                runs: v.len(),
                mean_igdpc: mean(&igd),
                std_igdpc: std_dev(&igd),
                rank: 0.0,
                e_ideal: agg(&col(1)),
                e_nadir: agg(&col(2)),
                ore: agg(&col(3)),
            }
        })
        .collect();
    // rows of one (problem, m, checkpoint) are contiguous
    let mut start = 0;
    while start < rows.len() {
        let key = |r: &SummaryRow| (r.problem.clone(), r.m, r.checkpoint);
        let k = key(&rows[start]);
        let end = start + rows[start..].iter().take_while(|r| key(r) == k).count();
        let means: Vec<f64> = rows[start..end].iter().map(|r| r.mean_igdpc).collect();
        for (r, rank) in rows[start..end].iter_mut().zip(midranks(&means)) {
            r.rank = rank;
        }
        start = end;
    }
    rows
}
