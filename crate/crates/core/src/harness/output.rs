//! CSV and JSON persistence of campaign results.
//!
//! Layout of an output directory:
//!
//! ```text
//! manifest.json
//! summary.csv
//! ranks.csv
//! traces/<problem>_m<m>__<algorithm>__<normalization>__run<r>.csv
//! populations/<same stem>.csv
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a file back yields the exact values that were written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::campaign::{CheckpointRecord, RunFailure, RunIdentity, RunTrace};
use super::config::{Aggregation, ExperimentConfig};
use super::refpoints::Provenance;
use super::stats::{summarize, RankTable};
use crate::error::{Error, Result};
use crate::types::ObjectiveVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub problem: String,
    pub m: usize,
    pub z: Vec<f64>,
    pub provenance: Provenance,
}

/// Campaign facts recorded next to the results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignMeta {
    pub config_sha256: String,
    pub base_seed: u64,
    pub aggregation: Aggregation,
    pub reference_points: Vec<ReferenceEntry>,
    pub failures: Vec<RunFailure>,
}

impl CampaignMeta {
    pub fn from_config(cfg: &ExperimentConfig, failures: Vec<RunFailure>) -> Result<Self> {
        let reference_points = cfg
            .problem_cells()?
            .into_iter()
            .map(|c| ReferenceEntry {
                problem: c.problem.name(),
                m: c.problem.num_objectives(),
                z: c.reference.z.to_vec(),
                provenance: c.reference.provenance,
            })
            .collect();
        Ok(Self {
            config_sha256: config_digest(cfg),
            base_seed: cfg.seed,
            aggregation: cfg.aggregation,
            reference_points,
            failures,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub meta: CampaignMeta,
    pub seeds: Vec<u64>,
    pub traces: usize,
    pub files: Vec<FileEntry>,
}

/// SHA-256 of the canonical JSON form of the configuration.
pub fn config_digest(cfg: &ExperimentConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("config serializes");
    hex(&Sha256::digest(json))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

struct Table {
    rows: usize,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new<S: AsRef<[u8]>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { rows: 0, writer }
    }

    fn row<S: AsRef<[u8]>>(&mut self, fields: &[S]) {
        self.writer.write_record(fields).expect("in-memory write");
        self.rows += 1;
    }

    fn save(self, root: &Path, rel: &str, files: &mut Vec<FileEntry>) -> Result<()> {
        let bytes = self.writer.into_inner().map_err(|e| Error::State(e.to_string()))?;
        let path = root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
        files.push(FileEntry {
            path: rel.to_string(),
            rows: self.rows,
            sha256: hex(&Sha256::digest(&bytes)),
        });
        Ok(())
    }
}

fn trace_header(m: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "problem", "m", "algorithm", "normalization", "run", "seed", "checkpoint", "evaluations", "igd_plus_c",
        "e_ideal", "e_nadir", "ore",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend((1..=m).map(|i| format!("z_lb_{i}")));
    h.extend((1..=m).map(|i| format!("z_ub_{i}")));
    h
}

fn write_trace(t: &RunTrace, root: &Path, files: &mut Vec<FileEntry>) -> Result<()> {
    let id = &t.identity;
    let mut table = Table::new(&trace_header(id.m));
    for r in &t.records {
        let mut row = vec![
            id.problem.clone(),
            id.m.to_string(),
            id.algorithm.to_string(),
            id.normalization.to_string(),
            id.run.to_string(),
            id.seed.to_string(),
            r.checkpoint.to_string(),
            r.evaluations.to_string(),
            fmt_f(r.igd_plus_c),
            fmt_f(r.e_ideal),
            fmt_f(r.e_nadir),
            fmt_f(r.ore),
        ];
        row.extend(r.z_lb.iter().chain(&r.z_ub).map(|&v| fmt_f(v)));
        table.row(&row);
    }
    table.save(root, &format!("traces/{}.csv", id.stem()), files)?;

    let header: Vec<String> = (1..=id.m).map(|i| format!("f_{i}")).collect();
    let mut pop = Table::new(&header);
    for f in &t.final_population {
        pop.row(&f.iter().map(|&v| fmt_f(v)).collect::<Vec<_>>());
    }
    pop.save(root, &format!("populations/{}.csv", id.stem()), files)
}

/// Writes every artifact of a campaign under `out_dir` and returns the
/// manifest, which is also saved as `manifest.json`. With no traces only the
/// manifest is written.
pub fn write_results(traces: &[RunTrace], rank_tables: &[RankTable], out_dir: &Path, meta: &CampaignMeta) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::new();
    if !traces.is_empty() {
        let mut sorted: Vec<&RunTrace> = traces.iter().collect();
        sorted.sort_by(|a, b| a.identity.cmp(&b.identity));
        for t in &sorted {
            write_trace(t, out_dir, &mut files)?;
        }

        let mut summary = Table::new(&[
            "problem", "m", "treatment", "checkpoint", "runs", "mean_igdpc", "std_igdpc", "rank", "e_ideal", "e_nadir", "ore",
        ]);
        for r in summarize(traces, meta.aggregation) {
            summary.row(&[
                r.problem,
                r.m.to_string(),
                r.treatment,
                r.checkpoint.to_string(),
                r.runs.to_string(),
                fmt_f(r.mean_igdpc),
                fmt_f(r.std_igdpc),
                fmt_f(r.rank),
                fmt_f(r.e_ideal),
                fmt_f(r.e_nadir),
                fmt_f(r.ore),
            ]);
        }
        summary.save(out_dir, "summary.csv", &mut files)?;

        let mut ranks = Table::new(&["suite", "m", "checkpoint", "treatment", "average_rank", "problems"]);
        for t in rank_tables {
            for (name, avg) in t.treatments.iter().zip(&t.average) {
                ranks.row(&[
                    t.group.suite.to_string(),
                    t.group.m.map_or_else(|| "all".to_string(), |m| m.to_string()),
                    t.checkpoint.to_string(),
                    name.clone(),
                    fmt_f(*avg),
                    t.problems.len().to_string(),
                ]);
            }
        }
        ranks.save(out_dir, "ranks.csv", &mut files)?;
    }

    let mut seeds: Vec<u64> = traces.iter().map(|t| t.identity.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let manifest = Manifest {
        meta: meta.clone(),
        seeds,
        traces: traces.len(),
        files,
    };
    let path = out_dir.join("manifest.json");
    let mut json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::State(e.to_string()))?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn data_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Data {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn read_rows(path: &Path) -> Result<(csv::StringRecord, Vec<csv::StringRecord>)> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => data_err(path, format!("{other:?}")),
    })?;
    let header = reader.headers().map_err(|e| data_err(path, e.to_string()))?.clone();
    let rows = reader
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| data_err(path, e.to_string()))?;
    Ok((header, rows))
}

fn parse<T: std::str::FromStr>(path: &Path, row: &csv::StringRecord, i: usize) -> Result<T> {
    let s = row.get(i).ok_or_else(|| data_err(path, format!("missing column {i}")))?;
    s.parse().map_err(|_| data_err(path, format!("cannot parse `{s}` in column {i}")))
}

fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let p = entry.map_err(|e| Error::io(dir, e))?.path();
        if p.extension().is_some_and(|e| e == "csv") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn read_trace(path: &Path, populations: &Path) -> Result<RunTrace> {
    let (header, rows) = read_rows(path)?;
    let first = rows.first().ok_or_else(|| data_err(path, "no records"))?;
    let m: usize = parse(path, first, 1)?;
    if header.len() != 12 + 2 * m {
        return Err(data_err(path, format!("expected {} columns for m = {m}", 12 + 2 * m)));
    }
    let identity = RunIdentity {
        problem: first.get(0).unwrap_or_default().to_string(),
        m,
        algorithm: parse(path, first, 2)?,
        normalization: parse(path, first, 3)?,
        run: parse(path, first, 4)?,
        seed: parse(path, first, 5)?,
    };
    let records = rows
        .iter()
        .map(|r| {
            let vec_at = |from: usize| (from..from + m).map(|i| parse(path, r, i)).collect::<Result<Vec<f64>>>();
            Ok(CheckpointRecord {
                checkpoint: parse(path, r, 6)?,
                evaluations: parse(path, r, 7)?,
                igd_plus_c: parse(path, r, 8)?,
                e_ideal: parse(path, r, 9)?,
                e_nadir: parse(path, r, 10)?,
                ore: parse(path, r, 11)?,
                z_lb: vec_at(12)?,
                z_ub: vec_at(12 + m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pop_path = populations.join(path.file_name().unwrap_or_default());
    let final_population = if pop_path.exists() {
        let (_, rows) = read_rows(&pop_path)?;
        rows.iter()
            .map(|r| Ok(ObjectiveVector::new((0..m).map(|i| parse(&pop_path, r, i)).collect::<Result<Vec<f64>>>()?)))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(RunTrace {
        identity,
        records,
        final_population,
    })
}

/// Reads back every trace written by [`write_results`], sorted by identity.
pub fn read_traces(out_dir: &Path) -> Result<Vec<RunTrace>> {
    let dir = out_dir.join("traces");
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let populations = out_dir.join("populations");
    let mut traces = csv_files(&dir)?
        .iter()
        .map(|p| read_trace(p, &populations))
        .collect::<Result<Vec<_>>>()?;
    traces.sort_by(|a, b| a.identity.cmp(&b.identity));
    Ok(traces)
}
