use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pbemo::harness::{
    execute_campaign, friedman_average_ranks, load_config, ExperimentConfig, read_traces, write_results, CampaignMeta, ProblemGroup,
    RankTable, RunTrace,
};
use pbemo::problems::{problem_names, Suite};
use pbemo::Error;

#[derive(Parser)]
#[command(name = "pbemo", version, about = "Reference-point EMO with pluggable normalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a campaign and write its results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long, env = "PBEMO_WORKERS")]
        workers: Option<usize>,
        /// Overrides the base seed of the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Average ranks of a finished campaign at one checkpoint.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        checkpoint: usize,
    },
    /// Names of the available problems.
    ListProblems,
    /// Parse and check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

/// An error and the exit code it maps to.
struct Failure(u8, Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(if e.is_config() { 1 } else { 2 }, e)
    }
}

/// Anything that stops the config from loading is the user's to fix.
fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    load_config(path).map_err(|e| Failure(1, e))
}

/// Every suite-wide table the traces support; incomplete designs are skipped.
fn rank_tables(traces: &[RunTrace], checkpoints: &[usize]) -> Vec<RankTable> {
    let mut suites: Vec<Suite> = traces.iter().filter_map(|t| t.identity.suite()).collect();
    suites.sort();
    suites.dedup();
    let mut out = Vec::new();
    for suite in suites {
        for &c in checkpoints {
            if let Ok(t) = friedman_average_ranks(traces, ProblemGroup { suite, m: None }, c) {
                out.push(t);
            }
        }
    }
    out
}

fn run(config: PathBuf, out: PathBuf, workers: Option<usize>, seed: Option<u64>) -> Result<(), Failure> {
    let mut cfg = load(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let outcome = execute_campaign(&cfg, workers)?;
    let tables = rank_tables(&outcome.traces, &cfg.checkpoint_grid());
    let failed = outcome.failures.len();
    for f in &outcome.failures {
        eprintln!("run failed: {}: {}", f.identity.stem(), f.message);
    }
    let meta = CampaignMeta::from_config(&cfg, outcome.failures)?;
    let manifest = write_results(&outcome.traces, &tables, &out, &meta)?;
    println!("{} traces, {} files written to {}", manifest.traces, manifest.files.len(), out.display());
    if failed > 0 {
        return Err(Failure(2, Error::State(format!("{failed} runs failed"))));
    }
    Ok(())
}

fn rank(input: PathBuf, suite: Suite, checkpoint: usize) -> Result<(), Failure> {
    let traces = read_traces(&input)?;
    let table = friedman_average_ranks(&traces, ProblemGroup { suite, m: None }, checkpoint)?;
    println!("treatment,average_rank");
    for (t, r) in table.treatments.iter().zip(&table.average) {
        println!("{t},{r}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run { config, out, workers, seed } => run(config, out, workers, seed),
        Command::Rank { input, suite, checkpoint } => rank(input, suite, checkpoint),
        Command::ListProblems => {
            for name in problem_names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::Validate { config } => load(&config).map(|cfg| {
            println!(
                "ok: {} problems, {} algorithms, {} normalizations, {} runs, checkpoints {:?}",
                cfg.problems.len(),
                cfg.algorithms.len(),
                cfg.normalizations.len(),
                cfg.runs,
                cfg.checkpoint_grid()
            );
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
