//! Experiment orchestration: configuration, seeded campaigns, result files
//! and average-rank statistics.

pub mod campaign;
pub mod config;
pub mod output;
pub mod refpoints;
pub mod stats;

pub use campaign::{
    execute_campaign, execute_run, CampaignOutcome, CheckpointRecord, IndicatorContext, RunFailure, RunIdentity, RunSpec,
    RunTrace,
};
pub use config::{default_checkpoints, load_config, Aggregation, ExperimentConfig, ProblemCell, ProblemEntry};
pub use output::{config_digest, read_traces, write_results, CampaignMeta, Manifest};
pub use refpoints::{bundled_reference_point, reconstruct_balanced, Provenance, ReferencePoint, ReferenceSetting};
pub use stats::{average_ranks, friedman_average_ranks, midranks, summarize, ProblemGroup, RankTable, SummaryRow};
