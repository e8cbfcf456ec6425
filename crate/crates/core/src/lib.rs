//! Reference-point based evolutionary multi-objective optimization with
//! pluggable objective normalization.

pub mod algorithms;
pub mod error;
pub mod harness;
pub mod indicators;
pub mod lattice;
pub mod normalization;
pub mod problems;
pub mod ranking;
pub mod rng;
pub mod types;
pub mod variation;

pub use error::{Error, Result};
pub use rng::RandomEngine;
pub use types::{euclidean_distance, DecisionVector, Individual, ObjectiveVector};
