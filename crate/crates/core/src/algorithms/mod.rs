//! NSGA-II, R-NSGA-II, r-NSGA-II and MOEA/D-NUMS.

mod config;
mod moead;
mod nsga;
mod run;
mod scalarize;
mod weights;

pub use config::{AlgorithmConfig, AlgorithmKind};
pub use moead::{aasf_coefficients, moead_nums_replacement, normalized_reference};
pub use nsga::{nsga2_environmental_selection, r2nsga2_environmental_selection, rnsga2_environmental_selection};
pub use run::{Preference, RunState, StepOutcome};
pub use scalarize::{aasf, weighted_distance_dr};
pub use weights::{generate_uniform_weights, nums_shift, simplex_pivot, WeightSet};
