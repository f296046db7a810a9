//! Embedded SAT search: satisfiability, exhaustive model enumeration with
//! blocking clauses, randomized model sampling, and partial symmetry
//! breaking over node transpositions.

mod solver;
mod symmetry;

pub use solver::{
    enumerate, enumerate_chrono, sample, solve, EnumerationOutcome, SampleOutcome, SolverError,
};
pub use symmetry::add_symmetry_breaking;

/// Default conflict allowance per engine operation.
pub const DEFAULT_CONFLICT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    First,
    EnumerateAll,
    Sample,
}

/// Generation-control knobs; every output is a pure function of the CNF
/// and this configuration, seeds included.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub seed: u64,
    pub mode: SolveMode,
    pub max_models: Option<usize>,
    pub symmetry_breaking: bool,
    /// Randomized variable order and polarity, derived from `seed`.
    pub randomize: bool,
    pub conflict_budget: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seed: 0,
            mode: SolveMode::First,
            max_models: None,
            symmetry_breaking: false,
            randomize: false,
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
        }
    }
}

impl SolveConfig {
    pub fn enumerate_all() -> Self {
        SolveConfig { mode: SolveMode::EnumerateAll, ..Default::default() }
    }

    pub fn sampling(seed: u64) -> Self {
        SolveConfig { mode: SolveMode::Sample, seed, randomize: true, ..Default::default() }
    }
}
