//! Running configurations, generating terms, and the empirical checks
//! relating the two semantics.

mod generate;
mod lemma;
mod oracle;
mod sim;
mod theorem;

pub use generate::{dual, generate_pair, generate_tst, widen, GenConfig, GenConfigError};
pub use lemma::{
    check_propositions, check_simulation, propositions_suite, random_sync_config, simulation_suite, Failure,
    SuiteReport,
};
pub use oracle::{discretized_oracle, OracleError, OracleResult};
pub use sim::{
    parse_script, replay, sample_delays, simulate, DelayPolicy, Run, ScriptParseError, ScriptStep, Scheduler,
    SimulateError, Status,
};
pub use theorem::{check_pair, pair_seed, run_pair, theorem_harness, Counts, PairRecord, Report};

#[cfg(test)]
mod tests;
