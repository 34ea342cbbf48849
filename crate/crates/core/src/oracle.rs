//! Independent oracles for cross-checking the checker and the
//! congruence machinery.
//!
//! Nothing here shares logic with the components under test:
//!
//! * [`enumerate_behaviours`] generates every behaviour up to a size
//!   bound, so sweeps are exhaustive rather than sampled;
//! * [`brute_force_outputs`] re-decides the typing judgment as a
//!   brute-force proof search with its own lookup, update and
//!   expression-typing code;
//! * [`exhaustive_congruence_search`] re-decides congruence by
//!   breadth-first search over elementary rewrites;
//! * [`inject_fault`] corrupts derivations the way buggy checkers
//!   would, to prove the verifier rejects them;
//! * [`run_selftest`] bundles the sweeps into the report behind the
//!   `selftest` command.

mod brute;
mod enumerate;
mod faults;
mod pools;
mod search;
mod suites;

pub use brute::{brute_force_check, brute_force_outputs};
pub use enumerate::{enumerate_behaviours, EnumConfig};
pub use faults::{inject_fault, FaultKind};
pub use pools::{comm_context_pool, context_pool, decl_pool, leaf_pool};
pub use search::{congruence_reach, exhaustive_congruence_search};
pub use suites::{run_selftest, SelftestConfig, SuiteReport, SuiteSection};
