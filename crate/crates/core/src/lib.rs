//! SET K-COVER partitioning for energy-efficient round-robin sensor scheduling.
//!
//! Sensors (subsets) are split into `k` covers that are activated one per time
//! slot. The objective counts, summed over all areas, how many covers monitor
//! each area. This crate holds the allocation-only core: the problem model,
//! the seeded instance generator, the randomized / distributed greedy /
//! centralized greedy partitioners, an exhaustive oracle for small instances,
//! and a slot-based message-passing simulator of the distributed protocol.
//!
//! All identifiers are 0-based in memory. The text formats in the `kcover`
//! crate translate them to 1-based ids.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
pub use error::Error;

pub mod algorithms;
pub mod generate;
pub mod instance;
pub mod longevity;
pub mod netsim;
pub mod oracle;
pub mod partition;
pub mod report;

pub use algorithms::{
    centralized_greedy_partition, distributed_greedy_partition, expected_randomized_objective,
    randomized_partition, Algorithm, AlgorithmOutcome, TraceEntry,
};
pub use generate::{generate_instance, generate_nested, SeedRng};
pub use instance::ProblemInstance;
pub use oracle::{exact_optimum, OracleBudget, OracleResult};
pub use partition::Partition;
pub use report::{evaluate, upper_bound, BoundKind, CoverageReport, UpperBound};

pub type Result<T, E = Error> = core::result::Result<T, E>;
