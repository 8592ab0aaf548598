//! Spatial-crowdsourcing task allocation for UAV-assisted maritime data
//! collection.
//!
//! The crate simulates a fleet of UAVs serving sea-surface data requesters
//! in discrete time slots. Two allocators share the same loop:
//!
//! * [`allocator::sc_mdc_ta`]: per-slot quality estimation (coverage,
//!   communication range, SINR, energy) followed by a reverse auction on
//!   task waiting time.
//! * [`allocator::cd_mdc_ta`]: every idle UAV takes its closest open task.
//!
//! [`scenario`] generates seeded instances, [`experiment`] runs the paired
//! sweeps and [`report`] aggregates and writes the results.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocator;
pub mod channel;
pub mod energy;
pub mod experiment;
pub mod geometry;
pub mod report;
pub mod scenario;

pub use allocator::{cd_mdc_ta, sc_mdc_ta, Algorithm, AllocationResult, Assignment};
pub use scenario::{generate_scenario, Scenario, ScenarioConfig};
