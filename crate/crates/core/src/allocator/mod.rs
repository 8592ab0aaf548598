//! Time-slotted task allocation.
//!
//! [`sc_mdc_ta`] runs the quality-gated reverse auction: in every slot the
//! idle UAVs are matched against the open tasks by
//! [`quality_estimation`] → [`reverse_auction`] → [`resolve_slot`], repeated
//! until no further idle UAV can be matched. [`cd_mdc_ta`] is the
//! closest-distance baseline on the same simulation loop.

mod auction;
mod context;
mod matrix;
mod quality;
mod sim;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelError;
use crate::energy::EnergyError;
use crate::scenario::{Position, ScenarioError};

pub use auction::{resolve_slot, reverse_auction, Commit};
pub use context::{link_distance, SlotContext};
pub use matrix::MatchMatrix;
pub use quality::{
    check_gates, nearest_task, quality_estimation, reachable, GateCheck, QualityEstimate,
};
pub use sim::{cd_mdc_ta, run, sc_mdc_ta, Simulation, SlotOutcome, SlotSnapshot};

#[derive(Debug, Error)]
pub enum AllocError {
    #[error(transparent)]
    Config(#[from] ScenarioError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("task {task} is matched to more than one UAV after the auction")]
    ColumnConflict { task: usize },
    #[error(
        "slot ceiling of {max_slots} reached with {open_tasks} open tasks and {busy_uavs} busy UAVs"
    )]
    SlotCeiling {
        max_slots: u64,
        open_tasks: usize,
        busy_uavs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Quality estimation + reverse auction.
    Sc,
    /// Closest distance baseline.
    Cd,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Sc => "sc",
            Algorithm::Cd => "cd",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sc" => Ok(Algorithm::Sc),
            "cd" => Ok(Algorithm::Cd),
            other => Err(format!("unknown algorithm '{other}' (expected sc or cd)")),
        }
    }
}

/// One leg: fly from `depart_position` to the task, then hover while it transmits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub uav_id: usize,
    pub task_id: usize,
    pub slot: u64,
    /// Seconds since the start of the run at which the match was made.
    pub start_time: f64,
    pub depart_x: f64,
    pub depart_y: f64,
    pub depart_h: f64,
    pub travel_distance: f64,
    pub travel_time: f64,
    pub transmission_time: f64,
    pub extra_hover_time: f64,
    /// Transmission plus extra hover.
    pub hover_time: f64,
    pub wait_time: f64,
    pub leg_energy: f64,
    /// Granted by the nearest-task fallback, bypassing the quality gates.
    pub fallback: bool,
}

impl Assignment {
    pub fn depart_position(&self) -> Position {
        Position::new(self.depart_x, self.depart_y, self.depart_h)
    }

    /// Contribution of this leg to the UAV's completion time.
    pub fn duration(&self) -> f64 {
        self.travel_time + self.hover_time
    }
}

/// Final flight from the last served task (or the take-off point) back home.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnLeg {
    pub uav_id: usize,
    pub slot: u64,
    pub distance: f64,
    pub time: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    pub algorithm: Algorithm,
    /// All legs in commit order.
    pub assignments: Vec<Assignment>,
    /// One return leg per UAV, indexed by UAV id.
    pub returns: Vec<ReturnLeg>,
    /// Per-UAV completion time, seconds.
    pub completion_times: Vec<f64>,
    /// Per-UAV energy spent, joules.
    pub energies: Vec<f64>,
    /// Per-UAV energy left at the end, joules.
    pub remaining_energy: Vec<f64>,
    pub unserved_tasks: Vec<usize>,
    /// Mean completion time over all UAVs, seconds.
    pub objective: f64,
    pub slots: u64,
}

impl AllocationResult {
    /// Task ids in visiting order for UAV `uav`.
    pub fn route(&self, uav: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .filter(|a| a.uav_id == uav)
            .map(|a| a.task_id)
            .collect()
    }
}

/// Travel time to a task at distance `d`.
pub fn waiting_time(d: f64, v: f64) -> f64 {
    d / v
}

/// Inclusive deadline gate: arrive no later than the remaining valid time
/// minus the transmission time.
pub fn wait_feasible(wait: f64, remaining_valid: f64, transmission: f64) -> bool {
    wait <= remaining_valid - transmission
}

/// Mean of the per-UAV completion times. NaN for an empty fleet.
pub fn objective(completion_times: &[f64]) -> f64 {
    completion_times.iter().sum::<f64>() / completion_times.len() as f64
}
