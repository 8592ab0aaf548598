use crate::channel;
use crate::geometry::{self, DistanceMatrix};
use crate::scenario::{
    InterferenceMode, Position, ScenarioConfig, TaskRequest, UavAgent, UavState,
};

/// Everything the gates need to know about one time slot.
///
/// `uavs` and `tasks` are the live states at the start of the slot.
#[derive(Debug, Clone)]
pub struct SlotContext<'a> {
    pub config: &'a ScenarioConfig,
    pub uavs: &'a [UavAgent],
    pub tasks: &'a [TaskRequest],
    /// Seconds since the start of the run.
    pub elapsed: f64,
    /// Take-off point to task distances (`D0`).
    pub d0: DistanceMatrix,
    /// Current position to task distances (`D`).
    pub d: DistanceMatrix,
    /// Interference power seen by each UAV, watts.
    pub interference: Vec<f64>,
}

impl<'a> SlotContext<'a> {
    /// `serving[i]` is the task UAV `i` is currently busy with, if any.
    pub fn new(
        config: &'a ScenarioConfig,
        uavs: &'a [UavAgent],
        tasks: &'a [TaskRequest],
        elapsed: f64,
        serving: &[Option<usize>],
    ) -> Self {
        let dist = |a: &Position, b: &Position, h: f64| link_distance(config, a, b, h);
        let d0 = DistanceMatrix::from_fn(uavs.len(), tasks.len(), |i, j| {
            dist(
                &uavs[i].initial_position,
                &tasks[j].position,
                uavs[i].altitude,
            )
        });
        let d = DistanceMatrix::from_fn(uavs.len(), tasks.len(), |i, j| {
            dist(
                &uavs[i].current_position,
                &tasks[j].position,
                uavs[i].altitude,
            )
        });
        let interference = uavs
            .iter()
            .map(|u| {
                let base = config.channel.interference;
                match config.interference_mode {
                    InterferenceMode::Constant => base,
                    InterferenceMode::ActiveTransmitters => {
                        base + serving
                            .iter()
                            .enumerate()
                            .filter(|&(k, s)| k != u.id && s.is_some())
                            .filter(|&(k, _)| uavs[k].state == UavState::Busy)
                            .map(|(_, s)| {
                                let t = &tasks[s.expect("filtered")];
                                let r = channel::clamp_distance(dist(
                                    &u.current_position,
                                    &t.position,
                                    u.altitude,
                                ));
                                let g = t
                                    .antenna_gain
                                    .unwrap_or(config.channel.antenna_orientation_coeff);
                                t.transmit_power
                                    * channel::path_gain_with(r, config.channel.wavelength, g)
                                        .expect("clamped distance is positive")
                            })
                            .sum::<f64>()
                    }
                }
            })
            .collect();
        Self {
            config,
            uavs,
            tasks,
            elapsed,
            d0,
            d,
            interference,
        }
    }

    pub fn uav(&self, i: usize) -> &UavAgent {
        &self.uavs[i]
    }

    pub fn task(&self, j: usize) -> &TaskRequest {
        &self.tasks[j]
    }
}

/// UAV-to-requester distance under the configured range mode.
pub fn link_distance(
    config: &ScenarioConfig,
    uav: &Position,
    task: &Position,
    altitude: f64,
) -> f64 {
    let planar = geometry::realtime_distance(uav, task);
    if config.slant_range {
        geometry::slant(planar, altitude)
    } else {
        planar
    }
}
