use crate::energy;
use crate::scenario::{Position, Scenario, TaskRequest, TaskState, UavAgent, UavState};

use super::auction::{resolve_slot, reverse_auction, Commit};
use super::context::{link_distance, SlotContext};
use super::quality::{quality_estimation, reachable};
use super::{
    objective, waiting_time, Algorithm, AllocError, AllocationResult, Assignment, ReturnLeg,
};

/// Live state at the start of a slot, as seen by the matching step.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotSnapshot {
    pub slot: u64,
    pub elapsed: f64,
    pub uavs: Vec<UavAgent>,
    pub tasks: Vec<TaskRequest>,
    /// Task each busy UAV is currently serving.
    pub serving: Vec<Option<usize>>,
}

/// Matching decisions taken in one slot, in the order they were made.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotOutcome {
    pub slot: u64,
    pub commits: Vec<Commit>,
    pub retired: Vec<usize>,
}

/// Slot-by-slot driver shared by both algorithms.
#[derive(Debug)]
pub struct Simulation<'a> {
    scenario: &'a Scenario,
    algorithm: Algorithm,
    uavs: Vec<UavAgent>,
    tasks: Vec<TaskRequest>,
    busy_until: Vec<f64>,
    serving: Vec<Option<usize>>,
    last_task: Vec<Option<usize>>,
    slot: u64,
    assignments: Vec<Assignment>,
    returns: Vec<Option<ReturnLeg>>,
    done: bool,
}

impl<'a> Simulation<'a> {
    pub fn new(scenario: &'a Scenario, algorithm: Algorithm) -> Result<Self, AllocError> {
        scenario.config.ensure_valid()?;
        let m = scenario.uavs.len();
        let tasks = scenario.tasks.clone();
        let mut sim = Self {
            scenario,
            algorithm,
            uavs: scenario.uavs.clone(),
            done: tasks.is_empty(),
            tasks,
            busy_until: vec![0.0; m],
            serving: vec![None; m],
            last_task: vec![None; m],
            slot: 0,
            assignments: Vec::new(),
            returns: vec![None; m],
        };
        for u in &mut sim.uavs {
            u.current_position = u.initial_position;
            u.state = UavState::Idle;
            u.assignment_log.clear();
        }
        for t in &mut sim.tasks {
            t.state = TaskState::Unexecuted;
        }
        Ok(sim)
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    fn elapsed(&self) -> f64 {
        self.slot as f64 * self.scenario.config.slot_duration
    }

    pub fn snapshot(&self) -> SlotSnapshot {
        SlotSnapshot {
            slot: self.slot,
            elapsed: self.elapsed(),
            uavs: self.uavs.clone(),
            tasks: self.tasks.clone(),
            serving: self.serving.clone(),
        }
    }

    /// Run one slot: match idle UAVs to open tasks until nothing more can
    /// be matched, then advance the clock.
    pub fn step(&mut self) -> Result<SlotOutcome, AllocError> {
        let mut outcome = SlotOutcome {
            slot: self.slot,
            ..SlotOutcome::default()
        };
        if self.done {
            return Ok(outcome);
        }
        let cfg = &self.scenario.config;
        if self.slot >= cfg.max_slots {
            return Err(AllocError::SlotCeiling {
                max_slots: cfg.max_slots,
                open_tasks: self.open_tasks().len(),
                busy_uavs: self.count(UavState::Busy),
            });
        }

        let elapsed = self.elapsed();
        let mut idle = self.ids_in(UavState::Idle);
        let mut open = self.open_tasks();
        while !idle.is_empty() && !open.is_empty() {
            let (commits, retiring) = {
                let ctx = SlotContext::new(cfg, &self.uavs, &self.tasks, elapsed, &self.serving);
                match self.algorithm {
                    Algorithm::Sc => sc_round(&ctx, &idle, &open)?,
                    Algorithm::Cd => cd_round(&ctx, &idle, &open)?,
                }
            };
            for &i in &retiring {
                self.retire(i)?;
                idle.retain(|&k| k != i);
            }
            let retired_any = !retiring.is_empty();
            outcome.retired.extend(retiring);
            if commits.is_empty() {
                if retired_any {
                    continue;
                }
                break;
            }
            for c in &commits {
                self.commit(c, elapsed)?;
                idle.retain(|&k| k != c.uav);
                open.retain(|&j| j != c.task);
            }
            outcome.commits.extend(commits);
        }

        let stalled = outcome.commits.is_empty()
            && outcome.retired.is_empty()
            && self.count(UavState::Busy) == 0;
        self.slot += 1;
        let now = self.elapsed();
        for i in 0..self.uavs.len() {
            if self.uavs[i].state == UavState::Busy && self.busy_until[i] <= now {
                self.uavs[i].state = UavState::Idle;
                self.serving[i] = None;
            }
        }
        if stalled
            || self.open_tasks().is_empty()
            || self.count(UavState::Retired) == self.uavs.len()
        {
            self.done = true;
        }
        Ok(outcome)
    }

    /// Bring every UAV still out home and assemble the result.
    pub fn finish(mut self) -> Result<AllocationResult, AllocError> {
        for i in 0..self.uavs.len() {
            if self.uavs[i].state != UavState::Retired {
                self.retire(i)?;
            }
        }
        let m = self.uavs.len();
        let mut completion_times = vec![0.0; m];
        let mut energies = vec![0.0; m];
        for a in &self.assignments {
            completion_times[a.uav_id] += a.duration();
            energies[a.uav_id] += a.leg_energy;
        }
        let returns: Vec<ReturnLeg> = self
            .returns
            .into_iter()
            .map(|r| r.expect("every UAV returned"))
            .collect();
        for r in &returns {
            completion_times[r.uav_id] += r.time;
            energies[r.uav_id] += r.energy;
        }
        let unserved_tasks = self
            .tasks
            .iter()
            .filter(|t| t.state == TaskState::Unexecuted)
            .map(|t| t.id)
            .collect();
        Ok(AllocationResult {
            algorithm: self.algorithm,
            assignments: self.assignments,
            returns,
            objective: objective(&completion_times),
            completion_times,
            energies,
            remaining_energy: self.uavs.iter().map(|u| u.remaining_energy).collect(),
            unserved_tasks,
            slots: self.slot,
        })
    }

    fn ids_in(&self, state: UavState) -> Vec<usize> {
        self.uavs
            .iter()
            .filter(|u| u.state == state)
            .map(|u| u.id)
            .collect()
    }

    fn count(&self, state: UavState) -> usize {
        self.uavs.iter().filter(|u| u.state == state).count()
    }

    fn open_tasks(&self) -> Vec<usize> {
        self.tasks
            .iter()
            .filter(|t| t.state == TaskState::Unexecuted)
            .map(|t| t.id)
            .collect()
    }

    fn commit(&mut self, c: &Commit, elapsed: f64) -> Result<(), AllocError> {
        let cfg = &self.scenario.config;
        let task = &self.tasks[c.task];
        let uav = &self.uavs[c.uav];
        let depart = uav.current_position;
        let d = link_distance(cfg, &depart, &task.position, uav.altitude);
        let travel_time = waiting_time(d, uav.speed);
        let hover_time = task.service_time();
        let leg = energy::leg_energy(d, uav.speed, hover_time, &cfg.power_model)?;
        self.assignments.push(Assignment {
            uav_id: c.uav,
            task_id: c.task,
            slot: self.slot,
            start_time: elapsed,
            depart_x: depart.x,
            depart_y: depart.y,
            depart_h: depart.h,
            travel_distance: d,
            travel_time,
            transmission_time: task.transmission_time,
            extra_hover_time: task.extra_hover_time,
            hover_time,
            wait_time: travel_time,
            leg_energy: leg,
            fallback: c.fallback,
        });

        let target = Position::new(task.position.x, task.position.y, uav.altitude);
        let uav = &mut self.uavs[c.uav];
        uav.remaining_energy -= leg;
        uav.current_position = target;
        uav.state = UavState::Busy;
        uav.assignment_log.push(c.task);
        self.busy_until[c.uav] = elapsed + travel_time + hover_time;
        self.serving[c.uav] = Some(c.task);
        self.last_task[c.uav] = Some(c.task);
        self.tasks[c.task].state = TaskState::Executed;
        Ok(())
    }

    fn retire(&mut self, i: usize) -> Result<(), AllocError> {
        let cfg = &self.scenario.config;
        let uav = &self.uavs[i];
        let distance = match self.last_task[i] {
            Some(j) => link_distance(
                cfg,
                &uav.initial_position,
                &self.tasks[j].position,
                uav.altitude,
            ),
            None => 0.0,
        };
        let time = energy::return_time(distance, uav.speed);
        let energy = energy::return_energy(distance, uav.speed, &cfg.power_model)?;
        self.returns[i] = Some(ReturnLeg {
            uav_id: i,
            slot: self.slot,
            distance,
            time,
            energy,
        });
        let uav = &mut self.uavs[i];
        uav.remaining_energy -= energy;
        uav.current_position = uav.initial_position;
        uav.state = UavState::Retired;
        self.serving[i] = None;
        Ok(())
    }
}

fn sc_round(
    ctx: &SlotContext<'_>,
    idle: &[usize],
    open: &[usize],
) -> Result<(Vec<Commit>, Vec<usize>), AllocError> {
    let estimate = quality_estimation(ctx, idle, open)?;
    let bidders: Vec<usize> = idle
        .iter()
        .copied()
        .filter(|i| !estimate.retiring.contains(i))
        .collect();
    let matrix = reverse_auction(ctx, estimate.matrix, &bidders, open);
    let commits = resolve_slot(&matrix, &ctx.d, &bidders)?;
    Ok((commits, estimate.retiring))
}

fn cd_round(
    ctx: &SlotContext<'_>,
    idle: &[usize],
    open: &[usize],
) -> Result<(Vec<Commit>, Vec<usize>), AllocError> {
    let mut retiring = Vec::new();
    let mut proposals = Vec::new();
    for &i in idle {
        let mut best: Option<usize> = None;
        for &j in open {
            if !reachable(ctx, i, j)? {
                continue;
            }
            if best.is_none_or(|b| ctx.d.get(i, j) < ctx.d.get(i, b)) {
                best = Some(j);
            }
        }
        match best {
            Some(j) => proposals.push((i, j)),
            None => retiring.push(i),
        }
    }
    let wins = |&(i, j): &(usize, usize)| {
        proposals
            .iter()
            .all(|&(k, t)| t != j || k == i || (ctx.d.get(i, j), i) < (ctx.d.get(k, j), k))
    };
    let commits = proposals
        .iter()
        .filter(|p| wins(p))
        .map(|&(uav, task)| Commit {
            uav,
            task,
            fallback: false,
        })
        .collect();
    Ok((commits, retiring))
}

/// Run `algorithm` on `scenario` to completion.
pub fn run(scenario: &Scenario, algorithm: Algorithm) -> Result<AllocationResult, AllocError> {
    let mut sim = Simulation::new(scenario, algorithm)?;
    while !sim.is_done() {
        sim.step()?;
    }
    sim.finish()
}

/// Quality-gated reverse-auction allocation.
pub fn sc_mdc_ta(scenario: &Scenario) -> Result<AllocationResult, AllocError> {
    run(scenario, Algorithm::Sc)
}

/// Closest-distance baseline: every idle UAV takes its nearest open task.
pub fn cd_mdc_ta(scenario: &Scenario) -> Result<AllocationResult, AllocError> {
    run(scenario, Algorithm::Cd)
}
