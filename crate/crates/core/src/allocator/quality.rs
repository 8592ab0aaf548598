use crate::channel;
use crate::energy;
use crate::geometry::in_coverage;
use crate::scenario::UavState;

use super::context::SlotContext;
use super::matrix::MatchMatrix;
use super::AllocError;

/// Output of the quality gate: the candidate matrix plus the idle UAVs that
/// have nothing left to do and should fly home.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityEstimate {
    pub matrix: MatchMatrix,
    pub retiring: Vec<usize>,
}

/// Per-pair gate results, kept for diagnostics and audits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCheck {
    pub in_coverage: bool,
    pub in_comm_range: bool,
    pub sinr: f64,
    pub sinr_ok: bool,
    pub leg_energy: f64,
    pub energy_ok: bool,
}

impl GateCheck {
    pub fn passes(&self) -> bool {
        self.in_coverage && self.in_comm_range && self.sinr_ok && self.energy_ok
    }
}

/// Evaluate the four quality gates for UAV `i` and task `j`.
pub fn check_gates(ctx: &SlotContext<'_>, i: usize, j: usize) -> Result<GateCheck, AllocError> {
    let cfg = ctx.config;
    let uav = ctx.uav(i);
    let task = ctx.task(j);
    let d0 = ctx.d0.get(i, j);
    let d = ctx.d.get(i, j);

    let g = task
        .antenna_gain
        .unwrap_or(cfg.channel.antenna_orientation_coeff);
    let sinr = channel::sinr_with(
        task.transmit_power,
        channel::clamp_distance(d),
        &cfg.channel,
        g,
        ctx.interference[i],
    )?;
    let leg = energy::leg_energy(d, uav.speed, task.service_time(), &cfg.power_model)?;
    let ret = energy::return_energy(d0, uav.speed, &cfg.power_model)?;

    Ok(GateCheck {
        in_coverage: in_coverage(d0, cfg.coverage_radius),
        in_comm_range: d <= cfg.comm_radius,
        sinr,
        sinr_ok: channel::sinr_feasible(sinr, cfg.channel.sinr_threshold),
        leg_energy: leg,
        energy_ok: energy::energy_feasible(leg, ret, uav.remaining_energy),
    })
}

/// Whether UAV `i` can fly to task `j`, serve it, and still make it home.
pub fn reachable(ctx: &SlotContext<'_>, i: usize, j: usize) -> Result<bool, AllocError> {
    let cfg = ctx.config;
    let uav = ctx.uav(i);
    let leg = energy::leg_energy(
        ctx.d.get(i, j),
        uav.speed,
        ctx.task(j).service_time(),
        &cfg.power_model,
    )?;
    let ret = energy::return_energy(ctx.d0.get(i, j), uav.speed, &cfg.power_model)?;
    Ok(energy::energy_feasible(leg, ret, uav.remaining_energy))
}

/// Build the candidate matrix for `idle` UAVs against `open` tasks.
///
/// A pair is a candidate when the task is inside the UAV's coverage disc,
/// within communication range, above the SINR threshold, and affordable with
/// enough energy left to return home. A UAV left with no candidate is given
/// its nearest open task as a fallback, provided that either some open task
/// still lies inside its own coverage (it is gated out for now) or some open
/// task is outside every active UAV's coverage and would otherwise be
/// stranded. Otherwise, or when the fallback target cannot be reached and
/// returned from, the UAV is reported as retiring.
pub fn quality_estimation(
    ctx: &SlotContext<'_>,
    idle: &[usize],
    open: &[usize],
) -> Result<QualityEstimate, AllocError> {
    let cfg = ctx.config;
    let mut matrix = MatchMatrix::new(ctx.uavs.len(), ctx.tasks.len());
    let mut retiring = Vec::new();
    if open.is_empty() {
        return Ok(QualityEstimate { matrix, retiring });
    }

    let active: Vec<usize> = (0..ctx.uavs.len())
        .filter(|&k| ctx.uav(k).state != UavState::Retired)
        .collect();
    let orphans_exist = open.iter().any(|&j| {
        active
            .iter()
            .all(|&k| !in_coverage(ctx.d0.get(k, j), cfg.coverage_radius))
    });

    for &i in idle {
        for &j in open {
            if check_gates(ctx, i, j)?.passes() {
                matrix.set(i, j, true);
            }
        }
        if matrix.row_count(i) > 0 {
            continue;
        }

        let own_coverage = open
            .iter()
            .any(|&j| in_coverage(ctx.d0.get(i, j), cfg.coverage_radius));
        if !own_coverage && !orphans_exist {
            retiring.push(i);
            continue;
        }
        let nearest = nearest_task(ctx, i, open);
        if reachable(ctx, i, nearest)? {
            matrix.set(i, nearest, true);
            matrix.set_fallback(i, true);
        } else {
            retiring.push(i);
        }
    }
    Ok(QualityEstimate { matrix, retiring })
}

/// Open task closest to UAV `i`'s current position; ties go to the lower task id.
pub fn nearest_task(ctx: &SlotContext<'_>, i: usize, open: &[usize]) -> usize {
    let mut best = open[0];
    for &j in &open[1..] {
        if ctx.d.get(i, j) < ctx.d.get(i, best) {
            best = j;
        }
    }
    best
}
