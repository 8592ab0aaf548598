//! Acceptance criteria as reusable checks. Each returns a short detail line
//! on success or the list of failures.

use std::f64::consts::PI;
use std::path::Path;

use mdc_core::allocator::{
    objective, quality_estimation, resolve_slot, reverse_auction, run, wait_feasible, waiting_time,
    Algorithm, AllocError, AllocationResult, MatchMatrix, Simulation, SlotContext,
};
use mdc_core::channel::{feasibility_radius, path_gain_with, sinr, sinr_feasible, sinr_with};
use mdc_core::energy::{energy_feasible, leg_energy, propulsion_power, return_energy, return_time};
use mdc_core::experiment::{run_all, run_family, Family};
use mdc_core::geometry::{in_coverage, initial_distance, realtime_distance, DistanceMatrix};
use mdc_core::report::{self, collect_metrics, compare, SweepSummary};
use mdc_core::scenario::{
    generate_scenario, grid_shape, sample_hover, ChannelParams, HoverPolicy, Position, PowerModel,
    Scenario, ScenarioConfig, TakeoffPlacement, TaskDistribution, TaskRequest, TaskState, UavAgent,
    UavState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{oracle_metrics, oracle_run, oracle_step, Mode};
use super::{analytic_model, audit_seeds, default_config, rel_close, small_instance};

pub type Outcome = Result<String, Vec<String>>;

pub const FORMULA_TOL: f64 = 1e-9;
pub const CONSERVATION_TOL: f64 = 1e-9;
pub const ORACLE_INSTANCES: u64 = 1000;
pub const TREND_SEEDS: usize = 30;

#[derive(Default)]
struct Checks {
    count: usize,
    failed: Vec<String>,
}

impl Checks {
    fn ok(&mut self, name: &str, cond: bool) {
        self.count += 1;
        if !cond {
            self.failed.push(name.to_owned());
        }
    }

    fn close(&mut self, name: &str, got: f64, want: f64) {
        self.count += 1;
        if !rel_close(got, want, FORMULA_TOL) {
            self.failed.push(format!("{name}: got {got}, want {want}"));
        }
    }

    fn finish(self, what: &str) -> Outcome {
        if self.failed.is_empty() {
            Ok(format!("{} {what} checks", self.count))
        } else {
            Err(self.failed)
        }
    }
}

/// Scenario from explicit surface points. Every task transmits 0.1 W for
/// 10 s, stays valid for 600 s and needs no extra hover.
pub fn tiny(uavs: &[(f64, f64)], tasks: &[(f64, f64)]) -> Scenario {
    let config = ScenarioConfig::paper_default();
    let tasks = tasks
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| TaskRequest {
            id,
            position: Position::surface(x, y),
            transmit_power: 0.1,
            transmission_time: 10.0,
            remaining_valid_time: 600.0,
            extra_hover_time: 0.0,
            antenna_gain: None,
            state: TaskState::Unexecuted,
        })
        .collect();
    let uavs = uavs
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| {
            let p = Position::surface(x, y);
            UavAgent {
                id,
                initial_position: p,
                current_position: p,
                speed: 25.0,
                altitude: config.uav_altitude,
                remaining_energy: config.uav_initial_energy,
                state: UavState::Idle,
                assignment_log: Vec::new(),
            }
        })
        .collect();
    Scenario::from_parts(config, tasks, uavs).unwrap()
}

fn ctx_for(s: &Scenario) -> SlotContext<'_> {
    SlotContext::new(&s.config, &s.uavs, &s.tasks, 0.0, &vec![None; s.uavs.len()])
}

/// Criterion 1: every worked example of the formula layer.
pub fn formula_suite() -> Outcome {
    let mut c = Checks::default();
    scenario_examples(&mut c);
    geometry_examples(&mut c);
    channel_examples(&mut c);
    energy_examples(&mut c);
    allocator_examples(&mut c);
    report_examples(&mut c);
    oracle_examples(&mut c);
    c.finish("worked-example")
}

fn scenario_examples(c: &mut Checks) {
    let mut cfg = default_config(7);
    let a = generate_scenario(&cfg).unwrap();
    let b = generate_scenario(&cfg).unwrap();
    let coords = |s: &Scenario| s.tasks.iter().map(|t| t.position).collect::<Vec<_>>();
    c.ok(
        "seed 7 twice gives identical coordinates",
        coords(&a) == coords(&b),
    );

    cfg.n_tasks = 49;
    cfg.task_distribution = TaskDistribution::Uniform;
    let g = generate_scenario(&cfg).unwrap();
    c.ok("49 tasks form a 7x7 grid", grid_shape(49) == (7, 7));
    let spacing = 1500.0 / 7.0;
    c.close(
        "grid spacing along x",
        g.tasks[1].position.x - g.tasks[0].position.x,
        spacing,
    );
    c.close(
        "grid spacing along y",
        g.tasks[7].position.y - g.tasks[0].position.y,
        spacing,
    );
    c.close("first cell center", g.tasks[0].position.x, spacing / 2.0);

    cfg.task_distribution = TaskDistribution::Clustered { k: 1, spread: 0.0 };
    let cl = generate_scenario(&cfg).unwrap();
    let p0 = cl.tasks[0].position;
    c.ok(
        "single cluster with zero spread collapses to its center",
        cl.tasks.iter().all(|t| t.position == p0),
    );

    let area = cfg.area();
    let center = mdc_core::scenario::takeoff_positions(&TakeoffPlacement::Center, 4, area);
    c.ok(
        "center take-off puts all UAVs at the midpoint",
        center.iter().all(|p| p.x == 750.0 && p.y == 750.0),
    );
    let corners = [(0.0, 0.0), (1500.0, 0.0), (1500.0, 1500.0), (0.0, 1500.0)];
    let near = |p: &Position, k: usize| {
        let (x, y) = corners[k];
        (p.x - x).abs() <= 1.0 && (p.y - y).abs() <= 1.0
    };
    let four = mdc_core::scenario::takeoff_positions(&TakeoffPlacement::Corners, 4, area);
    c.ok(
        "four UAVs take one corner each",
        (0..4).all(|k| four.iter().filter(|p| near(p, k)).count() == 1),
    );
    let two = mdc_core::scenario::takeoff_positions(&TakeoffPlacement::Corners, 2, area);
    c.ok(
        "two UAVs take corners one and two",
        near(&two[0], 0) && near(&two[1], 1),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.ok(
        "no hover policy gives 0 s",
        sample_hover(&HoverPolicy::None, &mut rng) == 0.0,
    );
    let h = sample_hover(&HoverPolicy::UniformRange { lo: 10.0, hi: 30.0 }, &mut rng);
    c.ok("10-30 s hover stays in range", (10.0..=30.0).contains(&h));
    c.ok(
        "degenerate hover range gives exactly 5 s",
        sample_hover(&HoverPolicy::UniformRange { lo: 5.0, hi: 5.0 }, &mut rng) == 5.0,
    );
}

fn geometry_examples(c: &mut Checks) {
    let o = Position::surface(0.0, 0.0);
    c.close(
        "3-4-5 triangle",
        initial_distance(&o, &Position::surface(300.0, 400.0)),
        500.0,
    );
    c.ok("identical points", initial_distance(&o, &o) == 0.0);
    let mid = Position::surface(750.0, 750.0);
    c.ok(
        "co-located UAV and task",
        realtime_distance(&mid, &mid) == 0.0,
    );
    c.close(
        "area diagonal",
        realtime_distance(&o, &Position::surface(1500.0, 1500.0)),
        2.0f64.sqrt() * 1500.0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pt = || Position::surface(rng.random_range(-2e3..2e3), rng.random_range(-2e3..2e3));
    let mut worst: f64 = 0.0;
    let mut symmetric = true;
    for _ in 0..100 {
        let (a, b) = (pt(), pt());
        let want = ((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)).sqrt();
        let got = initial_distance(&a, &b);
        worst = worst.max((got - want).abs() / want);
        symmetric &= realtime_distance(&a, &b) == realtime_distance(&b, &a);
    }
    c.ok(
        "100 random pairs match a Euclidean oracle to 1e-12",
        worst <= 1e-12,
    );
    c.ok("distance is symmetric", symmetric);
    c.ok("inside coverage", in_coverage(500.0, 750.0));
    c.ok("coverage boundary is inclusive", in_coverage(750.0, 750.0));
    c.ok("just outside coverage", !in_coverage(750.0001, 750.0));
}

fn channel_examples(c: &mut Checks) {
    let g1 = path_gain_with(1.0, 0.125, 1.0).unwrap();
    c.close("reference gain at 1 m", g1, 4.0 * PI / 0.125);
    c.close(
        "doubling distance quarters the gain",
        path_gain_with(2.0, 0.125, 1.0).unwrap(),
        g1 / 4.0,
    );
    c.close(
        "quadrupling G halves the gain",
        path_gain_with(1.0, 0.125, 4.0).unwrap(),
        g1 / 2.0,
    );

    let ch = ChannelParams {
        interference: 3e-11,
        ..ChannelParams::default()
    };
    c.ok(
        "silent requester has zero SINR",
        sinr(0.0, 100.0, &ch).unwrap() == 0.0,
    );
    let base = sinr(0.1, 100.0, &ch).unwrap();
    let doubled = ChannelParams {
        interference: 2.0 * ch.interference + ch.noise_power,
        ..ch.clone()
    };
    c.close(
        "doubling I + noise halves the SINR",
        sinr(0.1, 100.0, &doubled).unwrap(),
        base / 2.0,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = rng.random_range(1e-3..1.0);
        let d = rng.random_range(1.0..5e3);
        let ch = ChannelParams {
            wavelength: rng.random_range(0.01..1.0),
            antenna_orientation_coeff: rng.random_range(0.1..4.0),
            interference: rng.random_range(0.0..1e-9),
            noise_power: rng.random_range(1e-12..1e-9),
            sinr_threshold: 1.0,
        };
        let want = p * (4.0 * PI / (ch.wavelength * ch.antenna_orientation_coeff.sqrt()))
            / (d * d)
            / (ch.interference + ch.noise_power);
        let got = sinr(p, d, &ch).unwrap();
        worst = worst.max((got - want).abs() / want);
    }
    c.ok(
        "random SINR tuples match independent evaluation to 1e-12",
        worst <= 1e-12,
    );
    c.ok("SINR at threshold passes", sinr_feasible(1e5, 1e5));
    c.ok(
        "zero SINR fails a positive threshold",
        !sinr_feasible(0.0, 1e5),
    );
    c.ok("zero threshold always passes", sinr_feasible(0.0, 0.0));
}

fn energy_examples(c: &mut Checks) {
    let analytic = analytic_model();
    c.close(
        "analytic hover power",
        propulsion_power(0.0, &analytic).unwrap(),
        79.86 + 88.63,
    );
    let constant = PowerModel::default();
    c.close(
        "constant flight power",
        propulsion_power(25.0, &constant).unwrap(),
        87.0,
    );
    c.close(
        "constant hover power",
        propulsion_power(0.0, &constant).unwrap(),
        60.0,
    );
    let mut worst: f64 = 0.0;
    for v in [1.0f64, 5.0, 10.0, 17.5, 25.0, 40.0] {
        let blade = 79.86 * (1.0 + 3.0 * v * v / 120.0);
        let induced = 88.63
            * (1.0 + v * v / (4.0 * 4.03 * 4.03) - (v * v / (2.0 * 4.03 * 4.03)).sqrt()).sqrt();
        let parasite = 0.5 * 0.503 * 0.6 * 1.225 * 0.05 * v * v * v;
        let want = blade + induced + parasite;
        let got = propulsion_power(v, &analytic).unwrap();
        worst = worst.max((got - want).abs() / want);
    }
    c.ok(
        "analytic model matches term-by-term evaluation to 1e-12",
        worst <= 1e-12,
    );

    c.close(
        "leg energy 2500 m + 20 s hover",
        leg_energy(2500.0, 25.0, 20.0, &constant).unwrap(),
        9900.0,
    );
    c.ok(
        "empty leg costs nothing",
        leg_energy(0.0, 25.0, 0.0, &constant).unwrap() == 0.0,
    );
    c.close(
        "leg energy is additive",
        leg_energy(700.0 + 300.0, 25.0, 4.0 + 6.0, &constant).unwrap(),
        leg_energy(700.0, 25.0, 4.0, &constant).unwrap()
            + leg_energy(300.0, 25.0, 6.0, &constant).unwrap(),
    );
    c.close("return time 2500 m", return_time(2500.0, 25.0), 100.0);
    c.ok("zero return time", return_time(0.0, 25.0) == 0.0);
    c.close(
        "halving speed doubles return time",
        return_time(2500.0, 12.5),
        2.0 * return_time(2500.0, 25.0),
    );
    c.close(
        "return energy 2500 m",
        return_energy(2500.0, 25.0, &constant).unwrap(),
        8700.0,
    );
    c.ok(
        "zero return energy",
        return_energy(0.0, 25.0, &constant).unwrap() == 0.0,
    );
    c.close(
        "return energy is a hover-free leg",
        return_energy(1234.5, 25.0, &constant).unwrap(),
        leg_energy(1234.5, 25.0, 0.0, &constant).unwrap(),
    );
    c.ok(
        "9900 <= 20000 - 8700",
        energy_feasible(9900.0, 8700.0, 20000.0),
    );
    c.ok(
        "energy boundary is inclusive",
        energy_feasible(9900.0, 8700.0, 18600.0),
    );
    c.ok("empty battery", !energy_feasible(1.0, 0.0, 0.0));
}

fn allocator_examples(c: &mut Checks) {
    c.close("waiting time 2500 m", waiting_time(2500.0, 25.0), 100.0);
    c.ok("zero waiting time", waiting_time(0.0, 25.0) == 0.0);
    c.ok(
        "waiting time equals return time",
        waiting_time(777.0, 25.0) == return_time(777.0, 25.0),
    );
    c.ok("100 <= 600 - 10", wait_feasible(100.0, 600.0, 10.0));
    c.ok(
        "wait boundary is inclusive",
        wait_feasible(590.0, 600.0, 10.0),
    );
    c.ok(
        "deadline shorter than transmission",
        !wait_feasible(0.0, 5.0, 10.0),
    );

    // Quality estimation.
    let s = tiny(&[(0.0, 0.0)], &[(300.0, 400.0)]);
    let q = quality_estimation(&ctx_for(&s), &[0], &[0]).unwrap();
    c.ok(
        "one feasible pair gives M = [1]",
        q.matrix.get(0, 0) && !q.matrix.is_fallback(0),
    );
    let mut s = tiny(
        &[(0.0, 0.0)],
        &[(1400.0, 0.0), (1300.0, 300.0), (1200.0, 1200.0)],
    );
    s.config.coverage_radius = 500.0;
    let q = quality_estimation(&ctx_for(&s), &[0], &[0, 1, 2]).unwrap();
    c.ok(
        "out-of-coverage tasks fall back to the nearest one",
        q.matrix.row_count(0) == 1 && q.matrix.get(0, 1) && q.matrix.is_fallback(0),
    );

    // Reverse auction: waits of 10 s and 20 s at 25 m/s.
    let s = tiny(&[(500.0, 0.0), (500.0, 750.0)], &[(500.0, 250.0)]);
    let ctx = ctx_for(&s);
    let mut m = MatchMatrix::new(2, 1);
    m.set(0, 0, true);
    m.set(1, 0, true);
    let out = reverse_auction(&ctx, m.clone(), &[0, 1], &[0]);
    c.ok(
        "shorter wait keeps the task",
        out.get(0, 0) && !out.get(1, 0),
    );
    // Threshold 25 - 10 = 15 s: the 20 s bidder is late, the 10 s one is not.
    let mut s_late = s.clone();
    s_late.tasks[0].remaining_valid_time = 25.0;
    let mut only_late = MatchMatrix::new(2, 1);
    only_late.set(1, 0, true);
    let out = reverse_auction(&ctx_for(&s_late), only_late, &[0, 1], &[0]);
    c.ok("late bidder is zeroed", out.col_count(0) == 0);
    let mut only_early = MatchMatrix::new(2, 1);
    only_early.set(0, 0, true);
    let out = reverse_auction(&ctx_for(&s_late), only_early, &[0, 1], &[0]);
    c.ok("bidder within the threshold is kept", out.get(0, 0));
    s_late.tasks[0].remaining_valid_time = 5.0;
    let out = reverse_auction(&ctx_for(&s_late), m, &[0, 1], &[0]);
    c.ok(
        "all bidders late leaves the column empty",
        out.col_count(0) == 0,
    );
    let s = tiny(&[(0.0, 0.0), (200.0, 0.0)], &[(100.0, 0.0)]);
    let mut m = MatchMatrix::new(2, 1);
    m.set(0, 0, true);
    m.set(1, 0, true);
    let out = reverse_auction(&ctx_for(&s), m, &[0, 1], &[0]);
    c.ok(
        "equal waits go to the lower UAV id",
        out.get(0, 0) && !out.get(1, 0),
    );

    // Slot resolution.
    let d = DistanceMatrix::from_fn(2, 6, |_, j| [9.0, 8.0, 1.0, 7.0, 6.0, 5.0][j]);
    let mut m = MatchMatrix::new(2, 6);
    m.set(0, 3, true);
    let r = resolve_slot(&m, &d, &[0]).unwrap();
    c.ok("single candidate is taken", r.len() == 1 && r[0].task == 3);
    let mut m = MatchMatrix::new(2, 6);
    m.set(1, 2, true);
    m.set(1, 5, true);
    let r = resolve_slot(&m, &d, &[1]).unwrap();
    c.ok(
        "nearest of two candidates",
        r.len() == 1 && (r[0].uav, r[0].task) == (1, 2),
    );
    let mut m = MatchMatrix::new(2, 6);
    m.set(0, 2, true);
    m.set(1, 2, true);
    c.ok(
        "shared column is rejected",
        matches!(
            resolve_slot(&m, &d, &[0, 1]),
            Err(AllocError::ColumnConflict { task: 2 })
        ),
    );

    // Whole runs.
    let empty = tiny(&[(0.0, 0.0), (10.0, 0.0)], &[]);
    let r = run(&empty, Algorithm::Sc).unwrap();
    c.ok(
        "no tasks: no assignments, zero times, zero objective",
        r.assignments.is_empty()
            && r.completion_times.iter().all(|&t| t == 0.0)
            && r.objective == 0.0,
    );
    let one = tiny(&[(0.0, 0.0)], &[(1000.0, 0.0)]);
    let r = run(&one, Algorithm::Sc).unwrap();
    c.close(
        "single task 1000 m away takes 90 s",
        r.completion_times[0],
        90.0,
    );
    c.close("objective of the single-task run", r.objective, 90.0);

    let cd = tiny(&[(0.0, 0.0)], &[(200.0, 0.0), (0.0, 100.0)]);
    let r = run(&cd, Algorithm::Cd).unwrap();
    c.ok(
        "baseline starts with the 100 m task",
        r.assignments.first().map(|a| a.task_id) == Some(1),
    );
    let pts = [
        (900.0, 100.0),
        (50.0, 60.0),
        (400.0, 700.0),
        (120.0, 30.0),
        (800.0, 800.0),
    ];
    let nn = tiny(&[(0.0, 0.0)], &pts);
    let r = run(&nn, Algorithm::Cd).unwrap();
    c.ok(
        "single UAV visits tasks in nearest-neighbor order",
        r.route(0) == greedy_order((0.0, 0.0), &pts),
    );

    c.close("objective of [100, 200]", objective(&[100.0, 200.0]), 150.0);
    c.close("objective of equal times", objective(&[321.0; 3]), 321.0);
}

fn greedy_order(start: (f64, f64), pts: &[(f64, f64)]) -> Vec<usize> {
    let mut at = start;
    let mut left: Vec<usize> = (0..pts.len()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let d = |k: usize| ((pts[k].0 - at.0).powi(2) + (pts[k].1 - at.1).powi(2)).sqrt();
        let (pos, &k) = left
            .iter()
            .enumerate()
            .min_by(|a, b| d(*a.1).partial_cmp(&d(*b.1)).unwrap())
            .unwrap();
        order.push(k);
        at = pts[k];
        left.remove(pos);
    }
    order
}

fn fake_result(alg: Algorithm, t: &[f64], e: &[f64]) -> AllocationResult {
    AllocationResult {
        algorithm: alg,
        assignments: vec![],
        returns: vec![],
        completion_times: t.to_vec(),
        energies: e.to_vec(),
        remaining_energy: vec![0.0; t.len()],
        unserved_tasks: vec![],
        objective: objective(t),
        slots: 0,
    }
}

fn report_examples(c: &mut Checks) {
    let m = collect_metrics(
        &fake_result(Algorithm::Sc, &[100.0, 200.0], &[1000.0, 2000.0]),
        "h",
        1,
    );
    c.close("mean completion time", m.mean_completion_time, 150.0);
    c.close("total energy", m.total_energy, 3000.0);
    let empty = run(&tiny(&[(0.0, 0.0)], &[]), Algorithm::Sc).unwrap();
    let m = collect_metrics(&empty, "h", 1);
    c.ok(
        "empty task set: mean 0, none unserved",
        m.mean_completion_time == 0.0 && m.unserved == 0,
    );

    let sc = collect_metrics(&fake_result(Algorithm::Sc, &[150.0], &[1.0]), "h", 5);
    let cd = collect_metrics(&fake_result(Algorithm::Cd, &[200.0], &[1.0]), "h", 5);
    let s = compare("f", "v", std::slice::from_ref(&sc), &[cd]).unwrap();
    c.close("CD 200 s vs SC 150 s", s.time_improvement_pct, 25.0);
    let same = collect_metrics(&fake_result(Algorithm::Cd, &[150.0], &[1.0]), "h", 5);
    let s = compare("f", "v", &[sc], &[same]).unwrap();
    c.ok(
        "identical runs give 0%",
        s.time_improvement_pct == 0.0 && s.energy_improvement_pct == 0.0,
    );

    let dir = tempfile::tempdir().unwrap();
    let mut base = ScenarioConfig::paper_default();
    base.n_tasks = 5;
    let out = run_family(Family::Hover, &base, 30).unwrap();
    out.write_tables(dir.path()).unwrap();
    let long = std::fs::read_to_string(dir.path().join("hover_long.csv")).unwrap();
    c.ok(
        "30 seeds x 2 algorithms x 3 variants = 180 rows",
        long.lines().count() == 181,
    );
    let back: Vec<SweepSummary> = report::read_csv(&dir.path().join("hover.csv")).unwrap();
    c.ok("summary table round-trips exactly", back == out.summaries);
    let text = std::fs::read_to_string(dir.path().join("hover.csv")).unwrap();
    let widths: Vec<usize> = text.lines().map(|l| l.split(',').count()).collect();
    c.ok(
        "summary column count is fixed",
        widths.iter().all(|&w| w == widths[0]),
    );
}

fn oracle_examples(c: &mut Checks) {
    let s = tiny(&[(0.0, 0.0)], &[]);
    let snap = Simulation::new(&s, Algorithm::Sc).unwrap().snapshot();
    c.ok(
        "oracle: empty state, no matches",
        oracle_step(&snap, &s.config, Mode::Sc).matches.is_empty(),
    );
    let s = tiny(&[(0.0, 0.0)], &[(300.0, 400.0)]);
    let snap = Simulation::new(&s, Algorithm::Sc).unwrap().snapshot();
    c.ok(
        "oracle: single feasible pair",
        oracle_step(&snap, &s.config, Mode::Sc).matches == [(0, 0)],
    );
    let (t, e) = oracle_metrics(&s, &[], &[]);
    c.ok(
        "oracle metrics of an empty log are zero",
        t == [0.0] && e == [0.0],
    );
    let one = tiny(&[(0.0, 0.0)], &[(1000.0, 0.0)]);
    let r = run(&one, Algorithm::Sc).unwrap();
    let (t, _) = oracle_metrics(&one, &r.assignments, &r.returns);
    c.close("oracle metrics of the single-leg log", t[0], 90.0);
}

/// Criterion 2: slot-by-slot agreement with the reference allocator.
pub fn oracle_equivalence(instances: u64) -> Outcome {
    let mut failures = Vec::new();
    let mut slots = 0usize;
    let mut fallbacks = 0usize;
    let mut early_retirements = 0usize;
    let mut unserved = 0usize;
    for seed in 0..instances {
        let s = small_instance(seed);
        for (alg, mode) in [(Algorithm::Sc, Mode::Sc), (Algorithm::Cd, Mode::Cd)] {
            let tag = format!("seed {seed} {}", alg.tag());
            let mut sim = Simulation::new(&s, alg).unwrap();
            while !sim.is_done() {
                let snap = sim.snapshot();
                let got = sim.step().unwrap();
                let want = oracle_step(&snap, &s.config, mode);
                let pairs: Vec<(usize, usize)> =
                    got.commits.iter().map(|c| (c.uav, c.task)).collect();
                if pairs != want.matches || got.retired != want.retired {
                    failures.push(format!(
                        "{tag} slot {}: allocator {pairs:?} retired {:?}, oracle {:?} retired {:?}",
                        snap.slot, got.retired, want.matches, want.retired
                    ));
                }
                slots += 1;
                early_retirements += got.retired.len();
            }
            let result = sim.finish().unwrap();
            let full = oracle_run(&s, mode, s.config.max_slots).expect("oracle terminates");
            let seq: Vec<(u64, usize, usize)> = result
                .assignments
                .iter()
                .map(|a| (a.slot, a.uav_id, a.task_id))
                .collect();
            if seq != full.match_sequence() {
                failures.push(format!(
                    "{tag}: match sequence differs from the independent run"
                ));
            }
            let close = |a: &[f64], b: &[f64]| {
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| rel_close(*x, *y, CONSERVATION_TOL))
            };
            if !close(&result.completion_times, &full.completion_times)
                || !close(&result.energies, &full.energies)
                || result.unserved_tasks.len() != full.unserved
            {
                failures.push(format!("{tag}: totals differ from the independent run"));
            }
            fallbacks += result.assignments.iter().filter(|a| a.fallback).count();
            unserved += result.unserved_tasks.len();
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{instances} instances x 2 algorithms, {slots} slots; {fallbacks} fallback legs, \
             {early_retirements} early retirements, {unserved} unserved tasks exercised"
        ))
    } else {
        failures.truncate(20);
        Err(failures)
    }
}

/// Planar or slant distance, recomputed.
fn span(cfg: &ScenarioConfig, a: &Position, b: &Position, alt: f64) -> f64 {
    let flat = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    if cfg.slant_range {
        (flat * flat + alt * alt).sqrt()
    } else {
        flat
    }
}

/// Audit one SC run against the constraint set, replaying the leg log.
pub fn audit_run(s: &Scenario, r: &AllocationResult) -> Vec<String> {
    let cfg = &s.config;
    let ch = &cfg.channel;
    let (p_fly, p_hover) = match cfg.power_model {
        PowerModel::Constant {
            flight_power,
            hover_power,
        } => (flight_power, hover_power),
        PowerModel::Analytic { .. } => panic!("audit expects the constant model"),
    };
    let mut v = Vec::new();
    let m = s.uavs.len();
    let mut energy = vec![cfg.uav_initial_energy; m];
    let mut at: Vec<Position> = s.uavs.iter().map(|u| u.initial_position).collect();
    let mut free_at = vec![0.0f64; m];
    let mut seen = vec![false; s.tasks.len()];
    for (k, a) in r.assignments.iter().enumerate() {
        let i = a.uav_id;
        if a.task_id >= s.tasks.len() {
            v.push(format!("leg {k}: task {} not in the scenario", a.task_id));
            continue;
        }
        if std::mem::replace(&mut seen[a.task_id], true) {
            v.push(format!("leg {k}: task {} served twice", a.task_id));
        }
        let u = &s.uavs[i];
        let t = &s.tasks[a.task_id];
        if a.depart_position() != at[i] {
            v.push(format!("leg {k}: UAV {i} departs from the wrong place"));
        }
        if a.start_time + 1e-9 < free_at[i] {
            v.push(format!(
                "leg {k}: UAV {i} starts before its previous leg ends"
            ));
        }
        let d0 = span(cfg, &u.initial_position, &t.position, u.altitude);
        let d = span(cfg, &at[i], &t.position, u.altitude);
        let hover = t.transmission_time + t.extra_hover_time;
        let e_leg = p_fly * d / u.speed + p_hover * hover;
        let e_home = p_fly * d0 / u.speed;
        if !a.fallback {
            let sinr = t.transmit_power * 4.0 * PI
                / (ch.wavelength * ch.antenna_orientation_coeff.sqrt())
                / d.max(1.0).powi(2)
                / (ch.interference + ch.noise_power);
            let wait = d / u.speed;
            let deadline = t.remaining_valid_time - a.start_time - t.transmission_time;
            if d0 > cfg.coverage_radius {
                v.push(format!("leg {k}: coverage {d0} > {}", cfg.coverage_radius));
            }
            if d > cfg.comm_radius {
                v.push(format!("leg {k}: range {d} > {}", cfg.comm_radius));
            }
            if sinr < ch.sinr_threshold {
                v.push(format!("leg {k}: SINR {sinr} below threshold"));
            }
            if e_leg > energy[i] - e_home {
                v.push(format!("leg {k}: energy {e_leg} > {}", energy[i] - e_home));
            }
            if wait > deadline {
                v.push(format!("leg {k}: wait {wait} > {deadline}"));
            }
        }
        energy[i] -= e_leg;
        at[i] = Position::new(t.position.x, t.position.y, u.altitude);
        free_at[i] = a.start_time + d / u.speed + hover;
    }
    let served = seen.iter().filter(|&&b| b).count();
    if served + r.unserved_tasks.len() != s.tasks.len() || r.assignments.len() > s.tasks.len() {
        v.push("served plus unserved does not add up to the task count".into());
    }
    if r.remaining_energy.iter().any(|&e| e < 0.0) {
        v.push("negative remaining energy".into());
    }
    v
}

/// Criterion 3: constraint audit on the default scenario.
pub fn constraint_audit() -> Outcome {
    let mut failures = Vec::new();
    let mut gated = 0;
    let mut fallback = 0;
    for seed in audit_seeds() {
        let s = generate_scenario(&default_config(seed)).unwrap();
        let r = run(&s, Algorithm::Sc).unwrap();
        gated += r.assignments.iter().filter(|a| !a.fallback).count();
        fallback += r.assignments.iter().filter(|a| a.fallback).count();
        failures.extend(
            audit_run(&s, &r)
                .into_iter()
                .map(|m| format!("seed {seed}: {m}")),
        );
    }
    if failures.is_empty() {
        Ok(format!(
            "30 seeds, {gated} gated legs audited, {fallback} fallback legs exempt, 0 violations"
        ))
    } else {
        failures.truncate(20);
        Err(failures)
    }
}

/// Compare reported totals with the leg log for one run.
pub fn conservation_run(s: &Scenario, r: &AllocationResult) -> Vec<String> {
    let mut v = Vec::new();
    let (t, e) = oracle_metrics(s, &r.assignments, &r.returns);
    for i in 0..s.uavs.len() {
        if !rel_close(t[i], r.completion_times[i], CONSERVATION_TOL) {
            v.push(format!(
                "UAV {i}: time {} vs replay {}",
                r.completion_times[i], t[i]
            ));
        }
        if !rel_close(e[i], r.energies[i], CONSERVATION_TOL) {
            v.push(format!(
                "UAV {i}: energy {} vs replay {}",
                r.energies[i], e[i]
            ));
        }
        let logged: f64 = r
            .assignments
            .iter()
            .filter(|a| a.uav_id == i)
            .map(|a| a.leg_energy)
            .sum::<f64>()
            + r.returns[i].energy;
        if !rel_close(logged, r.energies[i], CONSERVATION_TOL) {
            v.push(format!(
                "UAV {i}: logged energy {logged} vs reported {}",
                r.energies[i]
            ));
        }
        let initial = s.uavs[i].remaining_energy;
        if !rel_close(
            r.remaining_energy[i],
            initial - r.energies[i],
            CONSERVATION_TOL,
        ) {
            v.push(format!(
                "UAV {i}: remaining {} != {initial} - {}",
                r.remaining_energy[i], r.energies[i]
            ));
        }
    }
    v
}

/// Criterion 4: conservation and decomposition on the audited runs.
pub fn conservation() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for seed in audit_seeds() {
        let s = generate_scenario(&default_config(seed)).unwrap();
        for alg in [Algorithm::Sc, Algorithm::Cd] {
            let r = run(&s, alg).unwrap();
            failures.extend(
                conservation_run(&s, &r)
                    .into_iter()
                    .map(|m| format!("seed {seed} {}: {m}", alg.tag())),
            );
            runs += 1;
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{runs} runs, per-UAV time and energy match the leg-log replay"
        ))
    } else {
        failures.truncate(20);
        Err(failures)
    }
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

/// Criterion 5: repeated runs and sweeps emit identical bytes.
pub fn determinism() -> Outcome {
    let mut failures = Vec::new();
    let s = generate_scenario(&default_config(99)).unwrap();
    let again = generate_scenario(&default_config(99)).unwrap();
    if s.to_snapshot() != again.to_snapshot() {
        failures.push("scenario snapshot differs between generations".into());
    }
    for alg in [Algorithm::Sc, Algorithm::Cd] {
        let a = run(&s, alg).unwrap();
        let b = run(&again, alg).unwrap();
        if a != b {
            failures.push(format!("{} result differs between runs", alg.tag()));
        }
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        for (d, r) in dirs.iter().zip([&a, &b]) {
            report::write_legs(&d.path().join("legs.csv"), &r.assignments).unwrap();
            report::write_returns(&d.path().join("returns.csv"), &r.returns).unwrap();
        }
        if dir_bytes(dirs[0].path()) != dir_bytes(dirs[1].path()) {
            failures.push(format!("{} leg logs differ between runs", alg.tag()));
        }
    }
    let base = ScenarioConfig::paper_default();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        run_all(&Family::ALL, &base, TREND_SEEDS, d.path()).unwrap();
    }
    let (first, second) = (dir_bytes(dirs[0].path()), dir_bytes(dirs[1].path()));
    if first != second {
        failures.push("sweep tables differ between repetitions".into());
    }
    if failures.is_empty() {
        Ok(format!(
            "single runs and a {}-file, {TREND_SEEDS}-seed sweep of all families reproduce byte for byte",
            first.len()
        ))
    } else {
        Err(failures)
    }
}

/// Criterion 6: qualitative trends over 30 paired seeds.
pub fn trends() -> Outcome {
    let base = ScenarioConfig::paper_default();
    let get = |family: Family| run_family(family, &base, TREND_SEEDS).unwrap();
    let hover = get(Family::Hover);
    let takeoff = get(Family::Takeoff);
    let dist = get(Family::Distribution);
    let uavs = get(Family::UavCount);
    let pick = |o: &mdc_core::experiment::SweepOutput, v: &str| o.summary(v).unwrap().clone();

    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for v in ["none", "0-5s", "10-30s"] {
        let s = pick(&hover, v);
        notes.push(format!("hover {v} {:+.1}%", s.time_improvement_pct));
        if !(s.time_improvement_pct > 0.0) {
            failures.push(format!(
                "hover {v}: time improvement {:.2}% not positive",
                s.time_improvement_pct
            ));
        }
    }
    let h = pick(&hover, "0-5s");
    notes.push(format!("0-5s energy {:+.1}%", h.energy_improvement_pct));
    for (what, x) in [
        ("time", h.time_improvement_pct),
        ("energy", h.energy_improvement_pct),
    ] {
        if !(10.0..=40.0).contains(&x) {
            failures.push(format!(
                "hover 0-5s: {what} improvement {x:.2}% outside [10, 40]"
            ));
        }
    }
    let (corners, edge) = (pick(&takeoff, "corners"), pick(&takeoff, "edge"));
    notes.push(format!(
        "corners {:+.1}% vs edge {:+.1}%",
        corners.time_improvement_pct, edge.time_improvement_pct
    ));
    if !(corners.time_improvement_pct > edge.time_improvement_pct) {
        failures.push("takeoff: corners does not beat edge".into());
    }
    let (random, uniform) = (pick(&dist, "random"), pick(&dist, "uniform"));
    notes.push(format!(
        "random {:+.1}% vs uniform {:+.1}%",
        random.time_improvement_pct, uniform.time_improvement_pct
    ));
    if !(random.time_improvement_pct > uniform.time_improvement_pct) {
        failures.push("distribution: random does not beat uniform".into());
    }
    let (four, three) = (pick(&uavs, "4"), pick(&uavs, "3"));
    notes.push(format!(
        "4 UAVs {:+.1}% vs 3 UAVs {:+.1}%",
        four.time_improvement_pct, three.time_improvement_pct
    ));
    if !(four.time_improvement_pct > three.time_improvement_pct) {
        failures.push("uav_count: 4 UAVs do not beat 3".into());
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        failures.extend(notes);
        Err(failures)
    }
}

/// Feasibility radius recovered by bisection on the SINR gate.
pub fn bisect_radius(p: f64, ch: &ChannelParams) -> f64 {
    let feasible = |d: f64| {
        sinr_feasible(
            sinr_with(p, d, ch, ch.antenna_orientation_coeff, ch.interference).unwrap(),
            ch.sinr_threshold,
        )
    };
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while feasible(hi) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn closed_form_radius(p: f64, ch: &ChannelParams) -> f64 {
    feasibility_radius(p, ch)
}
