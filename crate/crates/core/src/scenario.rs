//! Domain types, scenario configuration and seeded scenario generators.
//!
//! A [`ScenarioConfig`] fully determines a [`Scenario`]: the same config and
//! seed always produce the same task and UAV lists, bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance a corner or edge take-off point is pulled inside the area.
pub const TAKEOFF_INSET_M: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid configuration: {}", format_issues(.0))]
    Invalid(Vec<ConfigIssue>),
    #[error("failed to parse configuration")]
    Parse(#[from] toml::de::Error),
    #[error("failed to serialize configuration")]
    Serialize(#[from] toml::ser::Error),
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("snapshot line {line}: {message}")]
    Snapshot { line: usize, message: String },
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("{}: {}", i.field, i.message))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A single failed (or linted) configuration check, keyed by field name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub field: String,
    pub message: String,
}

impl ConfigIssue {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Point in the local planar frame, meters. `h` is altitude above the sea surface.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub h: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, h: f64) -> Self {
        Self { x, y, h }
    }

    /// A point on the sea surface (`h = 0`).
    pub const fn surface(x: f64, y: f64) -> Self {
        Self { x, y, h: 0.0 }
    }

    pub fn with_altitude(self, h: f64) -> Self {
        Self { h, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskState {
    Unexecuted,
    Executed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRequest {
    pub id: usize,
    pub position: Position,
    /// Requester transmit power, watts.
    pub transmit_power: f64,
    /// Data upload time once the UAV is overhead, seconds.
    pub transmission_time: f64,
    /// Remaining valid time at simulation start, seconds.
    pub remaining_valid_time: f64,
    /// Additional hover on top of the transmission, seconds.
    pub extra_hover_time: f64,
    /// Per-requester antenna orientation coefficient; `None` uses the channel-wide value.
    pub antenna_gain: Option<f64>,
    pub state: TaskState,
}

impl TaskRequest {
    /// Upper bound on the waiting time when the decision is taken at `elapsed` seconds.
    pub fn wait_threshold(&self, elapsed: f64) -> f64 {
        self.remaining_valid_time - elapsed - self.transmission_time
    }

    /// Time the serving UAV hovers over the requester.
    pub fn service_time(&self) -> f64 {
        self.transmission_time + self.extra_hover_time
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UavState {
    Idle,
    Busy,
    /// Returned to its take-off point; takes no further tasks.
    Retired,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavAgent {
    pub id: usize,
    pub initial_position: Position,
    pub current_position: Position,
    /// Cruise speed, m/s.
    pub speed: f64,
    /// Flight altitude, meters.
    pub altitude: f64,
    /// Joules.
    pub remaining_energy: f64,
    pub state: UavState,
    pub assignment_log: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelParams {
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    pub antenna_orientation_coeff: f64,
    /// Constant interference power, watts.
    pub interference: f64,
    /// Noise power, watts.
    pub noise_power: f64,
    /// Minimum SINR, linear ratio.
    pub sinr_threshold: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            wavelength: 0.125,
            antenna_orientation_coeff: 1.0,
            interference: 0.0,
            noise_power: 1e-10,
            sinr_threshold: 1e5,
        }
    }
}

/// Propulsion power model of a rotary-wing UAV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PowerModel {
    /// Fixed flight and hover powers, watts.
    Constant { flight_power: f64, hover_power: f64 },
    /// Closed-form rotary-wing model.
    Analytic {
        blade_profile_power: f64,
        induced_power: f64,
        tip_speed: f64,
        hover_induced_speed: f64,
        body_drag_ratio: f64,
        rotor_solidity: f64,
        air_density: f64,
        rotor_disk_area: f64,
    },
}

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel::Constant {
            flight_power: 87.0,
            hover_power: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    South,
    North,
    West,
    East,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TakeoffPlacement {
    Center,
    Corners,
    Edge {
        #[serde(default)]
        side: Side,
    },
    Explicit {
        positions: Vec<Position>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskDistribution {
    Random,
    Uniform,
    /// `k` Gaussian clusters with standard deviation `spread` meters.
    Clustered {
        k: usize,
        spread: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HoverPolicy {
    None,
    UniformRange { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterferenceMode {
    /// Use `channel.interference` as is.
    #[default]
    Constant,
    /// Add the received power of requesters currently served by other UAVs.
    ActiveTransmitters,
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn contains(&self, p: &Position) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub area_width: f64,
    pub area_height: f64,
    pub n_tasks: usize,
    pub n_uavs: usize,
    /// Coverage radius around each take-off point, meters.
    pub coverage_radius: f64,
    /// Maximum UAV-requester distance for a match, meters.
    pub comm_radius: f64,
    pub channel: ChannelParams,
    pub interference_mode: InterferenceMode,
    pub power_model: PowerModel,
    pub uav_speed: f64,
    pub uav_altitude: f64,
    pub uav_initial_energy: f64,
    pub task_transmit_power: f64,
    pub takeoff_placement: TakeoffPlacement,
    pub task_distribution: TaskDistribution,
    pub hover_policy: HoverPolicy,
    pub transmission_time_range: Range,
    pub valid_time_range: Range,
    pub slot_duration: f64,
    /// Use 3-D slant range (including flight altitude) instead of planar distance.
    pub slant_range: bool,
    /// Non-termination guard for the allocation loop.
    pub max_slots: u64,
    pub rng_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::paper_default()
    }
}

impl ScenarioConfig {
    /// Default maritime scenario: 1.5 km square, 50 tasks, 4 UAVs at the
    /// corners, 25 m/s, 87 W flight / 60 W hover, 0-5 s extra hover.
    pub fn paper_default() -> Self {
        Self {
            area_width: 1500.0,
            area_height: 1500.0,
            n_tasks: 50,
            n_uavs: 4,
            coverage_radius: 1100.0,
            comm_radius: 1000.0,
            channel: ChannelParams::default(),
            interference_mode: InterferenceMode::Constant,
            power_model: PowerModel::default(),
            uav_speed: 25.0,
            uav_altitude: 20.0,
            uav_initial_energy: 150_000.0,
            task_transmit_power: 0.1,
            takeoff_placement: TakeoffPlacement::Corners,
            task_distribution: TaskDistribution::Random,
            hover_policy: HoverPolicy::UniformRange { lo: 0.0, hi: 5.0 },
            transmission_time_range: Range::new(2.0, 6.0),
            valid_time_range: Range::new(300.0, 1200.0),
            slot_duration: 1.0,
            slant_range: false,
            max_slots: 1_000_000,
            rng_seed: 2024,
        }
    }

    pub fn area(&self) -> Area {
        Area {
            width: self.area_width,
            height: self.area_height,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml_string(&self) -> Result<String, ScenarioError> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Hard invariant checks. An empty result means the config is usable.
    pub fn validate(&self) -> Vec<ConfigIssue> {
        self.checks()
            .into_iter()
            .filter_map(|c| c.issue.map(|message| ConfigIssue::new(c.field, message)))
            .collect()
    }

    /// Every hard invariant with its outcome, in a fixed order.
    pub fn checks(&self) -> Vec<InvariantCheck> {
        let mut out = Checks::default();
        for (field, v) in [
            ("area_width", self.area_width),
            ("area_height", self.area_height),
            ("coverage_radius", self.coverage_radius),
            ("comm_radius", self.comm_radius),
            ("uav_speed", self.uav_speed),
            ("slot_duration", self.slot_duration),
            ("channel.wavelength", self.channel.wavelength),
            (
                "channel.antenna_orientation_coeff",
                self.channel.antenna_orientation_coeff,
            ),
            ("channel.noise_power", self.channel.noise_power),
            ("channel.sinr_threshold", self.channel.sinr_threshold),
            ("task_transmit_power", self.task_transmit_power),
        ] {
            out.positive(field, v);
        }
        match &self.power_model {
            PowerModel::Constant {
                flight_power,
                hover_power,
            } => {
                out.positive("power_model.flight_power", *flight_power);
                out.positive("power_model.hover_power", *hover_power);
            }
            PowerModel::Analytic {
                blade_profile_power,
                induced_power,
                tip_speed,
                hover_induced_speed,
                body_drag_ratio,
                rotor_solidity,
                air_density,
                rotor_disk_area,
            } => {
                out.positive("power_model.blade_profile_power", *blade_profile_power);
                out.positive("power_model.induced_power", *induced_power);
                out.positive("power_model.tip_speed", *tip_speed);
                out.positive("power_model.hover_induced_speed", *hover_induced_speed);
                out.positive("power_model.body_drag_ratio", *body_drag_ratio);
                out.positive("power_model.rotor_solidity", *rotor_solidity);
                out.positive("power_model.air_density", *air_density);
                out.positive("power_model.rotor_disk_area", *rotor_disk_area);
            }
        }
        out.non_negative("channel.interference", self.channel.interference);
        out.non_negative("uav_altitude", self.uav_altitude);
        out.non_negative("uav_initial_energy", self.uav_initial_energy);
        out.check("n_uavs", self.n_uavs >= 1, || "must be >= 1".into());
        out.check("max_slots", self.max_slots >= 1, || "must be >= 1".into());
        out.range("transmission_time_range", self.transmission_time_range);
        out.range("valid_time_range", self.valid_time_range);
        if let HoverPolicy::UniformRange { lo, hi } = self.hover_policy {
            out.range("hover_policy", Range::new(lo, hi));
        }
        if let TaskDistribution::Clustered { k, spread } = &self.task_distribution {
            out.check("task_distribution.k", *k >= 1, || "must be >= 1".into());
            out.non_negative("task_distribution.spread", *spread);
        }
        if let TakeoffPlacement::Explicit { positions } = &self.takeoff_placement {
            out.check("takeoff_placement", positions.len() == self.n_uavs, || {
                format!(
                    "explicit list has {} positions but n_uavs = {}",
                    positions.len(),
                    self.n_uavs
                )
            });
            out.check(
                "takeoff_placement.altitude",
                positions.iter().all(|p| p.h >= 0.0),
                || "altitude must be >= 0".into(),
            );
        }
        out.0
    }

    /// Soft checks: suspicious but runnable settings.
    pub fn lints(&self) -> Vec<ConfigIssue> {
        let mut lints = Vec::new();
        if let PowerModel::Constant {
            flight_power,
            hover_power,
        } = self.power_model
        {
            if flight_power < hover_power {
                lints.push(ConfigIssue::new(
                    "power_model",
                    format!("flight_power {flight_power} W is below hover_power {hover_power} W"),
                ));
            }
        }
        if self.valid_time_range.lo <= self.transmission_time_range.hi {
            lints.push(ConfigIssue::new(
                "valid_time_range",
                "some tasks may expire before their transmission can finish",
            ));
        }
        lints
    }

    pub fn ensure_valid(&self) -> Result<(), ScenarioError> {
        let issues = self.validate();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::Invalid(issues))
        }
    }
}

/// Outcome of one hard invariant; `issue` is `None` when it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantCheck {
    pub field: String,
    pub issue: Option<String>,
}

#[derive(Default)]
struct Checks(Vec<InvariantCheck>);

impl Checks {
    fn check(&mut self, field: &str, ok: bool, message: impl FnOnce() -> String) {
        self.0.push(InvariantCheck {
            field: field.to_owned(),
            issue: (!ok).then(message),
        });
    }

    fn positive(&mut self, field: &str, v: f64) {
        self.check(field, v > 0.0 && v.is_finite(), || {
            format!("must be > 0, got {v}")
        });
    }

    fn non_negative(&mut self, field: &str, v: f64) {
        self.check(field, v >= 0.0 && v.is_finite(), || {
            format!("must be >= 0, got {v}")
        });
    }

    fn range(&mut self, field: &str, r: Range) {
        let (lo, hi) = (r.lo, r.hi);
        let issue = if !(lo.is_finite() && hi.is_finite()) {
            Some("bounds must be finite".to_owned())
        } else if lo > hi {
            Some(format!("lo {lo} > hi {hi}"))
        } else if lo < 0.0 {
            Some(format!("lo {lo} must be >= 0"))
        } else {
            None
        };
        self.0.push(InvariantCheck {
            field: field.to_owned(),
            issue,
        });
    }
}

/// A generated problem instance together with the config that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub tasks: Vec<TaskRequest>,
    pub uavs: Vec<UavAgent>,
}

impl Scenario {
    /// Build a scenario from explicit task and UAV lists (for example a parsed snapshot).
    pub fn from_parts(
        config: ScenarioConfig,
        tasks: Vec<TaskRequest>,
        uavs: Vec<UavAgent>,
    ) -> Result<Self, ScenarioError> {
        let mut config = config;
        config.n_tasks = tasks.len();
        config.n_uavs = uavs.len();
        config.takeoff_placement = TakeoffPlacement::Explicit {
            positions: uavs.iter().map(|u| u.initial_position).collect(),
        };
        config.ensure_valid()?;
        Ok(Self {
            config,
            tasks,
            uavs,
        })
    }

    /// Portable text snapshot: one comma-separated record per task and per UAV.
    /// Floats use the shortest representation that round-trips exactly.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        out.push_str("# mdc scenario snapshot v1\n");
        out.push_str(
            "# task,id,x,y,h,transmit_power,transmission_time,remaining_valid_time,extra_hover_time\n",
        );
        out.push_str("# uav,id,x,y,h,speed,altitude,remaining_energy\n");
        for t in &self.tasks {
            let _ = writeln!(
                out,
                "task,{},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                t.id,
                t.position.x,
                t.position.y,
                t.position.h,
                t.transmit_power,
                t.transmission_time,
                t.remaining_valid_time,
                t.extra_hover_time
            );
        }
        for u in &self.uavs {
            let _ = writeln!(
                out,
                "uav,{},{:?},{:?},{:?},{:?},{:?},{:?}",
                u.id,
                u.initial_position.x,
                u.initial_position.y,
                u.initial_position.h,
                u.speed,
                u.altitude,
                u.remaining_energy
            );
        }
        out
    }

    /// Parse a snapshot written by [`Scenario::to_snapshot`].
    pub fn parse_snapshot(text: &str) -> Result<(Vec<TaskRequest>, Vec<UavAgent>), ScenarioError> {
        let mut tasks = Vec::new();
        let mut uavs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split(',').collect();
            let err = |message: String| ScenarioError::Snapshot { line, message };
            let num = |i: usize| -> Result<f64, ScenarioError> {
                fields
                    .get(i)
                    .ok_or_else(|| err(format!("missing field {i}")))?
                    .parse::<f64>()
                    .map_err(|e| err(format!("field {i}: {e}")))
            };
            let id = fields
                .get(1)
                .ok_or_else(|| err("missing id".into()))?
                .parse::<usize>()
                .map_err(|e| err(format!("id: {e}")))?;
            match fields[0] {
                "task" if fields.len() == 9 => tasks.push(TaskRequest {
                    id,
                    position: Position::new(num(2)?, num(3)?, num(4)?),
                    transmit_power: num(5)?,
                    transmission_time: num(6)?,
                    remaining_valid_time: num(7)?,
                    extra_hover_time: num(8)?,
                    antenna_gain: None,
                    state: TaskState::Unexecuted,
                }),
                "uav" if fields.len() == 8 => {
                    let p = Position::new(num(2)?, num(3)?, num(4)?);
                    uavs.push(UavAgent {
                        id,
                        initial_position: p,
                        current_position: p,
                        speed: num(5)?,
                        altitude: num(6)?,
                        remaining_energy: num(7)?,
                        state: UavState::Idle,
                        assignment_log: Vec::new(),
                    })
                }
                kind => {
                    return Err(err(format!(
                        "unexpected record '{kind}' with {} fields",
                        fields.len()
                    )))
                }
            }
        }
        for (i, t) in tasks.iter().enumerate() {
            if t.id != i {
                return Err(ScenarioError::Snapshot {
                    line: 0,
                    message: format!("task ids must be 0..n in order, found {} at {i}", t.id),
                });
            }
        }
        for (i, u) in uavs.iter().enumerate() {
            if u.id != i {
                return Err(ScenarioError::Snapshot {
                    line: 0,
                    message: format!("uav ids must be 0..m in order, found {} at {i}", u.id),
                });
            }
        }
        Ok((tasks, uavs))
    }
}

/// Generate the task and UAV lists for `config`.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario, ScenarioError> {
    config.ensure_valid()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let area = config.area();

    let points = match &config.task_distribution {
        TaskDistribution::Random => random_points(config.n_tasks, area, &mut rng),
        TaskDistribution::Uniform => grid_points(config.n_tasks, area),
        TaskDistribution::Clustered { k, spread } => {
            clustered_points(config.n_tasks, *k, *spread, area, &mut rng)
        }
    };

    let tasks = points
        .into_iter()
        .enumerate()
        .map(|(id, position)| {
            let transmission_time = sample_range(config.transmission_time_range, &mut rng);
            let remaining_valid_time = sample_range(config.valid_time_range, &mut rng);
            let extra_hover_time = sample_hover(&config.hover_policy, &mut rng);
            TaskRequest {
                id,
                position,
                transmit_power: config.task_transmit_power,
                transmission_time,
                remaining_valid_time,
                extra_hover_time,
                antenna_gain: None,
                state: TaskState::Unexecuted,
            }
        })
        .collect();

    let uavs = takeoff_positions(&config.takeoff_placement, config.n_uavs, area)
        .into_iter()
        .enumerate()
        .map(|(id, p)| {
            let p = if matches!(config.takeoff_placement, TakeoffPlacement::Explicit { .. }) {
                p
            } else {
                p.with_altitude(config.uav_altitude)
            };
            UavAgent {
                id,
                initial_position: p,
                current_position: p,
                speed: config.uav_speed,
                altitude: config.uav_altitude,
                remaining_energy: config.uav_initial_energy,
                state: UavState::Idle,
                assignment_log: Vec::new(),
            }
        })
        .collect();

    Ok(Scenario {
        config: config.clone(),
        tasks,
        uavs,
    })
}

/// Take-off points for `n_uavs` UAVs, at sea level (`h = 0`) unless explicit.
pub fn takeoff_positions(placement: &TakeoffPlacement, n_uavs: usize, area: Area) -> Vec<Position> {
    let (w, h) = (area.width, area.height);
    let inset = TAKEOFF_INSET_M.min(w / 2.0).min(h / 2.0);
    match placement {
        TakeoffPlacement::Center => vec![Position::surface(w / 2.0, h / 2.0); n_uavs],
        TakeoffPlacement::Corners => {
            let corners = [
                Position::surface(inset, inset),
                Position::surface(w - inset, inset),
                Position::surface(w - inset, h - inset),
                Position::surface(inset, h - inset),
            ];
            (0..n_uavs).map(|i| corners[i % 4]).collect()
        }
        TakeoffPlacement::Edge { side } => (0..n_uavs)
            .map(|i| {
                let frac = (i as f64 + 0.5) / n_uavs as f64;
                match side {
                    Side::South => Position::surface(frac * w, inset),
                    Side::North => Position::surface(frac * w, h - inset),
                    Side::West => Position::surface(inset, frac * h),
                    Side::East => Position::surface(w - inset, frac * h),
                }
            })
            .collect(),
        TakeoffPlacement::Explicit { positions } => positions.clone(),
    }
}

/// Extra hover time for one task.
pub fn sample_hover<R: Rng + ?Sized>(policy: &HoverPolicy, rng: &mut R) -> f64 {
    match *policy {
        HoverPolicy::None => 0.0,
        HoverPolicy::UniformRange { lo, hi } => sample_range(Range::new(lo, hi), rng),
    }
}

fn sample_range<R: Rng + ?Sized>(r: Range, rng: &mut R) -> f64 {
    if r.lo == r.hi {
        r.lo
    } else {
        rng.random_range(r.lo..=r.hi)
    }
}

fn random_points<R: Rng + ?Sized>(n: usize, area: Area, rng: &mut R) -> Vec<Position> {
    (0..n)
        .map(|_| {
            let x = rng.random_range(0.0..=area.width);
            let y = rng.random_range(0.0..=area.height);
            Position::surface(x, y)
        })
        .collect()
}

/// Grid dimensions `(cols, rows)` for `n` points: the most square layout.
pub fn grid_shape(n: usize) -> (usize, usize) {
    if n == 0 {
        return (0, 0);
    }
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    (cols, rows)
}

fn grid_points(n: usize, area: Area) -> Vec<Position> {
    let (cols, rows) = grid_shape(n);
    (0..n)
        .map(|k| {
            let (c, r) = (k % cols, k / cols);
            Position::surface(
                (c as f64 + 0.5) * area.width / cols as f64,
                (r as f64 + 0.5) * area.height / rows as f64,
            )
        })
        .collect()
}

fn clustered_points<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    spread: f64,
    area: Area,
    rng: &mut R,
) -> Vec<Position> {
    let centers = random_points(k, area, rng);
    // spread was validated finite and non-negative
    let jitter = Normal::new(0.0, spread).expect("valid spread");
    (0..n)
        .map(|_| {
            let c = centers[rng.random_range(0..k)];
            loop {
                let p = Position::surface(c.x + jitter.sample(rng), c.y + jitter.sample(rng));
                if area.contains(&p) {
                    break p;
                }
            }
        })
        .collect()
}
