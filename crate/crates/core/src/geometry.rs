//! Planar distances and the coverage predicate.
//!
//! Both distances ignore altitude. [`slant`] lifts a planar distance to
//! the 3-D range for the optional slant-range mode.

use crate::scenario::Position;

/// Distance from a UAV's take-off point to a task, meters.
pub fn initial_distance(uav_initial: &Position, task: &Position) -> f64 {
    planar(uav_initial, task)
}

/// Distance from a UAV's current position to a task, meters.
pub fn realtime_distance(uav_now: &Position, task: &Position) -> f64 {
    planar(uav_now, task)
}

/// Whether a task at take-off distance `d0` lies inside the coverage radius (inclusive).
pub fn in_coverage(d0: f64, coverage_radius: f64) -> bool {
    d0 <= coverage_radius
}

/// 3-D range for a planar offset `d` at altitude `h`.
pub fn slant(d: f64, h: f64) -> f64 {
    d.hypot(h)
}

fn planar(a: &Position, b: &Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Dense `rows x cols` matrix of distances, row = UAV, column = task.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}
