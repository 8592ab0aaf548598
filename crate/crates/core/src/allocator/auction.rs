use crate::geometry::DistanceMatrix;

use super::context::SlotContext;
use super::matrix::MatchMatrix;
use super::{waiting_time, AllocError};

/// One UAV-task pair committed in a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Commit {
    pub uav: usize,
    pub task: usize,
    pub fallback: bool,
}

/// Reverse auction over the candidate matrix: UAVs bid their waiting time.
///
/// Candidates that would arrive after the task's wait threshold are
/// dropped (fallback rows are exempt), then every task keeps only its
/// lowest bidder, ties going to the lower UAV id.
pub fn reverse_auction(
    ctx: &SlotContext<'_>,
    mut matrix: MatchMatrix,
    idle: &[usize],
    open: &[usize],
) -> MatchMatrix {
    let wait = |i: usize, j: usize| waiting_time(ctx.d.get(i, j), ctx.uav(i).speed);
    for &j in open {
        let threshold = ctx.task(j).wait_threshold(ctx.elapsed);
        for &i in idle {
            if matrix.get(i, j) && !matrix.is_fallback(i) && wait(i, j) > threshold {
                matrix.set(i, j, false);
            }
        }
        let mut bidders = matrix.col_ones(j);
        let Some(first) = bidders.next() else {
            continue;
        };
        let winner = bidders.fold(
            first,
            |best, i| if wait(i, j) < wait(best, j) { i } else { best },
        );
        if matrix.col_count(j) > 1 {
            matrix.clear_col(j);
            matrix.set(winner, j, true);
        }
    }
    matrix
}

/// Turn a post-auction matrix into commits: a single candidate is taken as
/// is, several candidates resolve to the nearest (lower task id on ties).
///
/// Fails if two rows still share a column, which the auction rules out.
pub fn resolve_slot(
    matrix: &MatchMatrix,
    d: &DistanceMatrix,
    idle: &[usize],
) -> Result<Vec<Commit>, AllocError> {
    for j in 0..matrix.cols() {
        if matrix.col_count(j) > 1 {
            return Err(AllocError::ColumnConflict { task: j });
        }
    }
    let mut commits = Vec::new();
    for &i in idle {
        let mut ones = matrix.row_ones(i);
        let Some(first) = ones.next() else {
            continue;
        };
        let task = ones.fold(first, |best, j| {
            if d.get(i, j) < d.get(i, best) {
                j
            } else {
                best
            }
        });
        commits.push(Commit {
            uav: i,
            task,
            fallback: matrix.is_fallback(i),
        });
    }
    Ok(commits)
}
