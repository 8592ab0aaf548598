use std::fmt;

/// Slot-local binary UAV x task candidate matrix.
///
/// Rows are UAV ids and columns task ids over the whole scenario; only the
/// rows of idle UAVs and the columns of open tasks are ever set. Each row
/// also carries a flag recording that its single entry came from the
/// nearest-task fallback rather than the quality gates.
#[derive(Clone, PartialEq, Eq)]
pub struct MatchMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
    fallback: Vec<bool>,
}

impl MatchMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![false; rows * cols],
            fallback: vec![false; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn is_fallback(&self, i: usize) -> bool {
        self.fallback[i]
    }

    pub fn set_fallback(&mut self, i: usize, value: bool) {
        self.fallback[i] = value;
    }

    /// Columns set in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.entries[i * self.cols..(i + 1) * self.cols]
            .iter()
            .enumerate()
            .filter_map(|(j, &v)| v.then_some(j))
    }

    /// Rows set in column `j`, ascending.
    pub fn col_ones(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(move |&i| self.get(i, j))
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row_ones(i).count()
    }

    pub fn col_count(&self, j: usize) -> usize {
        self.col_ones(j).count()
    }

    pub fn count_ones(&self) -> usize {
        self.entries.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count_ones() == 0
    }

    pub fn clear_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.set(i, j, false);
        }
    }
}

impl fmt::Debug for MatchMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatchMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(
                f,
                "  {row}{}",
                if self.fallback[i] { " (fallback)" } else { "" }
            )?;
        }
        Ok(())
    }
}
