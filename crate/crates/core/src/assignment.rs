//! Linear sum assignment on square matrices whose entries are finite
//! non-negative costs or `+inf`.
//!
//! `f64::INFINITY` is the forbidden-entry sentinel. It is never replaced by a
//! large finite surrogate, and sums involving it saturate to `+inf`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssignmentError {
    #[error("cost matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("cost matrix entry ({row}, {col}) is {value}; entries must be >= 0 or +inf")]
    InvalidEntry { row: usize, col: usize, value: f64 },
    #[error("every assignment has infinite cost")]
    Infeasible,
}

/// Dense row-major square cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn filled(size: usize, value: f64) -> Self {
        CostMatrix { size, entries: vec![value; size * size] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, AssignmentError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(AssignmentError::NotSquare { row: r, len: row.len(), expected: size });
            }
            for (c, &v) in row.iter().enumerate() {
                if v.is_nan() || v < 0.0 || v == f64::NEG_INFINITY {
                    return Err(AssignmentError::InvalidEntry { row: r, col: c, value: v });
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(CostMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value >= 0.0, "negative or NaN cost {value}");
        self.entries[row * self.size + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut t = CostMatrix::filled(self.size, 0.0);
        for r in 0..self.size {
            for c in 0..self.size {
                t.entries[c * self.size + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size.max(1)).take(self.size).map(|r| r.to_vec()).collect()
    }

    /// Sum of the entries selected by `perm`, added in ascending order so the
    /// result depends only on the multiset of selected entries.
    pub fn permutation_cost(&self, perm: &[usize]) -> f64 {
        let mut picked: Vec<f64> = perm.iter().enumerate().map(|(r, &c)| self.get(r, c)).collect();
        picked.sort_by(f64::total_cmp);
        picked.into_iter().sum()
    }

    fn finite_scale(&self) -> f64 {
        self.entries.iter().copied().filter(|v| v.is_finite()).fold(1.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `permutation[row] = col`.
    pub permutation: Vec<usize>,
    pub total_cost: f64,
}

/// Minimum-cost bijection between rows and columns.
///
/// Among all optimal permutations the lexicographically smallest one is
/// returned. Runs the shortest-augmenting-path Hungarian method for the
/// optimal duals, then extracts the smallest perfect matching of the
/// zero-reduced-cost subgraph.
pub fn solve(c: &CostMatrix) -> Result<Assignment, AssignmentError> {
    let n = c.size();
    if n == 0 {
        return Ok(Assignment { permutation: Vec::new(), total_cost: 0.0 });
    }
    let (u, v, matched) = hungarian(c)?;

    let tol = 1e-9 * c.finite_scale();
    let tight = |r: usize, col: usize| {
        let x = c.get(r, col);
        x.is_finite() && x - u[r] - v[col] <= tol
    };

    // row_of[col] / col_of[row] for the working perfect matching
    let mut col_of = matched;
    let mut row_of = vec![0usize; n];
    for (r, &col) in col_of.iter().enumerate() {
        row_of[col] = r;
    }
    let mut fixed_col = vec![false; n];
    for r in 0..n {
        for col in 0..n {
            if fixed_col[col] || !tight(r, col) {
                continue;
            }
            if col_of[r] == col {
                break;
            }
            // Re-route the row currently holding `col` onto the column `r` frees up.
            let holder = row_of[col];
            let target = col_of[r];
            if let Some(path) = alternating_path(n, holder, target, r, &fixed_col, &col_of, &row_of, &tight) {
                // path: holder takes path[0], ..., last row takes target
                let mut row = holder;
                for &next_col in &path {
                    let displaced = row_of[next_col];
                    col_of[row] = next_col;
                    row_of[next_col] = row;
                    row = displaced;
                }
                col_of[r] = col;
                row_of[col] = r;
                break;
            }
        }
        fixed_col[col_of[r]] = true;
    }

    let total_cost = c.permutation_cost(&col_of);
    if !total_cost.is_finite() {
        return Err(AssignmentError::Infeasible);
    }
    Ok(Assignment { permutation: col_of, total_cost })
}

/// Searches tight edges for an alternating path that moves `start` (a row)
/// off its column and ends by assigning some row to `target`. Rows `<= fixed`
/// are excluded. Returns the sequence of new columns taken by each row on the
/// path.
#[allow(clippy::too_many_arguments)]
fn alternating_path(
    n: usize,
    start: usize,
    target: usize,
    current: usize,
    fixed_col: &[bool],
    col_of: &[usize],
    row_of: &[usize],
    tight: &impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    // BFS over rows; parent[col] = row that reached col
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut visited_row = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    visited_row[start] = true;
    while let Some(row) = queue.pop_front() {
        for col in 0..n {
            if fixed_col[col] || parent[col].is_some() || col == col_of[row] || !tight(row, col) {
                continue;
            }
            if col == col_of[start] {
                continue;
            }
            parent[col] = Some(row);
            if col == target {
                let mut cols = vec![col];
                let mut r = row;
                while r != start {
                    let prev_col = col_of[r];
                    cols.push(prev_col);
                    r = parent[prev_col].expect("parent recorded");
                }
                cols.reverse();
                return Some(cols);
            }
            let next = row_of[col];
            if next != current && !visited_row[next] {
                visited_row[next] = true;
                queue.push_back(next);
            }
        }
    }
    None
}

/// Row potentials, column potentials and an optimal row->column map.
type Solution = (Vec<f64>, Vec<f64>, Vec<usize>);

fn hungarian(c: &CostMatrix) -> Result<Solution, AssignmentError> {
    let n = c.size();
    // 1-based internal arrays; index 0 is the virtual root
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cost = c.get(i0 - 1, j - 1);
                if cost.is_finite() {
                    let cur = cost - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return Err(AssignmentError::Infeasible);
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if minv[j].is_finite() {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[p[j] - 1] = j - 1;
    }
    Ok((u[1..].to_vec(), v[1..].to_vec(), col_of))
}
