//! Exact edit distance by branch-and-bound over wedge mappings.
//!
//! Rows (wedges of G) are fixed one at a time to a free wedge of H or to
//! deletion. The bound at each node is the optimal assignment over the
//! remaining wedges where each entry also carries the arrangement costs it
//! incurs against the already-fixed wedges; costs among still-free wedges are
//! dropped, which keeps the bound admissible since they are non-negative.

use super::{arrangement_sub_cost, mapping_cost, path_for, CostModel, EditPath, GedError, WedgeView};
use crate::assignment::{self, CostMatrix};
use crate::graph::CuneiformGraph;

pub const DEFAULT_MAX_WEDGES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest accepted `n + m`.
    pub max_wedges: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { max_wedges: DEFAULT_MAX_WEDGES }
    }
}

/// Minimum-cost edit path over all wedge mappings. The result never exceeds
/// the APX2 cost, which seeds the search as the incumbent.
pub fn exact(
    g: &CuneiformGraph,
    h: &CuneiformGraph,
    cm: &CostModel,
    opts: &ExactOptions,
) -> Result<(f64, EditPath), GedError> {
    let path = exact_views(&WedgeView::new(g), &WedgeView::new(h), cm, opts)?;
    Ok((path.cost(), path))
}

pub(crate) fn exact_views(
    a: &WedgeView,
    b: &WedgeView,
    cm: &CostModel,
    opts: &ExactOptions,
) -> Result<EditPath, GedError> {
    let (n, m) = (a.len(), b.len());
    if n + m > opts.max_wedges {
        return Err(GedError::SizeBoundExceeded { n, m, bound: opts.max_wedges });
    }
    let seed = super::apx2_views(a, b, cm)?;
    let mut search = Search::new(a, b, cm, seed.wedge_map.clone(), seed.cost());
    let mut partial = Vec::with_capacity(n);
    let mut used = vec![false; m];
    search.branch(&mut partial, &mut used, 0.0)?;
    Ok(path_for(a, b, search.best_map, cm))
}

struct Search<'a> {
    a: &'a WedgeView,
    b: &'a WedgeView,
    cm: &'a CostModel,
    /// `sub[i][j]`: wedge substitution cost.
    sub: Vec<Vec<f64>>,
    /// `pair[i][k][j][l]` flattened: arrangement cost of mapping `i->j` and
    /// `k->l` together, both edge directions.
    pair: Vec<f64>,
    best_map: Vec<Option<usize>>,
    best_cost: f64,
}

impl<'a> Search<'a> {
    fn new(
        a: &'a WedgeView,
        b: &'a WedgeView,
        cm: &'a CostModel,
        best_map: Vec<Option<usize>>,
        best_cost: f64,
    ) -> Self {
        let (n, m) = (a.len(), b.len());
        let sub = (0..n).map(|i| (0..m).map(|j| a.sub_cost(i, b, j)).collect()).collect();
        let mut pair = vec![0.0; n * n * m * m];
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..m {
                    for l in 0..m {
                        if j == l {
                            continue;
                        }
                        pair[((i * n + k) * m + j) * m + l] =
                            arrangement_sub_cost(a.arrangement(i, k), b.arrangement(j, l), cm)
                                + arrangement_sub_cost(a.arrangement(k, i), b.arrangement(l, j), cm);
                    }
                }
            }
        }
        Search { a, b, cm, sub, pair, best_map, best_cost }
    }

    fn pair_cost(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let (n, m) = (self.a.len(), self.b.len());
        self.pair[((i * n + k) * m + j) * m + l]
    }

    /// Cost row `i` adds against the fixed prefix when mapped to `target`.
    fn fix_cost(&self, i: usize, target: Option<usize>, partial: &[Option<usize>]) -> f64 {
        let arr_del = 2.0 * self.cm.arrangement_edge_deletion_cost();
        let mut c = match target {
            Some(j) => self.sub[i][j],
            None => self.cm.wedge_deletion_cost(),
        };
        for (k, t) in partial.iter().enumerate() {
            c += match (target, *t) {
                (Some(j), Some(l)) => self.pair_cost(i, j, k, l),
                _ => arr_del,
            };
        }
        c
    }

    fn insertion_cost(&self, partial: &[Option<usize>]) -> f64 {
        let mapped = partial.iter().filter(|t| t.is_some()).count() as f64;
        self.cm.wedge_deletion_cost() + mapped * 2.0 * self.cm.arrangement_edge_deletion_cost()
    }

    fn lower_bound(&self, partial: &[Option<usize>], used: &[bool]) -> Result<f64, GedError> {
        let n = self.a.len();
        let rows: Vec<usize> = (partial.len()..n).collect();
        let cols: Vec<usize> = (0..self.b.len()).filter(|&j| !used[j]).collect();
        let (r, c) = (rows.len(), cols.len());
        if r + c == 0 {
            return Ok(0.0);
        }
        let mut mat = CostMatrix::filled(r + c, f64::INFINITY);
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, &j) in cols.iter().enumerate() {
                mat.set(ri, ci, self.fix_cost(i, Some(j), partial));
            }
            mat.set(ri, c + ri, self.fix_cost(i, None, partial));
        }
        let ins = self.insertion_cost(partial);
        for ci in 0..c {
            mat.set(r + ci, ci, ins);
            for ri in 0..r {
                mat.set(r + ci, c + ri, 0.0);
            }
        }
        Ok(assignment::solve(&mat)?.total_cost)
    }

    fn prunable(&self, bound: f64) -> bool {
        bound - self.best_cost > 1e-9 * self.best_cost.max(1.0)
    }

    fn branch(&mut self, partial: &mut Vec<Option<usize>>, used: &mut [bool], cost: f64) -> Result<(), GedError> {
        let i = partial.len();
        if i == self.a.len() {
            let bd = mapping_cost(self.a, self.b, partial, self.cm);
            if bd.total() < self.best_cost {
                self.best_cost = bd.total();
                self.best_map = partial.clone();
            }
            return Ok(());
        }
        let bound = cost + self.lower_bound(partial, used)?;
        if self.prunable(bound) {
            return Ok(());
        }
        let mut options: Vec<(f64, Option<usize>)> = (0..self.b.len())
            .filter(|&j| !used[j] && self.sub[i][j].is_finite())
            .map(|j| (self.fix_cost(i, Some(j), partial), Some(j)))
            .collect();
        options.push((self.fix_cost(i, None, partial), None));
        options.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (step, target) in options {
            if self.prunable(cost + step) {
                break;
            }
            if let Some(j) = target {
                used[j] = true;
            }
            partial.push(target);
            self.branch(partial, used, cost + step)?;
            partial.pop();
            if let Some(j) = target {
                used[j] = false;
            }
        }
        Ok(())
    }
}
