use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_views, CostModel, ExactOptions, GedError, Method, WedgeView};
use crate::graph::CuneiformGraph;

/// Dense matrix of pairwise distances; `values[r * cols + c] = d(row_r, col_c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub method: Method,
    pub cost_model: CostModel,
    /// True when only one triangle was computed and mirrored.
    pub symmetric_by_construction: bool,
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols() + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let c = self.cols();
        &self.values[r * c..(r + 1) * c]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "id")?;
        for id in &self.col_ids {
            write!(w, ",{id}")?;
        }
        writeln!(w)?;
        for (r, id) in self.row_ids.iter().enumerate() {
            write!(w, "{id}")?;
            for v in self.row(r) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// All-pairs distances over `graphs`. The diagonal is zero. APX1 is computed
/// on the upper triangle and mirrored; APX2 and EXACT evaluate every ordered
/// pair because the induced edit path depends on direction.
pub fn distance_matrix(
    graphs: &[CuneiformGraph],
    method: Method,
    cm: &CostModel,
    opts: &ExactOptions,
) -> Result<DistanceMatrix, GedError> {
    let views: Vec<WedgeView> = graphs.iter().map(WedgeView::new).collect();
    let n = graphs.len();
    let symmetric = method == Method::Apx1;
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| r != c && (!symmetric || r < c)).collect();
    let results: Vec<Result<f64, GedError>> =
        cells.par_iter().map(|&(r, c)| distance_views(&views[r], &views[c], method, cm, opts)).collect();
    let mut values = vec![0.0; n * n];
    for (&(r, c), res) in cells.iter().zip(results) {
        let d = res.map_err(|e| pair_error(graphs, graphs, r, c, e))?;
        values[r * n + c] = d;
        if symmetric {
            values[c * n + r] = d;
        }
    }
    let ids: Vec<String> = graphs.iter().map(|g| g.id.clone()).collect();
    Ok(DistanceMatrix {
        method,
        cost_model: *cm,
        symmetric_by_construction: symmetric,
        row_ids: ids.clone(),
        col_ids: ids,
        values,
    })
}

/// Distances from every graph in `rows` to every graph in `cols`.
pub fn distance_matrix_between(
    rows: &[CuneiformGraph],
    cols: &[CuneiformGraph],
    method: Method,
    cm: &CostModel,
    opts: &ExactOptions,
) -> Result<DistanceMatrix, GedError> {
    let rv: Vec<WedgeView> = rows.iter().map(WedgeView::new).collect();
    let cv: Vec<WedgeView> = cols.iter().map(WedgeView::new).collect();
    let results: Vec<Result<f64, GedError>> = (0..rows.len() * cols.len())
        .into_par_iter()
        .map(|k| distance_views(&rv[k / cols.len()], &cv[k % cols.len()], method, cm, opts))
        .collect();
    let mut values = Vec::with_capacity(results.len());
    for (k, res) in results.into_iter().enumerate() {
        values.push(res.map_err(|e| pair_error(rows, cols, k / cols.len(), k % cols.len(), e))?);
    }
    Ok(DistanceMatrix {
        method,
        cost_model: *cm,
        symmetric_by_construction: false,
        row_ids: rows.iter().map(|g| g.id.clone()).collect(),
        col_ids: cols.iter().map(|g| g.id.clone()).collect(),
        values,
    })
}

fn pair_error(rows: &[CuneiformGraph], cols: &[CuneiformGraph], r: usize, c: usize, e: GedError) -> GedError {
    GedError::Pair { row: r, col: c, row_id: rows[r].id.clone(), col_id: cols[c].id.clone(), source: Box::new(e) }
}
