//! Edit distance between wedge graphs.
//!
//! Finite-cost edit paths never split a wedge: vertex label mismatches and
//! edge-type changes cost `+inf`, so every path maps whole wedges onto
//! glyph-compatible whole wedges or deletes/inserts them. All three methods
//! therefore work on wedge-level mappings:
//!
//! * [`apx1`] - optimal wedge assignment cost, arrangement edges ignored;
//! * [`apx2`] - full cost of the edit path induced by that assignment;
//! * [`exact`] - minimum full cost over all wedge mappings.

mod cost;
mod distance;
mod exact;

pub use cost::{arrangement_sub_cost, vertex_sub_cost, wedge_sub_cost, ArrangementDeletion, CostModel};
pub use distance::{distance_matrix, distance_matrix_between, DistanceMatrix};
pub use exact::{exact, ExactOptions, DEFAULT_MAX_WEDGES};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{self, AssignmentError, CostMatrix};
use crate::graph::{CuneiformGraph, GlyphType, Point, PointType};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GedError {
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
    #[error("exact solver limited to {bound} wedges combined, got {n} + {m}")]
    SizeBoundExceeded { n: usize, m: usize, bound: usize },
    #[error("invalid cost model: alpha and D must be finite and non-negative")]
    InvalidCostModel,
    #[error("pair ({row}, {col}) [{row_id} vs {col_id}]: {source}")]
    Pair { row: usize, col: usize, row_id: String, col_id: String, source: Box<GedError> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "APX1")]
    Apx1,
    #[serde(rename = "APX2")]
    Apx2,
    #[serde(rename = "EXACT")]
    Exact,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Apx1, Method::Apx2, Method::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Method::Apx1 => "APX1",
            Method::Apx2 => "APX2",
            Method::Exact => "EXACT",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "apx1" => Ok(Method::Apx1),
            "apx2" => Ok(Method::Apx2),
            "exact" => Ok(Method::Exact),
            other => Err(format!("unknown method `{other}` (expected apx1, apx2 or exact)")),
        }
    }
}

/// Per-wedge glyphs and positions, in [`PointType`] order.
#[derive(Debug, Clone)]
pub struct WedgeView {
    glyphs: Vec<GlyphType>,
    pos: Vec<[Point; 4]>,
}

impl WedgeView {
    pub fn new(g: &CuneiformGraph) -> Self {
        let glyphs = g.wedges().iter().map(|w| w.glyph_type).collect();
        let pos = g.wedges().iter().map(|w| PointType::ALL.map(|pt| g.position(w.vertex(pt)))).collect();
        WedgeView { glyphs, pos }
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    fn sub_cost(&self, i: usize, other: &WedgeView, j: usize) -> f64 {
        if self.glyphs[i] != other.glyphs[j] {
            return f64::INFINITY;
        }
        let (a, b) = (&self.pos[i], &other.pos[j]);
        (0..4)
            .map(|k| {
                let dx = a[k][0] - b[k][0];
                let dy = a[k][1] - b[k][1];
                dx * dx + dy * dy
            })
            .sum()
    }

    /// Vector of the arrangement edge from wedge `i`'s depth point to wedge `k`'s.
    fn arrangement(&self, i: usize, k: usize) -> Point {
        let p = self.pos[i][0];
        let q = self.pos[k][0];
        [q[0] - p[0], q[1] - p[1]]
    }
}

/// The `(n+m) x (n+m)` wedge assignment matrix: substitutions top-left,
/// `16 D` on the deletion and insertion diagonals, `+inf` elsewhere in those
/// blocks, zeros bottom-right.
pub fn build_cost_matrix(g: &CuneiformGraph, h: &CuneiformGraph, cm: &CostModel) -> CostMatrix {
    cost_matrix_for(&WedgeView::new(g), &WedgeView::new(h), cm)
}

pub(crate) fn cost_matrix_for(a: &WedgeView, b: &WedgeView, cm: &CostModel) -> CostMatrix {
    let (n, m) = (a.len(), b.len());
    let del = cm.wedge_deletion_cost();
    let mut c = CostMatrix::filled(n + m, f64::INFINITY);
    for i in 0..n {
        for j in 0..m {
            c.set(i, j, a.sub_cost(i, b, j));
        }
        c.set(i, m + i, del);
    }
    for j in 0..m {
        c.set(n + j, j, del);
        for k in 0..n {
            c.set(n + j, m + k, 0.0);
        }
    }
    c
}

/// Cost components of an edit path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub vertex_substitution: f64,
    pub arrangement_substitution: f64,
    pub wedge_deletion: f64,
    pub wedge_insertion: f64,
    pub arrangement_deletion: f64,
    pub arrangement_insertion: f64,
    /// Arrangement substitutions where at least one vector was zero.
    pub zero_vector_pairs: usize,
    /// Wedge-level part (substitutions, wedge deletions/insertions) summed in
    /// ascending order; bitwise equal to the matching assignment cost.
    pub wedge_total: f64,
}

impl CostBreakdown {
    pub fn arrangement_total(&self) -> f64 {
        self.arrangement_substitution + self.arrangement_deletion + self.arrangement_insertion
    }

    pub fn total(&self) -> f64 {
        self.wedge_total + self.arrangement_total()
    }
}

/// An edit path between two wedge graphs, described by its wedge mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditPath {
    /// `wedge_map[i] = Some(j)` substitutes wedge `i` of G by wedge `j` of H;
    /// `None` deletes it.
    pub wedge_map: Vec<Option<usize>>,
    /// Wedges of H with no preimage.
    pub inserted: Vec<usize>,
    /// Induced vertex mapping for every vertex of G.
    pub vertex_map: Vec<Option<usize>>,
    pub breakdown: CostBreakdown,
}

impl EditPath {
    pub fn cost(&self) -> f64 {
        self.breakdown.total()
    }
}

/// Full edit-path cost of a wedge mapping between two views.
pub(crate) fn mapping_cost(a: &WedgeView, b: &WedgeView, map: &[Option<usize>], cm: &CostModel) -> CostBreakdown {
    let (n, m) = (a.len(), b.len());
    let del = cm.wedge_deletion_cost();
    let arr_del = cm.arrangement_edge_deletion_cost();
    let mut covered = vec![false; m];
    let mut wedge_terms = Vec::with_capacity(n + m);
    let mut bd = CostBreakdown::default();

    for (i, t) in map.iter().enumerate() {
        match *t {
            Some(j) => {
                covered[j] = true;
                let c = a.sub_cost(i, b, j);
                bd.vertex_substitution += c;
                wedge_terms.push(c);
            }
            None => {
                bd.wedge_deletion += del;
                wedge_terms.push(del);
            }
        }
    }
    for &cov in &covered {
        if !cov {
            bd.wedge_insertion += del;
            wedge_terms.push(del);
        }
    }
    wedge_terms.sort_by(f64::total_cmp);
    bd.wedge_total = wedge_terms.into_iter().sum();

    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            match (map[i], map[k]) {
                (Some(j), Some(l)) => {
                    let x = a.arrangement(i, k);
                    let y = b.arrangement(j, l);
                    if (x[0] == 0.0 && x[1] == 0.0) || (y[0] == 0.0 && y[1] == 0.0) {
                        bd.zero_vector_pairs += 1;
                    }
                    bd.arrangement_substitution += arrangement_sub_cost(x, y, cm);
                }
                _ => bd.arrangement_deletion += arr_del,
            }
        }
    }
    for j in 0..m {
        for l in 0..m {
            if j != l && (!covered[j] || !covered[l]) {
                bd.arrangement_insertion += arr_del;
            }
        }
    }
    bd
}

fn vertex_map_for(map: &[Option<usize>]) -> Vec<Option<usize>> {
    map.iter().flat_map(|t| (0..4).map(move |k| t.map(|j| 4 * j + k))).collect()
}

pub(crate) fn path_for(a: &WedgeView, b: &WedgeView, map: Vec<Option<usize>>, cm: &CostModel) -> EditPath {
    let breakdown = mapping_cost(a, b, &map, cm);
    let mut covered = vec![false; b.len()];
    for j in map.iter().flatten() {
        covered[*j] = true;
    }
    EditPath {
        inserted: (0..b.len()).filter(|&j| !covered[j]).collect(),
        vertex_map: vertex_map_for(&map),
        wedge_map: map,
        breakdown,
    }
}

/// Edit path of an explicit wedge mapping.
pub fn edit_path(g: &CuneiformGraph, h: &CuneiformGraph, map: Vec<Option<usize>>, cm: &CostModel) -> EditPath {
    path_for(&WedgeView::new(g), &WedgeView::new(h), map, cm)
}

fn check(cm: &CostModel) -> Result<(), GedError> {
    if cm.is_valid() {
        Ok(())
    } else {
        Err(GedError::InvalidCostModel)
    }
}

fn optimal_wedge_map(a: &WedgeView, b: &WedgeView, cm: &CostModel) -> Result<(f64, Vec<Option<usize>>), GedError> {
    let sol = assignment::solve(&cost_matrix_for(a, b, cm))?;
    let m = b.len();
    let map = sol.permutation[..a.len()].iter().map(|&c| (c < m).then_some(c)).collect();
    Ok((sol.total_cost, map))
}

pub(crate) fn apx1_views(a: &WedgeView, b: &WedgeView, cm: &CostModel) -> Result<f64, GedError> {
    check(cm)?;
    Ok(assignment::solve(&cost_matrix_for(a, b, cm))?.total_cost)
}

pub(crate) fn apx2_views(a: &WedgeView, b: &WedgeView, cm: &CostModel) -> Result<EditPath, GedError> {
    check(cm)?;
    let (_, map) = optimal_wedge_map(a, b, cm)?;
    Ok(path_for(a, b, map, cm))
}

/// Optimal wedge assignment cost; arrangement edges are not charged.
pub fn apx1(g: &CuneiformGraph, h: &CuneiformGraph, cm: &CostModel) -> Result<f64, GedError> {
    apx1_views(&WedgeView::new(g), &WedgeView::new(h), cm)
}

/// Full cost of the edit path induced by the optimal wedge assignment.
pub fn apx2(g: &CuneiformGraph, h: &CuneiformGraph, cm: &CostModel) -> Result<(f64, EditPath), GedError> {
    let path = apx2_views(&WedgeView::new(g), &WedgeView::new(h), cm)?;
    Ok((path.cost(), path))
}

/// Distance under `method` with default exact-solver options.
pub fn distance(g: &CuneiformGraph, h: &CuneiformGraph, method: Method, cm: &CostModel) -> Result<f64, GedError> {
    distance_views(&WedgeView::new(g), &WedgeView::new(h), method, cm, &ExactOptions::default())
}

pub(crate) fn distance_views(
    a: &WedgeView,
    b: &WedgeView,
    method: Method,
    cm: &CostModel,
    opts: &ExactOptions,
) -> Result<f64, GedError> {
    match method {
        Method::Apx1 => apx1_views(a, b, cm),
        Method::Apx2 => Ok(apx2_views(a, b, cm)?.cost()),
        Method::Exact => Ok(exact::exact_views(a, b, cm, opts)?.cost()),
    }
}
