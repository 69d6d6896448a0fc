use serde::{Deserialize, Serialize};

use crate::graph::{Point, Vertex, Wedge};

/// How arrangement edges that disappear with a deleted (or appear with an
/// inserted) wedge are charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArrangementDeletion {
    /// Each such directed edge costs `del_cost`.
    #[serde(rename = "D")]
    PerEdge,
    /// Such edges are free.
    #[serde(rename = "0")]
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Weight of the cosine distance between arrangement vectors.
    pub alpha: f64,
    /// Cost of deleting or inserting a single vertex or edge.
    pub del_cost: f64,
    pub arrangement_deletion: ArrangementDeletion,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel { alpha: 1000.0, del_cost: 1000.0, arrangement_deletion: ArrangementDeletion::PerEdge }
    }
}

impl CostModel {
    pub fn new(alpha: f64, del_cost: f64) -> Self {
        CostModel { alpha, del_cost, ..CostModel::default() }
    }

    pub fn is_valid(&self) -> bool {
        self.alpha.is_finite() && self.alpha >= 0.0 && self.del_cost.is_finite() && self.del_cost >= 0.0
    }

    /// Deleting a wedge removes 4 vertices and 12 directed clique edges.
    pub fn wedge_deletion_cost(&self) -> f64 {
        16.0 * self.del_cost
    }

    pub fn arrangement_edge_deletion_cost(&self) -> f64 {
        match self.arrangement_deletion {
            ArrangementDeletion::PerEdge => self.del_cost,
            ArrangementDeletion::Free => 0.0,
        }
    }
}

fn sq_dist(p: Point, q: Point) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

/// `+inf` on any label mismatch, squared Euclidean distance otherwise.
pub fn vertex_sub_cost(u: &Vertex, v: &Vertex) -> f64 {
    if u.point_type != v.point_type || u.glyph_type != v.glyph_type {
        return f64::INFINITY;
    }
    sq_dist(u.position, v.position)
}

/// `alpha` times the cosine distance of two arrangement vectors.
///
/// A zero vector has no direction: one zero vector costs `alpha`, two cost 0.
pub fn arrangement_sub_cost(x: Point, y: Point, cm: &CostModel) -> f64 {
    let nx = x[0].hypot(x[1]);
    let ny = y[0].hypot(y[1]);
    match (nx == 0.0, ny == 0.0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => cm.alpha,
        (false, false) => {
            // 1 - cos(x, y) = |x/|x| - y/|y||^2 / 2, free of cancellation near 0
            let dx = x[0] / nx - y[0] / ny;
            let dy = x[1] / nx - y[1] / ny;
            cm.alpha * (0.5 * (dx * dx + dy * dy)).min(2.0)
        }
    }
}

/// Sum of squared distances between same-type vertices, `+inf` on glyph mismatch.
pub fn wedge_sub_cost(a: &Wedge, a_pos: &[Point; 4], b: &Wedge, b_pos: &[Point; 4]) -> f64 {
    if a.glyph_type != b.glyph_type {
        return f64::INFINITY;
    }
    (0..4).map(|k| sq_dist(a_pos[k], b_pos[k])).sum()
}
