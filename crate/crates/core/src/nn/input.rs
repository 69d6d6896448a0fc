//! Per-graph network input: vertex features, directed neighbourhoods and the
//! spline basis of every edge's pseudo-coordinate.

use super::bspline::{bspline_basis, Basis};
use super::NetError;
use crate::graph::{CuneiformGraph, Vertex};

pub const FEATURES: usize = 8;

/// Slots 0..4 point type, 4..7 glyph type, slot 7 constant; `+1` active, `-1` inactive.
pub fn vertex_features(v: &Vertex) -> [f64; FEATURES] {
    let mut f = [-1.0; FEATURES];
    f[v.point_type.index()] = 1.0;
    f[4 + v.glyph_type.index()] = 1.0;
    f[7] = 1.0;
    f
}

/// Row-major `|V| x 8`.
pub fn input_features(g: &CuneiformGraph) -> Vec<f64> {
    g.vertices().iter().flat_map(vertex_features).collect()
}

/// Largest absolute offset component over all edges of the given graphs.
pub fn normalization_constant<'a>(graphs: impl IntoIterator<Item = &'a CuneiformGraph>) -> Result<f64, NetError> {
    let mut r: f64 = 0.0;
    for g in graphs {
        for e in g.edges() {
            let (p, q) = (g.position(e.dst), g.position(e.src));
            r = r.max((p[0] - q[0]).abs()).max((p[1] - q[1]).abs());
        }
    }
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(NetError::DegenerateNormalization)
    }
}

/// `(p_dst - p_src) / 2R + 1/2`, clipped to the unit square.
pub fn pseudo_coord(dst: [f64; 2], src: [f64; 2], r: f64) -> [f64; 2] {
    [0, 1].map(|k| ((dst[k] - src[k]) / (2.0 * r) + 0.5).clamp(0.0, 1.0))
}

/// Pseudo-coordinate of every edge of `g`, in edge order.
pub fn pseudo_coords(g: &CuneiformGraph, r: f64) -> Result<Vec<[f64; 2]>, NetError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(NetError::DegenerateNormalization);
    }
    Ok(g.edges().iter().map(|e| pseudo_coord(g.position(e.dst), g.position(e.src), r)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    pub vertices: usize,
    /// `vertices x 8`, row-major.
    pub features: Vec<f64>,
    /// `(src, dst)` pairs; `dst` aggregates from `src`.
    pub edges: Vec<(usize, usize)>,
    pub basis: Vec<Basis>,
    /// `1 / in-degree` per vertex.
    pub inv_degree: Vec<f64>,
}

impl GraphInput {
    pub fn new(g: &CuneiformGraph, r: f64, self_loops: bool) -> Result<Self, NetError> {
        let coords = pseudo_coords(g, r)?;
        let n = g.vertices().len();
        let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.src, e.dst)).collect();
        let mut basis: Vec<Basis> = coords.into_iter().map(bspline_basis).collect();
        if self_loops {
            let centre = bspline_basis([0.5, 0.5]);
            for v in 0..n {
                edges.push((v, v));
                basis.push(centre);
            }
        }
        let mut deg = vec![0usize; n];
        for &(_, d) in &edges {
            deg[d] += 1;
        }
        if let Some(v) = deg.iter().position(|&d| d == 0) {
            return Err(NetError::IsolatedVertex { graph: g.id.clone(), vertex: v });
        }
        Ok(GraphInput {
            vertices: n,
            features: input_features(g),
            edges,
            basis,
            inv_degree: deg.iter().map(|&d| 1.0 / d as f64).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GlyphType, PointType, WedgeSpec};

    fn da() -> CuneiformGraph {
        CuneiformGraph::build_from_wedges(
            "da",
            0,
            &[
                WedgeSpec::new(GlyphType::Vertical, [[0.0, 0.0], [0.0, -2.0], [0.5, 0.3], [-0.5, 0.3]]),
                WedgeSpec::new(GlyphType::Horizontal, [[3.0, 1.0], [5.0, 1.0], [2.7, 0.5], [2.7, 1.5]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn depth_vertical_encoding() {
        let v = Vertex { id: 0, point_type: PointType::Depth, glyph_type: GlyphType::Vertical, position: [0.0, 0.0] };
        assert_eq!(vertex_features(&v), [1.0, -1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn feature_rows() {
        let f = input_features(&da());
        assert_eq!(f.len(), 8 * 8);
        for row in f.chunks(8) {
            assert_eq!(row.iter().filter(|&&x| x == 1.0).count(), 3);
        }
    }

    #[test]
    fn coords() {
        assert_eq!(pseudo_coord([1.0, 1.0], [1.0, 1.0], 2.0), [0.5, 0.5]);
        assert_eq!(pseudo_coord([2.0, 0.0], [0.0, 0.0], 2.0), [1.0, 0.5]);
        assert_eq!(pseudo_coord([-9.0, 0.0], [0.0, 0.0], 2.0), [0.0, 0.5]);
        let g = da();
        let r = normalization_constant([&g]).unwrap();
        assert_eq!(r, 3.0);
        for u in pseudo_coords(&g, r).unwrap() {
            assert!((0.0..=1.0).contains(&u[0]) && (0.0..=1.0).contains(&u[1]));
        }
    }

    #[test]
    fn degenerate() {
        let g =
            CuneiformGraph::build_from_wedges("z", 0, &[WedgeSpec::new(GlyphType::Vertical, [[1.0, 1.0]; 4])]).unwrap();
        assert_eq!(normalization_constant([&g]), Err(NetError::DegenerateNormalization));
        assert_eq!(pseudo_coords(&g, 0.0), Err(NetError::DegenerateNormalization));
    }

    #[test]
    fn degrees() {
        let g = da();
        let x = GraphInput::new(&g, 3.0, false).unwrap();
        // depth vertices: 3 clique + 1 arrangement, others 3
        assert_eq!(x.inv_degree[0], 0.25);
        assert_eq!(x.inv_degree[1], 1.0 / 3.0);
        let y = GraphInput::new(&g, 3.0, true).unwrap();
        assert_eq!(y.inv_degree[0], 0.2);
        assert_eq!(y.edges.len(), x.edges.len() + 8);
    }
}
