//! Wedge graphs: every wedge is a directed 4-clique of typed vertices, and the
//! depth vertices of distinct wedges are joined by arrangement edges in both
//! directions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointType {
    Depth,
    Tail,
    Right,
    Left,
}

impl PointType {
    pub const ALL: [PointType; 4] = [PointType::Depth, PointType::Tail, PointType::Right, PointType::Left];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PointType::Depth => "depth",
            PointType::Tail => "tail",
            PointType::Right => "right",
            PointType::Left => "left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlyphType {
    Vertical,
    Horizontal,
    Winkelhaken,
}

impl GlyphType {
    pub const ALL: [GlyphType; 3] = [GlyphType::Vertical, GlyphType::Horizontal, GlyphType::Winkelhaken];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            GlyphType::Vertical => "vertical",
            GlyphType::Horizontal => "horizontal",
            GlyphType::Winkelhaken => "winkelhaken",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        GlyphType::ALL.into_iter().find(|g| g.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub point_type: PointType,
    pub glyph_type: GlyphType,
    pub position: Point,
}

/// Vertex ids of one wedge, indexed by [`PointType::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub vertices: [usize; 4],
    pub glyph_type: GlyphType,
}

impl Wedge {
    pub fn vertex(&self, point: PointType) -> usize {
        self.vertices[point.index()]
    }

    pub fn depth(&self) -> usize {
        self.vertices[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    WedgeClique,
    Arrangement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

/// Input description of one wedge: its glyph and four typed positions.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeSpec {
    pub glyph: GlyphType,
    pub points: Vec<(PointType, Point)>,
}

impl WedgeSpec {
    /// Wedge with points given in `Depth, Tail, Right, Left` order.
    pub fn new(glyph: GlyphType, points: [Point; 4]) -> Self {
        WedgeSpec { glyph, points: PointType::ALL.into_iter().zip(points).collect() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("wedge {wedge}: {reason}")]
    MalformedWedge { wedge: usize, reason: String },
    #[error("wedge {wedge}: non-finite coordinate for {point:?} point")]
    NonFiniteCoordinate { wedge: usize, point: PointType },
    #[error("edge {src}->{dst} is not an arrangement edge")]
    NotArrangementEdge { src: usize, dst: usize },
}

/// A structural problem found by [`CuneiformGraph::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    VertexCount { expected: usize, found: usize },
    EdgeCount { expected: usize, found: usize },
    VertexIdMismatch { index: usize, id: usize },
    DanglingVertexRef { wedge: usize, vertex: usize },
    VertexSharedByWedges { vertex: usize },
    DuplicatePointType { wedge: usize, point: PointType },
    PointTypeMismatch { wedge: usize, vertex: usize },
    MixedGlyphType { wedge: usize, vertex: usize },
    NonFinitePosition { vertex: usize },
    DanglingEdge { edge: usize },
    SelfLoop { edge: usize },
    DuplicateEdge { edge: usize },
    CliqueEdgeAcrossWedges { edge: usize },
    ArrangementEdgeNotDepth { edge: usize },
    CliqueIncomplete { wedge: usize, missing: (usize, usize) },
    ArrangementIncomplete { missing: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuneiformGraph {
    pub id: String,
    /// Index into the owning dataset's class names.
    pub label: usize,
    wedges: Vec<Wedge>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

pub fn expected_vertex_count(wedges: usize) -> usize {
    4 * wedges
}

/// 12 directed clique edges per wedge plus a complete directed graph on the
/// depth vertices.
pub fn expected_edge_count(wedges: usize) -> usize {
    12 * wedges + wedges * wedges.saturating_sub(1)
}

impl CuneiformGraph {
    /// Builds a graph from wedge descriptions. Vertex ids are assigned densely
    /// in wedge order with `Depth, Tail, Right, Left` inside each wedge.
    pub fn build_from_wedges(id: impl Into<String>, label: usize, wedges: &[WedgeSpec]) -> Result<Self, GraphError> {
        let mut vertices = Vec::with_capacity(4 * wedges.len());
        let mut out_wedges = Vec::with_capacity(wedges.len());
        for (w, spec) in wedges.iter().enumerate() {
            if spec.points.len() != 4 {
                return Err(GraphError::MalformedWedge {
                    wedge: w,
                    reason: format!("expected 4 points, found {}", spec.points.len()),
                });
            }
            let mut slots: [Option<Point>; 4] = [None; 4];
            for &(pt, pos) in &spec.points {
                if slots[pt.index()].is_some() {
                    return Err(GraphError::MalformedWedge {
                        wedge: w,
                        reason: format!("duplicate {} point", pt.name()),
                    });
                }
                if !pos.iter().all(|c| c.is_finite()) {
                    return Err(GraphError::NonFiniteCoordinate { wedge: w, point: pt });
                }
                slots[pt.index()] = Some(pos);
            }
            let base = vertices.len();
            for pt in PointType::ALL {
                // 4 distinct points out of 4 slots: none can be missing here
                let position = slots[pt.index()].ok_or_else(|| GraphError::MalformedWedge {
                    wedge: w,
                    reason: format!("missing {} point", pt.name()),
                })?;
                vertices.push(Vertex { id: base + pt.index(), point_type: pt, glyph_type: spec.glyph, position });
            }
            out_wedges.push(Wedge { vertices: [base, base + 1, base + 2, base + 3], glyph_type: spec.glyph });
        }
        let edges = canonical_edges(&out_wedges);
        Ok(CuneiformGraph { id: id.into(), label, wedges: out_wedges, vertices, edges })
    }

    /// Assembles a graph from raw parts without any checks. Use
    /// [`validate`](Self::validate) before trusting the result.
    pub fn from_parts_unchecked(
        id: impl Into<String>,
        label: usize,
        wedges: Vec<Wedge>,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
    ) -> Self {
        CuneiformGraph { id: id.into(), label, wedges, vertices, edges }
    }

    pub fn wedges(&self) -> &[Wedge] {
        &self.wedges
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn wedge_count(&self) -> usize {
        self.wedges.len()
    }

    pub fn position(&self, vertex: usize) -> Point {
        self.vertices[vertex].position
    }

    pub fn depth_position(&self, wedge: usize) -> Point {
        self.position(self.wedges[wedge].depth())
    }

    /// Wedge descriptions that rebuild this graph through
    /// [`build_from_wedges`](Self::build_from_wedges).
    pub fn wedge_specs(&self) -> Vec<WedgeSpec> {
        self.wedges
            .iter()
            .map(|w| WedgeSpec {
                glyph: w.glyph_type,
                points: PointType::ALL.into_iter().map(|pt| (pt, self.position(w.vertex(pt)))).collect(),
            })
            .collect()
    }

    /// Returns a copy with every vertex position replaced by `f(vertex, position)`.
    pub fn map_positions(&self, mut f: impl FnMut(usize, Point) -> Point) -> Self {
        let mut out = self.clone();
        for v in &mut out.vertices {
            v.position = f(v.id, v.position);
        }
        out
    }

    /// Axis-aligned bounding box extents `(height, width)`, with width along the
    /// first coordinate.
    pub fn extent(&self) -> (f64, f64) {
        if self.vertices.is_empty() {
            return (0.0, 0.0);
        }
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(v.position[d]);
                hi[d] = hi[d].max(v.position[d]);
            }
        }
        (hi[1] - lo[1], hi[0] - lo[0])
    }

    /// Relative placement `p_dst - p_src` of an arrangement edge.
    pub fn arrangement_vector(&self, e: &Edge) -> Result<Point, GraphError> {
        if e.kind != EdgeKind::Arrangement {
            return Err(GraphError::NotArrangementEdge { src: e.src, dst: e.dst });
        }
        let p = self.position(e.src);
        let q = self.position(e.dst);
        Ok([q[0] - p[0], q[1] - p[1]])
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.vertices.len();
        let w = self.wedges.len();
        if n != expected_vertex_count(w) {
            out.push(Violation::VertexCount { expected: expected_vertex_count(w), found: n });
        }
        if self.edges.len() != expected_edge_count(w) {
            out.push(Violation::EdgeCount { expected: expected_edge_count(w), found: self.edges.len() });
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                out.push(Violation::VertexIdMismatch { index: i, id: v.id });
            }
            if !v.position.iter().all(|c| c.is_finite()) {
                out.push(Violation::NonFinitePosition { vertex: i });
            }
        }

        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (wi, wedge) in self.wedges.iter().enumerate() {
            let mut seen = [false; 4];
            for (slot, &vid) in wedge.vertices.iter().enumerate() {
                let Some(v) = self.vertices.get(vid) else {
                    out.push(Violation::DanglingVertexRef { wedge: wi, vertex: vid });
                    continue;
                };
                if owner[vid].is_some() {
                    out.push(Violation::VertexSharedByWedges { vertex: vid });
                }
                owner[vid] = Some(wi);
                if seen[v.point_type.index()] {
                    out.push(Violation::DuplicatePointType { wedge: wi, point: v.point_type });
                }
                seen[v.point_type.index()] = true;
                if v.point_type.index() != slot {
                    out.push(Violation::PointTypeMismatch { wedge: wi, vertex: vid });
                }
                if v.glyph_type != wedge.glyph_type {
                    out.push(Violation::MixedGlyphType { wedge: wi, vertex: vid });
                }
            }
        }

        let mut present = std::collections::HashSet::with_capacity(self.edges.len());
        for (ei, e) in self.edges.iter().enumerate() {
            if e.src >= n || e.dst >= n {
                out.push(Violation::DanglingEdge { edge: ei });
                continue;
            }
            if e.src == e.dst {
                out.push(Violation::SelfLoop { edge: ei });
            }
            if !present.insert((e.src, e.dst, e.kind)) {
                out.push(Violation::DuplicateEdge { edge: ei });
            }
            match e.kind {
                EdgeKind::WedgeClique => {
                    if owner[e.src].is_none() || owner[e.src] != owner[e.dst] {
                        out.push(Violation::CliqueEdgeAcrossWedges { edge: ei });
                    }
                }
                EdgeKind::Arrangement => {
                    let depth = |v: usize| self.vertices[v].point_type == PointType::Depth;
                    if !depth(e.src) || !depth(e.dst) || owner[e.src] == owner[e.dst] {
                        out.push(Violation::ArrangementEdgeNotDepth { edge: ei });
                    }
                }
            }
        }

        for (wi, wedge) in self.wedges.iter().enumerate() {
            for &a in &wedge.vertices {
                for &b in &wedge.vertices {
                    if a != b && !present.contains(&(a, b, EdgeKind::WedgeClique)) {
                        out.push(Violation::CliqueIncomplete { wedge: wi, missing: (a, b) });
                    }
                }
            }
        }
        for a in &self.wedges {
            for b in &self.wedges {
                let (s, d) = (a.depth(), b.depth());
                if s != d && !present.contains(&(s, d, EdgeKind::Arrangement)) {
                    out.push(Violation::ArrangementIncomplete { missing: (s, d) });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Clique edges wedge by wedge, then arrangement edges for every ordered wedge
/// pair.
pub(crate) fn canonical_edges(wedges: &[Wedge]) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(expected_edge_count(wedges.len()));
    for w in wedges {
        for &a in &w.vertices {
            for &b in &w.vertices {
                if a != b {
                    edges.push(Edge { src: a, dst: b, kind: EdgeKind::WedgeClique });
                }
            }
        }
    }
    for (i, a) in wedges.iter().enumerate() {
        for (j, b) in wedges.iter().enumerate() {
            if i != j {
                edges.push(Edge { src: a.depth(), dst: b.depth(), kind: EdgeKind::Arrangement });
            }
        }
    }
    edges
}
