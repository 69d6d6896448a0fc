//! Multi-file graph benchmark layout (`<name>_A.txt`, `<name>_graph_indicator.txt`, ...).
//!
//! The files do not say which node-label column holds the point type and
//! which the glyph type, nor which edge label marks arrangement edges. Every
//! candidate reading is checked against the wedge structure: clique edges must
//! split each graph into 4-vertex cliques with four distinct point codes and a
//! single glyph code, and arrangement edges must join every ordered pair of
//! same-coded depth vertices of distinct wedges. Exactly one reading has to
//! survive.
//!
//! The depth code is fixed by the arrangement edges. The remaining point codes
//! (and the glyph codes) are named in ascending code order; costs and features
//! only compare labels for equality, so this naming carries no information.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use super::{Dataset, DatasetError, SIGN_NAMES};
use crate::graph::{CuneiformGraph, GlyphType, Point, PointType, WedgeSpec};

struct Raw {
    name: String,
    edges: Vec<(usize, usize)>,
    indicator: Vec<usize>,
    graph_labels: Vec<i64>,
    node_labels: Vec<Vec<i64>>,
    node_attrs: Vec<Vec<f64>>,
    edge_labels: Vec<Vec<i64>>,
}

fn find_name(dir: &Path) -> Result<String, DatasetError> {
    let mut names = Vec::new();
    if let Ok(rd) = fs::read_dir(dir) {
        for entry in rd.flatten() {
            if let Some(f) = entry.file_name().to_str() {
                if let Some(stem) = f.strip_suffix("_A.txt") {
                    names.push(stem.to_owned());
                }
            }
        }
    }
    names.sort();
    names.into_iter().next().ok_or_else(|| DatasetError::MissingFile(dir.join("<name>_A.txt")))
}

fn read_records<T>(path: &Path, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<Vec<T>>, DatasetError> {
    if !path.is_file() {
        return Err(DatasetError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rec: Option<Vec<T>> = line.split(',').map(|f| parse(f.trim())).collect();
        out.push(rec.ok_or_else(|| DatasetError::Parse {
            file: file.clone(),
            line: ln + 1,
            msg: format!("malformed record `{line}`"),
        })?);
    }
    Ok(out)
}

fn parse_int(s: &str) -> Option<i64> {
    s.parse::<i64>().ok().or_else(|| {
        // some exports write integral labels as floats
        s.parse::<f64>().ok().filter(|x| x.fract() == 0.0).map(|x| x as i64)
    })
}

fn ragged(file: &str, detail: String) -> DatasetError {
    DatasetError::RaggedRecord { file: file.to_owned(), detail }
}

fn single_column(rows: Vec<Vec<i64>>, file: &str) -> Result<Vec<i64>, DatasetError> {
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| match r.as_slice() {
            [v] => Ok(*v),
            _ => Err(ragged(file, format!("record {} has {} fields, expected 1", i + 1, r.len()))),
        })
        .collect()
}

fn uniform_width<T>(rows: &[Vec<T>], file: &str) -> Result<usize, DatasetError> {
    let w = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != w) {
        return Err(ragged(file, format!("record {} has {} fields, expected {w}", i + 1, rows[i].len())));
    }
    Ok(w)
}

fn read_raw(dir: &Path) -> Result<Raw, DatasetError> {
    let name = find_name(dir)?;
    let path = |suffix: &str| -> PathBuf { dir.join(format!("{name}_{suffix}.txt")) };
    for suffix in ["A", "graph_indicator", "graph_labels", "node_labels", "node_attributes", "edge_labels"] {
        if !path(suffix).is_file() {
            return Err(DatasetError::MissingFile(path(suffix)));
        }
    }
    let a = read_records(&path("A"), |s| s.parse::<usize>().ok())?;
    let edges = a
        .into_iter()
        .enumerate()
        .map(|(i, r)| match r.as_slice() {
            [s, d] => Ok((*s, *d)),
            _ => Err(ragged("A", format!("record {} has {} fields, expected 2", i + 1, r.len()))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let indicator = read_records(&path("graph_indicator"), |s| s.parse::<usize>().ok())?
        .into_iter()
        .map(|r| r.first().copied().unwrap_or(0))
        .collect::<Vec<_>>();
    let graph_labels = single_column(read_records(&path("graph_labels"), parse_int)?, "graph_labels")?;
    let node_labels = read_records(&path("node_labels"), parse_int)?;
    let node_attrs = read_records(&path("node_attributes"), |s| s.parse::<f64>().ok())?;
    let edge_labels = read_records(&path("edge_labels"), parse_int)?;
    Ok(Raw { name, edges, indicator, graph_labels, node_labels, node_attrs, edge_labels })
}

/// How a node-label record encodes `(point code, glyph code)`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum NodeDecoder {
    Columns {
        point: usize,
        glyph: usize,
    },
    /// Single column: `v = glyph * 4 + point`.
    PointMinor {
        offset: i64,
    },
    /// Single column: `v = point * 3 + glyph`.
    GlyphMinor {
        offset: i64,
    },
}

impl NodeDecoder {
    fn decode(self, rec: &[i64]) -> (i64, i64) {
        match self {
            NodeDecoder::Columns { point, glyph } => (rec[point], rec[glyph]),
            NodeDecoder::PointMinor { offset } => ((rec[0] - offset) % 4, (rec[0] - offset) / 4),
            NodeDecoder::GlyphMinor { offset } => ((rec[0] - offset) / 3, (rec[0] - offset) % 3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EdgeDecoder {
    column: usize,
    arrangement: i64,
}

struct Reading {
    depth_code: i64,
    point_codes: Vec<i64>,
    glyph_codes: Vec<i64>,
    /// Per graph: wedges as lists of global vertex indices.
    wedges: Vec<Vec<Vec<usize>>>,
}

fn find_root(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Checks one candidate reading against the wedge structure.
fn verify(
    nodes: &[(i64, i64)],
    arr: &[bool],
    edges: &[(usize, usize)],
    graph_vertices: &[Vec<usize>],
    graph_edges: &[Vec<usize>],
) -> Option<Reading> {
    let mut depth_code: Option<i64> = None;
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    let mut all_wedges = Vec::with_capacity(graph_vertices.len());

    for (verts, eids) in graph_vertices.iter().zip(graph_edges) {
        for &e in eids {
            if !arr[e] {
                let (s, d) = edges[e];
                let (rs, rd) = (find_root(&mut parent, s), find_root(&mut parent, d));
                if rs != rd {
                    parent[rs.max(rd)] = rs.min(rd);
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut comp_of = std::collections::HashMap::new();
        for &v in verts {
            let r = find_root(&mut parent, v);
            let idx = *comp_of.entry(r).or_insert_with(|| {
                comps.push(Vec::new());
                comps.len() - 1
            });
            comps[idx].push(v);
        }
        for c in &comps {
            if c.len() != 4 {
                return None;
            }
            let points: BTreeSet<i64> = c.iter().map(|&v| nodes[v].0).collect();
            let glyphs: BTreeSet<i64> = c.iter().map(|&v| nodes[v].1).collect();
            if points.len() != 4 || glyphs.len() != 1 {
                return None;
            }
        }
        let mut comp_by_vertex = std::collections::HashMap::with_capacity(verts.len());
        for (ci, c) in comps.iter().enumerate() {
            for &v in c {
                comp_by_vertex.insert(v, ci);
            }
        }
        let comp_index = |v: usize| comp_by_vertex[&v];
        let mut clique_seen = HashSet::new();
        let mut arr_seen = HashSet::new();
        for &e in eids {
            let (s, d) = edges[e];
            if s == d {
                return None;
            }
            let (cs, cd) = (comp_index(s), comp_index(d));
            if arr[e] {
                if cs == cd || nodes[s].0 != nodes[d].0 {
                    return None;
                }
                match depth_code {
                    None => depth_code = Some(nodes[s].0),
                    Some(c) if c != nodes[s].0 => return None,
                    _ => {}
                }
                if !arr_seen.insert((s, d)) {
                    return None;
                }
            } else if !clique_seen.insert((s, d)) {
                return None;
            }
        }
        let w = comps.len();
        if clique_seen.len() != 12 * w || arr_seen.len() != w * w.saturating_sub(1) {
            return None;
        }
        all_wedges.push(comps);
    }

    let depth_code = depth_code?;
    let point_codes: BTreeSet<i64> = nodes.iter().map(|n| n.0).collect();
    let glyph_codes: BTreeSet<i64> = nodes.iter().map(|n| n.1).collect();
    if point_codes.len() != 4 || glyph_codes.len() > 3 {
        return None;
    }
    Some(Reading {
        depth_code,
        point_codes: point_codes.into_iter().collect(),
        glyph_codes: glyph_codes.into_iter().collect(),
        wedges: all_wedges,
    })
}

pub fn parse_tudataset(dir: &Path) -> Result<Dataset, DatasetError> {
    let raw = read_raw(dir)?;
    let n = raw.indicator.len();
    if raw.node_labels.len() != n {
        return Err(ragged("node_labels", format!("{} records for {n} vertices", raw.node_labels.len())));
    }
    if raw.node_attrs.len() != n {
        return Err(ragged("node_attributes", format!("{} records for {n} vertices", raw.node_attrs.len())));
    }
    if raw.edge_labels.len() != raw.edges.len() {
        return Err(ragged("edge_labels", format!("{} records for {} edges", raw.edge_labels.len(), raw.edges.len())));
    }
    let n_graphs = raw.indicator.iter().copied().max().unwrap_or(0);
    if raw.indicator.contains(&0) {
        return Err(ragged("graph_indicator", "graph ids are 1-based".into()));
    }
    if raw.graph_labels.len() != n_graphs {
        return Err(ragged("graph_labels", format!("{} records for {n_graphs} graphs", raw.graph_labels.len())));
    }
    let label_width = uniform_width(&raw.node_labels, "node_labels")?;
    let attr_width = uniform_width(&raw.node_attrs, "node_attributes")?;
    let edge_width = uniform_width(&raw.edge_labels, "edge_labels")?;
    if attr_width < 2 {
        return Err(ragged("node_attributes", format!("{attr_width} coordinates per vertex, need 2")));
    }
    if attr_width > 2 {
        log::warn!(
            "{}: node attributes carry {attr_width} columns; using the first two as planar coordinates",
            raw.name
        );
    }

    // 0-based vertex ids, grouped per graph
    let mut edges = Vec::with_capacity(raw.edges.len());
    let mut graph_vertices: Vec<Vec<usize>> = vec![Vec::new(); n_graphs];
    let mut graph_edges: Vec<Vec<usize>> = vec![Vec::new(); n_graphs];
    for (v, &g) in raw.indicator.iter().enumerate() {
        graph_vertices[g - 1].push(v);
    }
    for (e, &(s, d)) in raw.edges.iter().enumerate() {
        if s == 0 || d == 0 || s > n || d > n {
            return Err(ragged("A", format!("edge {} references vertex outside 1..={n}", e + 1)));
        }
        let (s, d) = (s - 1, d - 1);
        if raw.indicator[s] != raw.indicator[d] {
            return Err(ragged("A", format!("edge {} joins two graphs", e + 1)));
        }
        graph_edges[raw.indicator[s] - 1].push(e);
        edges.push((s, d));
    }

    let mut node_decoders = Vec::new();
    if label_width >= 2 {
        for point in 0..label_width {
            for glyph in 0..label_width {
                if point != glyph {
                    node_decoders.push(NodeDecoder::Columns { point, glyph });
                }
            }
        }
    } else if label_width == 1 {
        let min = raw.node_labels.iter().map(|r| r[0]).min().unwrap_or(0);
        for offset in BTreeSet::from([0, min]) {
            node_decoders.push(NodeDecoder::PointMinor { offset });
            node_decoders.push(NodeDecoder::GlyphMinor { offset });
        }
    }
    let mut edge_decoders = Vec::new();
    for column in 0..edge_width {
        let values: BTreeSet<i64> = raw.edge_labels.iter().map(|r| r[column]).collect();
        for arrangement in values {
            edge_decoders.push(EdgeDecoder { column, arrangement });
        }
    }

    let mut accepted: Vec<(NodeDecoder, EdgeDecoder, Reading)> = Vec::new();
    for &nd in &node_decoders {
        let nodes: Vec<(i64, i64)> = raw.node_labels.iter().map(|r| nd.decode(r)).collect();
        for &ed in &edge_decoders {
            let arr: Vec<bool> = raw.edge_labels.iter().map(|r| r[ed.column] == ed.arrangement).collect();
            if let Some(reading) = verify(&nodes, &arr, &edges, &graph_vertices, &graph_edges) {
                accepted.push((nd, ed, reading));
            }
        }
    }
    let (nd, _, reading) = match accepted.len() {
        1 => accepted.pop().expect("one reading"),
        0 => return Err(DatasetError::LabelMappingUnverifiable(format!(
            "none of {} node-label x {} edge-label readings yields wedge cliques with complete depth arrangement edges",
            node_decoders.len(),
            edge_decoders.len()
        ))),
        k => {
            return Err(DatasetError::LabelMappingUnverifiable(format!(
                "{k} different readings satisfy the wedge structure"
            )))
        }
    };
    log::info!("{}: label reading {nd:?}, depth code {}", raw.name, reading.depth_code);

    let other_points: Vec<i64> = reading.point_codes.iter().copied().filter(|&c| c != reading.depth_code).collect();
    let point_of = |code: i64| -> PointType {
        if code == reading.depth_code {
            PointType::Depth
        } else {
            PointType::ALL[1 + other_points.iter().position(|&c| c == code).expect("known code")]
        }
    };
    let glyph_of = |code: i64| -> GlyphType {
        GlyphType::ALL[reading.glyph_codes.iter().position(|&c| c == code).expect("known code")]
    };

    let label_values: Vec<i64> = raw.graph_labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let class_names: Vec<String> = if label_values.len() == SIGN_NAMES.len() {
        SIGN_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        label_values.iter().map(|v| format!("class{v}")).collect()
    };

    let mut graphs = Vec::with_capacity(n_graphs);
    for (gi, mut comps) in reading.wedges.into_iter().enumerate() {
        comps.sort_by_key(|c| c.iter().copied().min());
        let specs: Vec<WedgeSpec> = comps
            .iter()
            .map(|c| {
                let (_, glyph) = nd.decode(&raw.node_labels[c[0]]);
                WedgeSpec {
                    glyph: glyph_of(glyph),
                    points: c
                        .iter()
                        .map(|&v| {
                            let (p, _) = nd.decode(&raw.node_labels[v]);
                            let a = &raw.node_attrs[v];
                            (point_of(p), [a[0], a[1]] as Point)
                        })
                        .collect(),
                }
            })
            .collect();
        let id = (gi + 1).to_string();
        let label = label_values.iter().position(|&v| v == raw.graph_labels[gi]).expect("label value collected above");
        let g = CuneiformGraph::build_from_wedges(id.clone(), label, &specs)
            .map_err(|source| DatasetError::Graph { id, source })?;
        graphs.push(g);
    }
    let d = Dataset::new(graphs, class_names);
    d.check()?;
    Ok(d)
}

/// Writes `d` in the multi-file layout: node labels as `point,glyph` codes
/// (0-based in [`PointType`] / [`GlyphType`] order), edge label 1 for
/// arrangement and 0 for clique edges, and positions as node attributes.
pub fn write_tudataset(d: &Dataset, dir: &Path, name: &str) -> Result<(), DatasetError> {
    use std::fmt::Write as _;
    fs::create_dir_all(dir)?;
    let (mut a, mut ind, mut gl, mut nl, mut na, mut el) =
        (String::new(), String::new(), String::new(), String::new(), String::new(), String::new());
    let mut offset = 0usize;
    for (gi, g) in d.graphs.iter().enumerate() {
        let _ = writeln!(gl, "{}", g.label);
        for v in g.vertices() {
            let _ = writeln!(ind, "{}", gi + 1);
            let _ = writeln!(nl, "{}, {}", v.point_type.index(), v.glyph_type.index());
            let _ = writeln!(na, "{}, {}", v.position[0], v.position[1]);
        }
        for e in g.edges() {
            let _ = writeln!(a, "{}, {}", e.src + offset + 1, e.dst + offset + 1);
            let _ = writeln!(el, "{}", u8::from(e.kind == crate::graph::EdgeKind::Arrangement));
        }
        offset += g.vertices().len();
    }
    for (suffix, body) in [
        ("A", a),
        ("graph_indicator", ind),
        ("graph_labels", gl),
        ("node_labels", nl),
        ("node_attributes", na),
        ("edge_labels", el),
    ] {
        fs::write(dir.join(format!("{name}_{suffix}.txt")), body)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synthesize, SynthConfig};

    #[test]
    fn empty_directory_is_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(parse_tudataset(dir.path()), Err(DatasetError::MissingFile(_))));
    }

    #[test]
    fn round_trip_through_files() {
        let d = synthesize(&SynthConfig { classes: 3, per_class: 2, ..SynthConfig::default() });
        let dir = tempfile::tempdir().unwrap();
        write_tudataset(&d, dir.path(), "Synth").unwrap();
        let back = parse_tudataset(dir.path()).unwrap();
        assert_eq!(back.len(), d.len());
        for (a, b) in d.graphs.iter().zip(&back.graphs) {
            assert_eq!(a.vertices(), b.vertices());
            assert_eq!(a.edges(), b.edges());
            assert_eq!(a.label, b.label);
        }
    }

    #[test]
    fn ragged_node_labels() {
        let d = synthesize(&SynthConfig { classes: 1, per_class: 1, ..SynthConfig::default() });
        let dir = tempfile::tempdir().unwrap();
        write_tudataset(&d, dir.path(), "X").unwrap();
        let p = dir.path().join("X_node_labels.txt");
        let text = fs::read_to_string(&p).unwrap();
        let short: Vec<&str> = text.lines().skip(1).collect();
        fs::write(&p, short.join("\n")).unwrap();
        assert!(matches!(parse_tudataset(dir.path()), Err(DatasetError::RaggedRecord { .. })));
    }
}
