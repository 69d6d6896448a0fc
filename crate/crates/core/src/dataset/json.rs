//! Native JSON format:
//!
//! ```json
//! { "class_names": ["ba", ...],
//!   "graphs": [ { "id": "1", "label": "ba", "tablet": "T1",
//!                 "wedges": [ { "glyph": "vertical",
//!                               "points": { "depth": [x, y], "tail": [x, y],
//!                                           "right": [x, y], "left": [x, y] } } ] } ] }
//! ```
//!
//! `class_names` and `tablet` are optional.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use super::{Dataset, DatasetError};
use crate::graph::{CuneiformGraph, GlyphType, Point, PointType, WedgeSpec};

#[derive(Serialize)]
struct JsonDataset<'a> {
    class_names: &'a [String],
    graphs: Vec<JsonGraph<'a>>,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    id: &'a str,
    label: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tablet: Option<&'a str>,
    wedges: Vec<JsonWedge>,
}

#[derive(Serialize)]
struct JsonWedge {
    glyph: &'static str,
    points: JsonPoints,
}

#[derive(Serialize)]
struct JsonPoints {
    depth: Point,
    tail: Point,
    right: Point,
    left: Point,
}

pub fn to_json_string(d: &Dataset) -> String {
    let graphs = d
        .graphs
        .iter()
        .enumerate()
        .map(|(i, g)| JsonGraph {
            id: &g.id,
            label: &d.class_names[g.label],
            tablet: d.tablet_ids.as_ref().map(|t| t[i].as_str()),
            wedges: g
                .wedges()
                .iter()
                .map(|w| {
                    let p = |pt: PointType| g.position(w.vertex(pt));
                    JsonWedge {
                        glyph: w.glyph_type.name(),
                        points: JsonPoints {
                            depth: p(PointType::Depth),
                            tail: p(PointType::Tail),
                            right: p(PointType::Right),
                            left: p(PointType::Left),
                        },
                    }
                })
                .collect(),
        })
        .collect();
    let doc = JsonDataset { class_names: &d.class_names, graphs };
    let mut s = serde_json::to_string_pretty(&doc).expect("dataset serializes");
    s.push('\n');
    s
}

pub fn write_json(d: &Dataset, path: &Path) -> Result<(), DatasetError> {
    fs::write(path, to_json_string(d))?;
    Ok(())
}

pub fn parse_json(path: &Path) -> Result<Dataset, DatasetError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DatasetError::MissingFile(path.to_path_buf()),
        _ => DatasetError::Io(e),
    })?;
    parse_json_str(&text)
}

fn violation(path: impl Into<String>, msg: impl Into<String>) -> DatasetError {
    DatasetError::SchemaViolation { path: path.into(), msg: msg.into() }
}

fn get<'v>(obj: &'v Value, key: &str, path: &str) -> Result<&'v Value, DatasetError> {
    obj.get(key).ok_or_else(|| violation(format!("{path}.{key}"), "missing field"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, DatasetError> {
    v.as_str().ok_or_else(|| violation(path, "expected a string"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, DatasetError> {
    v.as_array().ok_or_else(|| violation(path, "expected an array"))
}

fn as_point(v: &Value, path: &str) -> Result<Point, DatasetError> {
    let arr = as_array(v, path)?;
    if arr.len() != 2 {
        return Err(violation(path, format!("expected 2 coordinates, found {}", arr.len())));
    }
    let mut p = [0.0; 2];
    for (k, c) in arr.iter().enumerate() {
        p[k] = c
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| violation(format!("{path}[{k}]"), "expected a finite number"))?;
    }
    Ok(p)
}

pub fn parse_json_str(text: &str) -> Result<Dataset, DatasetError> {
    let root: Value = serde_json::from_str(text).map_err(|e| violation("$", e.to_string()))?;
    if !root.is_object() {
        return Err(violation("$", "expected an object"));
    }
    let graphs_v = as_array(get(&root, "graphs", "$")?, "$.graphs")?;

    let mut class_names: Vec<String> = match root.get("class_names") {
        Some(v) => as_array(v, "$.class_names")?
            .iter()
            .enumerate()
            .map(|(i, s)| as_str(s, &format!("$.class_names[{i}]")).map(str::to_owned))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let declared = !class_names.is_empty();
    if !declared {
        for (gi, gv) in graphs_v.iter().enumerate() {
            let p = format!("$.graphs[{gi}]");
            let label = as_str(get(gv, "label", &p)?, &format!("{p}.label"))?;
            if !class_names.iter().any(|c| c == label) {
                class_names.push(label.to_owned());
            }
        }
        class_names.sort();
    }

    let mut graphs = Vec::with_capacity(graphs_v.len());
    let mut tablets = Vec::with_capacity(graphs_v.len());
    for (gi, gv) in graphs_v.iter().enumerate() {
        let p = format!("$.graphs[{gi}]");
        if !gv.is_object() {
            return Err(violation(p, "expected an object"));
        }
        let id = match get(gv, "id", &p)? {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(violation(format!("{p}.id"), "expected a string or number")),
        };
        let label_name = as_str(get(gv, "label", &p)?, &format!("{p}.label"))?;
        let label = class_names
            .iter()
            .position(|c| c == label_name)
            .ok_or_else(|| violation(format!("{p}.label"), format!("`{label_name}` is not in class_names")))?;
        tablets.push(match gv.get("tablet") {
            Some(t) => Some(as_str(t, &format!("{p}.tablet"))?.to_owned()),
            None => None,
        });

        let wedges_v = as_array(get(gv, "wedges", &p)?, &format!("{p}.wedges"))?;
        let mut specs = Vec::with_capacity(wedges_v.len());
        for (wi, wv) in wedges_v.iter().enumerate() {
            let wp = format!("{p}.wedges[{wi}]");
            let glyph_s = as_str(get(wv, "glyph", &wp)?, &format!("{wp}.glyph"))?;
            let glyph = GlyphType::from_name(&glyph_s.to_ascii_lowercase())
                .ok_or_else(|| violation(format!("{wp}.glyph"), format!("unknown glyph `{glyph_s}`")))?;
            let pts = get(wv, "points", &wp)?;
            let pp = format!("{wp}.points");
            if !pts.is_object() {
                return Err(violation(pp, "expected an object"));
            }
            let mut points = Vec::with_capacity(4);
            for pt in PointType::ALL {
                let v = get(pts, pt.name(), &pp)?;
                points.push((pt, as_point(v, &format!("{pp}.{}", pt.name()))?));
            }
            specs.push(WedgeSpec { glyph, points });
        }
        let g = CuneiformGraph::build_from_wedges(id.clone(), label, &specs)
            .map_err(|source| DatasetError::Graph { id, source })?;
        graphs.push(g);
    }

    let tablet_ids = if !tablets.is_empty() && tablets.iter().all(Option::is_some) {
        Some(tablets.into_iter().map(Option::unwrap).collect())
    } else if tablets.iter().any(Option::is_some) {
        let gi = tablets.iter().position(Option::is_none).unwrap_or(0);
        return Err(violation(format!("$.graphs[{gi}].tablet"), "tablet ids must be given for all graphs or none"));
    } else {
        None
    };
    Ok(Dataset { graphs, class_names, tablet_ids })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = r#"{"graphs": [{"id": "a", "label": "da", "wedges": [
        {"glyph": "horizontal", "points": {"depth": [0, 0], "tail": [1, 0], "right": [0, 1], "left": [1, 1]}}]}]}"#;

    #[test]
    fn single_graph() {
        let d = parse_json_str(ONE).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.graphs[0].vertices().len(), 4);
        assert_eq!(d.class_names, vec!["da"]);
        assert!(d.tablet_ids.is_none());
    }

    #[test]
    fn missing_point_reports_path() {
        let text = ONE.replace(r#", "left": [1, 1]"#, "");
        match parse_json_str(&text) {
            Err(DatasetError::SchemaViolation { path, .. }) => {
                assert_eq!(path, "$.graphs[0].wedges[0].points.left")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_values_report_paths() {
        let cases = [
            (ONE.replace("\"horizontal\"", "\"diagonal\""), "$.graphs[0].wedges[0].glyph"),
            (ONE.replace("[1, 0]", "[1]"), "$.graphs[0].wedges[0].points.tail"),
            (ONE.replace("[0, 1]", "[0, \"x\"]"), "$.graphs[0].wedges[0].points.right[1]"),
            (ONE.replace("\"label\": \"da\",", ""), "$.graphs[0].label"),
            ("[]".to_owned(), "$"),
        ];
        for (text, want) in cases {
            match parse_json_str(&text) {
                Err(DatasetError::SchemaViolation { path, .. }) => assert_eq!(path, want),
                other => panic!("unexpected {other:?} for {want}"),
            }
        }
    }

    #[test]
    fn undeclared_label() {
        let text = ONE.replace("{\"graphs\"", "{\"class_names\": [\"ba\"], \"graphs\"");
        assert!(matches!(parse_json_str(&text), Err(DatasetError::SchemaViolation { .. })));
    }

    #[test]
    fn round_trip_with_tablets() {
        let mut d = parse_json_str(ONE).unwrap();
        d.tablet_ids = Some(vec!["T7".into()]);
        let back = parse_json_str(&to_json_string(&d)).unwrap();
        assert_eq!(back, d);
    }
}
