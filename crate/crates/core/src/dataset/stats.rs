use std::collections::BTreeMap;

use serde::Serialize;

use super::{Dataset, DatasetError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStats {
    pub name: String,
    pub graphs: usize,
    /// Most frequent per-graph vertex count (smallest on ties).
    pub vertices: usize,
    /// Most frequent per-graph edge count (smallest on ties).
    pub edges: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub total_vertices: usize,
    pub total_edges: usize,
    /// Largest bounding-box height (second coordinate) over the class.
    pub h_max: f64,
    /// Largest bounding-box width (first coordinate) over the class.
    pub w_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub classes: Vec<ClassStats>,
    pub total_graphs: usize,
    pub total_vertices: usize,
    pub total_edges: usize,
}

impl DatasetStats {
    pub fn class(&self, name: &str) -> Option<&ClassStats> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "class,graphs,vertices,edges,min_vertices,max_vertices,total_vertices,total_edges,h_max,w_max\n",
        );
        for c in &self.classes {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{:.1},{:.1}\n",
                c.name,
                c.graphs,
                c.vertices,
                c.edges,
                c.min_vertices,
                c.max_vertices,
                c.total_vertices,
                c.total_edges,
                c.h_max,
                c.w_max
            ));
        }
        s
    }
}

fn mode(values: &[usize]) -> usize {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    // descending order: max_by_key keeps the last maximum, i.e. the smallest value
    counts.into_iter().rev().max_by_key(|&(_, c)| c).map(|(v, _)| v).unwrap_or(0)
}

pub fn compute_stats(d: &Dataset) -> Result<DatasetStats, DatasetError> {
    if d.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    let mut classes = Vec::new();
    for (label, name) in d.class_names.iter().enumerate() {
        let members: Vec<_> = d.graphs.iter().filter(|g| g.label == label).collect();
        if members.is_empty() {
            continue;
        }
        let vs: Vec<usize> = members.iter().map(|g| g.vertices().len()).collect();
        let es: Vec<usize> = members.iter().map(|g| g.edges().len()).collect();
        let (h_max, w_max) =
            members.iter().map(|g| g.extent()).fold((0.0f64, 0.0f64), |(h, w), (gh, gw)| (h.max(gh), w.max(gw)));
        classes.push(ClassStats {
            name: name.clone(),
            graphs: members.len(),
            vertices: mode(&vs),
            edges: mode(&es),
            min_vertices: vs.iter().copied().min().unwrap_or(0),
            max_vertices: vs.iter().copied().max().unwrap_or(0),
            total_vertices: vs.iter().sum(),
            total_edges: es.iter().sum(),
            h_max,
            w_max,
        });
    }
    Ok(DatasetStats {
        total_graphs: classes.iter().map(|c| c.graphs).sum(),
        total_vertices: classes.iter().map(|c| c.total_vertices).sum(),
        total_edges: classes.iter().map(|c| c.total_edges).sum(),
        classes,
    })
}
