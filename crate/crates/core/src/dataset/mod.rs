//! Collections of labelled wedge graphs and their on-disk formats.

mod json;
mod stats;
mod synth;
mod tudataset;

pub use json::{parse_json, parse_json_str, to_json_string, write_json};
pub use stats::{compute_stats, ClassStats, DatasetStats};
pub use synth::{synthesize, synthesize_shaped, ClassShape, Perturbation, SynthConfig};
pub use tudataset::{parse_tudataset, write_tudataset};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{CuneiformGraph, GraphError, Violation};

/// The 30 sign classes of the published benchmark, in label order.
pub const SIGN_NAMES: [&str; 30] = [
    "ba", "bi", "bu", "da", "di", "du", "ha", "hi", "hu", "ka", "ki", "ku", "la", "li", "lu", "na", "ni", "nu", "ra",
    "ri", "ru", "sa", "si", "su", "ta", "ti", "tu", "za", "zi", "zu",
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("ragged records in {file}: {detail}")]
    RaggedRecord { file: String, detail: String },
    #[error("cannot verify label column semantics: {0}")]
    LabelMappingUnverifiable(String),
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("schema violation at {path}: {msg}")]
    SchemaViolation { path: String, msg: String },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("graph {id}: {source}")]
    Graph { id: String, source: GraphError },
    #[error("graph {id} fails validation: {violations:?}")]
    InvalidGraph { id: String, violations: Vec<Violation> },
    #[error("unknown graph id {0}")]
    UnknownGraph(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub graphs: Vec<CuneiformGraph>,
    pub class_names: Vec<String>,
    /// Optional per-graph provenance, parallel to `graphs`.
    pub tablet_ids: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(graphs: Vec<CuneiformGraph>, class_names: Vec<String>) -> Self {
        Dataset { graphs, class_names, tablet_ids: None }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.graphs.iter().map(|g| g.label).collect()
    }

    pub fn class_name(&self, label: usize) -> &str {
        &self.class_names[label]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.graphs.iter().position(|g| g.id == id)
    }

    /// The graphs at `indices`, in that order, keeping class names.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            class_names: self.class_names.clone(),
            tablet_ids: self.tablet_ids.as_ref().map(|t| indices.iter().map(|&i| t[i].clone()).collect()),
        }
    }

    /// First error among all graphs' structural violations.
    pub fn check(&self) -> Result<(), DatasetError> {
        for g in &self.graphs {
            let v = g.validate();
            if !v.is_empty() {
                return Err(DatasetError::InvalidGraph { id: g.id.clone(), violations: v });
            }
        }
        Ok(())
    }

    /// Loads a benchmark directory or a JSON file.
    pub fn load(path: &Path) -> Result<Dataset, DatasetError> {
        if path.is_dir() {
            parse_tudataset(path)
        } else if path.exists() {
            parse_json(path)
        } else {
            Err(DatasetError::MissingFile(path.to_path_buf()))
        }
    }
}
