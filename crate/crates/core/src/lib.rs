//! Cuneiform sign recognition on wedge graphs: a tailored graph edit distance
//! with assignment-based heuristics and an exact solver, a spline-kernel graph
//! convolutional network, and an evaluation harness around both.

pub mod assignment;
pub mod cli;
pub mod dataset;
pub mod eval;
pub mod ged;
pub mod graph;
pub mod nn;
pub mod rng;

pub use dataset::{Dataset, DatasetError};
pub use ged::{CostModel, DistanceMatrix, EditPath, GedError, Method};
pub use graph::{CuneiformGraph, GlyphType, PointType, WedgeSpec};
