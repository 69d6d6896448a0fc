//! Spline-kernel graph convolutional network with hand-written backward
//! passes, Adam, geometric augmentation and a binary checkpoint format.

pub mod adam;
pub mod augment;
pub mod bspline;
pub mod checkpoint;
pub mod conv;
pub mod input;
pub mod net;
pub mod train;

use thiserror::Error;

pub use augment::{augment, AugmentBounds};
pub use input::{input_features, normalization_constant, pseudo_coords, GraphInput};
pub use net::{NetConfig, Prediction, SplineNet};
pub use train::{accuracy, train, EpochStats, TrainConfig};

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("normalization constant is zero: all training offsets vanish")]
    DegenerateNormalization,
    #[error("vertex {vertex} of graph {graph} has no in-neighbours")]
    IsolatedVertex { graph: String, vertex: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
    #[error("io: {0}")]
    Io(String),
}
