//! Experiment harness: nearest-neighbour classification, cross-validation,
//! ranking curves and runtime measurements.

pub mod bench;
pub mod cv;
pub mod knn;
pub mod report;
pub mod roc;

use std::cmp::Ordering;

use thiserror::Error;

use crate::ged::GedError;
use crate::nn::NetError;

pub use bench::{bench, linear_fit_r2, BenchConfig, BenchRecord, BenchSubject};
pub use cv::{cross_validate, cross_validate_matrix, cross_validate_net, fold_assignment, CvReport, FoldResult};
pub use knn::{knn_classify, Neighbor};
pub use roc::{default_references, rank_and_roc, roc_from_ranking, RocCurve};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no training graphs")]
    EmptyTrainingSet,
    #[error("{graphs} graphs cannot be split into {folds} folds")]
    TooFewGraphs { graphs: usize, folds: usize },
    #[error("unknown reference graph `{0}`")]
    UnknownReference(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Ged(#[from] GedError),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Numeric order when both ids parse as integers, lexicographic otherwise.
pub fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

/// Mean and sample standard deviation (`n - 1`); the deviation of a single value is 0.
pub fn mean_stdev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_order() {
        assert_eq!(compare_ids("2", "10"), Ordering::Less);
        assert_eq!(compare_ids("b", "a"), Ordering::Greater);
        assert_eq!(compare_ids("7", "x"), Ordering::Less);
    }

    #[test]
    fn stats() {
        assert_eq!(mean_stdev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).0, 5.0);
        let (_, s) = mean_stdev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_stdev(&[3.0]), (3.0, 0.0));
    }
}
