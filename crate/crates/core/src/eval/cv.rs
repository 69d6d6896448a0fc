use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::knn::{knn_classify, Neighbor};
use super::{mean_stdev, EvalError};
use crate::dataset::Dataset;
use crate::ged::{distance_matrix, CostModel, DistanceMatrix, ExactOptions, Method};
use crate::nn::{accuracy, train, TrainConfig};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub fold: usize,
    /// Training seed, for network runs.
    pub seed: Option<u64>,
    pub test_size: usize,
    pub correct: usize,
    /// Percent.
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub method: String,
    pub folds: Vec<FoldResult>,
    /// Mean accuracy in percent over all runs.
    pub mean: f64,
    /// Sample standard deviation in percent.
    pub stdev: f64,
}

impl CvReport {
    fn new(method: String, folds: Vec<FoldResult>) -> Self {
        let acc: Vec<f64> = folds.iter().map(|f| f.accuracy).collect();
        let (mean, stdev) = mean_stdev(&acc);
        CvReport { method, folds, mean, stdev }
    }
}

/// Fold index per graph: a seeded shuffle dealt round-robin, so fold sizes
/// differ by at most one.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Result<Vec<usize>, EvalError> {
    if folds < 2 || n < folds {
        return Err(EvalError::TooFewGraphs { graphs: n, folds });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, Stream::Splits, 0));
    let mut fold = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        fold[i] = pos % folds;
    }
    Ok(fold)
}

/// k-NN cross-validation on a precomputed all-pairs matrix in dataset order
/// (rows are queries).
pub fn cross_validate_matrix(
    d: &Dataset,
    dm: &DistanceMatrix,
    k: usize,
    folds: usize,
    seed: u64,
) -> Result<CvReport, EvalError> {
    let n = d.len();
    if dm.rows() != n || dm.cols() != n {
        return Err(EvalError::InvalidArgument(format!("{}x{} distance matrix for {n} graphs", dm.rows(), dm.cols())));
    }
    let assign = fold_assignment(n, folds, seed)?;
    let mut results = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (mut size, mut correct) = (0, 0);
        for q in (0..n).filter(|&i| assign[i] == fold) {
            let candidates: Vec<Neighbor> = (0..n)
                .filter(|&j| assign[j] != fold)
                .map(|j| Neighbor { distance: dm.get(q, j), id: &d.graphs[j].id, label: d.graphs[j].label })
                .collect();
            size += 1;
            correct += (knn_classify(&candidates, k)? == d.graphs[q].label) as usize;
        }
        results.push(FoldResult {
            fold,
            seed: None,
            test_size: size,
            correct,
            accuracy: 100.0 * correct as f64 / size as f64,
        });
    }
    Ok(CvReport::new(dm.method.name().to_string(), results))
}

pub fn cross_validate(
    d: &Dataset,
    method: Method,
    cm: &CostModel,
    opts: &ExactOptions,
    k: usize,
    folds: usize,
    seed: u64,
) -> Result<CvReport, EvalError> {
    fold_assignment(d.len(), folds, seed)?;
    let dm = distance_matrix(&d.graphs, method, cm, opts)?;
    cross_validate_matrix(d, &dm, k, folds, seed)
}

/// Network cross-validation: every fold is trained `seeds` times with
/// training seeds `cfg.seed + fold * seeds + s`.
pub fn cross_validate_net(
    d: &Dataset,
    cfg: &TrainConfig,
    folds: usize,
    seeds: usize,
    split_seed: u64,
) -> Result<CvReport, EvalError> {
    let assign = fold_assignment(d.len(), folds, split_seed)?;
    if seeds == 0 {
        return Err(EvalError::InvalidArgument("at least one training seed".into()));
    }
    let mut cfg = cfg.clone();
    cfg.net.classes = d.class_names.len();
    let runs: Vec<(usize, usize)> = (0..folds).flat_map(|f| (0..seeds).map(move |s| (f, s))).collect();
    let results: Vec<FoldResult> = runs
        .par_iter()
        .map(|&(fold, s)| {
            let split = |test: bool| {
                let idx: Vec<usize> = (0..d.len()).filter(|&i| (assign[i] == fold) == test).collect();
                d.subset(&idx).graphs
            };
            let (train_set, test_set) = (split(false), split(true));
            let seed = cfg.seed.wrapping_add((fold * seeds + s) as u64);
            let run_cfg = TrainConfig { seed, ..cfg.clone() };
            let (net, _) = train(&train_set, &run_cfg)?;
            let acc = accuracy(&net, &test_set)?;
            Ok(FoldResult {
                fold,
                seed: Some(seed),
                test_size: test_set.len(),
                correct: (acc * test_set.len() as f64).round() as usize,
                accuracy: 100.0 * acc,
            })
        })
        .collect::<Result<_, EvalError>>()?;
    let name = if cfg.augment { "CNN+aug" } else { "CNN" };
    Ok(CvReport::new(name.to_string(), results))
}
