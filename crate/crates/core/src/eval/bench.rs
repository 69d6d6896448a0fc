use std::time::Instant;

use rand::seq::SliceRandom;
use serde::Serialize;

use super::knn::{knn_classify, Neighbor};
use super::{mean_stdev, EvalError};
use crate::dataset::Dataset;
use crate::ged::{distance_matrix_between, CostModel, ExactOptions, Method};
use crate::graph::CuneiformGraph;
use crate::nn::{train, TrainConfig};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BenchSubject {
    Ged(Method),
    Network,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    /// Training-set sizes in percent of the non-test half.
    pub fractions: Vec<f64>,
    pub repeats: usize,
    pub seed: u64,
    pub k: usize,
    pub cost_model: CostModel,
    pub max_wedges: usize,
    pub train: TrainConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            fractions: vec![25.0, 50.0, 75.0, 100.0],
            repeats: 10,
            seed: 0,
            k: 3,
            cost_model: CostModel::default(),
            max_wedges: ExactOptions::default().max_wedges,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: String,
    /// `classify` for edit distances, `train` or `inference` for the network.
    pub phase: String,
    pub fraction: f64,
    pub train_size: usize,
    pub test_size: usize,
    pub runs: usize,
    pub mean_ms: f64,
    pub stdev_ms: f64,
}

impl BenchRecord {
    /// Mean time per distance evaluation for `classify` records.
    pub fn per_pair_ms(&self) -> f64 {
        self.mean_ms / (self.train_size * self.test_size).max(1) as f64
    }
}

fn time_ms(mut f: impl FnMut() -> Result<(), EvalError>) -> Result<f64, EvalError> {
    let t = Instant::now();
    f()?;
    Ok(t.elapsed().as_secs_f64() * 1e3)
}

/// One untimed warmup, then `repeats` timed runs.
fn measure(repeats: usize, mut f: impl FnMut() -> Result<(), EvalError>) -> Result<(f64, f64), EvalError> {
    f()?;
    let times: Vec<f64> = (0..repeats).map(|_| time_ms(&mut f)).collect::<Result<_, _>>()?;
    Ok(mean_stdev(&times))
}

fn classify(
    test: &[CuneiformGraph],
    train: &[CuneiformGraph],
    method: Method,
    cfg: &BenchConfig,
) -> Result<(), EvalError> {
    let opts = ExactOptions { max_wedges: cfg.max_wedges };
    let dm = distance_matrix_between(test, train, method, &cfg.cost_model, &opts)?;
    for q in 0..test.len() {
        let c: Vec<Neighbor> = train
            .iter()
            .enumerate()
            .map(|(j, g)| Neighbor { distance: dm.get(q, j), id: &g.id, label: g.label })
            .collect();
        knn_classify(&c, cfg.k)?;
    }
    Ok(())
}

/// Times classification of a fixed half of the dataset against growing
/// training subsets drawn from the other half.
pub fn bench(d: &Dataset, subjects: &[BenchSubject], cfg: &BenchConfig) -> Result<Vec<BenchRecord>, EvalError> {
    if cfg.repeats == 0 {
        return Err(EvalError::InvalidArgument("repeats must be at least 1".into()));
    }
    if let Some(f) = cfg.fractions.iter().find(|&&f| !(f > 0.0 && f <= 100.0)) {
        return Err(EvalError::InvalidArgument(format!("fraction {f} outside (0, 100]")));
    }
    if d.len() < 2 {
        return Err(EvalError::TooFewGraphs { graphs: d.len(), folds: 2 });
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.shuffle(&mut stream_rng(cfg.seed, Stream::Bench, 0));
    let half = d.len() / 2;
    let test = d.subset(&order[..half]).graphs;
    let pool = &order[half..];
    let mut out = Vec::new();
    for &subject in subjects {
        for &fraction in &cfg.fractions {
            let take = ((fraction / 100.0 * pool.len() as f64).round() as usize).clamp(1, pool.len());
            let train_set = d.subset(&pool[..take]).graphs;
            let record = |method: &str, phase: &str, (mean_ms, stdev_ms): (f64, f64)| BenchRecord {
                method: method.to_string(),
                phase: phase.to_string(),
                fraction,
                train_size: train_set.len(),
                test_size: test.len(),
                runs: cfg.repeats,
                mean_ms,
                stdev_ms,
            };
            match subject {
                BenchSubject::Ged(m) => {
                    let t = measure(cfg.repeats, || classify(&test, &train_set, m, cfg))?;
                    out.push(record(m.name(), "classify", t));
                }
                BenchSubject::Network => {
                    let tc = TrainConfig {
                        net: crate::nn::NetConfig { classes: d.class_names.len(), ..cfg.train.net.clone() },
                        ..cfg.train.clone()
                    };
                    let mut net = None;
                    let t = measure(cfg.repeats, || {
                        net = Some(train(&train_set, &tc)?.0);
                        Ok(())
                    })?;
                    out.push(record("CNN", "train", t));
                    let net = net.expect("trained at least once");
                    let t = measure(cfg.repeats, || {
                        net.predict(&test)?;
                        Ok(())
                    })?;
                    out.push(record("CNN", "inference", t));
                }
            }
        }
    }
    Ok(out)
}

/// Coefficient of determination of the least-squares line through `(x, y)`.
pub fn linear_fit_r2(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    if sxx == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synthesize, SynthConfig};

    #[test]
    fn r2() {
        assert!((linear_fit_r2(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-12);
        let r = linear_fit_r2(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]);
        // least-squares slope 0.8: residual sum 1.8 of total 5
        assert!((r - (1.0 - 1.8 / 5.0)).abs() < 1e-12);
    }

    #[test]
    fn records() {
        let d = synthesize(&SynthConfig { classes: 3, per_class: 6, ..SynthConfig::default() });
        let cfg = BenchConfig { repeats: 3, fractions: vec![50.0, 100.0], ..BenchConfig::default() };
        let r = bench(&d, &[BenchSubject::Ged(Method::Apx1), BenchSubject::Ged(Method::Apx2)], &cfg).unwrap();
        assert_eq!(r.len(), 4);
        for rec in &r {
            assert_eq!(rec.runs, 3);
            assert_eq!(rec.test_size, 9);
            assert!(rec.mean_ms > 0.0 && rec.stdev_ms >= 0.0);
        }
        assert_eq!((r[0].train_size, r[1].train_size), (5, 9));
        let bad = BenchConfig { fractions: vec![0.0], ..cfg };
        assert!(bench(&d, &[BenchSubject::Network], &bad).is_err());
    }
}
