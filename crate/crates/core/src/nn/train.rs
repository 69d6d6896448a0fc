use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::adam::Adam;
use super::augment::{augment, AugmentBounds};
use super::input::{normalization_constant, GraphInput};
use super::net::{dropout_mask, NetConfig, SplineNet};
use super::NetError;
use crate::graph::CuneiformGraph;
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub net: NetConfig,
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    /// First epoch (0-based) trained with `lr_decayed`.
    pub decay_epoch: usize,
    pub lr_decayed: f64,
    pub augment: bool,
    pub bounds: AugmentBounds,
    /// Train on clean and augmented copies instead of augmented only.
    pub mix_clean: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            net: NetConfig::default(),
            epochs: 300,
            batch: 32,
            lr: 0.01,
            decay_epoch: 200,
            lr_decayed: 0.001,
            augment: false,
            bounds: AugmentBounds::default(),
            mix_clean: false,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NetError> {
        self.net.validate()?;
        self.bounds.validate()?;
        if self.batch == 0 || self.lr.is_nan() || self.lr < 0.0 || self.lr_decayed.is_nan() || self.lr_decayed < 0.0 {
            return Err(NetError::InvalidConfig(format!(
                "batch {} lr {} lr_decayed {}",
                self.batch, self.lr, self.lr_decayed
            )));
        }
        Ok(())
    }

    pub fn lr_at(&self, epoch: usize) -> f64 {
        if epoch < self.decay_epoch {
            self.lr
        } else {
            self.lr_decayed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub lr: f64,
    /// Mean training cross-entropy, with dropout and augmentation as trained.
    pub loss: f64,
    pub accuracy: f64,
}

/// Fits a fresh network; the normalization constant comes from `graphs`.
///
/// Deterministic for a fixed config regardless of the rayon pool size.
pub fn train(graphs: &[CuneiformGraph], cfg: &TrainConfig) -> Result<(SplineNet, Vec<EpochStats>), NetError> {
    if graphs.is_empty() {
        return Err(NetError::EmptyTrainingSet);
    }
    cfg.validate()?;
    if let Some(g) = graphs.iter().find(|g| g.label >= cfg.net.classes) {
        return Err(NetError::LabelOutOfRange { label: g.label, classes: cfg.net.classes });
    }
    let norm = normalization_constant(graphs)?;
    let mut net = SplineNet::new(cfg.net.clone(), norm, cfg.seed)?;
    let clean: Vec<GraphInput> = graphs.iter().map(|g| net.prepare(g)).collect::<Result<_, _>>()?;
    let mut opt = Adam::new(&net.params);
    let mut trace = Vec::with_capacity(cfg.epochs);
    let n = graphs.len();
    let hidden = cfg.net.hidden();

    for epoch in 0..cfg.epochs {
        let lr = cfg.lr_at(epoch);
        let augmented: Vec<GraphInput> = if cfg.augment {
            graphs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let mut rng = stream_rng(cfg.seed, Stream::Augment, (epoch * n + i) as u64);
                    net.prepare(&augment(g, &cfg.bounds, &mut rng))
                })
                .collect::<Result<_, _>>()?
        } else {
            Vec::new()
        };
        let pool: Vec<(&GraphInput, usize)> = if !cfg.augment {
            clean.iter().zip(graphs.iter().map(|g| g.label)).collect()
        } else if cfg.mix_clean {
            clean.iter().chain(&augmented).zip(graphs.iter().chain(graphs).map(|g| g.label)).collect()
        } else {
            augmented.iter().zip(graphs.iter().map(|g| g.label)).collect()
        };
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.shuffle(&mut stream_rng(cfg.seed, Stream::Shuffle, epoch as u64));

        let masks: Vec<Vec<f64>> = (0..pool.len())
            .map(|pos| {
                let mut rng = stream_rng(cfg.seed, Stream::Dropout, (epoch * pool.len() + pos) as u64);
                dropout_mask(&mut rng, hidden, cfg.net.dropout)
            })
            .collect();

        let (mut loss, mut correct) = (0.0, 0);
        for chunk in order.chunks(cfg.batch) {
            let items: Vec<_> = chunk.iter().map(|&i| (pool[i].0, pool[i].1, Some(masks[i].as_slice()))).collect();
            let (l, grads, c) = net.batch_grads(&items)?;
            loss += l * chunk.len() as f64;
            correct += c;
            opt.update(&mut net.params, &grads, lr);
        }
        trace.push(EpochStats {
            epoch,
            lr,
            loss: loss / pool.len() as f64,
            accuracy: correct as f64 / pool.len() as f64,
        });
        log::debug!("epoch {epoch} loss {:.4}", loss / pool.len() as f64);
    }
    Ok((net, trace))
}

/// Fraction of graphs whose argmax prediction equals their label.
pub fn accuracy(net: &SplineNet, graphs: &[CuneiformGraph]) -> Result<f64, NetError> {
    if graphs.is_empty() {
        return Ok(0.0);
    }
    let preds = net.predict(graphs)?;
    let hits = preds.iter().zip(graphs).filter(|(p, g)| p.class == g.label).count();
    Ok(hits as f64 / graphs.len() as f64)
}
