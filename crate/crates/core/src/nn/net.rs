use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bspline::KERNEL_SIZE;
use super::conv::{aggregate, contract, conv_backward, Aggregate};
use super::input::{GraphInput, FEATURES};
use super::NetError;
use crate::graph::CuneiformGraph;
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetConfig {
    /// Channel widths, input first: `[8, 32, 64, 64]` means three convolutions.
    pub widths: Vec<usize>,
    pub classes: usize,
    pub dropout: f64,
    pub self_loops: bool,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig { widths: vec![FEATURES, 32, 64, 64], classes: 30, dropout: 0.5, self_loops: false }
    }
}

impl NetConfig {
    pub fn conv_layers(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn hidden(&self) -> usize {
        *self.widths.last().unwrap_or(&0)
    }

    /// Convolution kernels `[25][in][out]`, then dense `[classes][hidden]`, then bias.
    pub fn param_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.widths.windows(2).map(|w| KERNEL_SIZE * w[0] * w[1]).collect();
        s.push(self.classes * self.hidden());
        s.push(self.classes);
        s
    }

    pub fn validate(&self) -> Result<(), NetError> {
        let ok = self.widths.len() >= 2
            && self.widths[0] == FEATURES
            && self.widths.iter().all(|&w| w > 0)
            && self.classes > 0
            && (0.0..1.0).contains(&self.dropout);
        if ok {
            Ok(())
        } else {
            Err(NetError::InvalidConfig(format!("{self:?}")))
        }
    }
}

pub type Params = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct SplineNet {
    pub config: NetConfig,
    /// Pseudo-coordinate normalization constant, fixed from the training set.
    pub norm: f64,
    pub seed: u64,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub class: usize,
    pub probabilities: Vec<f64>,
}

struct Layer {
    agg: Aggregate,
    z: Vec<f64>,
}

struct Trace {
    layers: Vec<Layer>,
    dropped: Vec<f64>,
    probs: Vec<f64>,
}

fn elu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        x.exp_m1()
    }
}

fn elu_grad(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        x.exp()
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|&z| (z - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

pub fn cross_entropy(probs: &[f64], label: usize) -> f64 {
    -probs[label].ln()
}

pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Inverted dropout mask: each unit kept with probability `1 - p` and scaled by `1 / (1 - p)`.
pub fn dropout_mask(rng: &mut impl Rng, len: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        return vec![1.0; len];
    }
    let keep = 1.0 / (1.0 - p);
    (0..len).map(|_| if rng.gen::<f64>() < p { 0.0 } else { keep }).collect()
}

impl SplineNet {
    /// Uniform `+-1/sqrt(fan_in)` init; fan-in is `25 * in` for kernels.
    pub fn new(config: NetConfig, norm: f64, seed: u64) -> Result<Self, NetError> {
        config.validate()?;
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(NetError::DegenerateNormalization);
        }
        let mut rng = stream_rng(seed, Stream::Init, 0);
        let mut params = Vec::new();
        for w in config.widths.windows(2) {
            let b = 1.0 / ((KERNEL_SIZE * w[0]) as f64).sqrt();
            params.push((0..KERNEL_SIZE * w[0] * w[1]).map(|_| rng.gen_range(-b..b)).collect());
        }
        let b = 1.0 / (config.hidden() as f64).sqrt();
        params.push((0..config.classes * config.hidden()).map(|_| rng.gen_range(-b..b)).collect());
        params.push((0..config.classes).map(|_| rng.gen_range(-b..b)).collect());
        Ok(SplineNet { config, norm, seed, params })
    }

    pub fn parameter_count(&self) -> usize {
        self.params.iter().map(Vec::len).sum()
    }

    pub fn prepare(&self, g: &CuneiformGraph) -> Result<GraphInput, NetError> {
        GraphInput::new(g, self.norm, self.config.self_loops)
    }

    fn check(&self, x: &GraphInput) -> Result<(), NetError> {
        let sizes = self.config.param_sizes();
        if self.params.len() != sizes.len() || self.params.iter().zip(&sizes).any(|(p, &s)| p.len() != s) {
            return Err(NetError::ShapeMismatch("parameter tensors do not match the config".into()));
        }
        if x.features.len() != x.vertices * self.config.widths[0] || x.vertices == 0 {
            return Err(NetError::ShapeMismatch(format!(
                "{} feature values for {} vertices",
                x.features.len(),
                x.vertices
            )));
        }
        Ok(())
    }

    fn run(&self, x: &GraphInput, mask: Option<&[f64]>) -> Trace {
        let w = &self.config.widths;
        let mut layers = Vec::with_capacity(w.len() - 1);
        let mut f = x.features.clone();
        for (l, pair) in w.windows(2).enumerate() {
            let agg = aggregate(x, &f, pair[0]);
            let z = contract(&agg, &self.params[l], pair[1]);
            f = z.iter().map(|&v| elu(v)).collect();
            layers.push(Layer { agg, z });
        }
        let hidden = self.config.hidden();
        let mut pooled = vec![0.0; hidden];
        for row in f.chunks(hidden) {
            for (p, &v) in pooled.iter_mut().zip(row) {
                *p += v;
            }
        }
        let inv_n = 1.0 / x.vertices as f64;
        let dropped: Vec<f64> = match mask {
            Some(m) => pooled.iter().zip(m).map(|(p, m)| p * inv_n * m).collect(),
            None => pooled.iter().map(|p| p * inv_n).collect(),
        };
        let dense = &self.params[w.len() - 1];
        let bias = &self.params[w.len()];
        let logits: Vec<f64> = (0..self.config.classes)
            .map(|c| {
                bias[c] + dense[c * hidden..(c + 1) * hidden].iter().zip(&dropped).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        Trace { layers, dropped, probs: softmax(&logits) }
    }

    /// Class probabilities; `mask` is a dropout mask on the pooled vector.
    pub fn forward_input(&self, x: &GraphInput, mask: Option<&[f64]>) -> Result<Vec<f64>, NetError> {
        self.check(x)?;
        if let Some(m) = mask {
            if m.len() != self.config.hidden() {
                return Err(NetError::ShapeMismatch("dropout mask length".into()));
            }
        }
        Ok(self.run(x, mask).probs)
    }

    /// Dropout is sampled from `rng` only in train mode.
    pub fn forward(&self, g: &CuneiformGraph, train_mode: bool, rng: &mut impl Rng) -> Result<Vec<f64>, NetError> {
        let x = self.prepare(g)?;
        let mask = train_mode.then(|| dropout_mask(rng, self.config.hidden(), self.config.dropout));
        self.forward_input(&x, mask.as_deref())
    }

    /// Cross-entropy of one graph, its gradient for every parameter, and whether
    /// the (masked) prediction was correct.
    pub fn sample_grads(
        &self,
        x: &GraphInput,
        label: usize,
        mask: Option<&[f64]>,
    ) -> Result<(f64, Params, bool), NetError> {
        self.check(x)?;
        if label >= self.config.classes {
            return Err(NetError::LabelOutOfRange { label, classes: self.config.classes });
        }
        let t = self.run(x, mask);
        let w = &self.config.widths;
        let nl = w.len() - 1;
        let hidden = self.config.hidden();
        let mut grads: Params = self.config.param_sizes().into_iter().map(|s| vec![0.0; s]).collect();

        let mut d_logits = t.probs.clone();
        d_logits[label] -= 1.0;
        let dense = &self.params[nl];
        let mut d_dropped = vec![0.0; hidden];
        for (c, &dl) in d_logits.iter().enumerate() {
            let gw = &mut grads[nl][c * hidden..(c + 1) * hidden];
            for (g, &v) in gw.iter_mut().zip(&t.dropped) {
                *g = dl * v;
            }
            for (d, &wv) in d_dropped.iter_mut().zip(&dense[c * hidden..(c + 1) * hidden]) {
                *d += dl * wv;
            }
        }
        grads[nl + 1].copy_from_slice(&d_logits);

        let inv_n = 1.0 / x.vertices as f64;
        let d_pooled: Vec<f64> = match mask {
            Some(m) => d_dropped.iter().zip(m).map(|(d, m)| d * m * inv_n).collect(),
            None => d_dropped.iter().map(|d| d * inv_n).collect(),
        };
        let mut d_f: Vec<f64> = (0..x.vertices).flat_map(|_| d_pooled.iter().copied()).collect();
        for l in (0..nl).rev() {
            let layer = &t.layers[l];
            let d_z: Vec<f64> = d_f.iter().zip(&layer.z).map(|(d, &z)| d * elu_grad(z)).collect();
            match conv_backward(x, &layer.agg, &self.params[l], w[l + 1], &d_z, &mut grads[l], l > 0) {
                Some(d) => d_f = d,
                None => break,
            }
        }
        let correct = argmax(&t.probs) == label;
        Ok((cross_entropy(&t.probs, label), grads, correct))
    }

    /// Mean cross-entropy and mean gradient over a batch; dropout masks are drawn
    /// from `rng` in batch order when `train_mode` is set.
    pub fn loss_and_grads(
        &self,
        batch: &[GraphInput],
        labels: &[usize],
        train_mode: bool,
        rng: &mut impl Rng,
    ) -> Result<(f64, Params), NetError> {
        if batch.is_empty() {
            return Err(NetError::EmptyTrainingSet);
        }
        if batch.len() != labels.len() {
            return Err(NetError::ShapeMismatch("batch and label counts differ".into()));
        }
        let masks: Vec<Option<Vec<f64>>> = batch
            .iter()
            .map(|_| train_mode.then(|| dropout_mask(rng, self.config.hidden(), self.config.dropout)))
            .collect();
        let items: Vec<_> = (0..batch.len()).map(|i| (&batch[i], labels[i], masks[i].as_deref())).collect();
        let (loss, grads, _) = self.batch_grads(&items)?;
        Ok((loss, grads))
    }

    /// Per-member gradients may be computed in parallel; they are summed in
    /// member order so the result does not depend on the thread count.
    pub(crate) fn batch_grads(
        &self,
        items: &[(&GraphInput, usize, Option<&[f64]>)],
    ) -> Result<(f64, Params, usize), NetError> {
        let results: Vec<_> =
            items.par_iter().map(|&(x, y, m)| self.sample_grads(x, y, m)).collect::<Result<_, _>>()?;
        let scale = 1.0 / items.len() as f64;
        let mut total: Params = self.config.param_sizes().into_iter().map(|s| vec![0.0; s]).collect();
        let mut loss = 0.0;
        let mut correct = 0;
        for (l, g, c) in results {
            loss += l;
            correct += c as usize;
            for (t, g) in total.iter_mut().zip(g) {
                for (a, b) in t.iter_mut().zip(g) {
                    *a += b;
                }
            }
        }
        for t in &mut total {
            for a in t.iter_mut() {
                *a *= scale;
            }
        }
        Ok((loss * scale, total, correct))
    }

    pub fn predict(&self, graphs: &[CuneiformGraph]) -> Result<Vec<Prediction>, NetError> {
        graphs
            .par_iter()
            .map(|g| {
                let probabilities = self.forward_input(&self.prepare(g)?, None)?;
                Ok(Prediction { class: argmax(&probabilities), probabilities })
            })
            .collect()
    }
}
