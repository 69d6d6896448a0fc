//! Spline convolution with mean aggregation over in-neighbours.
//!
//! Weights are laid out `[k][in][out]` with `k` the control index. The forward
//! pass first builds `H[i][k][l] = sum_j w_k(u_ij) F[j][l] / deg(i)` and then
//! contracts it with the weights; `H` is kept for the backward pass.

use super::bspline::KERNEL_SIZE;
use super::input::GraphInput;

/// Aggregated features, `vertices x 25 x in`, plus which `(i, k)` blocks are non-zero.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub inputs: usize,
    pub h: Vec<f64>,
    pub active: Vec<Vec<usize>>,
}

pub fn aggregate(x: &GraphInput, f: &[f64], inputs: usize) -> Aggregate {
    let n = x.vertices;
    let mut h = vec![0.0; n * KERNEL_SIZE * inputs];
    let mut touched = vec![false; n * KERNEL_SIZE];
    for (e, &(src, dst)) in x.edges.iter().enumerate() {
        let scale = x.inv_degree[dst];
        let fj = &f[src * inputs..(src + 1) * inputs];
        for (k, w) in x.basis[e].iter() {
            let c = w * scale;
            let block = (dst * KERNEL_SIZE + k) * inputs;
            for (acc, &v) in h[block..block + inputs].iter_mut().zip(fj) {
                *acc += c * v;
            }
            touched[dst * KERNEL_SIZE + k] = true;
        }
    }
    let active = (0..n).map(|i| (0..KERNEL_SIZE).filter(|&k| touched[i * KERNEL_SIZE + k]).collect()).collect();
    Aggregate { inputs, h, active }
}

/// `out[i][o] = sum_k sum_l H[i][k][l] W[k][l][o]`, row-major `vertices x outputs`.
pub fn contract(a: &Aggregate, weight: &[f64], outputs: usize) -> Vec<f64> {
    let inputs = a.inputs;
    let mut out = vec![0.0; a.active.len() * outputs];
    for (i, ks) in a.active.iter().enumerate() {
        let row = &mut out[i * outputs..(i + 1) * outputs];
        for &k in ks {
            let hb = &a.h[(i * KERNEL_SIZE + k) * inputs..][..inputs];
            for (l, &hv) in hb.iter().enumerate() {
                if hv == 0.0 {
                    continue;
                }
                let wrow = &weight[(k * inputs + l) * outputs..][..outputs];
                for (o, &wv) in row.iter_mut().zip(wrow) {
                    *o += hv * wv;
                }
            }
        }
    }
    out
}

pub fn conv_forward(x: &GraphInput, f: &[f64], weight: &[f64], inputs: usize, outputs: usize) -> Vec<f64> {
    contract(&aggregate(x, f, inputs), weight, outputs)
}

/// Adds the weight gradient to `d_weight`; returns the input gradient if requested.
pub fn conv_backward(
    x: &GraphInput,
    a: &Aggregate,
    weight: &[f64],
    outputs: usize,
    d_out: &[f64],
    d_weight: &mut [f64],
    want_input_grad: bool,
) -> Option<Vec<f64>> {
    let inputs = a.inputs;
    let n = x.vertices;
    let mut d_h = if want_input_grad { vec![0.0; n * KERNEL_SIZE * inputs] } else { Vec::new() };
    for (i, ks) in a.active.iter().enumerate() {
        let g = &d_out[i * outputs..(i + 1) * outputs];
        for &k in ks {
            let base = (i * KERNEL_SIZE + k) * inputs;
            for l in 0..inputs {
                let off = (k * inputs + l) * outputs;
                let hv = a.h[base + l];
                if hv != 0.0 {
                    for (dw, &gv) in d_weight[off..off + outputs].iter_mut().zip(g) {
                        *dw += hv * gv;
                    }
                }
                if want_input_grad {
                    d_h[base + l] = weight[off..off + outputs].iter().zip(g).map(|(w, g)| w * g).sum();
                }
            }
        }
    }
    if !want_input_grad {
        return None;
    }
    let mut d_f = vec![0.0; n * inputs];
    for (e, &(src, dst)) in x.edges.iter().enumerate() {
        let scale = x.inv_degree[dst];
        for (k, w) in x.basis[e].iter() {
            let c = w * scale;
            let block = (dst * KERNEL_SIZE + k) * inputs;
            for l in 0..inputs {
                d_f[src * inputs + l] += c * d_h[block + l];
            }
        }
    }
    Some(d_f)
}
