#![allow(dead_code)]

use proptest::prelude::*;
use wedgekit::dataset::{synthesize, SynthConfig};
use wedgekit::graph::{CuneiformGraph, GlyphType, Point, WedgeSpec};
use wedgekit::nn::net::{NetConfig, SplineNet};
use wedgekit::nn::{normalization_constant, GraphInput};
use wedgekit::rng::{stream_rng, Stream};

/// Coordinates on a coarse grid so that coincident depth points (zero
/// arrangement vectors) and cost ties show up regularly.
pub fn point() -> impl Strategy<Value = Point> {
    (0i32..5, 0i32..5).prop_map(|(x, y)| [x as f64 * 0.5, y as f64 * 0.5])
}

pub fn wedge(glyphs: usize) -> impl Strategy<Value = WedgeSpec> {
    (0..glyphs, [point(), point(), point(), point()]).prop_map(|(g, p)| WedgeSpec::new(GlyphType::ALL[g], p))
}

pub fn graph(min: usize, max: usize, glyphs: usize) -> impl Strategy<Value = CuneiformGraph> {
    prop::collection::vec(wedge(glyphs), min..=max)
        .prop_map(|ws| CuneiformGraph::build_from_wedges("g", 0, &ws).expect("four typed finite points"))
}

/// Every partial injective map from `n` items into `m` slots.
pub fn partial_injections(n: usize, m: usize) -> Vec<Vec<Option<usize>>> {
    fn go(i: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Option<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        cur.push(None);
        go(i + 1, n, used, cur, out);
        cur.pop();
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(Some(j));
                go(i + 1, n, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

pub fn rigid(g: &CuneiformGraph, theta: f64, shift: Point) -> CuneiformGraph {
    let (s, c) = theta.sin_cos();
    g.map_positions(|_, p| [c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]])
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Minimum cost over all permutations, and the lexicographically first
/// permutation attaining it. Costs summed in ascending order, as the solver does.
pub fn brute_force_assignment(rows: &[Vec<f64>]) -> Option<(f64, Vec<usize>)> {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut terms: Vec<f64> = perm.iter().enumerate().map(|(r, &c)| rows[r][c]).collect();
        terms.sort_by(f64::total_cmp);
        let cost: f64 = terms.iter().sum();
        if cost.is_finite() && best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, perm.clone()));
        }
        // next permutation in lexicographic order
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best
}

fn net_setup(self_loops: bool) -> (SplineNet, Vec<GraphInput>, Vec<usize>) {
    let d =
        synthesize(&SynthConfig { classes: 2, per_class: 1, wedge_range: (2, 3), seed: 21, ..SynthConfig::default() });
    let r = normalization_constant(&d.graphs).unwrap();
    let cfg = NetConfig { widths: vec![8, 4, 4, 4], classes: 10, dropout: 0.5, self_loops };
    let net = SplineNet::new(cfg, r, 17).unwrap();
    let xs = d.graphs.iter().map(|g| net.prepare(g).unwrap()).collect();
    // labels spread over the 10 outputs
    (net, xs, vec![3, 8])
}

fn net_loss(net: &SplineNet, xs: &[GraphInput], ys: &[usize]) -> f64 {
    // same seed every call, so the dropout masks are fixed
    net.loss_and_grads(xs, ys, true, &mut stream_rng(4, Stream::Dropout, 0)).unwrap().0
}

/// Largest relative error between analytic and central-difference gradients
/// of a downsized network, and the number of non-zero analytic entries.
pub fn gradient_check(self_loops: bool) -> (f64, usize) {
    let (mut net, xs, ys) = net_setup(self_loops);
    let (_, grads) = net.loss_and_grads(&xs, &ys, true, &mut stream_rng(4, Stream::Dropout, 0)).unwrap();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut nonzero = 0;
    for (t, g) in grads.iter().enumerate() {
        for (i, &analytic) in g.iter().enumerate() {
            let orig = net.params[t][i];
            net.params[t][i] = orig + h;
            let up = net_loss(&net, &xs, &ys);
            net.params[t][i] = orig - h;
            let down = net_loss(&net, &xs, &ys);
            net.params[t][i] = orig;
            let numeric = (up - down) / (2.0 * h);
            // central differences on a loss of order 1 carry ~1e-11 of rounding noise,
            // so gradients below 1e-6 are compared against that floor
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
            worst = worst.max(rel);
            nonzero += (analytic != 0.0) as usize;
        }
    }
    (worst, nonzero)
}
