//! Seeded synthetic wedge datasets: one random prototype per class, instances
//! are affine perturbations of it with per-vertex jitter.

use rand::Rng;

use super::Dataset;
use crate::graph::{CuneiformGraph, GlyphType, Point, WedgeSpec};
use crate::rng::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    /// Rotation drawn from `[-rotation, rotation]` radians.
    pub rotation: f64,
    /// Per-axis scale drawn from `[1 - scale, 1 + scale]`.
    pub scale: f64,
    /// Global shift drawn from `[-translation, translation]` per axis.
    pub translation: f64,
    /// Independent per-vertex offset from `[-jitter, jitter]` per axis.
    pub jitter: f64,
}

impl Perturbation {
    pub const NONE: Perturbation = Perturbation { rotation: 0.0, scale: 0.0, translation: 0.0, jitter: 0.0 };
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation { rotation: 0.08, scale: 0.08, translation: 1.0, jitter: 0.15 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub classes: usize,
    pub per_class: usize,
    /// Inclusive range of wedges per class prototype.
    pub wedge_range: (usize, usize),
    pub perturbation: Perturbation,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { classes: 2, per_class: 3, wedge_range: (2, 5), perturbation: Perturbation::default(), seed: 7 }
    }
}

/// Class with a fixed wedge count and instance count.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassShape {
    pub name: String,
    pub wedges: usize,
    pub count: usize,
}

/// Offsets of (tail, right, left) from the depth point for a unit wedge.
fn template(glyph: GlyphType) -> [Point; 3] {
    match glyph {
        GlyphType::Vertical => [[0.0, -2.4], [0.45, 0.35], [-0.45, 0.35]],
        GlyphType::Horizontal => [[2.4, 0.0], [-0.35, -0.45], [-0.35, 0.45]],
        GlyphType::Winkelhaken => [[0.9, 0.0], [-0.3, -0.7], [-0.3, 0.7]],
    }
}

fn prototype(rng: &mut impl Rng, wedges: usize) -> Vec<WedgeSpec> {
    let extent = 3.0 + 1.2 * wedges as f64;
    (0..wedges)
        .map(|_| {
            let glyph = GlyphType::ALL[rng.gen_range(0..3)];
            let size = rng.gen_range(0.7..1.3);
            let depth = [rng.gen_range(0.0..extent), rng.gen_range(0.0..extent * 0.7)];
            let t = template(glyph);
            let at = |o: Point| [depth[0] + size * o[0], depth[1] + size * o[1]];
            WedgeSpec::new(glyph, [depth, at(t[0]), at(t[1]), at(t[2])])
        })
        .collect()
}

fn symmetric(rng: &mut impl Rng, bound: f64) -> f64 {
    if bound > 0.0 {
        rng.gen_range(-bound..=bound)
    } else {
        0.0
    }
}

fn instance(rng: &mut impl Rng, proto: &[WedgeSpec], p: &Perturbation) -> Vec<WedgeSpec> {
    let theta = symmetric(rng, p.rotation);
    let sx = 1.0 + symmetric(rng, p.scale);
    let sy = 1.0 + symmetric(rng, p.scale);
    let shift = [symmetric(rng, p.translation), symmetric(rng, p.translation)];
    let (s, c) = theta.sin_cos();
    proto
        .iter()
        .map(|w| WedgeSpec {
            glyph: w.glyph,
            points: w
                .points
                .iter()
                .map(|&(pt, q)| {
                    let r = [c * q[0] - s * q[1], s * q[0] + c * q[1]];
                    let moved = [
                        sx * r[0] + shift[0] + symmetric(rng, p.jitter),
                        sy * r[1] + shift[1] + symmetric(rng, p.jitter),
                    ];
                    (pt, moved)
                })
                .collect(),
        })
        .collect()
}

/// Deterministic for a fixed config. Graph ids are 1-based positions.
pub fn synthesize(cfg: &SynthConfig) -> Dataset {
    let mut rng = stream_rng(cfg.seed, Stream::Synth, 0);
    let (lo, hi) = (cfg.wedge_range.0.max(1), cfg.wedge_range.1.max(cfg.wedge_range.0.max(1)));
    let shapes: Vec<ClassShape> = (0..cfg.classes)
        .map(|k| ClassShape { name: format!("c{k}"), wedges: rng.gen_range(lo..=hi), count: cfg.per_class })
        .collect();
    synthesize_shaped(&shapes, &cfg.perturbation, cfg.seed)
}

/// One class per shape, instances grouped by class in shape order.
pub fn synthesize_shaped(shapes: &[ClassShape], p: &Perturbation, seed: u64) -> Dataset {
    let mut graphs = Vec::new();
    for (label, shape) in shapes.iter().enumerate() {
        let mut rng = stream_rng(seed, Stream::Synth, 1 + label as u64);
        let proto = prototype(&mut rng, shape.wedges);
        for _ in 0..shape.count {
            let specs = instance(&mut rng, &proto, p);
            let id = (graphs.len() + 1).to_string();
            graphs
                .push(CuneiformGraph::build_from_wedges(id, label, &specs).expect("synthetic wedges are well formed"));
        }
    }
    Dataset::new(graphs, shapes.iter().map(|s| s.name.clone()).collect())
}
