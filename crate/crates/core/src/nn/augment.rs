use rand::Rng;
use serde::{Deserialize, Serialize};

use super::NetError;
use crate::graph::{CuneiformGraph, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentBounds {
    /// Per-vertex translation from `[-t, t]` per axis.
    pub translation: f64,
    /// Per-axis scale from `[1/s, s]`.
    pub scale: f64,
    /// Rotation from `[-theta, theta]` radians.
    pub rotation: f64,
}

impl Default for AugmentBounds {
    fn default() -> Self {
        AugmentBounds { translation: 0.1, scale: 1.4, rotation: 0.6 }
    }
}

impl AugmentBounds {
    pub const IDENTITY: AugmentBounds = AugmentBounds { translation: 0.0, scale: 1.0, rotation: 0.0 };

    pub fn validate(&self) -> Result<(), NetError> {
        let ok = self.translation >= 0.0 && self.rotation >= 0.0 && self.scale >= 1.0;
        if ok && self.translation.is_finite() && self.rotation.is_finite() && self.scale.is_finite() {
            Ok(())
        } else {
            Err(NetError::InvalidConfig(format!("augmentation bounds {self:?}")))
        }
    }
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// `diag(scale) * rot(theta) * p + shift`.
pub fn transform(p: Point, theta: f64, scale: [f64; 2], shift: [f64; 2]) -> Point {
    let (sin, cos) = theta.sin_cos();
    let r = [cos * p[0] - sin * p[1], sin * p[0] + cos * p[1]];
    [scale[0] * r[0] + shift[0], scale[1] * r[1] + shift[1]]
}

/// Rotate, then scale the whole graph, then shift every vertex independently.
pub fn augment(g: &CuneiformGraph, b: &AugmentBounds, rng: &mut impl Rng) -> CuneiformGraph {
    let theta = uniform(rng, -b.rotation, b.rotation);
    let s = [uniform(rng, 1.0 / b.scale, b.scale), uniform(rng, 1.0 / b.scale, b.scale)];
    g.map_positions(|_, p| {
        let t = [uniform(rng, -b.translation, b.translation), uniform(rng, -b.translation, b.translation)];
        transform(p, theta, s, t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synthesize, SynthConfig};
    use crate::rng::{stream_rng, Stream};

    #[test]
    fn identity_bounds() {
        let d = synthesize(&SynthConfig::default());
        let mut rng = stream_rng(1, Stream::Augment, 0);
        for g in &d.graphs {
            assert_eq!(&augment(g, &AugmentBounds::IDENTITY, &mut rng), g);
        }
    }

    #[test]
    fn quarter_turn() {
        let p = transform([1.0, 0.0], std::f64::consts::FRAC_PI_2, [1.0, 1.0], [0.0, 0.0]);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
        assert_eq!(transform([1.0, 2.0], 0.0, [2.0, 3.0], [0.5, -0.5]), [2.5, 5.5]);
    }

    #[test]
    fn rotation_only_is_isometry() {
        let d = synthesize(&SynthConfig::default());
        let b = AugmentBounds { rotation: 3.0, ..AugmentBounds::IDENTITY };
        let mut rng = stream_rng(2, Stream::Augment, 0);
        let dist = |g: &CuneiformGraph, i: usize, j: usize| {
            let (p, q) = (g.position(i), g.position(j));
            (p[0] - q[0]).hypot(p[1] - q[1])
        };
        for g in &d.graphs {
            let h = augment(g, &b, &mut rng);
            assert!(h.is_valid());
            assert_eq!(h.edges(), g.edges());
            let n = g.vertices().len();
            for i in 0..n {
                for j in 0..n {
                    assert!((dist(g, i, j) - dist(&h, i, j)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn bounds() {
        assert!(AugmentBounds::default().validate().is_ok());
        assert!(AugmentBounds { scale: 0.9, ..AugmentBounds::default() }.validate().is_err());
        assert!(AugmentBounds { translation: -1.0, ..AugmentBounds::default() }.validate().is_err());
    }
}
