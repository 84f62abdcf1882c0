use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const CHUNK: usize = 1 << 16;

/// Axis-aligned box `[lo, hi]` in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(invalid("bounding box corners must have the same positive dimension"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b)) {
            return Err(invalid("bounding box needs lo <= hi on every axis"));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Hit-or-miss estimate of the volume of `{x ∈ bbox : indicator(x)}`.
///
/// Samples are drawn in fixed-size chunks, each from its own ChaCha stream,
/// so the result depends only on `seed` and `samples`.
pub fn monte_carlo_volume<F>(indicator: F, bbox: &BoundingBox, samples: usize, seed: u64) -> Result<VolumeEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let vol = bbox.volume();
    if !(vol > 0.0) {
        return Err(invalid("bounding box has zero volume"));
    }
    let dim = bbox.lo.len();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; dim];
            let mut hits = 0u64;
            for _ in 0..count {
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk = rng.gen_range(bbox.lo[k]..=bbox.hi[k]);
                }
                if indicator(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        estimate: vol * p,
        std_error: vol * (p * (1.0 - p) / samples as f64).sqrt(),
    })
}
