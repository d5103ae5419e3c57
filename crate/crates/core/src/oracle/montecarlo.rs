//! Hit-or-miss Monte-Carlo volume estimates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::streams::count_hits;
use crate::error::{Error, Result};
use crate::instance::Monomial;

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 1_000;
const MAX_DIMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    /// Box volume times the sample standard deviation of the hit indicator
    /// over `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_hits(box_volume: f64, hits: u64, samples: u64, seed: u64) -> Self {
        let n = samples as f64;
        let frac = hits as f64 / n;
        let variance = frac * (1.0 - frac) * n / (n - 1.0);
        Self {
            value: box_volume * frac,
            stderr: box_volume * (variance / n).sqrt(),
            samples,
            hits,
            seed,
        }
    }
}

/// Volume of `{x ∈ [lo, hi] : inside(x)}` from `samples` uniform draws.
pub fn mc_box_volume<F>(
    lo: &[f64],
    hi: &[f64],
    seed: u64,
    samples: u64,
    inside: F,
) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if lo.len() != hi.len()
        || lo
            .iter()
            .zip(hi)
            .any(|(a, b)| !a.is_finite() || !b.is_finite() || a > b)
    {
        return Err(Error::InvalidArgument(
            "sampling box bounds must be finite with lo <= hi".into(),
        ));
    }
    if lo.len() > MAX_DIMS {
        return Err(Error::InvalidArgument(format!(
            "sampling box has more than {MAX_DIMS} dimensions"
        )));
    }
    let box_volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let dims = lo.len();
    let hits = count_hits(seed, samples, |rng| {
        let mut buf = [0.0; MAX_DIMS];
        let x = &mut buf[..dims];
        for (k, v) in x.iter_mut().enumerate() {
            *v = lo[k] + (hi[k] - lo[k]) * rng.random::<f64>();
        }
        inside(x)
    });
    Ok(McEstimate::from_hits(box_volume, hits, samples, seed))
}

/// Monte-Carlo estimate of the volume of `conv(F(W_12))`, sampling uniformly
/// from `[0, ω1] x [0, ω2] x [l, u]`.
pub fn mc_volume(m: &Monomial, seed: u64, samples: u64) -> Result<McEstimate> {
    let bbox = m.bounding_box()?;
    mc_box_volume(
        &[0.0, 0.0, m.lower()],
        &[bbox.omega1, bbox.omega2, m.upper()],
        seed,
        samples,
        |s| m.hull_verdict_pair(s[0], s[1], s[2]).inside,
    )
}
