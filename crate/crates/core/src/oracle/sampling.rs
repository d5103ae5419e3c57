//! Random points of `X ∩ W` and of the graph of `f` over it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::streams::{map_blocks, stream};
use crate::error::{Error, Result};
use crate::instance::Monomial;

/// Point of `X ∩ W_ij` drawn by picking a ratio `r = x_j / x_i` uniformly in
/// `[p, q]`, a level uniformly in `[l, u]`, and, for `n > 2`, the coordinates
/// outside the wedge pair log-uniformly in `[1/4, 4]`; the wedge pair is then
/// scaled so that `f` equals the chosen level.
pub fn sample_wedge_point(m: &Monomial, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let r = rng.random_range(m.p()..=m.q());
    let level = rng.random_range(m.lower()..=m.upper());
    let mut x: Vec<f64> = (0..m.n())
        .map(|_| (rng.random_range(-1.0..=1.0) * 4f64.ln()).exp())
        .collect();
    let w = m.instance().wedge;
    x[w.i] = 1.0;
    x[w.j] = r;
    // f(t x_i, t x_j, rest) = t^{a_i + a_j} f(x).
    let (ai, aj) = m.wedge_exponents();
    let t = ((level.ln() - m.f_unchecked(&x).ln()) / (ai + aj)).exp();
    x[w.i] = t;
    x[w.j] = r * t;
    x
}

/// Rejection sampler for `X ∩ W_12`: uniform draws from the bounding box,
/// keeping the first one inside. Returns `None` after `max_tries` misses.
pub fn rejection_sample_pair(
    m: &Monomial,
    rng: &mut ChaCha8Rng,
    max_tries: usize,
) -> Result<Option<[f64; 2]>> {
    let bbox = m.bounding_box()?;
    for _ in 0..max_tries {
        let xi = rng.random_range(0.0..=bbox.omega1);
        let xj = rng.random_range(0.0..=bbox.omega2);
        let f = m.f_pair(xi, xj);
        if m.p() * xi <= xj && xj <= m.q() * xi && f >= m.lower() && f <= m.upper() {
            let mut out = [0.0; 2];
            out[m.instance().wedge.i] = xi;
            out[m.instance().wedge.j] = xj;
            return Ok(Some(out));
        }
    }
    Ok(None)
}

/// `count` i.i.d. points from [`sample_wedge_point`], reproducible from `seed`.
pub fn wedge_points(m: &Monomial, seed: u64, count: usize) -> Vec<Vec<f64>> {
    let mut rng = stream(seed, 0);
    (0..count)
        .map(|_| sample_wedge_point(m, &mut rng))
        .collect()
}

/// Convex weights drawn uniformly from the simplex.
pub fn simplex_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinationReport {
    pub trials: u64,
    pub violations: u64,
    /// Smallest membership margin seen over all trials.
    pub worst_margin: f64,
    pub seed: u64,
}

/// Convex combinations of one to four random graph points
/// `(x, f(x))`, `x ∈ X ∩ W_12`, tested against the two-variable hull.
/// Every combination lies in `conv(F(W_12))`, so any violation exposes an
/// error in the hull description.
pub fn graph_combination_sampler(
    m: &Monomial,
    seed: u64,
    trials: u64,
) -> Result<CombinationReport> {
    m.require_planar()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let w = m.instance().wedge;
    let per_block = map_blocks(seed, trials, |rng, count| {
        let mut violations = 0u64;
        let mut worst = f64::INFINITY;
        for _ in 0..count {
            let k = rng.random_range(1..=4);
            let weights = simplex_weights(rng, k);
            let (mut xi, mut xj, mut z) = (0.0, 0.0, 0.0);
            for weight in weights {
                let x = sample_wedge_point(m, rng);
                xi += weight * x[w.i];
                xj += weight * x[w.j];
                z += weight * m.f_unchecked(&x);
            }
            let verdict = m.hull_verdict_pair(xi, xj, z);
            worst = worst.min(verdict.margin);
            if !verdict.inside {
                violations += 1;
            }
        }
        (violations, worst)
    });
    let (violations, worst_margin) = per_block
        .into_iter()
        .fold((0, f64::INFINITY), |(v, w), (bv, bw)| (v + bv, w.min(bw)));
    Ok(CombinationReport {
        trials,
        violations,
        worst_margin,
        seed,
    })
}
