use serde::{Deserialize, Serialize};

/// Numerical tolerances used across the crate.
///
/// Every threshold lives here so callers can tighten or relax them without
/// touching the formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for the algebraic identities the derived constants
    /// must satisfy.
    pub identity: f64,
    /// Relative tolerance for deciding that a point lies on the face `x_j = p x_i`.
    pub on_face: f64,
    /// Exponent sums within this distance of 1 are treated as exactly 1.
    pub unit_beta: f64,
    /// Slack granted to membership margins (which are relative).
    pub membership: f64,
    /// `|a_i - a_j| < log_branch * (a_i + a_j)` selects the logarithmic primitive.
    pub log_branch: f64,
    /// Relative accuracy requested from adaptive quadrature.
    pub quadrature: f64,
    /// Cap on interval subdivisions for adaptive quadrature.
    pub quadrature_max_subdivisions: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-12,
            on_face: 1e-10,
            unit_beta: 1e-12,
            membership: 1e-9,
            log_branch: 1e-9,
            quadrature: 1e-10,
            quadrature_max_subdivisions: 10_000,
        }
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
