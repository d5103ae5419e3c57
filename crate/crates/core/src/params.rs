//! Closed-form constants derived from an instance: the cone `(z0, γ)` of the
//! upper envelope and the wedge constants used by the lower envelope and the
//! cross-section geometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Monomial, MonomialInstance};
use crate::numeric::ln_ratio;
use crate::tolerance::relative_gap;

/// Vertex offset `z0` and scaling `γ` of the cone `(z - z0)^β <= γ f(x)`.
///
/// Chosen so that the cone and the monomial have identical level sets at
/// `z = l` and `z = u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    pub z0: f64,
    pub gamma: f64,
    /// `l - z0`. For small `β` the vertex sits within rounding of `l`, so
    /// this is computed directly rather than by subtraction.
    pub lower_gap: f64,
}

impl ConeParams {
    /// Solves `l = (l - z0)^β / γ`, `u = (u - z0)^β / γ`.
    ///
    /// The textbook expressions subtract nearly equal powers when `β` is large
    /// or `u` is close to `l`; with `L = ln(u/l)` they rearrange to
    /// `z0 = u (e^{(1/β - 1)L} - 1) / (e^{L/β} - 1)` and
    /// `ln γ = β ln(u - l) - ln l - β ln(e^{L/β} - 1)`, both free of cancellation.
    pub fn derive(l: f64, u: f64, beta: f64, unit_tolerance: f64) -> Self {
        if (beta - 1.0).abs() <= unit_tolerance {
            return Self {
                z0: 0.0,
                gamma: 1.0,
                lower_gap: l,
            };
        }
        let log_ratio = ln_ratio(l, u);
        let inv_beta = beta.recip();
        let spread = (log_ratio * inv_beta).exp_m1();
        let z0 = u * ((inv_beta - 1.0) * log_ratio).exp_m1() / spread;
        let ln_gamma = beta * (u - l).ln() - l.ln() - beta * spread.ln();
        Self {
            z0,
            gamma: ln_gamma.exp(),
            lower_gap: (u - l) / spread,
        }
    }

    /// `z - z0`, evaluated as `(z - l) + (l - z0)`.
    pub fn rise(&self, z: f64, l: f64) -> f64 {
        (z - l) + self.lower_gap
    }
}

/// Constants of the wedge `p x_i <= x_j <= q x_i`.
///
/// `(d_i, d_j)` is the direction joining the two points where a level set
/// of `f` meets the faces `x_j = p x_i` and `x_j = q x_i`; it does not depend
/// on the level. `η_i, η_j` rescale `x_i, x_j` along that move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeParams {
    pub d_i: f64,
    pub d_j: f64,
    pub eta_i: f64,
    pub eta_j: f64,
    pub lambda: f64,
    pub zeta: f64,
    /// Slope `d_j / d_i` of every level-set chord in the `(x_i, x_j)` plane.
    pub sigma: f64,
    /// Chord length per unit of `x_i` at the `p` face.
    pub tau: f64,
    pub phi_i: f64,
    pub phi_j: f64,
}

impl WedgeParams {
    pub fn derive(instance: &MonomialInstance, cone: &ConeParams, beta: f64) -> Self {
        let w = instance.wedge;
        let (ai, aj) = (instance.exponents[w.i], instance.exponents[w.j]);
        let pair_sum = ai + aj;
        let phi_i = ai / pair_sum;
        let phi_j = aj / pair_sum;
        let rho = ln_ratio(w.p, w.q);
        let ln_p = w.p.ln();

        let eta_i = (-phi_j * rho).exp();
        let eta_j = (phi_i * rho).exp();
        // q^{-φ_j} - p^{-φ_j} and q^{φ_i} - p^{φ_i}, factored through p.
        let d_i = (-phi_j * ln_p).exp() * (-phi_j * rho).exp_m1();
        let d_j = (phi_i * ln_p).exp() * (phi_i * rho).exp_m1();

        let lambda = (aj * ln_p - pair_sum * (d_j - d_i * w.p).ln()).exp();
        let zeta = ((cone.gamma.ln() + lambda.ln()) / beta).exp();
        let sigma = d_j / d_i;
        let tau = (1.0 - eta_i).hypot(w.p * (1.0 - eta_j));

        Self {
            d_i,
            d_j,
            eta_i,
            eta_j,
            lambda,
            zeta,
            sigma,
            tau,
            phi_i,
            phi_j,
        }
    }
}

/// Relative residuals of the defining identities, recomputed from the stored
/// constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `l` vs `(l - z0)^β / γ`.
    pub cone_lower: f64,
    /// `u` vs `(u - z0)^β / γ`.
    pub cone_upper: f64,
    /// `β >= 1` agrees with `z0 <= 0`. `γ` carries no such sign: it scales
    /// like `u^{β-1}`, so small bounds push it below 1 for any `β > 1`.
    pub cone_sign_consistent: bool,
    /// `d_i < 0 < d_j`.
    pub direction_signs: bool,
    /// `η_i^{a_i} η_j^{a_j}` vs 1.
    pub eta_product: f64,
    /// `η_j / η_i` vs `q / p`.
    pub eta_ratio: f64,
    /// `λ` vs `q^{a_j} / (d_j - q d_i)^{a_i + a_j}`.
    pub lambda_sides: f64,
    /// `d_j - p d_i` vs `(d_j - q d_i) η_i`.
    pub face_scaling: f64,
    pub ok: bool,
}

/// Result of moving a point of the `p` face along `(d_i, d_j)` to the `q` face.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    /// Step length `s̄ >= 0` along `(d_i, d_j)`.
    pub step: f64,
    pub point: Vec<f64>,
}

impl Monomial {
    pub fn identity_report(&self) -> IdentityReport {
        let ConeParams { z0, gamma, .. } = self.cone;
        let w = &self.wedge;
        let (l, u, p, q, beta) = (self.lower(), self.upper(), self.p(), self.q(), self.beta);
        let (ai, aj) = self.wedge_exponents();

        let cone_level = |v: f64| (beta * self.cone.rise(v, l).ln() - gamma.ln()).exp();
        let cone_lower = relative_gap(l, cone_level(l));
        let cone_upper = relative_gap(u, cone_level(u));
        let cone_sign_consistent = if (beta - 1.0).abs() <= self.tol.unit_beta {
            z0 == 0.0 && gamma == 1.0
        } else {
            (beta >= 1.0) == (z0 <= 0.0)
        };

        let eta_product = relative_gap(1.0, (ai * w.eta_i.ln() + aj * w.eta_j.ln()).exp());
        let eta_ratio = relative_gap(w.eta_j / w.eta_i, q / p);
        let lambda_q = (aj * q.ln() - (ai + aj) * (w.d_j - q * w.d_i).ln()).exp();
        let lambda_sides = relative_gap(w.lambda, lambda_q);
        let face_scaling = relative_gap(w.d_j - p * w.d_i, (w.d_j - q * w.d_i) * w.eta_i);
        let direction_signs = w.d_i < 0.0 && 0.0 < w.d_j;

        let tol = self.tol.identity;
        let ok = cone_sign_consistent
            && direction_signs
            && [
                cone_lower,
                cone_upper,
                eta_product,
                eta_ratio,
                lambda_sides,
                face_scaling,
            ]
            .iter()
            .all(|r| *r <= tol);
        IdentityReport {
            cone_lower,
            cone_upper,
            cone_sign_consistent,
            direction_signs,
            eta_product,
            eta_ratio,
            lambda_sides,
            face_scaling,
            ok,
        }
    }

    /// Moves `x` (on the face `x_j = p x_i`) along `(d_i, d_j)` until it hits
    /// the face `x_j = q x_i`. The value of `f` is unchanged.
    pub fn wedge_transport(&self, x: &[f64]) -> Result<Transport> {
        self.check_point(x)?;
        let (xi, xj) = self.wedge_pair(x);
        let gap = relative_gap(xj, self.p() * xi);
        if gap > self.tol.on_face {
            return Err(Error::NotOnLowerFace { gap });
        }
        let w = &self.wedge;
        let step = xi * (w.eta_i - 1.0) / w.d_i;
        let point = self.embed_moved(x, w.eta_i * xi, w.eta_j * xj);
        Ok(Transport { step, point })
    }

    fn embed_moved(&self, x: &[f64], xi: f64, xj: f64) -> Vec<f64> {
        let mut moved = x.to_vec();
        moved[self.instance.wedge.i] = xi;
        moved[self.instance.wedge.j] = xj;
        moved
    }
}
