//! Cross-section areas and volumes computed ray by ray.
//!
//! On the ray `x_j = r x_i`, `x_i = t`, the slice at height `z` is the
//! interval `t_in(r) <= t <= t_out(r)`: `t_in` is where `f` reaches the arc
//! level and `t_out` is where the lower envelope reaches `z`. With the
//! Jacobian `t` of `(t, r) -> (t, r t)` the area is
//! `∫_p^q (t_out^2 - t_in^2) / 2 dr`. None of the corner points or primitives
//! from the closed form are used, which makes this an independent check.

use crate::error::Result;
use crate::instance::{Monomial, Regime};
use crate::oracle::quadrature::integrate;

impl Monomial {
    fn ray_interval(&self, z: f64, arc_level: f64, r: f64) -> (f64, f64) {
        let (_, aj) = self.wedge_exponents();
        let w = self.wedge_params();
        let t_in = ((arc_level.ln() - aj * r.ln()) / self.beta()).exp();
        let across = w.d_j - w.d_i * r;
        let t_out = match self.regime() {
            Regime::Conic => ((z.ln() - w.lambda.ln()) / self.beta()).exp() / across,
            Regime::Concave => self.cone_params().rise(z, self.lower()) / (w.zeta * across),
        };
        (t_in, t_out)
    }
}

/// Area of the slice at height `z` restricted to ratios `r ∈ [r_lo, r_hi]`.
pub fn ray_area_between(m: &Monomial, z: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    m.require_planar()?;
    let level = m.arc_level(z);
    let tol = m.tolerances();
    Ok(integrate(
        |r| {
            let (t_in, t_out) = m.ray_interval(z, level, r);
            0.5 * (t_out * t_out - t_in * t_in)
        },
        r_lo,
        r_hi,
        0.1 * tol.quadrature,
        tol.quadrature_max_subdivisions,
    )?
    .value)
}

/// Area of the slice at height `z` over the whole wedge.
pub fn ray_area(m: &Monomial, z: f64) -> Result<f64> {
    ray_area_between(m, z, m.p(), m.q())
}

/// Volume of the part of the hull with `r_lo <= x_j / x_i <= r_hi` and
/// `z_lo <= z <= z_hi`, by nested quadrature.
pub fn ray_volume_between(m: &Monomial, r_lo: f64, r_hi: f64, z_lo: f64, z_hi: f64) -> Result<f64> {
    m.require_planar()?;
    let tol = m.tolerances();
    Ok(integrate(
        |z| ray_area_between(m, z, r_lo, r_hi).unwrap_or(f64::NAN),
        z_lo,
        z_hi,
        tol.quadrature,
        tol.quadrature_max_subdivisions,
    )?
    .value)
}

/// Volume of `conv(F(W_12))` by nested quadrature along rays.
pub fn ray_volume(m: &Monomial) -> Result<f64> {
    ray_volume_between(m, m.p(), m.q(), m.lower(), m.upper())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate, MonomialInstance};

    #[test]
    fn bilinear_slice_matches_hand_value() {
        let m = validate(MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0)).unwrap();
        let expected = 1.0 / 6.0 + 4.0 / 3.0 - 16.0 / 9.0 * 2f64.ln();
        assert!((ray_area(&m, 2.0).unwrap() - expected).abs() < 1e-12);
    }
}
