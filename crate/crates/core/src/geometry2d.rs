//! Cross-sections of the two-variable hull at a fixed height, the area
//! function `A(z)`, the closed-form hull volume and level-set curves.
//!
//! All formulas work in the wedge frame `(x_i, x_j)`, written `(x_1, x_2)`
//! below; reported points are given in instance coordinate order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Monomial, Regime};
use crate::numeric;
use crate::oracle::montecarlo::{mc_volume, McEstimate};
use crate::oracle::quadrature;
use crate::tolerance::relative_gap;

/// Axis-aligned box `[0, ω1] x [0, ω2]` in the wedge frame that contains
/// `X ∩ W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    /// Upper bound on `x_i`.
    pub omega1: f64,
    /// Upper bound on `x_j`.
    pub omega2: f64,
}

/// The hull sliced at height `z`.
///
/// The slice is bounded by the chord `L_p L_q` of the lower envelope's level
/// set, the two wedge faces, the chord `U_p U_q` of the upper envelope's level
/// set and the arc of that level set between `U_q` and `U_p`. Its area splits
/// into the trapezoid `a1` between the chords and the arc segment `a2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub z: f64,
    pub lp: [f64; 2],
    pub lq: [f64; 2],
    pub up: [f64; 2],
    pub uq: [f64; 2],
    pub delta_l: f64,
    pub delta_u: f64,
    /// Distance between the two parallel chords.
    pub delta: f64,
    pub a1: f64,
    pub a2: f64,
    pub area: f64,
}

/// One term `coeff * (z - anchor + offset)^exponent` of the area function.
///
/// The base is the height above `anchor - offset`; keeping the two apart
/// preserves `z - z0` when the cone vertex sits just below `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub anchor: f64,
    pub offset: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn eval(&self, z: f64) -> f64 {
        self.coeff * numeric::pow(self.base(z), self.exponent)
    }

    fn base(&self, z: f64) -> f64 {
        (z - self.anchor) + self.offset
    }

    /// `∫_lo^hi` of the term, for `lo <= hi` with a positive base at `lo`.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let e = self.exponent + 1.0;
        let (a, b) = (self.base(lo), self.base(hi));
        if a == b {
            return 0.0;
        }
        // a^e * (exp(e ln(b/a)) - 1) avoids cancelling when hi is close to lo.
        let growth = (e * numeric::ln_ratio(a, b)).exp_m1();
        self.coeff / e * numeric::pow(a, e) * growth
    }
}

/// Which cross-checks [`Monomial::volume`] runs next to the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VolumeOptions {
    pub quadrature: bool,
    /// `(seed, samples)` for a Monte-Carlo estimate.
    pub monte_carlo: Option<(u64, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub closed_form: f64,
    pub quadrature: Option<QuadratureEstimate>,
    pub monte_carlo: Option<McEstimate>,
    /// Closed form and quadrature agree to `1e-8` relative.
    pub quadrature_agrees: Option<bool>,
    /// Closed form lies within three standard errors of the estimate.
    pub monte_carlo_agrees: Option<bool>,
}

/// Relative tolerance for the closed form versus quadrature agreement flag.
pub const QUADRATURE_AGREEMENT: f64 = 1e-8;
/// Number of standard errors for the Monte-Carlo agreement flag.
pub const MONTE_CARLO_SIGMAS: f64 = 3.0;

/// Points of the level set `f = xi` between the two wedge faces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub xi: f64,
    /// Points in instance order, from the face `x_j = p x_i` to `x_j = q x_i`.
    pub points: Vec<[f64; 2]>,
    /// Slope `Δx_j / Δx_i` of the chord joining the two end points.
    pub chord_slope: f64,
}

impl Monomial {
    fn planar_frame(&self, xi: f64, xj: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        out[self.instance.wedge.i] = xi;
        out[self.instance.wedge.j] = xj;
        out
    }

    fn require_height(&self, z: f64) -> Result<()> {
        if !(z >= self.lower() && z <= self.upper()) {
            return Err(Error::HeightOutOfRange {
                z,
                lower: self.lower(),
                upper: self.upper(),
            });
        }
        Ok(())
    }

    /// Box containing `X ∩ W_12`: `ω1 = (u p^{-a_j})^{1/β}`, `ω2 = (u q^{a_i})^{1/β}`.
    pub fn bounding_box(&self) -> Result<BoundingBox> {
        self.require_planar()?;
        let (ai, aj) = self.wedge_exponents();
        let (u, p, q) = (self.upper(), self.p(), self.q());
        Ok(BoundingBox {
            omega1: ((u.ln() - aj * p.ln()) / self.beta).exp(),
            omega2: ((u.ln() + ai * q.ln()) / self.beta).exp(),
        })
    }

    /// `x_1` of the point on the face `x_2 = p x_1` where `f = level`.
    pub(crate) fn monomial_corner(&self, level: f64) -> f64 {
        let (_, aj) = self.wedge_exponents();
        ((level.ln() - aj * self.p().ln()) / self.beta).exp()
    }

    /// `x_1` of the point on the face `x_2 = p x_1` where the cone
    /// `z0 + (γ f)^{1/β}` reaches `z`.
    pub(crate) fn cone_corner(&self, z: f64) -> f64 {
        let (_, aj) = self.wedge_exponents();
        let scale = ((self.cone.gamma.ln() + aj * self.p().ln()) / self.beta).exp();
        self.cone.rise(z, self.lower()) / scale
    }

    /// Level of `f` whose curve bounds the slice at `z` from below-left:
    /// `(z - z0)^β / γ` for `β >= 1`, `z` itself otherwise.
    pub(crate) fn arc_level(&self, z: f64) -> f64 {
        match self.regime {
            Regime::Conic => {
                (self.cone.rise(z, self.lower()).ln() * self.beta - self.cone.gamma.ln()).exp()
            }
            Regime::Concave => z,
        }
    }

    /// `x_1` coordinates of `L_p` and `U_p` at height `z`.
    pub(crate) fn p_corners(&self, z: f64) -> (f64, f64) {
        match self.regime {
            Regime::Conic => (self.monomial_corner(z), self.cone_corner(z)),
            Regime::Concave => {
                // Solve ζ (d_2 - d_1 p) x_1 + z0 = z on x_2 = p x_1.
                let w = &self.wedge;
                let lp = self.cone.rise(z, self.lower()) / (w.zeta * (w.d_j - w.d_i * self.p()));
                (lp, self.monomial_corner(z))
            }
        }
    }

    fn use_log_branch(&self) -> bool {
        let (ai, aj) = self.wedge_exponents();
        (ai - aj).abs() < self.tol.log_branch * (ai + aj)
    }

    /// `∫_{Uq}^{Up} x^{-a_1/a_2} dx`.
    fn arc_primitive(&self, uq: f64, up: f64) -> f64 {
        let log_ratio = numeric::ln_ratio(uq, up);
        if self.use_log_branch() {
            log_ratio
        } else {
            let (ai, aj) = self.wedge_exponents();
            let k = (aj - ai) / aj;
            numeric::pow(uq, k) * numeric::expm1_over(k, log_ratio)
        }
    }

    /// Cross-section of `conv(F(W_12))` at height `z`.
    pub fn cross_section(&self, z: f64) -> Result<CrossSection> {
        self.require_planar()?;
        self.require_height(z)?;
        let w = &self.wedge;
        let p = self.p();
        let (lp, up) = self.p_corners(z);
        let (lq, uq) = (w.eta_i * lp, w.eta_i * up);

        let a1 = 0.5 * p * (w.eta_j - w.eta_i) * (lp * lp - up * up);
        let (_, aj) = self.wedge_exponents();
        let arc_scale = (self.arc_level(z).ln() / aj).exp();
        let a2 = 0.5 * w.sigma * (up * up - uq * uq) + (p - w.sigma) * up * (up - uq)
            - arc_scale * self.arc_primitive(uq, up);

        let chord_norm = w.d_i.hypot(w.d_j);
        let delta = (lp - up) * (w.d_j - w.d_i * p) / chord_norm;
        Ok(CrossSection {
            z,
            lp: self.planar_frame(lp, p * lp),
            lq: self.planar_frame(lq, self.q() * lq),
            up: self.planar_frame(up, p * up),
            uq: self.planar_frame(uq, self.q() * uq),
            delta_l: w.tau * lp,
            delta_u: w.tau * up,
            delta,
            a1,
            a2,
            area: a1 + a2,
        })
    }

    /// Area `A(z)` of the cross-section at height `z`.
    pub fn area(&self, z: f64) -> Result<f64> {
        Ok(self.cross_section(z)?.area)
    }

    /// `A(z)` as a sum of three power terms.
    ///
    /// Both corner families are multiples of a power of `z` or `z - z0`, so
    /// the trapezoid contributes two squared terms and the arc segment one
    /// term from the chord side and one from the level curve.
    pub fn area_terms(&self) -> Result<[PowerTerm; 3]> {
        self.require_planar()?;
        let (ai, aj) = self.wedge_exponents();
        let w = &self.wedge;
        let (p, beta) = (self.p(), self.beta);
        let (anchor, gap) = (self.lower(), self.cone.lower_gap);

        let h = 0.5 * p * (w.eta_j - w.eta_i);
        let chord = 0.5 * w.sigma * (1.0 - w.eta_i * w.eta_i) + (p - w.sigma) * (1.0 - w.eta_i);
        let (k, arc) = if self.use_log_branch() {
            (0.0, -w.eta_i.ln())
        } else {
            let k = (aj - ai) / aj;
            (k, -numeric::expm1_over(k, w.eta_i.ln()))
        };
        // Corner scale factors: monomial corner = κm z^{1/β}, cone corner = κc (z - z0).
        let km = (-aj * p.ln() / beta).exp();
        let kc = (-(self.cone.gamma.ln() + aj * p.ln()) / beta).exp();

        Ok(match self.regime {
            Regime::Conic => [
                PowerTerm {
                    coeff: h * km * km,
                    anchor: 0.0,
                    offset: 0.0,
                    exponent: 2.0 / beta,
                },
                PowerTerm {
                    coeff: (chord - h) * kc * kc,
                    anchor,
                    offset: gap,
                    exponent: 2.0,
                },
                PowerTerm {
                    coeff: -(-self.cone.gamma.ln() / aj).exp() * numeric::pow(kc, k) * arc,
                    anchor,
                    offset: gap,
                    exponent: beta / aj + k,
                },
            ],
            Regime::Concave => [
                PowerTerm {
                    coeff: h * kc * kc,
                    anchor,
                    offset: gap,
                    exponent: 2.0,
                },
                PowerTerm {
                    coeff: (chord - h) * km * km,
                    anchor: 0.0,
                    offset: 0.0,
                    exponent: 2.0 / beta,
                },
                PowerTerm {
                    coeff: -numeric::pow(km, k) * arc,
                    anchor: 0.0,
                    offset: 0.0,
                    exponent: 1.0 / aj + k / beta,
                },
            ],
        })
    }

    /// `∫_lo^hi A(z) dz` in closed form, for `l <= lo <= hi <= u`.
    pub fn area_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        self.require_height(lo)?;
        self.require_height(hi)?;
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "integration range [{lo}, {hi}] is reversed"
            )));
        }
        Ok(self.area_terms()?.iter().map(|t| t.integrate(lo, hi)).sum())
    }

    /// Closed-form volume of `conv(F(W_12))`.
    pub fn closed_form_volume(&self) -> Result<f64> {
        self.area_integral(self.lower(), self.upper())
    }

    /// Adaptive Gauss-Kronrod quadrature of `A(z)` over `[l, u]`.
    pub fn quadrature_volume(&self) -> Result<QuadratureEstimate> {
        self.require_planar()?;
        let integral = quadrature::integrate(
            |z| {
                self.area(z.clamp(self.lower(), self.upper()))
                    .unwrap_or(f64::NAN)
            },
            self.lower(),
            self.upper(),
            self.tol.quadrature,
            self.tol.quadrature_max_subdivisions,
        )?;
        Ok(QuadratureEstimate {
            value: integral.value,
            error_estimate: integral.error,
            subdivisions: integral.subdivisions,
        })
    }

    /// Closed-form volume plus the cross-checks selected in `options`.
    pub fn volume(&self, options: VolumeOptions) -> Result<VolumeReport> {
        let closed_form = self.closed_form_volume()?;
        let quadrature = options
            .quadrature
            .then(|| self.quadrature_volume())
            .transpose()?;
        let monte_carlo = options
            .monte_carlo
            .map(|(seed, samples)| mc_volume(self, seed, samples))
            .transpose()?;
        Ok(VolumeReport {
            closed_form,
            quadrature_agrees: quadrature
                .map(|q| relative_gap(closed_form, q.value) <= QUADRATURE_AGREEMENT),
            monte_carlo_agrees: monte_carlo
                .map(|m| (closed_form - m.value).abs() <= MONTE_CARLO_SIGMAS * m.stderr),
            quadrature,
            monte_carlo,
        })
    }

    /// `points` samples of the level set `f = xi` inside the wedge, uniform in
    /// the ratio `x_j / x_i`, end points included.
    pub fn level_curve(&self, xi: f64, points: usize) -> Result<LevelCurve> {
        self.require_planar()?;
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "level {xi} must be positive and finite"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidArgument(
                "a level curve needs at least 2 points".into(),
            ));
        }
        let (_, aj) = self.wedge_exponents();
        let (p, q) = (self.p(), self.q());
        let on_ray = |r: f64| {
            let x1 = ((xi.ln() - aj * r.ln()) / self.beta).exp();
            (x1, r * x1)
        };
        let mut pts = Vec::with_capacity(points);
        for k in 0..points {
            let r = if k + 1 == points {
                q
            } else {
                p + (q - p) * k as f64 / (points - 1) as f64
            };
            let (x1, x2) = on_ray(r);
            pts.push(self.planar_frame(x1, x2));
        }
        let (p1, p2) = on_ray(p);
        let (q1, q2) = on_ray(q);
        Ok(LevelCurve {
            xi,
            points: pts,
            chord_slope: (q2 - p2) / (q1 - p1),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate, MonomialInstance};

    fn bilinear() -> Monomial {
        validate(MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0)).unwrap()
    }

    #[test]
    fn bilinear_box_by_hand() {
        let b = bilinear().bounding_box().unwrap();
        assert!((b.omega1 - 2.0).abs() < 1e-14 && (b.omega2 - 4.0).abs() < 1e-14);
    }

    #[test]
    fn narrow_wedge_box_tends_to_square_root() {
        let m = validate(MonomialInstance::planar(
            [1.0, 1.0],
            1.0,
            1.0 + 1e-9,
            1.0,
            4.0,
        ))
        .unwrap();
        assert!((m.bounding_box().unwrap().omega1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bilinear_cross_section_by_hand() {
        let c = bilinear().cross_section(2.0).unwrap();
        assert!((c.lp[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!((c.up[0] - 4.0 / 3.0).abs() < 1e-14);
        assert!((c.uq[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((c.a1 - 1.0 / 6.0).abs() < 1e-14);
        let a2 = 4.0 / 3.0 - 16.0 / 9.0 * 2f64.ln();
        assert!((c.a2 - a2).abs() < 1e-14, "{} vs {a2}", c.a2);
        assert!((c.area - (1.0 / 6.0 + a2)).abs() < 1e-14);
    }

    #[test]
    fn slice_at_lower_bound_has_no_trapezoid() {
        let m = validate(MonomialInstance::planar([1.7, 1.5], 0.35, 3.0, 0.4, 10.0)).unwrap();
        let c = m.cross_section(m.lower()).unwrap();
        assert!(relative_gap(c.lp[0], c.up[0]) < 1e-10);
        assert!(c.a1.abs() < 1e-10 * c.area);
        assert!(c.a2 > 0.0);
    }

    #[test]
    fn heights_outside_the_bounds_are_rejected() {
        assert!(matches!(
            bilinear().area(0.5),
            Err(Error::HeightOutOfRange { .. })
        ));
    }

    #[test]
    fn power_term_integral_matches_antiderivative() {
        let t = PowerTerm {
            coeff: 2.0,
            anchor: 0.0,
            offset: 1.0,
            exponent: 1.5,
        };
        let exact = 2.0 / 2.5 * (4f64.powf(2.5) - 2f64.powf(2.5));
        assert!((t.integrate(1.0, 3.0) - exact).abs() < 1e-13 * exact);
        assert_eq!(t.integrate(2.0, 2.0), 0.0);
    }

    #[test]
    fn area_terms_reproduce_cross_section_area() {
        for inst in [
            MonomialInstance::planar([1.7, 1.5], 0.35, 3.0, 0.4, 10.0),
            MonomialInstance::planar([0.1, 0.2], 0.4, 3.3, 0.65, 1.21),
            MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0),
        ] {
            let m = validate(inst).unwrap();
            let terms = m.area_terms().unwrap();
            for k in 0..=10 {
                let z = m.lower() + (m.upper() - m.lower()) * k as f64 / 10.0;
                let from_terms: f64 = terms.iter().map(|t| t.eval(z)).sum();
                let direct = m.area(z).unwrap();
                assert!(
                    relative_gap(from_terms, direct) < 1e-11,
                    "z={z}: {from_terms} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn bilinear_volume_agrees_with_quadrature() {
        let report = bilinear()
            .volume(VolumeOptions {
                quadrature: true,
                monte_carlo: None,
            })
            .unwrap();
        assert_eq!(report.quadrature_agrees, Some(true), "{report:?}");
    }

    #[test]
    fn level_curve_chord_has_slope_sigma() {
        let m = bilinear();
        let c = m.level_curve(4.0, 5).unwrap();
        assert_eq!(c.points.len(), 5);
        assert_eq!(c.points[0], [2.0, 2.0]);
        assert!((c.points[4][0] - 1.0).abs() < 1e-15 && (c.points[4][1] - 4.0).abs() < 1e-14);
        assert!((c.chord_slope - m.wedge_params().sigma).abs() < 1e-13);
    }
}
