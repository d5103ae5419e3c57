//! Envelope functions and membership tests for every convex set in the
//! summary of results: the hull over the whole orthant, the upper envelope
//! over `X ∩ W_ij` (any `n`), and for `n = 2` the lower envelope, the
//! projection `Y` and the full hull.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::{Monomial, Regime};
use crate::numeric;

/// The convex sets a point can be tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// `conv(F(R^n_+))`.
    UpperOrthant,
    /// Upper envelope of `f` over `X ∩ W_ij`.
    UpperWedge,
    /// Lower envelope of `f` over `X ∩ W_12` (`n = 2`).
    LowerWedge2D,
    /// `conv(F(W_12))` (`n = 2`).
    Hull2D,
    /// `Y = conv(X ∩ W_12)` in x-space (`n = 2`).
    YProjection,
}

impl EnvelopeKind {
    pub fn requires_two_variables(self) -> bool {
        matches!(self, Self::LowerWedge2D | Self::Hull2D | Self::YProjection)
    }
}

/// Name of an individual inequality in a membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    #[serde(rename = "lower envelope")]
    LowerEnvelope,
    #[serde(rename = "upper envelope")]
    UpperEnvelope,
    #[serde(rename = "z >= l")]
    ZLower,
    #[serde(rename = "z <= u")]
    ZUpper,
    #[serde(rename = "wedge")]
    Wedge,
    #[serde(rename = "f >= l")]
    ProductLower,
    #[serde(rename = "projection cut")]
    ProjectionCut,
    #[serde(rename = "x >= 0")]
    Nonnegative,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Self::LowerEnvelope => "lower envelope",
            Self::UpperEnvelope => "upper envelope",
            Self::ZLower => "z >= l",
            Self::ZUpper => "z <= u",
            Self::Wedge => "wedge",
            Self::ProductLower => "f >= l",
            Self::ProjectionCut => "projection cut",
            Self::Nonnegative => "x >= 0",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a membership test.
///
/// Every inequality `lhs <= rhs` gets the relative slack
/// `(rhs - lhs) / max(|lhs|, |rhs|)`; `margin` is the smallest of these and
/// `binding` names the inequality that attains it. When several margins are
/// within the membership tolerance of each other, the one listed first in
/// the test wins, and envelope and bound inequalities are listed before the
/// x-space ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub inside: bool,
    pub margin: f64,
    pub binding: Constraint,
}

struct Tally {
    tie: f64,
    worst: Option<(f64, Constraint)>,
}

impl Tally {
    fn new(tie: f64) -> Self {
        Self { tie, worst: None }
    }

    /// Records `lhs <= rhs`.
    fn le(&mut self, constraint: Constraint, lhs: f64, rhs: f64) -> &mut Self {
        let scale = lhs.abs().max(rhs.abs());
        let margin = if scale == 0.0 {
            0.0
        } else {
            (rhs - lhs) / scale
        };
        match self.worst {
            Some((m, _)) if margin >= m - self.tie => {}
            _ => self.worst = Some((margin, constraint)),
        }
        self
    }

    fn verdict(&self, tolerance: f64) -> MembershipVerdict {
        let (margin, binding) = self.worst.expect("at least one constraint");
        MembershipVerdict {
            inside: margin >= -tolerance,
            margin,
            binding,
        }
    }
}

impl Monomial {
    /// `z0 + (γ t)^{1/β}` for `β >= 1`, `t` itself otherwise.
    pub(crate) fn cap_of_value(&self, t: f64) -> f64 {
        match self.regime {
            Regime::Conic => {
                let lifted = if t == 0.0 {
                    0.0
                } else {
                    ((self.cone.gamma.ln() + t.ln()) / self.beta).exp()
                };
                self.cone.z0 + lifted
            }
            Regime::Concave => t,
        }
    }

    /// Upper-envelope function `f_u`: the cone through the level sets at `l`
    /// and `u` when `β >= 1`, `f` itself when `β < 1`.
    pub fn upper_env_value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.cap_of_value(self.f_unchecked(x)))
    }

    /// `d_j x_i - d_i x_j`, the coordinate across the level-set chords.
    pub(crate) fn chord_coordinate(&self, xi: f64, xj: f64) -> f64 {
        let s = self.wedge.d_j * xi - self.wedge.d_i * xj;
        debug_assert!(
            s >= 0.0,
            "chord coordinate negative for a nonnegative point"
        );
        s
    }

    fn lower_from_parts(&self, s: f64, rest: f64) -> f64 {
        let (ai, aj) = self.wedge_exponents();
        let pair = ai + aj;
        match self.regime {
            Regime::Conic => self.wedge.lambda * numeric::pow(s, pair) * rest,
            Regime::Concave => {
                let inner = numeric::pow(s, pair) * rest;
                self.wedge.zeta * numeric::pow(inner, self.beta.recip()) + self.cone.z0
            }
        }
    }

    /// Lower minorant `f_ℓ`: `λ (d_j x_i - d_i x_j)^{a_i+a_j} ∏_{k≠i,j} x_k^{a_k}`
    /// when `β >= 1`, `ζ (d_j x_i - d_i x_j)^{(a_i+a_j)/β} (∏_{k≠i,j} x_k^{a_k})^{1/β} + z0`
    /// otherwise. A minorant of `f` on the wedge for every `n`; the lower
    /// envelope for `n = 2`.
    pub fn lower_env_value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let (xi, xj) = self.wedge_pair(x);
        Ok(self.lower_from_parts(self.chord_coordinate(xi, xj), self.off_wedge_product(x)))
    }

    pub(crate) fn lower_pair(&self, xi: f64, xj: f64) -> f64 {
        self.lower_from_parts(self.chord_coordinate(xi, xj), 1.0)
    }

    /// Right-hand side of the projection cut `d_2 x_1 - d_1 x_2 <= (u/λ)^{1/β}`.
    pub fn projection_cut_level(&self) -> f64 {
        ((self.upper().ln() - self.wedge.lambda.ln()) / self.beta).exp()
    }

    fn negative_verdict(x: &[f64]) -> Option<MembershipVerdict> {
        x.iter().any(|v| *v < 0.0).then_some(MembershipVerdict {
            inside: false,
            margin: -1.0,
            binding: Constraint::Nonnegative,
        })
    }

    fn tally(&self) -> Tally {
        Tally::new(self.tol.membership)
    }

    fn push_wedge(&self, t: &mut Tally, xi: f64, xj: f64) {
        t.le(Constraint::Wedge, self.p() * xi, xj)
            .le(Constraint::Wedge, xj, self.q() * xi);
    }

    fn push_projection(&self, t: &mut Tally, xi: f64, xj: f64, f: f64) {
        self.push_wedge(t, xi, xj);
        t.le(Constraint::ProductLower, self.lower(), f).le(
            Constraint::ProjectionCut,
            self.chord_coordinate(xi, xj),
            self.projection_cut_level(),
        );
    }

    /// Membership in `conv(F(R^n_+))`: `(z - z0)^β <= γ f(x)` (or `z <= f(x)`
    /// when `β < 1`) together with `l <= z <= u`.
    pub fn in_conv_orthant(&self, x: &[f64], z: f64) -> Result<MembershipVerdict> {
        self.require_len(x)?;
        if let Some(v) = Self::negative_verdict(x) {
            return Ok(v);
        }
        let cap = self.cap_of_value(self.f_unchecked(x));
        let mut t = self.tally();
        t.le(Constraint::ZLower, self.lower(), z)
            .le(Constraint::ZUpper, z, self.upper())
            .le(Constraint::UpperEnvelope, z, cap);
        Ok(t.verdict(self.tol.membership))
    }

    /// Membership in the upper envelope of `f` over `X ∩ W_ij`. For `n = 2`
    /// the projection cut of `Y` is included.
    pub fn in_upper_env_wedge(&self, x: &[f64], z: f64) -> Result<MembershipVerdict> {
        self.require_len(x)?;
        if let Some(v) = Self::negative_verdict(x) {
            return Ok(v);
        }
        let f = self.f_unchecked(x);
        let (xi, xj) = self.wedge_pair(x);
        let mut t = self.tally();
        t.le(Constraint::ZUpper, z, self.upper()).le(
            Constraint::UpperEnvelope,
            z,
            self.cap_of_value(f),
        );
        if self.n() == 2 {
            self.push_projection(&mut t, xi, xj, f);
        } else {
            self.push_wedge(&mut t, xi, xj);
            t.le(Constraint::ProductLower, self.lower(), f);
        }
        Ok(t.verdict(self.tol.membership))
    }

    /// Membership of `x` in `Y = conv(X ∩ W_12)`.
    pub fn in_projection(&self, x: &[f64]) -> Result<MembershipVerdict> {
        self.require_planar()?;
        self.require_len(x)?;
        if let Some(v) = Self::negative_verdict(x) {
            return Ok(v);
        }
        let (xi, xj) = self.wedge_pair(x);
        let mut t = self.tally();
        self.push_projection(&mut t, xi, xj, self.f_pair(xi, xj));
        Ok(t.verdict(self.tol.membership))
    }

    /// Membership in the lower envelope (epigraph hull) of `f` over `X ∩ W_12`.
    pub fn in_lower_env_2d(&self, x: &[f64], z: f64) -> Result<MembershipVerdict> {
        self.require_planar()?;
        self.require_len(x)?;
        if let Some(v) = Self::negative_verdict(x) {
            return Ok(v);
        }
        let (xi, xj) = self.wedge_pair(x);
        let mut t = self.tally();
        t.le(Constraint::ZLower, self.lower(), z).le(
            Constraint::LowerEnvelope,
            self.lower_pair(xi, xj),
            z,
        );
        self.push_projection(&mut t, xi, xj, self.f_pair(xi, xj));
        Ok(t.verdict(self.tol.membership))
    }

    /// Membership in `conv(F(W_12))`: `x ∈ Y` and
    /// `max{l, f_ℓ(x)} <= z <= min{u, f_u(x)}`.
    pub fn in_hull_2d(&self, x: &[f64], z: f64) -> Result<MembershipVerdict> {
        self.require_planar()?;
        self.require_len(x)?;
        if let Some(v) = Self::negative_verdict(x) {
            return Ok(v);
        }
        let (xi, xj) = self.wedge_pair(x);
        Ok(self.hull_verdict_pair(xi, xj, z))
    }

    /// Hull test on the wedge pair `(x_i, x_j)`; assumes `n = 2` and
    /// nonnegative coordinates.
    pub(crate) fn hull_verdict_pair(&self, xi: f64, xj: f64, z: f64) -> MembershipVerdict {
        let f = self.f_pair(xi, xj);
        let mut t = self.tally();
        t.le(Constraint::ZLower, self.lower(), z)
            .le(Constraint::ZUpper, z, self.upper())
            .le(Constraint::LowerEnvelope, self.lower_pair(xi, xj), z)
            .le(Constraint::UpperEnvelope, z, self.cap_of_value(f));
        self.push_projection(&mut t, xi, xj, f);
        t.verdict(self.tol.membership)
    }

    /// Dispatches to the membership test for `kind`. `z` is ignored for
    /// [`EnvelopeKind::YProjection`].
    pub fn membership(&self, kind: EnvelopeKind, x: &[f64], z: f64) -> Result<MembershipVerdict> {
        match kind {
            EnvelopeKind::UpperOrthant => self.in_conv_orthant(x, z),
            EnvelopeKind::UpperWedge => self.in_upper_env_wedge(x, z),
            EnvelopeKind::LowerWedge2D => self.in_lower_env_2d(x, z),
            EnvelopeKind::Hull2D => self.in_hull_2d(x, z),
            EnvelopeKind::YProjection => self.in_projection(x),
        }
    }

    fn require_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() || x.iter().any(|v| !v.is_finite()) {
            // Reuse the point validator for the error value.
            self.check_point(x)?;
        }
        Ok(())
    }
}
