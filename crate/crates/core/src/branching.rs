//! Branching-point selection on the ratio `x_j / x_i` or on the value `z`.
//!
//! Branching on the ratio at `r` creates the children with wedges `(p, r)`
//! and `(r, q)`; branching on the value at `ν` creates the children with
//! bounds `(l, ν)` and `(ν, u)`. Each child's hull volume comes from the
//! closed form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    Ratio,
    Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchResult {
    pub kind: BranchKind,
    pub point: f64,
    pub left_volume: f64,
    pub right_volume: f64,
    pub total: f64,
}

/// Outcome of the minimum-volume search over both families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinVolumeResult {
    /// Whichever of `ratio` and `value` has the smaller total.
    pub best: BranchResult,
    pub ratio: BranchResult,
    pub value: BranchResult,
}

/// Defaults for the branching searches.
pub const DEFAULT_EPSILON_FRACTION: f64 = 1e-3;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Uniform grid that seeds the minimum-volume refinement.
pub const SEED_GRID: usize = 64;

const MAX_BISECTIONS: usize = 400;
const MAX_GOLDEN_STEPS: usize = 400;

impl Monomial {
    /// Open interval a branch point of `kind` must lie in.
    pub fn branch_interval(&self, kind: BranchKind) -> (f64, f64) {
        match kind {
            BranchKind::Ratio => (self.p(), self.q()),
            BranchKind::Value => (self.lower(), self.upper()),
        }
    }

    fn child_volumes(&self, kind: BranchKind, point: f64) -> Result<(f64, f64)> {
        self.require_planar()?;
        let (lo, hi) = self.branch_interval(kind);
        if !(point > lo && point < hi) {
            return Err(Error::BranchPointOutOfRange {
                point,
                lower: lo,
                upper: hi,
            });
        }
        let inst = &self.instance;
        let (left, right) = match kind {
            BranchKind::Ratio => (inst.with_ratios(lo, point), inst.with_ratios(point, hi)),
            BranchKind::Value => (inst.with_bounds(lo, point), inst.with_bounds(point, hi)),
        };
        Ok((
            self.derive(left)?.closed_form_volume()?,
            self.derive(right)?.closed_form_volume()?,
        ))
    }

    /// Hull volumes of the children with wedges `(p, r)` and `(r, q)`.
    pub fn children_volumes_ratio(&self, r: f64) -> Result<(f64, f64)> {
        self.child_volumes(BranchKind::Ratio, r)
    }

    /// Hull volumes of the children with bounds `(l, ν)` and `(ν, u)`.
    pub fn children_volumes_value(&self, nu: f64) -> Result<(f64, f64)> {
        self.child_volumes(BranchKind::Value, nu)
    }

    /// Branch result at `point`.
    pub fn branch_at(&self, kind: BranchKind, point: f64) -> Result<BranchResult> {
        let (left_volume, right_volume) = self.child_volumes(kind, point)?;
        Ok(BranchResult {
            kind,
            point,
            left_volume,
            right_volume,
            total: left_volume + right_volume,
        })
    }

    /// Point whose two children have equal hull volume, to
    /// `|V_left - V_right| <= tol (V_left + V_right)`.
    pub fn balanced_point(&self, kind: BranchKind, tol: f64) -> Result<BranchResult> {
        let (lo, hi) = self.branch_interval(kind);
        self.balanced_point_within(kind, lo, hi, tol)
    }

    /// [`Monomial::balanced_point`] with the bisection started from the
    /// bracket `[lo, hi]`, which must lie in the branch interval and contain
    /// the balanced point. A bracket end equal to an end of the branch
    /// interval counts as a child of zero volume on that side.
    pub fn balanced_point_within(
        &self,
        kind: BranchKind,
        lo: f64,
        hi: f64,
        tol: f64,
    ) -> Result<BranchResult> {
        self.require_planar()?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance {tol} must be positive"
            )));
        }
        let (min, max) = self.branch_interval(kind);
        if !(min <= lo && lo < hi && hi <= max) {
            return Err(Error::InvalidArgument(format!(
                "bracket [{lo}, {hi}] must be an ordered sub-interval of [{min}, {max}]"
            )));
        }
        let imbalance = |t: f64| -> Result<f64> {
            if t <= min {
                return Ok(-1.0);
            }
            if t >= max {
                return Ok(1.0);
            }
            let (l, r) = self.child_volumes(kind, t)?;
            Ok(l - r)
        };
        let (g_lo, g_hi) = (imbalance(lo)?, imbalance(hi)?);
        if g_lo > 0.0 || g_hi < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "bracket [{lo}, {hi}] does not contain the balanced point"
            )));
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let g = imbalance(mid)?;
            if g == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if g < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let point = 0.5 * (a + b);
        let result = self.branch_at(kind, point)?;
        if (result.left_volume - result.right_volume).abs() > tol * result.total {
            return Err(Error::NoConvergence {
                what: "balanced branching bisection",
                iterations: MAX_BISECTIONS,
            });
        }
        Ok(result)
    }

    /// Minimum total child volume over branch points of `kind` in
    /// `[lo + ε, hi - ε]`, with `ε = epsilon_fraction (hi - lo)`.
    ///
    /// A 64-point uniform grid picks the best cell, which golden-section
    /// search then refines to width `tol (hi - lo)`. The objective is not
    /// known to be unimodal, so this is a local refinement of the grid
    /// minimum. Ties go to the smaller point.
    pub fn min_volume_by_kind(
        &self,
        kind: BranchKind,
        epsilon_fraction: f64,
        tol: f64,
    ) -> Result<BranchResult> {
        self.require_planar()?;
        if !(epsilon_fraction > 0.0 && epsilon_fraction < 0.5) {
            return Err(Error::EmptySearchInterval(epsilon_fraction));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance {tol} must be positive"
            )));
        }
        let (lo, hi) = self.branch_interval(kind);
        let eps = epsilon_fraction * (hi - lo);
        let (a, b) = (lo + eps, hi - eps);
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(Error::EmptySearchInterval(epsilon_fraction));
        }

        let grid: Vec<f64> = (0..SEED_GRID)
            .map(|k| {
                if k + 1 == SEED_GRID {
                    b
                } else {
                    a + (b - a) * k as f64 / (SEED_GRID - 1) as f64
                }
            })
            .collect();
        let seeds = grid
            .par_iter()
            .map(|&t| self.branch_at(kind, t))
            .collect::<Result<Vec<_>>>()?;
        let best_index =
            seeds.iter().enumerate().fold(
                0,
                |best, (k, r)| if r.total < seeds[best].total { k } else { best },
            );
        let mut best = seeds[best_index];

        let mut left = grid[best_index.saturating_sub(1)];
        let mut right = grid[(best_index + 1).min(SEED_GRID - 1)];
        let width = tol * (hi - lo);
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = right - inv_phi * (right - left);
        let mut d = left + inv_phi * (right - left);
        let mut fc = self.branch_at(kind, c)?;
        let mut fd = self.branch_at(kind, d)?;
        for _ in 0..MAX_GOLDEN_STEPS {
            if right - left <= width {
                break;
            }
            if fc.total <= fd.total {
                right = d;
                d = c;
                fd = fc;
                c = right - inv_phi * (right - left);
                fc = self.branch_at(kind, c)?;
            } else {
                left = c;
                c = d;
                fc = fd;
                d = left + inv_phi * (right - left);
                fd = self.branch_at(kind, d)?;
            }
        }
        for candidate in [fc, fd] {
            let better = candidate.total < best.total
                || (candidate.total == best.total && candidate.point < best.point);
            if better {
                best = candidate;
            }
        }
        Ok(best)
    }

    /// Minimum-volume branch point over both families; the overall winner is
    /// reported together with the optimum of each family.
    pub fn min_volume_branch(&self, epsilon_fraction: f64, tol: f64) -> Result<MinVolumeResult> {
        let ratio = self.min_volume_by_kind(BranchKind::Ratio, epsilon_fraction, tol)?;
        let value = self.min_volume_by_kind(BranchKind::Value, epsilon_fraction, tol)?;
        let best = if value.total < ratio.total {
            value
        } else {
            ratio
        };
        Ok(MinVolumeResult { best, ratio, value })
    }
}
