//! McCormick relaxation of `z = x_1 x_2` over a box, used as the baseline the
//! wedge hull is compared against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McCormickBox {
    pub x1: Interval,
    pub x2: Interval,
}

impl McCormickBox {
    pub fn new(x1: Interval, x2: Interval) -> Result<Self> {
        for (name, iv) in [("x1", x1), ("x2", x2)] {
            if !(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi.is_finite()) {
                return Err(Error::InvalidBox(format!(
                    "{name} bounds [{}, {}] must be finite, non-negative and ordered",
                    iv.lo, iv.hi
                )));
            }
        }
        Ok(Self { x1, x2 })
    }
}

/// The four McCormick inequalities at `x`: the lower bound is the larger of
/// the two under-estimators, the upper bound the smaller of the two
/// over-estimators.
pub fn mccormick_bounds(b: &McCormickBox, x: [f64; 2]) -> Result<(f64, f64)> {
    let [x1, x2] = x;
    if !b.x1.contains(x1) || !b.x2.contains(x2) {
        return Err(Error::OutsideBox { x1, x2 });
    }
    let (l1, u1, l2, u2) = (b.x1.lo, b.x1.hi, b.x2.lo, b.x2.hi);
    let lower = (l2 * x1 + l1 * x2 - l1 * l2).max(u2 * x1 + u1 * x2 - u1 * u2);
    let upper = (l2 * x1 + u1 * x2 - l2 * u1).min(u2 * x1 + l1 * x2 - u2 * l1);
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    /// Grid points per axis.
    pub grid: usize,
    /// Grid points that lie in the projection `Y`.
    pub points_compared: usize,
    pub wedge_mean_gap: f64,
    pub mccormick_mean_gap: f64,
    /// Largest excess of the wedge gap over the McCormick gap at one point.
    pub max_excess: f64,
    /// The wedge gap is at most the McCormick gap (up to rounding) everywhere.
    pub dominated_everywhere: bool,
}

/// Compares the vertical gap of the wedge hull, `min(u, f_u) - max(l, f_ℓ)`,
/// with the McCormick gap over the bounding box, both clipped to `[l, u]`,
/// at the cell centres of a `grid x grid` mesh of the bounding box.
/// Only points of `Y` are compared.
pub fn tightness_comparison(m: &Monomial, grid: usize) -> Result<TightnessReport> {
    m.require_planar()?;
    if m.exponents() != [1.0, 1.0] {
        return Err(Error::RequiresBilinear);
    }
    if grid == 0 {
        return Err(Error::InvalidArgument(
            "grid must have at least one cell".into(),
        ));
    }
    let bbox = m.bounding_box()?;
    let mc_box = McCormickBox::new(
        Interval {
            lo: 0.0,
            hi: bbox.omega1,
        },
        Interval {
            lo: 0.0,
            hi: bbox.omega2,
        },
    )?;
    let (l, u) = (m.lower(), m.upper());
    let slack = 1e-12 * u;
    let (mut count, mut wedge_sum, mut mc_sum, mut max_excess) =
        (0usize, 0.0, 0.0, f64::NEG_INFINITY);
    for a in 0..grid {
        let x1 = bbox.omega1 * (a as f64 + 0.5) / grid as f64;
        for b in 0..grid {
            let x2 = bbox.omega2 * (b as f64 + 0.5) / grid as f64;
            let x = m.embed_pair(x1, x2, 1.0);
            if !m.in_projection(&x)?.inside {
                continue;
            }
            let wedge_gap =
                (m.upper_env_value(&x)?.min(u) - m.lower_env_value(&x)?.max(l)).max(0.0);
            let (lo, hi) = mccormick_bounds(&mc_box, [x1, x2])?;
            let mc_gap = (hi.min(u) - lo.max(l)).max(0.0);
            count += 1;
            wedge_sum += wedge_gap;
            mc_sum += mc_gap;
            max_excess = max_excess.max(wedge_gap - mc_gap);
        }
    }
    let mean = |s: f64| if count == 0 { 0.0 } else { s / count as f64 };
    Ok(TightnessReport {
        grid,
        points_compared: count,
        wedge_mean_gap: mean(wedge_sum),
        mccormick_mean_gap: mean(mc_sum),
        max_excess,
        dominated_everywhere: max_excess <= slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{validate, MonomialInstance};

    fn unit_box() -> McCormickBox {
        McCormickBox::new(Interval { lo: 0.0, hi: 1.0 }, Interval { lo: 0.0, hi: 1.0 }).unwrap()
    }

    #[test]
    fn centre_of_unit_box() {
        assert_eq!(
            mccormick_bounds(&unit_box(), [0.5, 0.5]).unwrap(),
            (0.0, 0.5)
        );
    }

    #[test]
    fn exact_at_corners() {
        let b = McCormickBox::new(Interval { lo: 1.0, hi: 3.0 }, Interval { lo: 0.5, hi: 2.0 })
            .unwrap();
        for x in [[1.0, 0.5], [1.0, 2.0], [3.0, 0.5], [3.0, 2.0]] {
            let (lo, hi) = mccormick_bounds(&b, x).unwrap();
            assert_eq!(lo, x[0] * x[1]);
            assert_eq!(hi, x[0] * x[1]);
        }
    }

    #[test]
    fn outside_points_and_bad_boxes_are_rejected() {
        assert!(matches!(
            mccormick_bounds(&unit_box(), [1.5, 0.5]),
            Err(Error::OutsideBox { .. })
        ));
        assert!(
            McCormickBox::new(Interval { lo: 2.0, hi: 1.0 }, Interval { lo: 0.0, hi: 1.0 })
                .is_err()
        );
    }

    #[test]
    fn wedge_gap_is_smaller_for_a_tight_instance() {
        let m = validate(MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0)).unwrap();
        let r = tightness_comparison(&m, 50).unwrap();
        assert!(r.points_compared > 0);
        assert!(r.wedge_mean_gap < r.mccormick_mean_gap, "{r:?}");
        assert!(r.dominated_everywhere, "{r:?}");
    }

    #[test]
    fn non_bilinear_instances_are_rejected() {
        let m = validate(MonomialInstance::planar([1.0, 2.0], 1.0, 4.0, 1.0, 4.0)).unwrap();
        assert!(matches!(
            tightness_comparison(&m, 10),
            Err(Error::RequiresBilinear)
        ));
    }
}
