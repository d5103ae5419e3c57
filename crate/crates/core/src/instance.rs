use serde::{Deserialize, Serialize};

use crate::error::{Error, InstanceError, Result};
use crate::numeric;
use crate::params::{ConeParams, WedgeParams};
use crate::tolerance::Tolerances;

/// Version tag carried by every instance file.
pub const SCHEMA_TAG: &str = "monomial-envelope/1";

/// The two homogeneous inequalities `p x_i <= x_j <= q x_i`. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wedge {
    pub i: usize,
    pub j: usize,
    pub p: f64,
    pub q: f64,
}

/// Bounds `l <= f(x) <= u` on the value of the monomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueBounds {
    pub l: f64,
    pub u: f64,
}

/// A monomial `f(x) = ∏ x_k^{a_k}` restricted to a wedge and to a value range.
///
/// This is the raw problem description; [`validate`] turns it into a
/// [`Monomial`] with every derived constant precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialInstance {
    pub exponents: Vec<f64>,
    pub wedge: Wedge,
    pub bounds: ValueBounds,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    schema: String,
    exponents: Vec<f64>,
    wedge: Wedge,
    bounds: ValueBounds,
}

impl MonomialInstance {
    pub fn new(exponents: Vec<f64>, wedge: Wedge, bounds: ValueBounds) -> Self {
        Self {
            exponents,
            wedge,
            bounds,
        }
    }

    /// Shorthand for the common `n = 2`, `(i, j) = (0, 1)` layout.
    pub fn planar(a: [f64; 2], p: f64, q: f64, l: f64, u: f64) -> Self {
        Self::new(a.to_vec(), Wedge { i: 0, j: 1, p, q }, ValueBounds { l, u })
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// Sum of the exponents.
    pub fn beta(&self) -> f64 {
        self.exponents.iter().sum()
    }

    /// Checks every invariant and reports the first one that fails.
    pub fn check(&self) -> std::result::Result<(), InstanceError> {
        let n = self.n();
        if n < 2 {
            return Err(InstanceError::TooFewVariables(n));
        }
        if let Some((index, &value)) = self
            .exponents
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0))
        {
            return Err(InstanceError::NonPositiveExponent { index, value });
        }
        let Wedge { i, j, p, q } = self.wedge;
        for index in [i, j] {
            if index >= n {
                return Err(InstanceError::IndexOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(InstanceError::SameIndex(i));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(InstanceError::NonPositiveRatio(p));
        }
        if !(q.is_finite() && p < q) {
            return Err(InstanceError::RatioOrder { p, q });
        }
        let ValueBounds { l, u } = self.bounds;
        if !(l.is_finite() && l > 0.0) {
            return Err(InstanceError::NonPositiveLower(l));
        }
        if !(u.is_finite() && l < u) {
            return Err(InstanceError::BoundOrder { l, u });
        }
        Ok(())
    }

    /// Same exponents and bounds, different ratio bounds.
    pub fn with_ratios(&self, p: f64, q: f64) -> Self {
        let mut child = self.clone();
        child.wedge.p = p;
        child.wedge.q = q;
        child
    }

    /// Same exponents and wedge, different value bounds.
    pub fn with_bounds(&self, l: f64, u: f64) -> Self {
        let mut child = self.clone();
        child.bounds = ValueBounds { l, u };
        child
    }

    /// Parses the versioned JSON instance format.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.schema != SCHEMA_TAG {
            return Err(Error::Schema(format!(
                "unsupported schema {:?}, expected {SCHEMA_TAG:?}",
                doc.schema
            )));
        }
        Ok(Self::new(doc.exponents, doc.wedge, doc.bounds))
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDocument {
            schema: SCHEMA_TAG.to_owned(),
            exponents: self.exponents.clone(),
            wedge: self.wedge,
            bounds: self.bounds,
        };
        serde_json::to_string(&doc).expect("instance serialises")
    }
}

/// Which side of `β = 1` the instance sits on. The structure of both
/// envelopes flips there; `β = 1` itself is handled by `Conic`, where both
/// descriptions coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `β >= 1`: the upper envelope is the cone `(z - z0)^β <= γ f(x)`.
    Conic,
    /// `β < 1`: `f` is concave and is its own upper envelope.
    Concave,
}

/// A validated instance together with its cone and wedge constants.
///
/// All envelope, geometry, branching and oracle operations hang off this
/// type. It is immutable and `Sync`.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub(crate) instance: MonomialInstance,
    pub(crate) beta: f64,
    pub(crate) regime: Regime,
    pub(crate) cone: ConeParams,
    pub(crate) wedge: WedgeParams,
    pub(crate) tol: Tolerances,
}

/// Validates `instance` and derives every closed-form constant.
pub fn validate(instance: MonomialInstance) -> Result<Monomial> {
    Monomial::new(instance)
}

impl Monomial {
    pub fn new(instance: MonomialInstance) -> Result<Self> {
        Self::with_tolerances(instance, Tolerances::default())
    }

    pub fn with_tolerances(instance: MonomialInstance, tol: Tolerances) -> Result<Self> {
        instance.check()?;
        let beta = instance.beta();
        let regime = if beta >= 1.0 - tol.unit_beta {
            Regime::Conic
        } else {
            Regime::Concave
        };
        let cone = ConeParams::derive(instance.bounds.l, instance.bounds.u, beta, tol.unit_beta);
        let wedge = WedgeParams::derive(&instance, &cone, beta);
        Ok(Self {
            instance,
            beta,
            regime,
            cone,
            wedge,
            tol,
        })
    }

    pub fn instance(&self) -> &MonomialInstance {
        &self.instance
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn cone_params(&self) -> &ConeParams {
        &self.cone
    }

    pub fn wedge_params(&self) -> &WedgeParams {
        &self.wedge
    }

    pub fn exponents(&self) -> &[f64] {
        &self.instance.exponents
    }

    pub fn lower(&self) -> f64 {
        self.instance.bounds.l
    }

    pub fn upper(&self) -> f64 {
        self.instance.bounds.u
    }

    pub fn p(&self) -> f64 {
        self.instance.wedge.p
    }

    pub fn q(&self) -> f64 {
        self.instance.wedge.q
    }

    /// Exponents `(a_i, a_j)` of the two wedge variables.
    pub fn wedge_exponents(&self) -> (f64, f64) {
        let Wedge { i, j, .. } = self.instance.wedge;
        (self.instance.exponents[i], self.instance.exponents[j])
    }

    /// Re-validates a derived instance under the same tolerances.
    pub fn derive(&self, instance: MonomialInstance) -> Result<Self> {
        Self::with_tolerances(instance, self.tol)
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        if let Some((index, &value)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::NegativeCoordinate { index, value });
        }
        Ok(())
    }

    pub(crate) fn require_planar(&self) -> Result<()> {
        if self.n() == 2 {
            Ok(())
        } else {
            Err(Error::RequiresTwoVariables(self.n()))
        }
    }

    /// `(x_i, x_j)`: the coordinates the wedge constrains.
    pub fn wedge_pair(&self, x: &[f64]) -> (f64, f64) {
        (x[self.instance.wedge.i], x[self.instance.wedge.j])
    }

    /// Places `(x_i, x_j)` into a full point in instance order. Remaining
    /// coordinates (when `n > 2`) are set to `fill`.
    pub fn embed_pair(&self, xi: f64, xj: f64, fill: f64) -> Vec<f64> {
        let mut x = vec![fill; self.n()];
        x[self.instance.wedge.i] = xi;
        x[self.instance.wedge.j] = xj;
        x
    }

    /// `f(x) = ∏ x_k^{a_k}`.
    pub fn eval_f(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.f_unchecked(x))
    }

    pub(crate) fn f_unchecked(&self, x: &[f64]) -> f64 {
        numeric::monomial(x.iter().copied().zip(self.instance.exponents.iter()))
    }

    /// `f` for `n = 2` given the wedge pair.
    pub(crate) fn f_pair(&self, xi: f64, xj: f64) -> f64 {
        let (ai, aj) = self.wedge_exponents();
        numeric::monomial([(xi, &ai), (xj, &aj)])
    }

    /// `∏_{k ∉ {i, j}} x_k^{a_k}`, the part of `f` the wedge does not touch.
    pub(crate) fn off_wedge_product(&self, x: &[f64]) -> f64 {
        let Wedge { i, j, .. } = self.instance.wedge;
        numeric::monomial(
            x.iter()
                .copied()
                .zip(self.instance.exponents.iter())
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, t)| t),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic_example() -> MonomialInstance {
        MonomialInstance::planar([1.7, 1.5], 0.35, 3.0, 0.4, 10.0)
    }

    #[test]
    fn example_instances_validate() {
        assert!(validate(conic_example()).is_ok());
        let concave_example = MonomialInstance::planar([0.1, 0.2], 0.4, 3.3, 0.65, 1.21);
        assert!(validate(concave_example).is_ok());
    }

    #[test]
    fn equal_ratio_bounds_are_rejected() {
        let inst = MonomialInstance::planar([1.0, 1.0], 2.0, 2.0, 1.0, 4.0);
        let err = inst.check().unwrap_err();
        assert_eq!(err, InstanceError::RatioOrder { p: 2.0, q: 2.0 });
        assert!(err.to_string().contains("p must be < q"));
    }

    #[test]
    fn first_violation_is_reported() {
        let mut inst = conic_example();
        inst.exponents = vec![1.0, -0.5];
        inst.bounds.l = -1.0;
        assert!(matches!(
            inst.check(),
            Err(InstanceError::NonPositiveExponent { index: 1, .. })
        ));

        let mut inst = conic_example();
        inst.wedge.j = 0;
        assert_eq!(inst.check(), Err(InstanceError::SameIndex(0)));

        let mut inst = conic_example();
        inst.bounds = ValueBounds { l: 0.0, u: 1.0 };
        assert_eq!(inst.check(), Err(InstanceError::NonPositiveLower(0.0)));

        let mut inst = conic_example();
        inst.bounds = ValueBounds { l: 2.0, u: 2.0 };
        assert!(matches!(
            inst.check(),
            Err(InstanceError::BoundOrder { .. })
        ));

        let mut inst = conic_example();
        inst.bounds.u = f64::INFINITY;
        assert!(matches!(
            inst.check(),
            Err(InstanceError::BoundOrder { .. })
        ));

        let inst = MonomialInstance::new(
            vec![1.0],
            Wedge {
                i: 0,
                j: 1,
                p: 1.0,
                q: 2.0,
            },
            ValueBounds { l: 1.0, u: 2.0 },
        );
        assert_eq!(inst.check(), Err(InstanceError::TooFewVariables(1)));
    }

    #[test]
    fn eval_f_cases() {
        let bilinear = validate(MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0)).unwrap();
        assert_eq!(bilinear.eval_f(&[2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(bilinear.eval_f(&[0.0, 3.0]).unwrap(), 0.0);
        assert!(matches!(
            bilinear.eval_f(&[-1.0, 3.0]),
            Err(Error::NegativeCoordinate { index: 0, .. })
        ));
        assert!(matches!(
            bilinear.eval_f(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));

        let m = validate(conic_example()).unwrap();
        assert_eq!(m.eval_f(&[1.0, 1.0]).unwrap(), 1.0);
        // Independent route: direct powf product.
        let direct = 2.0_f64.powf(1.7) * 0.5_f64.powf(1.5);
        let got = m.eval_f(&[2.0, 0.5]).unwrap();
        assert!((got - direct).abs() <= 1e-14 * direct);
    }

    #[test]
    fn json_round_trip_and_schema_check() {
        let inst = conic_example();
        let text = inst.to_json();
        assert!(text.contains(SCHEMA_TAG));
        assert_eq!(MonomialInstance::from_json(&text).unwrap(), inst);

        let bad = text.replace(SCHEMA_TAG, "monomial-envelope/0");
        assert!(matches!(
            MonomialInstance::from_json(&bad),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn regime_split_at_one() {
        let conic = validate(MonomialInstance::planar([0.4, 0.6], 1.0, 2.0, 1.0, 2.0)).unwrap();
        assert_eq!(conic.regime(), Regime::Conic);
        let concave = validate(MonomialInstance::planar([0.4, 0.5], 1.0, 2.0, 1.0, 2.0)).unwrap();
        assert_eq!(concave.regime(), Regime::Concave);
    }
}
