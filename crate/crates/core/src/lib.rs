//! Convex hulls and envelopes of bounded monomials `f(x) = ∏ x_k^{a_k}`
//! (all `a_k > 0`) over the orthant and over a linear wedge
//! `W_ij = {x >= 0 : p x_i <= x_j <= q x_i}` with `l <= f(x) <= u`.
//!
//! The crate provides:
//!
//! - derived constants of an instance ([`ConeParams`], [`WedgeParams`]);
//! - envelope values and membership tests for each convex set
//!   ([`EnvelopeKind`]);
//! - for two variables, cross-sections, the area function and the closed-form
//!   hull volume;
//! - ratio and value branching-point selection;
//! - independent oracles ([`oracle`]) used to validate all of the above.
//!
//! ```
//! use monenv_core::{validate, MonomialInstance};
//!
//! let m = validate(MonomialInstance::planar([1.0, 1.0], 1.0, 4.0, 1.0, 4.0)).unwrap();
//! assert!((m.area(2.0).unwrap() - 0.2678).abs() < 1e-4);
//! ```

pub mod branching;
pub mod envelopes;
pub mod error;
pub mod geometry2d;
pub mod instance;
mod numeric;
pub mod oracle;
pub mod params;
pub mod tolerance;

pub use branching::{BranchKind, BranchResult, MinVolumeResult};
pub use envelopes::{Constraint, EnvelopeKind, MembershipVerdict};
pub use error::{Error, InstanceError, Result};
pub use geometry2d::{
    BoundingBox, CrossSection, LevelCurve, PowerTerm, QuadratureEstimate, VolumeOptions,
    VolumeReport,
};
pub use instance::{validate, Monomial, MonomialInstance, Regime, ValueBounds, Wedge, SCHEMA_TAG};
pub use oracle::McEstimate;
pub use params::{ConeParams, IdentityReport, Transport, WedgeParams};
pub use tolerance::{relative_gap, Tolerances};
