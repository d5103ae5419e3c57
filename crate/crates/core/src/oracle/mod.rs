//! Brute-force verifiers for the closed-form results: Monte-Carlo volume,
//! ray-by-ray quadrature, graph-point convex-combination sampling and the
//! McCormick baseline.
//!
//! Every randomized routine is a pure function of its seed and sample count.

pub mod mccormick;
pub mod montecarlo;
pub mod quadrature;
pub mod ray;
pub mod sampling;
pub mod streams;

pub use mccormick::{
    mccormick_bounds, tightness_comparison, Interval, McCormickBox, TightnessReport,
};
pub use montecarlo::{mc_box_volume, mc_volume, McEstimate};
pub use quadrature::{integrate, Integral};
pub use ray::{ray_area, ray_area_between, ray_volume, ray_volume_between};
pub use sampling::{
    graph_combination_sampler, sample_wedge_point, wedge_points, CombinationReport,
};
