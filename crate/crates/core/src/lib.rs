//! Optimal transport between fibered discrete probability measures.
//!
//! A fibered measure is a finite base probability `σ` together with one
//! discrete probability measure per base atom. The crate computes the
//! disintegrated distance `𝒟𝒦_{p,q}(𝔪, 𝔫) = ‖mk_p(𝔪^ω, 𝔫^ω)‖_{L^q(σ)}`, its
//! Kantorovich-type dual certificates, fiberwise displacement geodesics,
//! barycenters, and the sliced embedding of measures on ℝ^d.
//!
//! Module map:
//!
//! - [`space`], [`measure`]: fiber spaces, discrete and fibered measures, charts.
//! - [`ot`]: exact single-fiber transport (monotone coupling, network simplex),
//!   dual potentials and `c`-transforms.
//! - [`disint`]: the disintegrated metric, its dual and the constrained
//!   coupling cost `𝔆_p`.
//! - [`geodesic`]: fiberwise displacement interpolation.
//! - [`barycenter`]: barycenter objectives, solvers and dual certificates.
//! - [`sliced`]: sliced distances and the embedding into `𝕊^{d−1} × ℝ`.

pub mod barycenter;
pub mod disint;
pub mod error;
pub mod geodesic;
pub mod measure;
pub mod ot;
pub mod sliced;
pub mod space;

pub use barycenter::{
    classical_dual, dual_objective, objective, solve_fiberwise, solve_fixed_support, solve_general_q,
    BarycenterDualCertificate, BarycenterProblem, GeneralQSolution, SubgradientOptions,
};
pub use disint::{
    certify, cp_cost, dual_value, optimal_zeta, scrmk, DisintDistanceReport, DualCertificate,
};
pub use error::{Error, Result};
pub use geodesic::{geodesic_point, verify_geodesic, GeodesicPath, GeodesicReport};
pub use measure::{
    apply_chart_change, build_fibered, moment_p, reference_measure, BaseMeasure, DiscreteMeasure,
    FiberedMeasure,
};
pub use ot::{c_transform, fiber_mk, ot_1d, ot_lp, FiberDualPair, LpOptions, TransportPlan};
pub use sliced::{slice_embed, sliced_mk, DirectionSet};
pub use space::{ChartAtlas, FiberKind, FiberSpace, Isometry, Point};
