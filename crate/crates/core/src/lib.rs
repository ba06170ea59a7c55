//! Shape-preserving cubic spline fitting under the L1 norm.
//!
//! The crate works with cubic Hermite splines (values and first derivatives
//! at the knots) and provides:
//!
//! * exact evaluation of the curvature functional `∫|s''|`, which is a sum of
//!   closed-form integrals of piecewise linear functions;
//! * the L1 interpolation spline: knot derivatives minimizing `∫|s''|` for
//!   prescribed knot values, with the natural cubic spline as L2 baseline;
//! * global L1 spline fits: best L1 approximation of a function, or best ℓ1
//!   approximation of a dataset, among all L1 interpolation splines on a grid;
//! * sliding-window fits which solve the same problem on short runs of
//!   consecutive knots and keep only the central information of each window.
//!
//! Everything here is `no_std` + `alloc`. Enable the `std` feature to have
//! fit results carry a wall-clock solve time.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod data;
mod error;
pub mod fit;
pub mod grid;
pub mod hermite;
pub mod interp;
mod math;
pub mod objective;
pub mod target;
pub mod window;

pub use error::{Error, Result};
pub use fit::{
    fit_l1_continuous, fit_l1_discrete, fit_l2_continuous, fit_l2_discrete, DataSet, FitConfig,
    FitResult,
};
pub use grid::KnotGrid;
pub use hermite::{segment_abs_curvature_integral, HermiteSpline, SegmentCurvature};
pub use interp::{
    oracle_min_over_derivatives, solve_l1_interpolation, solve_l2_interpolation, InterpConfig,
    Interpolation, TieBreak,
};
pub use objective::{l1_distance_continuous, l1_residual_discrete};
pub use target::{FnTarget, Heaviside, Steps, TargetFunction};
pub use window::{
    build_window_plan, fit_window_continuous, fit_window_discrete, LocalSolution, Window, WindowPlan,
};
