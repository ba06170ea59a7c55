//! Curve sampling and the JSON run report.
//!
//! Report field names are stable; `wall_time_s` is the only field that
//! differs between two runs of the same command.

use l1spline_core::{HermiteSpline, TargetFunction};
use serde::Serialize;

use crate::methods::{Outcome, Source};

/// `points` evenly spaced abscissae over the spline domain, both ends
/// included, and the spline values there.
pub fn sample_curve(s: &HermiteSpline, points: usize) -> (Vec<f64>, Vec<f64>) {
    let g = s.grid();
    let xs = even(g.start(), g.end(), points);
    let ys = xs.iter().map(|&x| s.eval(x).expect("sample inside the domain")).collect();
    (xs, ys)
}

pub(crate) fn even(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..points)
            .map(|k| if k == points - 1 { b } else { a + (b - a) * k as f64 / (points - 1) as f64 })
            .collect(),
    }
}

/// `(min, max)` of what the curve approximates: data ordinates, or the
/// function sampled at `xs` together with its one-sided values at jumps.
pub fn source_range(source: &Source, xs: &[f64]) -> (f64, f64) {
    let values: Vec<f64> = match source {
        Source::Data(d) => d.y().to_vec(),
        Source::Function(f) => xs
            .iter()
            .copied()
            .chain(f.breakpoints().iter().flat_map(|&t| [t.next_down(), t]))
            .map(|x| f.eval(x))
            .collect(),
    };
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodReport {
    pub method: String,
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
    pub wall_time_s: f64,
    pub failed_windows: Vec<usize>,
    pub curve_min: f64,
    pub curve_max: f64,
    /// `(curve_max − lo) / (hi − lo)` for the source range `[lo, hi]`;
    /// values above 1 overshoot.
    pub overshoot: f64,
    /// `(hi − curve_min) / (hi − lo)`; values above 1 undershoot.
    pub undershoot: f64,
}

impl MethodReport {
    pub fn new(out: &Outcome, ys: &[f64], (lo, hi): (f64, f64)) -> Self {
        let curve_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
        let curve_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        let ratio = |v: f64| if span > 0.0 { v / span } else { f64::NAN };
        Self {
            method: out.method.to_string(),
            objective: out.objective,
            converged: out.converged,
            sweeps: out.sweeps,
            wall_time_s: out.wall_time.as_secs_f64(),
            failed_windows: out.failed_windows.clone(),
            curve_min,
            curve_max,
            overshoot: ratio(curve_max - lo),
            undershoot: ratio(hi - curve_min),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize> {
    pub command: String,
    pub config: C,
    pub results: Vec<MethodReport>,
}
