//! Plateaus 0 → 100 → 0 on [0, 3], 100 clean samples, 20 knots. Neither
//! step edge falls on a knot.

use l1spline::datasets::{generate, GeneratorSpec, Noise};
use l1spline_core::{
    build_window_plan, fit_l1_discrete, fit_window_discrete, DataSet, FitConfig, FitResult, HermiteSpline, KnotGrid,
};

fn setup() -> (DataSet, KnotGrid, FitResult) {
    let spec = GeneratorSpec::multiscale((0.0, 3.0), vec![0.0, 100.0, 0.0], 100, Noise::NONE, 0);
    let d = generate(&spec).unwrap();
    let g = KnotGrid::uniform(0.0, 3.0, 20).unwrap();
    let global = fit_l1_discrete(&d, &g, &FitConfig::default()).unwrap();
    (d, g, global)
}

fn probes() -> impl Iterator<Item = f64> {
    (0..1000).map(|k| 3.0 * k as f64 / 999.0)
}

fn max_gap(a: &HermiteSpline, b: &HermiteSpline) -> f64 {
    probes().map(|t| (a.eval(t).unwrap() - b.eval(t).unwrap()).abs()).fold(0.0, f64::max)
}

fn window(d: &DataSet, g: &KnotGrid, m: usize, keep: usize) -> HermiteSpline {
    let plan = build_window_plan(g.len(), m, keep).unwrap();
    fit_window_discrete(d, g, &plan, &FitConfig::default()).unwrap().spline
}

#[test]
fn global_fit_does_not_overshoot() {
    let (d, _, global) = setup();
    let (lo, hi) = d.ordinate_bounds(0..d.len()).unwrap();
    let step = hi - lo;
    for t in probes() {
        let v = global.spline.eval(t).unwrap();
        assert!(v >= lo - 0.01 * step && v <= hi + 0.01 * step, "s({t}) = {v}");
    }
}

#[test]
fn seven_three_windows_match_the_global_fit() {
    let (d, g, global) = setup();
    let local = window(&d, &g, 7, 3);
    let x = g.nodes();
    for t in probes() {
        // data range over the probe's knot interval and its two neighbours
        let seg = g.segment_of(t).unwrap();
        let (lo, hi) = d
            .ordinate_bounds(d.indices_within(x[seg.saturating_sub(1)], x[(seg + 2).min(x.len() - 1)]))
            .unwrap();
        let gap = (local.eval(t).unwrap() - global.spline.eval(t).unwrap()).abs();
        assert!(gap <= 0.02 * (hi - lo) + 1e-6, "t = {t}: gap {gap}, local range {}", hi - lo);
    }
}

#[test]
fn five_point_windows_deviate_more_than_seven() {
    let (d, g, global) = setup();
    let five = max_gap(&window(&d, &g, 5, 1), &global.spline);
    let seven = max_gap(&window(&d, &g, 7, 1), &global.spline);
    assert!(five > seven, "five {five} vs seven {seven}");
    assert!(five > 1.0, "{five}");
}
