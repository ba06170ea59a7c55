//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every criterion also has a wall-time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use l1spline::bench::{run_bench, BenchConfig};
use l1spline::datasets::{generate, heaviside, GeneratorSpec};
use l1spline::parallel::{fit_window_continuous_par, fit_window_discrete_par};
use l1spline_core::{
    build_window_plan, fit_l1_continuous, fit_l1_discrete, fit_l2_continuous, oracle_min_over_derivatives,
    solve_l1_interpolation, solve_l2_interpolation, DataSet, FitConfig, Heaviside, HermiteSpline, InterpConfig,
    KnotGrid, TargetFunction,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const PROBES: usize = 1000;

// tolerances
const LINEARITY_TOL: f64 = 1e-6;
const L2_OVERSHOOT: f64 = 1.01;
const L1_OVERSHOOT: f64 = 1.001;
const SEVEN_POINT_TOL: f64 = 1e-3;
const THREE_POINT_DEVIATION: f64 = 1e-2;
const ORACLE_SLACK: f64 = 1e-3;
const QUADRATURE_REL: f64 = 1e-8;
const SLOPE_RANGE: (f64, f64) = (0.8, 1.3);
const DOUBLING_RATIO: f64 = 3.0;
const OBJECTIVE_GAP: f64 = 0.10;
const POINTWISE_GAP: f64 = 0.20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn probes(a: f64, b: f64) -> Vec<f64> {
    (0..PROBES)
        .map(|k| if k == PROBES - 1 { b } else { a + (b - a) * k as f64 / (PROBES - 1) as f64 })
        .collect()
}

fn heaviside_setup() -> (Heaviside, KnotGrid) {
    (heaviside((0.0, 1.0), 0.5).unwrap(), KnotGrid::uniform(0.0, 1.0, 10).unwrap())
}

/// Probe points outside the knot interval that contains the jump.
fn off_jump(grid: &KnotGrid, jump: f64) -> Vec<f64> {
    let seg = grid.segment_of(jump).unwrap();
    let (lo, hi) = (grid.nodes()[seg], grid.nodes()[seg + 1]);
    probes(grid.start(), grid.end()).into_iter().filter(|&t| t <= lo || t >= hi).collect()
}

fn max_probe(s: &HermiteSpline) -> f64 {
    probes(s.grid().start(), s.grid().end()).iter().map(|&t| s.eval(t).unwrap()).fold(f64::MIN, f64::max)
}

fn sup_gap(a: &HermiteSpline, b: &HermiteSpline) -> f64 {
    probes(a.grid().start(), a.grid().end())
        .iter()
        .map(|&t| (a.eval(t).unwrap() - b.eval(t).unwrap()).abs())
        .fold(0.0, f64::max)
}

fn linearity_preservation() -> Outcome {
    let (h, grid) = heaviside_setup();
    let values: Vec<f64> = grid.nodes().iter().map(|&x| h.eval(x)).collect();
    let s = solve_l1_interpolation(&grid, &values, &InterpConfig::default()).unwrap().spline;
    let worst = off_jump(&grid, h.jump())
        .iter()
        .map(|&t| (s.eval(t).unwrap() - h.eval(t)).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= LINEARITY_TOL,
        detail: format!("max |s - H| off the jump interval = {worst:.2e} (tol {LINEARITY_TOL:.0e})"),
    }
}

fn gibbs_contrast() -> Outcome {
    let (h, grid) = heaviside_setup();
    let cfg = FitConfig::default();
    let values: Vec<f64> = grid.nodes().iter().map(|&x| h.eval(x)).collect();
    let l2_interp = max_probe(&solve_l2_interpolation(&grid, &values).unwrap());
    let l2_fit = max_probe(&fit_l2_continuous(&h, &grid, &cfg).unwrap().spline);
    let l1_fit = max_probe(&fit_l1_continuous(&h, &grid, &cfg).unwrap().spline);
    Outcome {
        pass: l2_interp > L2_OVERSHOOT && l2_fit > L2_OVERSHOOT && l1_fit <= L1_OVERSHOOT,
        detail: format!("max: L2 interp {l2_interp:.5}, L2 fit {l2_fit:.5} (> {L2_OVERSHOOT}); L1 fit {l1_fit:.7} (<= {L1_OVERSHOOT})"),
    }
}

fn seven_point_agreement() -> Outcome {
    let (h, grid) = heaviside_setup();
    let cfg = FitConfig::default();
    let global = fit_l1_continuous(&h, &grid, &cfg).unwrap();
    let plan = build_window_plan(10, 7, 1).unwrap();
    let local = fit_window_continuous_par(&h, &grid, &plan, &cfg, None).unwrap();
    let gap = sup_gap(&global.spline, &local.spline);
    Outcome {
        pass: gap <= SEVEN_POINT_TOL,
        detail: format!("sup |window7 - global| = {gap:.2e} (tol {SEVEN_POINT_TOL:.0e})"),
    }
}

fn three_point_failure() -> Outcome {
    let (h, grid) = heaviside_setup();
    let plan = build_window_plan(10, 3, 1).unwrap();
    let local = fit_window_continuous_par(&h, &grid, &plan, &FitConfig::default(), None).unwrap();
    let (mut left, mut right) = (0.0f64, 0.0f64);
    for t in off_jump(&grid, h.jump()) {
        let e = (local.spline.eval(t).unwrap() - h.eval(t)).abs();
        if t < h.jump() {
            left = left.max(e);
        } else {
            right = right.max(e);
        }
    }
    Outcome {
        pass: left.max(right) > THREE_POINT_DEVIATION,
        detail: format!("plateau deviation left {left:.3e}, right {right:.3e} (need one > {THREE_POINT_DEVIATION:.0e})"),
    }
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let g1 = 0.2 + uniform(&mut rng);
        let g2 = 0.2 + uniform(&mut rng);
        let grid = KnotGrid::new(vec![0.0, g1, g1 + g2]).unwrap();
        let values: Vec<f64> = (0..3).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect();
        let slope = (values[1] - values[0]).abs() / g1 + (values[2] - values[1]).abs() / g2;
        let solved = solve_l1_interpolation(&grid, &values, &InterpConfig::default()).unwrap();
        let box_half = 2.0 * slope + 1.0;
        let (_, oracle) = oracle_min_over_derivatives(&grid, &values, box_half, box_half / 100.0).unwrap();
        worst = worst.max(solved.objective - oracle);
    }
    Outcome {
        pass: worst <= ORACLE_SLACK,
        detail: format!("max (solver - oracle) over 20 instances = {worst:.2e} (slack {ORACLE_SLACK:.0e})"),
    }
}

/// `s''` straight from the Hermite basis.
fn second_derivative(s: &HermiteSpline, i: usize, t: f64) -> f64 {
    let x = s.grid().nodes();
    let (y, b) = (s.values(), s.derivs());
    let h = x[i + 1] - x[i];
    let u = (t - x[i]) / h;
    ((12.0 * u - 6.0) * y[i] + (6.0 * u - 4.0) * h * b[i] + (6.0 - 12.0 * u) * y[i + 1] + (6.0 * u - 2.0) * h * b[i + 1])
        / (h * h)
}

/// Composite trapezoid of `|s''|` with `points` nodes shared equally by the
/// segments. The kink of `|s''|` costs at most `(w/h)²` relative error on a
/// segment of width `h` cut into panels of width `w`.
fn quadrature(s: &HermiteSpline, points: usize) -> f64 {
    let x = s.grid().nodes();
    let panels = points / s.grid().segments();
    (0..s.grid().segments())
        .map(|i| {
            let (a, b) = (x[i], x[i + 1]);
            let w = (b - a) / panels as f64;
            let f = |t: f64| second_derivative(s, i, t).abs();
            let inner: f64 = (1..panels).map(|k| f(a + w * k as f64)).sum();
            w * (0.5 * (f(a) + f(b)) + inner)
        })
        .sum()
}

fn exact_functional() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = 2 + (rng.next_u64() % 9) as usize;
        let mut nodes = vec![4.0 * uniform(&mut rng) - 2.0];
        for _ in 1..n {
            nodes.push(nodes.last().unwrap() + 0.05 + uniform(&mut rng));
        }
        let values = (0..n).map(|_| 6.0 * uniform(&mut rng) - 3.0).collect();
        let derivs = (0..n).map(|_| 10.0 * uniform(&mut rng) - 5.0).collect();
        let s = HermiteSpline::new(KnotGrid::new(nodes).unwrap(), values, derivs).unwrap();
        let exact = s.total_curvature_l1();
        let numeric = quadrature(&s, 100_000);
        worst = worst.max((exact - numeric).abs() / numeric.abs().max(f64::MIN_POSITIVE));
    }
    Outcome {
        pass: worst <= QUADRATURE_REL,
        detail: format!("max relative gap to 1e5-point quadrature over 50 splines = {worst:.2e} (tol {QUADRATURE_REL:.0e})"),
    }
}

fn linear_complexity() -> Outcome {
    let cfg = BenchConfig::default();
    let report = run_bench(&cfg).unwrap();
    let r = &report.results[0];
    let slope = r.loglog_slope;
    let medians: Vec<String> = r.rows.iter().map(|row| format!("n={} {:.3}s", row.n, row.median_s)).collect();
    Outcome {
        pass: (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope) && r.last_ratio <= DOUBLING_RATIO,
        detail: format!(
            "window7-3 log-log slope {slope:.3} (in [{}, {}]), t400/t200 = {:.3} (<= {DOUBLING_RATIO}); medians of {}: {}",
            SLOPE_RANGE.0,
            SLOPE_RANGE.1,
            r.last_ratio,
            cfg.reps,
            medians.join(", ")
        ),
    }
}

fn window_economy() -> Outcome {
    let step3 = build_window_plan(100, 7, 3).unwrap().windows.len();
    let step1 = build_window_plan(100, 7, 1).unwrap().windows.len();
    let bound = 93usize.div_ceil(3) + 1;
    Outcome {
        pass: step3 <= bound && step1 == 94 && step3 < step1,
        detail: format!("keep=3: {step3} windows (<= {bound}), keep=1: {step1} windows (= 94)"),
    }
}

/// The data range over the knot interval holding `t` and one interval on
/// either side.
fn local_range(d: &DataSet, grid: &KnotGrid, t: f64) -> f64 {
    let seg = grid.segment_of(t).unwrap();
    let x = grid.nodes();
    let lo = x[seg.saturating_sub(1)];
    let hi = x[(seg + 2).min(grid.len() - 1)];
    let (a, b) = d.ordinate_bounds(d.indices_within(lo, hi)).unwrap();
    b - a
}

fn noisy_similarity() -> Outcome {
    let cfg = FitConfig::default();
    let cases = [
        ("heaviside", GeneratorSpec::heaviside(100, 0.03, 11), 20),
        ("sine", GeneratorSpec::sine(300, 0.05, 12), 30),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, spec, knots) in cases {
        let d = generate(&spec).unwrap();
        let grid = KnotGrid::uniform(spec.domain.0, spec.domain.1, knots).unwrap();
        let global = fit_l1_discrete(&d, &grid, &cfg).unwrap();
        let plan = build_window_plan(knots, 7, 3).unwrap();
        let local = fit_window_discrete_par(&d, &grid, &plan, &cfg, None).unwrap();
        let rel = (local.objective - global.objective).abs() / global.objective;
        let gap = probes(grid.start(), grid.end())
            .iter()
            .map(|&t| (local.spline.eval(t).unwrap() - global.spline.eval(t).unwrap()).abs() / local_range(&d, &grid, t))
            .fold(0.0, f64::max);
        pass &= rel <= OBJECTIVE_GAP && gap <= POINTWISE_GAP;
        parts.push(format!(
            "{name}: objective gap {:.2}% (<= {}%), max gap / local range {:.3} (<= {POINTWISE_GAP})",
            100.0 * rel,
            100.0 * OBJECTIVE_GAP,
            gap
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn parallel_determinism() -> Outcome {
    let cfg = FitConfig::default();
    let (h, grid) = heaviside_setup();
    let threads = [Some(1), None, Some(4)];
    let mut configs = 0;
    let mut identical = true;
    for (m, keep) in [(7, 1), (3, 1), (5, 3)] {
        let plan = build_window_plan(10, m, keep).unwrap();
        let fits: Vec<_> =
            threads.iter().map(|&t| fit_window_continuous_par(&h, &grid, &plan, &cfg, t).unwrap().spline).collect();
        identical &= fits.iter().all(|s| bits(s) == bits(&fits[0]));
        configs += 1;
    }
    for (spec, knots) in [(GeneratorSpec::heaviside(100, 0.03, 11), 20), (GeneratorSpec::sine(300, 0.05, 12), 30)] {
        let d = generate(&spec).unwrap();
        let grid = KnotGrid::uniform(spec.domain.0, spec.domain.1, knots).unwrap();
        let plan = build_window_plan(knots, 7, 3).unwrap();
        let fits: Vec<_> =
            threads.iter().map(|&t| fit_window_discrete_par(&d, &grid, &plan, &cfg, t).unwrap().spline).collect();
        identical &= fits.iter().all(|s| bits(s) == bits(&fits[0]));
        configs += 1;
    }
    Outcome {
        pass: identical,
        detail: format!("{configs} configurations, threads 1 / all / 4: {}", if identical { "bit-identical" } else { "DIFFER" }),
    }
}

fn bits(s: &HermiteSpline) -> Vec<u64> {
    s.values().iter().chain(s.derivs()).map(|v| v.to_bits()).collect()
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "linearity preservation (L1 interpolation, Heaviside)", secs(1), linearity_preservation),
        (2, "Gibbs contrast (L2 overshoots, L1 fit does not)", secs(5), gibbs_contrast),
        (3, "seven-point window agrees with the global fit", secs(10), seven_point_agreement),
        (4, "three-point window fails to keep a plateau", secs(5), three_point_failure),
        (5, "solver matches the brute-force oracle (n = 3)", secs(60), oracle_equivalence),
        (6, "exact curvature functional vs quadrature", secs(10), exact_functional),
        (7, "linear complexity of window7-3", secs(300), linear_complexity),
        (8, "window economy of keep = 3", secs(1), window_economy),
        (9, "noisy data: window7-3 similar to global", secs(300), noisy_similarity),
        (10, "parallel determinism", secs(120), parallel_determinism),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let started = Instant::now();
        let out = check();
        let elapsed = started.elapsed();
        let pass = out.pass && elapsed < budget;
        if !pass {
            failures += 1;
        }
        println!(
            "{} [{id:>2}] {name}: {}; {:.2}s (budget {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
