//! Wall-time scaling of the fit methods in the number of knots.
//!
//! Each size `n` fits a noisy Heaviside sampled with a fixed number of data
//! points per knot interval, so the data grow with the grid.

use l1spline_core::{FitConfig, KnotGrid};
use serde::Serialize;

use crate::datasets::{generate, GeneratorSpec};
use crate::methods::{run_method, Method, Source};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    #[serde(serialize_with = "method_names")]
    pub methods: Vec<Method>,
    pub knots: Vec<usize>,
    pub reps: usize,
    pub points_per_interval: usize,
    pub std_dev: f64,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            methods: vec![Method::Window { m: 7, keep: 3 }],
            knots: vec![50, 100, 200, 400],
            reps: 5,
            points_per_interval: 3,
            std_dev: 0.03,
            seed: 1,
            threads: None,
        }
    }
}

fn method_names<S: serde::Serializer>(m: &[Method], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(ToString::to_string))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub samples: usize,
    pub timings_s: Vec<f64>,
    pub median_s: f64,
    pub objective: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodBench {
    pub method: String,
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln median` against `ln n`.
    pub loglog_slope: f64,
    /// Median time of the largest `n` over that of the next largest.
    pub last_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub results: Vec<MethodBench>,
}

/// The dataset for an `n`-knot run.
pub fn bench_data(cfg: &BenchConfig, n: usize) -> GeneratorSpec {
    GeneratorSpec::heaviside(cfg.points_per_interval * (n - 1) + 1, cfg.std_dev, cfg.seed)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.reps == 0 || cfg.knots.is_empty() || cfg.points_per_interval == 0 {
        return Err(Error::usage("bench needs at least one size, one repetition and one point per interval"));
    }
    let fit_cfg = FitConfig::default();
    let mut results = Vec::new();
    for &method in &cfg.methods {
        let mut rows = Vec::new();
        for &n in &cfg.knots {
            let data = generate(&bench_data(cfg, n))?;
            let samples = data.len();
            let grid = KnotGrid::uniform(0.0, 1.0, n)?;
            let source = Source::Data(data);
            let mut timings = Vec::with_capacity(cfg.reps);
            let mut last = None;
            for _ in 0..cfg.reps {
                let out = run_method(method, &source, &grid, &fit_cfg, cfg.threads)?;
                timings.push(out.wall_time.as_secs_f64());
                last = Some(out);
            }
            let out = last.expect("at least one repetition");
            rows.push(BenchRow {
                n,
                samples,
                median_s: median(&timings),
                timings_s: timings,
                objective: out.objective,
                converged: out.converged,
            });
        }
        let points: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), r.median_s.ln())).collect();
        let last_ratio = match rows.as_slice() {
            [.., a, b] => b.median_s / a.median_s,
            _ => f64::NAN,
        };
        results.push(MethodBench {
            method: method.to_string(),
            loglog_slope: slope(&points),
            last_ratio,
            rows,
        });
    }
    Ok(BenchReport {
        config: cfg.clone(),
        results,
    })
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let k = s.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        s[k / 2]
    } else {
        0.5 * (s[k / 2 - 1] + s[k / 2])
    }
}

/// Least-squares slope through `points`; NaN with fewer than two distinct
/// abscissae.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        f64::NAN
    }
}
