//! Named fitting methods and a single entry point running any of them.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use l1spline_core::{
    build_window_plan, fit_l1_continuous, fit_l1_discrete, fit_l2_continuous, fit_l2_discrete,
    solve_l1_interpolation, solve_l2_interpolation, DataSet, FitConfig, HermiteSpline, KnotGrid,
    TargetFunction,
};

use crate::datasets::Target;
use crate::parallel::{fit_window_continuous_par, fit_window_discrete_par};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// L1 interpolation spline of the knot samples.
    L1Interp,
    /// Natural cubic interpolating spline of the knot samples.
    L2Interp,
    /// Global L1 spline fit.
    L1,
    /// Global L2 spline fit.
    L2,
    /// Sliding-window L1 fit with window size `m` keeping `keep` centres.
    Window { m: usize, keep: usize },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::L1Interp => f.write_str("l1-interp"),
            Method::L2Interp => f.write_str("l2-interp"),
            Method::L1 => f.write_str("l1"),
            Method::L2 => f.write_str("l2"),
            Method::Window { m, keep: 1 } => write!(f, "window{m}"),
            Method::Window { m, keep } => write!(f, "window{m}-{keep}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// `l1`, `l2`, `l1-interp`, `l2-interp`, `global` (same as `l1`),
    /// `window<m>` or `window<m>-3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let method = match s.as_str() {
            "l1" | "global" => Method::L1,
            "l2" => Method::L2,
            "l1-interp" => Method::L1Interp,
            "l2-interp" => Method::L2Interp,
            _ => {
                let spec = s
                    .strip_prefix("window")
                    .ok_or_else(|| Error::usage(format!("unknown method {s:?}")))?;
                let (m, keep) = spec.split_once('-').unwrap_or((spec, "1"));
                let parse = |v: &str| v.parse::<usize>().map_err(|_| Error::usage(format!("bad window method {s:?}")));
                let (m, keep) = (parse(m)?, parse(keep)?);
                // validates m and keep
                build_window_plan(m, m, keep).map_err(|e| Error::usage(e.to_string()))?;
                Method::Window { m, keep }
            }
        };
        Ok(method)
    }
}

/// What a method approximates.
#[derive(Debug, Clone)]
pub enum Source {
    Function(Target),
    Data(DataSet),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub method: Method,
    pub spline: HermiteSpline,
    /// Fits: the outer objective. Interpolation (L1 and L2 alike): `∫|s''|`.
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
    pub wall_time: Duration,
    pub failed_windows: Vec<usize>,
}

/// Knot samples used by the interpolation methods.
fn knot_values(source: &Source, grid: &KnotGrid) -> Result<Vec<f64>> {
    match source {
        Source::Function(f) => Ok(grid.nodes().iter().map(|&x| f.eval(x)).collect()),
        Source::Data(d) => {
            if d.x() != grid.nodes() {
                return Err(Error::usage("interpolating data needs the knots to be the data abscissae"));
            }
            Ok(d.y().to_vec())
        }
    }
}

pub fn run_method(
    method: Method,
    source: &Source,
    grid: &KnotGrid,
    cfg: &FitConfig,
    threads: Option<usize>,
) -> Result<Outcome> {
    let started = Instant::now();
    let done = |spline: HermiteSpline, objective, converged, sweeps, failed_windows| Outcome {
        method,
        spline,
        objective,
        converged,
        sweeps,
        wall_time: started.elapsed(),
        failed_windows,
    };
    let fit = match method {
        Method::L1Interp => {
            let r = solve_l1_interpolation(grid, &knot_values(source, grid)?, &cfg.inner)?;
            return Ok(done(r.spline, r.objective, r.converged, r.sweeps, Vec::new()));
        }
        Method::L2Interp => {
            let s = solve_l2_interpolation(grid, &knot_values(source, grid)?)?;
            let objective = s.total_curvature_l1();
            return Ok(done(s, objective, true, 0, Vec::new()));
        }
        Method::L1 => match source {
            Source::Function(f) => fit_l1_continuous(f, grid, cfg)?,
            Source::Data(d) => fit_l1_discrete(d, grid, cfg)?,
        },
        Method::L2 => match source {
            Source::Function(f) => fit_l2_continuous(f, grid, cfg)?,
            Source::Data(d) => fit_l2_discrete(d, grid, cfg)?,
        },
        Method::Window { m, keep } => {
            let plan = build_window_plan(grid.len(), m, keep)?;
            match source {
                Source::Function(f) => fit_window_continuous_par(f, grid, &plan, cfg, threads)?,
                Source::Data(d) => fit_window_discrete_par(d, grid, &plan, cfg, threads)?,
            }
        }
    };
    Ok(done(fit.spline, fit.objective, fit.converged, fit.sweeps_used, fit.failed_windows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::heaviside;

    #[test]
    fn names_round_trip() {
        for name in ["l1", "l2", "l1-interp", "l2-interp", "window3", "window5-3", "window7-3", "window7"] {
            assert_eq!(name.parse::<Method>().unwrap().to_string(), name);
        }
        assert_eq!("global".parse::<Method>().unwrap(), Method::L1);
        for bad in ["l3", "window4", "window3-3", "window7-2", "windowx"] {
            assert!(bad.parse::<Method>().is_err(), "{bad}");
        }
    }

    #[test]
    fn interpolation_of_a_line() {
        let g = KnotGrid::uniform(0.0, 2.0, 5).unwrap();
        let d = DataSet::new(g.nodes().to_vec(), g.nodes().iter().map(|x| 3.0 * x - 1.0).collect()).unwrap();
        let cfg = FitConfig::default();
        for m in [Method::L1Interp, Method::L2Interp] {
            let out = run_method(m, &Source::Data(d.clone()), &g, &cfg, Some(1)).unwrap();
            assert!(out.objective < 1e-12);
            assert!((out.spline.eval(1.3).unwrap() - 2.9).abs() < 1e-12);
        }
        let other = KnotGrid::uniform(0.0, 2.0, 4).unwrap();
        assert!(run_method(Method::L1Interp, &Source::Data(d), &other, &cfg, None).is_err());
    }

    #[test]
    fn heaviside_fits_run() {
        let f = Source::Function(Target::Heaviside(heaviside((0.0, 1.0), 0.5).unwrap()));
        let g = KnotGrid::uniform(0.0, 1.0, 10).unwrap();
        let cfg = FitConfig::default();
        let l1 = run_method(Method::L1, &f, &g, &cfg, None).unwrap();
        let w = run_method(Method::Window { m: 7, keep: 1 }, &f, &g, &cfg, Some(1)).unwrap();
        assert!(l1.converged && w.converged);
        assert!((l1.objective - w.objective).abs() < 1e-6);
    }
}
