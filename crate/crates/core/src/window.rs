//! Sliding-window L1 spline fits.
//!
//! A window is a run of `m ∈ {3, 5, 7}` consecutive knots. The L1 spline fit
//! is solved on each window alone and only the values and derivatives at its
//! central knot(s) are kept; the global spline is assembled from the kept
//! pieces. With `keep = 1` windows advance one knot at a time; with `keep = 3`
//! they keep their three central knots and advance by three.
//!
//! Boundary knots that no window centre reaches are taken from the first and
//! last windows, and a trailing remainder (when the step-3 centres do not end
//! flush with the grid) gets one extra window aligned with the last knot.

use alloc::vec::Vec;
use core::ops::RangeInclusive;
use core::time::Duration;

use crate::fit::{fit_l1_continuous, fit_l1_discrete, DataSet, FitConfig, FitResult};
use crate::{l1_distance_continuous, l1_residual_discrete};
use crate::{Error, HermiteSpline, KnotGrid, Result, TargetFunction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    /// Knot indices (0-based, inclusive) the local problem is solved on.
    pub range: RangeInclusive<usize>,
    pub center: usize,
    /// Knot indices whose value and derivative are taken from this window.
    pub kept: RangeInclusive<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPlan {
    pub n: usize,
    pub m: usize,
    pub keep: usize,
    pub step: usize,
    pub windows: Vec<Window>,
}

/// Plans the windows for `n` knots, window size `m` and `keep` central knots.
pub fn build_window_plan(n: usize, m: usize, keep: usize) -> Result<WindowPlan> {
    if !matches!(m, 3 | 5 | 7) {
        return Err(Error::Config(alloc::format!("window size {m} is not one of 3, 5, 7")));
    }
    let step = match keep {
        1 => 1,
        3 if m >= 5 => 3,
        3 => return Err(Error::config("keeping three knots needs a window of at least 5")),
        _ => return Err(Error::Config(alloc::format!("keep must be 1 or 3, got {keep}"))),
    };
    if n < m {
        return Err(Error::Size {
            n,
            min: m,
            max: usize::MAX,
        });
    }
    let half = m / 2;
    let last_center = n - 1 - half;
    let window = |c: usize, kept: RangeInclusive<usize>| Window {
        range: c - half..=c + half,
        center: c,
        kept,
    };

    let mut windows = Vec::new();
    let mut c = half;
    while c <= last_center {
        let lo = if windows.is_empty() { 0 } else { c + 1 - keep.div_ceil(2) };
        let hi = if c + step > last_center && c + half == n - 1 {
            n - 1
        } else {
            c + keep / 2
        };
        windows.push(window(c, lo..=hi));
        c += step;
    }
    let covered = *windows.last().map(|w| w.kept.end()).unwrap_or(&0);
    if covered < n - 1 {
        windows.push(window(last_center, covered + 1..=n - 1));
    }
    Ok(WindowPlan {
        n,
        m,
        keep,
        step,
        windows,
    })
}

/// Kept values and derivatives of one solved window.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSolution {
    pub window: usize,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
}

impl LocalSolution {
    fn from_fit(window: usize, w: &Window, fit: FitResult) -> Self {
        let offset = *w.range.start();
        let kept = *w.kept.start() - offset..=*w.kept.end() - offset;
        Self {
            window,
            values: fit.spline.values()[kept.clone()].to_vec(),
            derivs: fit.spline.derivs()[kept].to_vec(),
            converged: fit.converged,
            sweeps: fit.sweeps_used,
        }
    }
}

fn check_plan<'p>(grid: &KnotGrid, plan: &'p WindowPlan, index: usize) -> Result<&'p Window> {
    if plan.n != grid.len() {
        return Err(Error::Input(alloc::format!(
            "window plan is for {} knots, grid has {}",
            plan.n,
            grid.len()
        )));
    }
    plan.windows.get(index).ok_or(Error::Index {
        index,
        segments: plan.windows.len(),
    })
}

/// Solves window `index` of `plan` against `f` restricted to the window.
pub fn solve_window_continuous<F: TargetFunction + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    plan: &WindowPlan,
    index: usize,
    cfg: &FitConfig,
) -> Result<LocalSolution> {
    let w = check_plan(grid, plan, index)?;
    let sub = grid.slice(w.range.clone())?;
    let fit = fit_l1_continuous(f, &sub, cfg)?;
    Ok(LocalSolution::from_fit(index, w, fit))
}

/// Solves window `index` of `plan` against the data lying in the window,
/// both ends included.
pub fn solve_window_discrete(
    d: &DataSet,
    grid: &KnotGrid,
    plan: &WindowPlan,
    index: usize,
    cfg: &FitConfig,
) -> Result<LocalSolution> {
    let w = check_plan(grid, plan, index)?;
    let sub = grid.slice(w.range.clone())?;
    let local = d.within(sub.start(), sub.end());
    if local.len() < sub.len() {
        return Err(Error::WindowData {
            window: index,
            points: local.len(),
            knots: sub.len(),
        });
    }
    let fit = fit_l1_discrete(&local, &sub, cfg)?;
    Ok(LocalSolution::from_fit(index, w, fit))
}

/// Spline built from the kept pieces of every window, with the indices of
/// windows whose local fit did not converge.
pub fn assemble(
    grid: &KnotGrid,
    plan: &WindowPlan,
    locals: &[LocalSolution],
) -> Result<(HermiteSpline, Vec<usize>)> {
    if locals.len() != plan.windows.len() || plan.n != grid.len() {
        return Err(Error::input("local solutions do not match the window plan"));
    }
    let mut values = alloc::vec![f64::NAN; plan.n];
    let mut derivs = alloc::vec![f64::NAN; plan.n];
    let mut failed = Vec::new();
    for (k, (w, sol)) in plan.windows.iter().zip(locals).enumerate() {
        if sol.window != k || sol.values.len() != w.kept.clone().count() {
            return Err(Error::input("local solutions do not match the window plan"));
        }
        for (j, i) in w.kept.clone().enumerate() {
            values[i] = sol.values[j];
            derivs[i] = sol.derivs[j];
        }
        if !sol.converged {
            failed.push(k);
        }
    }
    Ok((HermiteSpline::new(grid.clone(), values, derivs)?, failed))
}

fn finish(spline: HermiteSpline, objective: f64, locals: &[LocalSolution], failed: Vec<usize>, solve_time: Duration) -> FitResult {
    FitResult {
        spline,
        objective,
        converged: failed.is_empty(),
        sweeps_used: locals.iter().map(|l| l.sweeps).sum(),
        solve_time,
        failed_windows: failed,
    }
}

/// Assembles a continuous sliding-window result from solved windows; the
/// objective is the L1 distance of the assembled spline over the whole grid.
pub fn assemble_continuous<F: TargetFunction + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    plan: &WindowPlan,
    locals: &[LocalSolution],
    cfg: &FitConfig,
    solve_time: Duration,
) -> Result<FitResult> {
    let (spline, failed) = assemble(grid, plan, locals)?;
    let objective = l1_distance_continuous(&spline, f, cfg.quadrature_resolution)?;
    Ok(finish(spline, objective, locals, failed, solve_time))
}

/// Discrete counterpart of [`assemble_continuous`].
pub fn assemble_discrete(
    d: &DataSet,
    grid: &KnotGrid,
    plan: &WindowPlan,
    locals: &[LocalSolution],
    solve_time: Duration,
) -> Result<FitResult> {
    let (spline, failed) = assemble(grid, plan, locals)?;
    let objective = l1_residual_discrete(&spline, d)?;
    Ok(finish(spline, objective, locals, failed, solve_time))
}

/// Sliding-window L1 spline fit of a function, windows solved in order.
pub fn fit_window_continuous<F: TargetFunction + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    plan: &WindowPlan,
    cfg: &FitConfig,
) -> Result<FitResult> {
    #[cfg(feature = "std")]
    let started = std::time::Instant::now();
    let locals = (0..plan.windows.len())
        .map(|k| solve_window_continuous(f, grid, plan, k, cfg))
        .collect::<Result<Vec<_>>>()?;
    #[cfg(feature = "std")]
    let elapsed = started.elapsed();
    #[cfg(not(feature = "std"))]
    let elapsed = Duration::ZERO;
    assemble_continuous(f, grid, plan, &locals, cfg, elapsed)
}

/// Sliding-window L1 spline fit of a dataset, windows solved in order.
pub fn fit_window_discrete(
    d: &DataSet,
    grid: &KnotGrid,
    plan: &WindowPlan,
    cfg: &FitConfig,
) -> Result<FitResult> {
    #[cfg(feature = "std")]
    let started = std::time::Instant::now();
    let locals = (0..plan.windows.len())
        .map(|k| solve_window_discrete(d, grid, plan, k, cfg))
        .collect::<Result<Vec<_>>>()?;
    #[cfg(feature = "std")]
    let elapsed = started.elapsed();
    #[cfg(not(feature = "std"))]
    let elapsed = Duration::ZERO;
    assemble_discrete(d, grid, plan, &locals, elapsed)
}
