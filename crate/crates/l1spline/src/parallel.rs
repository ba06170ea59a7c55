//! Sliding-window fits with the windows solved on a thread pool.
//!
//! Every window is an independent pure solve and assembly only reads the
//! kept entries, so the result does not depend on the thread count.

use std::time::Instant;

use l1spline_core::window::{assemble_continuous, assemble_discrete, solve_window_continuous, solve_window_discrete};
use l1spline_core::{DataSet, FitConfig, FitResult, KnotGrid, TargetFunction, WindowPlan};
use rayon::prelude::*;

use crate::Result;

/// Pool with at most `threads` workers; `None` or 0 uses every core.
fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()?)
}

pub fn fit_window_continuous_par<F: TargetFunction + Sync + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    plan: &WindowPlan,
    cfg: &FitConfig,
    threads: Option<usize>,
) -> Result<FitResult> {
    let pool = pool(threads)?;
    let started = Instant::now();
    let locals = pool.install(|| {
        (0..plan.windows.len())
            .into_par_iter()
            .map(|k| solve_window_continuous(f, grid, plan, k, cfg))
            .collect::<l1spline_core::Result<Vec<_>>>()
    })?;
    Ok(assemble_continuous(f, grid, plan, &locals, cfg, started.elapsed())?)
}

pub fn fit_window_discrete_par(
    d: &DataSet,
    grid: &KnotGrid,
    plan: &WindowPlan,
    cfg: &FitConfig,
    threads: Option<usize>,
) -> Result<FitResult> {
    let pool = pool(threads)?;
    let started = Instant::now();
    let locals = pool.install(|| {
        (0..plan.windows.len())
            .into_par_iter()
            .map(|k| solve_window_discrete(d, grid, plan, k, cfg))
            .collect::<l1spline_core::Result<Vec<_>>>()
    })?;
    Ok(assemble_discrete(d, grid, plan, &locals, started.elapsed())?)
}
