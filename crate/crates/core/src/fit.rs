//! Global spline fits: best approximation of a function or a dataset among
//! the interpolation splines on a knot grid.
//!
//! The unknowns are the knot values `y`. For every candidate `y` the knot
//! derivatives are those of the interpolation spline through `y` (L1 or
//! natural L2), so every spline the solver considers belongs to the fitting
//! family by construction. The outer problem is solved by cyclic coordinate
//! descent over `y`, each coordinate by golden-section search.

use alloc::vec::Vec;
use core::ops::Range;
use core::time::Duration;

pub use crate::data::DataSet;
use crate::hermite::SplineRef;
use crate::interp::{natural_derivatives, solve_derivatives, WarmStart};
use crate::objective::{continuous_segment, discrete_segment, segment_data_ranges, Loss};
use crate::{Error, HermiteSpline, InterpConfig, KnotGrid, Result, TargetFunction};

/// Inverse golden ratio.
const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub inner: InterpConfig,
    /// Outer stopping threshold: on objective improvement per sweep, and on
    /// the golden-section bracket width.
    pub outer_tol: f64,
    pub outer_max_sweeps: usize,
    /// Quadrature panels per smooth piece of each knot interval.
    pub quadrature_resolution: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            inner: InterpConfig::default(),
            outer_tol: 1e-6,
            outer_max_sweeps: 200,
            quadrature_resolution: 64,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        self.inner.validate()?;
        if !(self.outer_tol > 0.0) {
            return Err(Error::config("outer_tol must be positive"));
        }
        if self.outer_max_sweeps == 0 || self.quadrature_resolution == 0 {
            return Err(Error::config(
                "outer_max_sweeps and quadrature_resolution must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spline: HermiteSpline,
    /// Outer objective of `spline`: L1/ℓ1 distance for L1 fits, squared L2/ℓ2
    /// distance for L2 fits.
    pub objective: f64,
    pub converged: bool,
    pub sweeps_used: usize,
    /// Wall-clock time; zero unless the `std` feature is enabled.
    pub solve_time: Duration,
    /// Sliding-window fits only: windows whose local fit did not converge.
    pub failed_windows: Vec<usize>,
}

/// Best L1 approximation of `f` among the L1 interpolation splines on `grid`.
///
/// Only a local minimum in the knot values is certified.
pub fn fit_l1_continuous<F: TargetFunction + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    cfg: &FitConfig,
) -> Result<FitResult> {
    Fit::new(grid, Fidelity::Continuous(f, cfg.quadrature_resolution), Norm::L1, cfg)?.run()
}

/// Best ℓ1 approximation of the data among the L1 interpolation splines on
/// `grid`.
pub fn fit_l1_discrete(d: &DataSet, grid: &KnotGrid, cfg: &FitConfig) -> Result<FitResult> {
    Fit::<dyn TargetFunction>::new(grid, Fidelity::Discrete(d), Norm::L1, cfg)?.run()
}

/// Least-squares fit of `f` among the natural cubic interpolating splines.
pub fn fit_l2_continuous<F: TargetFunction + ?Sized>(
    f: &F,
    grid: &KnotGrid,
    cfg: &FitConfig,
) -> Result<FitResult> {
    Fit::new(grid, Fidelity::Continuous(f, cfg.quadrature_resolution), Norm::L2, cfg)?.run()
}

/// Least-squares fit of the data among the natural cubic interpolating splines.
pub fn fit_l2_discrete(d: &DataSet, grid: &KnotGrid, cfg: &FitConfig) -> Result<FitResult> {
    Fit::<dyn TargetFunction>::new(grid, Fidelity::Discrete(d), Norm::L2, cfg)?.run()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Norm {
    L1,
    L2,
}

enum Fidelity<'a, F: ?Sized> {
    Continuous(&'a F, usize),
    Discrete(&'a DataSet),
}

struct Fit<'a, F: ?Sized> {
    grid: &'a KnotGrid,
    fidelity: Fidelity<'a, F>,
    /// Discrete case: data points evaluated on each knot interval.
    data_ranges: Vec<Range<usize>>,
    norm: Norm,
    cfg: &'a FitConfig,
}

/// Knot values, their interpolation derivatives and the outer objective,
/// kept per knot interval so a trial move only re-evaluates what it changed.
struct State {
    y: Vec<f64>,
    b: Vec<f64>,
    segments: Vec<f64>,
    objective: f64,
}

impl<'a, F: TargetFunction + ?Sized> Fit<'a, F> {
    fn new(
        grid: &'a KnotGrid,
        fidelity: Fidelity<'a, F>,
        norm: Norm,
        cfg: &'a FitConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if let Fidelity::Discrete(d) = &fidelity {
            if d.len() < grid.len() {
                return Err(Error::InsufficientData {
                    points: d.len(),
                    knots: grid.len(),
                });
            }
            for &x in [d.x()[0], d.x()[d.len() - 1]].iter() {
                if !grid.contains(x) {
                    return Err(Error::Domain {
                        t: x,
                        lo: grid.start(),
                        hi: grid.end(),
                    });
                }
            }
        }
        let data_ranges = match &fidelity {
            Fidelity::Discrete(d) => segment_data_ranges(grid.nodes(), d),
            Fidelity::Continuous(..) => Vec::new(),
        };
        Ok(Self {
            grid,
            fidelity,
            data_ranges,
            norm,
            cfg,
        })
    }

    fn loss(&self) -> Loss {
        match self.norm {
            Norm::L1 => Loss::Absolute,
            Norm::L2 => Loss::Squared,
        }
    }

    fn segment_objective(&self, y: &[f64], b: &[f64], j: usize) -> Result<f64> {
        let s = SplineRef {
            x: self.grid.nodes(),
            y,
            b,
        };
        match &self.fidelity {
            Fidelity::Continuous(f, res) => continuous_segment(s, *f, j, *res, self.loss()),
            Fidelity::Discrete(d) => {
                Ok(discrete_segment(s, d, j, self.data_ranges[j].clone(), self.loss()))
            }
        }
    }

    fn state(&self, y: Vec<f64>, b: Vec<f64>) -> Result<State> {
        let segments = (0..self.grid.segments())
            .map(|j| self.segment_objective(&y, &b, j))
            .collect::<Result<Vec<_>>>()?;
        let objective = segments.iter().sum();
        Ok(State {
            y,
            b,
            segments,
            objective,
        })
    }

    /// Derivatives for knot values `y`; `warm` describes a change of `y[i]`
    /// by `dy` from values whose derivatives were `prev`.
    fn derivatives(&self, y: &[f64], warm: Option<(&[f64], usize, f64)>) -> (Vec<f64>, bool) {
        let x = self.grid.nodes();
        match self.norm {
            Norm::L2 => (natural_derivatives(x, y), true),
            Norm::L1 => {
                let warm = warm.map(|(prev, i, dy)| {
                    let lo = i.saturating_sub(1);
                    let hi = (i + 1).min(x.len() - 1);
                    let h = (x[i] - x[lo]).max(x[hi] - x[i]);
                    WarmStart {
                        b: prev,
                        changed: i..i + 1,
                        scale: dy / h,
                    }
                });
                let sol = solve_derivatives(x, y, warm, &self.cfg.inner);
                (sol.b, sol.converged)
            }
        }
    }

    fn initial_values(&self) -> Result<Vec<f64>> {
        let x = self.grid.nodes();
        match &self.fidelity {
            Fidelity::Continuous(f, _) => x
                .iter()
                .map(|&t| {
                    let v = f.eval(t);
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Evaluation { x: t })
                    }
                })
                .collect(),
            Fidelity::Discrete(d) => Ok(x.iter().map(|&t| nearest_ordinate(d, t)).collect()),
        }
    }

    /// Range of the target over `[lo, hi]`.
    fn spread(&self, lo: f64, hi: f64) -> f64 {
        match &self.fidelity {
            Fidelity::Continuous(f, res) => {
                let samples = 2 * res + 1;
                let step = (hi - lo) / (samples - 1) as f64;
                let mut min = f64::INFINITY;
                let mut max = f64::NEG_INFINITY;
                let mut visit = |v: f64| {
                    if v.is_finite() {
                        min = min.min(v);
                        max = max.max(v);
                    }
                };
                for k in 0..samples {
                    visit(f.eval(lo + step * k as f64));
                }
                for &t in f.breakpoints() {
                    if t > lo && t <= hi {
                        visit(f.eval(t.next_down()));
                    }
                }
                if max >= min {
                    max - min
                } else {
                    0.0
                }
            }
            Fidelity::Discrete(d) => d
                .ordinate_bounds(d.indices_within(lo, hi))
                .map_or(0.0, |(a, b)| b - a),
        }
    }

    fn run(self) -> Result<FitResult> {
        #[cfg(feature = "std")]
        let started = std::time::Instant::now();

        let x = self.grid.nodes();
        let n = x.len();
        let y = self.initial_values()?;
        let (b, mut inner_ok) = self.derivatives(&y, None);
        let mut state = self.state(y, b)?;

        let global_spread = self.spread(x[0], x[n - 1]);
        let floor_spread = 1e-3 * global_spread;

        let mut converged = false;
        let mut sweeps = 0;
        while sweeps < self.cfg.outer_max_sweeps {
            sweeps += 1;
            let start = state.objective;
            for i in 0..n {
                let lo = x[i.saturating_sub(1)];
                let hi = x[(i + 1).min(n - 1)];
                let spread = self.spread(lo, hi).max(floor_spread);
                if spread == 0.0 {
                    continue;
                }
                inner_ok &= self.improve_coordinate(&mut state, i, 4.0 * spread)?;
            }
            assert!(
                state.objective <= start,
                "outer objective increased during a sweep"
            );
            if start - state.objective < self.cfg.outer_tol {
                converged = true;
                break;
            }
        }

        let State { y, b, objective, .. } = state;
        let spline = HermiteSpline::new(self.grid.clone(), y, b)?;
        Ok(FitResult {
            spline,
            objective,
            converged: converged && inner_ok,
            sweeps_used: sweeps,
            #[cfg(feature = "std")]
            solve_time: started.elapsed(),
            #[cfg(not(feature = "std"))]
            solve_time: Duration::ZERO,
            failed_windows: Vec::new(),
        })
    }

    /// Golden-section search for `y[i]` over a bracket of the given width
    /// centred on its current value. Keeps the best point seen, so the
    /// objective never increases.
    fn improve_coordinate(&self, state: &mut State, i: usize, width: f64) -> Result<bool> {
        let current = state.y[i];
        let mut trial_y = state.y.clone();
        let mut trial_segments = state.segments.clone();
        let mut best: Option<Trial> = None;
        let mut all_ok = true;
        let mut eval = |v: f64, best: &mut Option<Trial>| -> Result<f64> {
            trial_y[i] = v;
            let (b, ok) = self.derivatives(&trial_y, Some((&state.b, i, v - current)));
            all_ok &= ok;
            // intervals with an end whose value or derivative moved
            let moved = |k: usize| k == i || b[k] != state.b[k];
            let lo = (0..b.len()).find(|&k| moved(k)).unwrap_or(i);
            let hi = (0..b.len()).rfind(|&k| moved(k)).unwrap_or(i);
            let changed = lo.saturating_sub(1)..hi.min(b.len() - 2) + 1;
            trial_segments.copy_from_slice(&state.segments);
            for j in changed.clone() {
                trial_segments[j] = self.segment_objective(&trial_y, &b, j)?;
            }
            let obj: f64 = trial_segments.iter().sum();
            if obj < best.as_ref().map_or(state.objective, |t| t.objective) {
                *best = Some(Trial {
                    value: v,
                    b,
                    segments: trial_segments[changed.clone()].to_vec(),
                    changed,
                    objective: obj,
                });
            }
            Ok(obj)
        };

        let mut a = current - 0.5 * width;
        let mut z = current + 0.5 * width;
        let mut c = z - GOLDEN * (z - a);
        let mut d = a + GOLDEN * (z - a);
        let mut fc = eval(c, &mut best)?;
        let mut fd = eval(d, &mut best)?;
        while z - a > self.cfg.outer_tol {
            if fc <= fd {
                z = d;
                d = c;
                fd = fc;
                c = z - GOLDEN * (z - a);
                fc = eval(c, &mut best)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (z - a);
                fd = eval(d, &mut best)?;
            }
        }

        if let Some(t) = best {
            state.y[i] = t.value;
            state.b = t.b;
            state.segments[t.changed].copy_from_slice(&t.segments);
            state.objective = t.objective;
        }
        Ok(all_ok)
    }
}

struct Trial {
    value: f64,
    b: Vec<f64>,
    changed: Range<usize>,
    segments: Vec<f64>,
    objective: f64,
}

/// Ordinate of the data point nearest `t`; ties go to the left point.
fn nearest_ordinate(d: &DataSet, t: f64) -> f64 {
    let x = d.x();
    let k = x.partition_point(|&v| v < t);
    if k == 0 {
        return d.y()[0];
    }
    if k == x.len() {
        return d.y()[k - 1];
    }
    // first point at or right of t, and the last point left of it
    let right = k;
    let left = x[..k].partition_point(|&v| v < x[k - 1]);
    if t - x[k - 1] <= x[right] - t {
        d.y()[left]
    } else {
        d.y()[right]
    }
}
