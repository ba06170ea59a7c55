//! Knot derivatives for prescribed knot values: the L1 interpolation spline,
//! which minimizes `∫|s''|`, and the natural cubic spline, which minimizes
//! `∫(s'')²`.
//!
//! The L1 objective, as a function of the derivative vector `b`, is a sum of
//! per-segment terms `G_j(b_j − Δ_j, b_{j+1} − Δ_j)` where `Δ_j` is the chord
//! slope. Each `G_j` is a norm on the plane: convex, positively homogeneous and
//! continuously differentiable everywhere except at the origin, i.e. when the
//! segment is exactly linear. Coordinate descent alone can stall at those
//! kinks, so the solver runs coordinate descent on the smoothed terms
//! `√(G_j² + μ²)` for a decreasing sequence of `μ`, finishes with exact
//! coordinate descent, and then probes every adjacent pair of derivatives for
//! a descent direction that the coordinate axes miss.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::hermite::{segment_cost_hessian, segment_cost, segment_cost_gradient, total_curvature};
use crate::math::sqrt;
use crate::{Error, HermiteSpline, KnotGrid, Result};

/// `argmin_c G(a, c) = −κ a` for the per-segment norm `G`, and likewise in the
/// other argument. Equals `1 − √(2/5)`.
const KAPPA: f64 = 0.367_544_467_966_324_1;

/// Smoothing levels, relative to the slope scale of the data.
const SMOOTHING_STAGES: i32 = 12;

/// Ratio between consecutive smoothing levels.
const STAGE_RATIO: f64 = 0.1;

/// Cap on Newton iterations per smoothing level.
const NEWTON_ITERATIONS: usize = 100;

/// Directions probed per derivative pair when looking for a non-axis descent.
const ESCAPE_DIRECTIONS: usize = 32;

/// Slope of the 1-D objective treated as zero when looking for flat minima.
const FLAT_SLOPE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Among equal-objective derivatives, prefer the smallest Euclidean norm.
    #[default]
    MinNorm,
    /// Keep whatever minimizer coordinate descent lands on.
    FirstFound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpConfig {
    /// Objective improvement below which the solver stops.
    pub tol: f64,
    /// Cap on coordinate sweeps, summed over all smoothing stages.
    pub max_iter: usize,
    pub tie_break: TieBreak,
}

impl Default for InterpConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
            tie_break: TieBreak::MinNorm,
        }
    }
}

impl InterpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::config("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// An L1 interpolation spline with its solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub spline: HermiteSpline,
    /// `∫|s''|` of `spline`.
    pub objective: f64,
    /// False when the sweep cap was hit; `spline` is then the best iterate.
    pub converged: bool,
    pub sweeps: usize,
}

/// L1 cubic Hermite interpolation spline through `(x_i, values_i)`.
pub fn solve_l1_interpolation(
    grid: &KnotGrid,
    values: &[f64],
    cfg: &InterpConfig,
) -> Result<Interpolation> {
    check_values(grid, values)?;
    cfg.validate()?;
    let sol = solve_derivatives(grid.nodes(), values, None, cfg);
    Ok(Interpolation {
        spline: HermiteSpline::new(grid.clone(), values.to_vec(), sol.b)?,
        objective: sol.objective,
        converged: sol.converged,
        sweeps: sol.sweeps,
    })
}

/// Natural cubic interpolating spline (`s'' = 0` at both ends) in Hermite form.
pub fn solve_l2_interpolation(grid: &KnotGrid, values: &[f64]) -> Result<HermiteSpline> {
    check_values(grid, values)?;
    let b = natural_derivatives(grid.nodes(), values);
    HermiteSpline::new(grid.clone(), values.to_vec(), b)
}

fn check_values(grid: &KnotGrid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::Input(alloc::format!(
            "{} values for {} knots",
            values.len(),
            grid.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("knot values must be finite"));
    }
    Ok(())
}

/// Knot derivatives of the natural cubic spline: C2 continuity at interior
/// knots plus zero curvature at the ends, solved by the Thomas algorithm.
pub(crate) fn natural_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|j| (y[j + 1] - y[j]) / h[j]).collect();

    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 2.0;
    sup[0] = 1.0;
    rhs[0] = 3.0 * delta[0];
    for i in 1..n - 1 {
        let (l, r) = (1.0 / h[i - 1], 1.0 / h[i]);
        sub[i] = l;
        diag[i] = 2.0 * (l + r);
        sup[i] = r;
        rhs[i] = 3.0 * (delta[i - 1] * l + delta[i] * r);
    }
    sub[n - 1] = 1.0;
    diag[n - 1] = 2.0;
    rhs[n - 1] = 3.0 * delta[n - 2];
    thomas(&sub, &diag, &sup, rhs)
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

/// Exhaustive grid search of `b ∈ [−box, box]^n` at spacing `step`, followed
/// by a local refinement around the best point down to spacing `step / 100`
/// (two nested passes of 21 points per axis). Exponential in `n`, so limited
/// to four knots.
pub fn oracle_min_over_derivatives(
    grid: &KnotGrid,
    values: &[f64],
    box_half_width: f64,
    step: f64,
) -> Result<(Vec<f64>, f64)> {
    const MAX_KNOTS: usize = 4;
    check_values(grid, values)?;
    if grid.len() > MAX_KNOTS {
        return Err(Error::Size {
            n: grid.len(),
            min: 2,
            max: MAX_KNOTS,
        });
    }
    if !(box_half_width > 0.0) || !(step > 0.0) {
        return Err(Error::config("box and step must be positive"));
    }
    let x = grid.nodes();
    let n = grid.len();
    let coarse = crate::math::floor(box_half_width / step) as i64;
    let origin = vec![0.0; n];
    // each pass contains the previous best point, so the value never grows
    let (best, _) = grid_search(x, values, &origin, step, coarse);
    let (best, _) = grid_search(x, values, &best, step / 10.0, 10);
    Ok(grid_search(x, values, &best, step / 100.0, 10))
}

/// Minimum of the curvature functional over `center + step·k`, `k ∈ [−r, r]^n`.
fn grid_search(x: &[f64], y: &[f64], center: &[f64], step: f64, r: i64) -> (Vec<f64>, f64) {
    let n = x.len();
    let mut idx = vec![-r; n];
    let mut b = vec![0.0; n];
    let mut best = center.to_vec();
    let mut best_val = f64::INFINITY;
    loop {
        for k in 0..n {
            b[k] = center[k] + step * idx[k] as f64;
        }
        let v = total_curvature(x, y, &b);
        if v < best_val {
            best_val = v;
            best.copy_from_slice(&b);
        }
        let mut k = 0;
        loop {
            if k == n {
                return (best, best_val);
            }
            idx[k] += 1;
            if idx[k] <= r {
                break;
            }
            idx[k] = -r;
            k += 1;
        }
    }
}

/// Starting point for a re-solve after some knot values changed.
#[derive(Debug, Clone)]
pub(crate) struct WarmStart<'a> {
    /// Optimal derivatives for the previous values.
    pub b: &'a [f64],
    /// Knot indices whose values changed.
    pub changed: Range<usize>,
    /// Magnitude of the change, in slope units.
    pub scale: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct DerivativeSolution {
    pub b: Vec<f64>,
    pub objective: f64,
    pub converged: bool,
    pub sweeps: usize,
}

/// Derivatives of the L1 interpolation spline through `(x_i, y_i)`.
pub(crate) fn solve_derivatives(
    x: &[f64],
    y: &[f64],
    warm: Option<WarmStart<'_>>,
    cfg: &InterpConfig,
) -> DerivativeSolution {
    let mut solver = DerivativeSolver::new(x, y, warm, cfg);
    solver.run();
    let objective = solver.objective();
    DerivativeSolution {
        b: solver.b,
        objective,
        converged: solver.converged,
        sweeps: solver.sweeps,
    }
}

struct DerivativeSolver<'a> {
    h: Vec<f64>,
    delta: Vec<f64>,
    b: Vec<f64>,
    cfg: &'a InterpConfig,
    /// Slope scale used for smoothing levels and step thresholds.
    scale: f64,
    first_mu: f64,
    dirty: Vec<bool>,
    touched: Vec<bool>,
    sweeps: usize,
    converged: bool,
}

impl<'a> DerivativeSolver<'a> {
    fn new(x: &[f64], y: &[f64], warm: Option<WarmStart<'_>>, cfg: &'a InterpConfig) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|j| (y[j + 1] - y[j]) / h[j]).collect();
        let scale = delta.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(f64::MIN_POSITIVE);
        let coldest = scale * 0.1;
        let (b, dirty, first_mu) = match warm {
            Some(w) if w.b.len() == n => {
                let mut dirty = vec![false; n];
                let lo = w.changed.start.saturating_sub(1);
                let hi = (w.changed.end + 1).min(n);
                dirty[lo..hi].iter_mut().for_each(|d| *d = true);
                let mu = w.scale.abs().min(coldest).max(scale * 1e-12);
                (w.b.to_vec(), dirty, mu)
            }
            _ => (centered_slopes(x, y, &delta), vec![true; n], coldest),
        };
        Self {
            touched: dirty.clone(),
            h,
            delta,
            b,
            cfg,
            scale,
            first_mu,
            dirty,
            sweeps: 0,
            converged: true,
        }
    }

    fn n(&self) -> usize {
        self.b.len()
    }

    fn objective(&self) -> f64 {
        (0..self.n() - 1).map(|j| self.cost(j, self.b[j], self.b[j + 1], 0.0)).sum()
    }

    #[inline]
    fn cost(&self, j: usize, bl: f64, br: f64, mu: f64) -> f64 {
        let c = segment_cost(self.h[j], self.delta[j], bl, br);
        if mu == 0.0 {
            c
        } else {
            sqrt(c * c + mu * mu)
        }
    }

    #[inline]
    fn cost_gradient(&self, j: usize, bl: f64, br: f64, mu: f64) -> (f64, f64) {
        let (gl, gr) = segment_cost_gradient(self.h[j], self.delta[j], bl, br);
        if mu == 0.0 {
            return (gl, gr);
        }
        let c = segment_cost(self.h[j], self.delta[j], bl, br);
        let w = c / sqrt(c * c + mu * mu);
        (gl * w, gr * w)
    }

    /// Objective restricted to the terms that involve `b_i = v`.
    fn local(&self, i: usize, v: f64, mu: f64) -> f64 {
        let mut f = 0.0;
        if i > 0 {
            f += self.cost(i - 1, self.b[i - 1], v, mu);
        }
        if i + 1 < self.n() {
            f += self.cost(i, v, self.b[i + 1], mu);
        }
        f
    }

    fn local_slope(&self, i: usize, v: f64, mu: f64) -> f64 {
        let mut g = 0.0;
        if i > 0 {
            g += self.cost_gradient(i - 1, self.b[i - 1], v, mu).1;
        }
        if i + 1 < self.n() {
            g += self.cost_gradient(i, v, self.b[i + 1], mu).0;
        }
        g
    }

    /// Interval known to contain a minimizer of the 1-D objective in `b_i`.
    fn bracket(&self, i: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if i > 0 {
            let d = self.delta[i - 1];
            let m = d - KAPPA * (self.b[i - 1] - d);
            lo = lo.min(m);
            hi = hi.max(m);
        }
        if i + 1 < self.n() {
            let d = self.delta[i];
            let m = d - KAPPA * (self.b[i + 1] - d);
            lo = lo.min(m);
            hi = hi.max(m);
        }
        (lo, hi)
    }

    /// Second derivative of the 1-D objective in `b_i` (zero where the
    /// unsmoothed terms are locally linear).
    fn local_curvature(&self, i: usize, v: f64, mu: f64) -> f64 {
        let term = |j: usize, bl: f64, br: f64, right: bool| {
            let (gl, gr) = segment_cost_gradient(self.h[j], self.delta[j], bl, br);
            let [hl, _, hr] = segment_cost_hessian(self.h[j], self.delta[j], bl, br);
            let (g, hess) = if right { (gr, hr) } else { (gl, hl) };
            if mu == 0.0 {
                return hess;
            }
            let c = segment_cost(self.h[j], self.delta[j], bl, br);
            let phi = sqrt(c * c + mu * mu);
            c / phi * hess + mu * mu / (phi * phi * phi) * g * g
        };
        let mut k = 0.0;
        if i > 0 {
            k += term(i - 1, self.b[i - 1], v, true);
        }
        if i + 1 < self.n() {
            k += term(i, v, self.b[i + 1], false);
        }
        k
    }

    /// Minimizer of the 1-D objective in `b_i` to within `resolution` (to
    /// exhaustion when it is zero): Newton steps on the monotone derivative,
    /// falling back to bisection when a step leaves the bracket or stalls.
    fn minimize_coordinate(&self, i: usize, mu: f64, resolution: f64) -> f64 {
        let (mut lo, mut hi) = self.bracket(i);
        if lo == hi {
            return lo;
        }
        if self.local_slope(i, lo, mu) >= 0.0 {
            return lo;
        }
        if self.local_slope(i, hi, mu) <= 0.0 {
            return hi;
        }
        let mut x = self.b[i].clamp(lo, hi);
        let (mut step, mut prev_step) = (hi - lo, hi - lo);
        for _ in 0..200 {
            let g = self.local_slope(i, x, mu);
            if g > 0.0 {
                hi = x;
            } else if g < 0.0 {
                lo = x;
            } else {
                return x;
            }
            if hi - lo <= resolution {
                break;
            }
            let k = self.local_curvature(i, x, mu);
            let newton = x - g / k;
            let next = if k > 0.0 && newton > lo && newton < hi && (g / k).abs() < 0.5 * prev_step {
                newton
            } else {
                0.5 * (lo + hi)
            };
            prev_step = step;
            step = (next - x).abs();
            if step <= resolution {
                return next;
            }
            if next <= lo || next >= hi {
                break;
            }
            x = next;
        }
        if self.local(i, lo, mu) <= self.local(i, hi, mu) {
            lo
        } else {
            hi
        }
    }

    fn step_threshold(&self) -> f64 {
        1e-13 * self.scale.max(1.0)
    }

    /// Coordinate descent over the dirty coordinates until none is left.
    /// Smoothed levels are only solved to a precision comparable to `mu`.
    fn descend(&mut self, mu: f64) -> bool {
        let n = self.n();
        let resolution = 1e-3 * mu;
        let eps = self.step_threshold().max(resolution);
        loop {
            if !self.dirty.iter().any(|&d| d) {
                return true;
            }
            if self.sweeps >= self.cfg.max_iter {
                return false;
            }
            self.sweeps += 1;
            for i in 0..n {
                if !self.dirty[i] {
                    continue;
                }
                self.dirty[i] = false;
                let old = self.b[i];
                let new = self.minimize_coordinate(i, mu, resolution);
                if (new - old).abs() > eps && self.local(i, new, mu) < self.local(i, old, mu) {
                    self.b[i] = new;
                    self.touched[i] = true;
                    if i > 0 {
                        self.dirty[i - 1] = true;
                    }
                    if i + 1 < n {
                        self.dirty[i + 1] = true;
                    }
                }
            }
        }
    }

    /// Smoothed cost of segment `j` with its gradient and Hessian
    /// `[∂ll, ∂lr, ∂rr]`.
    fn smoothed_terms(&self, j: usize, bl: f64, br: f64, mu: f64) -> (f64, (f64, f64), [f64; 3]) {
        let (h, d) = (self.h[j], self.delta[j]);
        let c = segment_cost(h, d, bl, br);
        let (gl, gr) = segment_cost_gradient(h, d, bl, br);
        let [hll, hlr, hrr] = segment_cost_hessian(h, d, bl, br);
        let phi = sqrt(c * c + mu * mu);
        let w = c / phi;
        let v = mu * mu / (phi * phi * phi);
        (
            phi,
            (w * gl, w * gr),
            [w * hll + v * gl * gl, w * hlr + v * gl * gr, w * hrr + v * gr * gr],
        )
    }

    fn smoothed_objective(&self, b: &[f64], mu: f64) -> f64 {
        (0..b.len() - 1).map(|j| self.cost(j, b[j], b[j + 1], mu)).sum()
    }

    /// Levenberg-Marquardt iterations on the objective smoothed at level
    /// `mu`, whose Hessian is tridiagonal. Stops once a step is below a
    /// precision comparable to `mu`.
    fn newton(&mut self, mu: f64) -> bool {
        let n = self.n();
        let tol = 1e-2 * mu;
        let mut f = self.smoothed_objective(&self.b, mu);
        let mut lambda = 1e-3;
        let (mut sub, mut diag, mut sup) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut grad = vec![0.0; n];
        let mut damped = vec![0.0; n];
        let mut trial = vec![0.0; n];
        for _ in 0..NEWTON_ITERATIONS {
            if self.sweeps >= self.cfg.max_iter {
                return false;
            }
            self.sweeps += 1;
            sub.fill(0.0);
            diag.fill(0.0);
            sup.fill(0.0);
            grad.fill(0.0);
            for j in 0..n - 1 {
                let (_, (gl, gr), [hll, hlr, hrr]) = self.smoothed_terms(j, self.b[j], self.b[j + 1], mu);
                grad[j] += gl;
                grad[j + 1] += gr;
                diag[j] += hll;
                diag[j + 1] += hrr;
                sup[j] += hlr;
                sub[j + 1] += hlr;
            }
            let floor = 1e-12 * diag.iter().fold(0.0f64, |m, &d| m.max(d)) + f64::MIN_POSITIVE;
            loop {
                for i in 0..n {
                    damped[i] = diag[i] + lambda * (diag[i] + floor);
                }
                let step = thomas(&sub, &damped, &sup, grad.iter().map(|g| -g).collect());
                for i in 0..n {
                    trial[i] = self.b[i] + step[i];
                }
                let ft = self.smoothed_objective(&trial, mu);
                let size = step.iter().fold(0.0f64, |m, s| m.max(s.abs()));
                if ft < f || (ft == f && size <= tol) {
                    self.b.copy_from_slice(&trial);
                    f = ft;
                    lambda = (lambda / 3.0).max(1e-12);
                    if size <= tol {
                        return true;
                    }
                    break;
                }
                if size <= tol || lambda > 1e16 {
                    return true;
                }
                lambda *= 4.0;
            }
        }
        true
    }

    fn run(&mut self) {
        if self.n() == 2 {
            // a single segment is minimized (to zero) by the chord slope
            let d = self.delta[0];
            self.b = vec![d, d];
            return;
        }
        if self.objective() == 0.0 {
            return;
        }
        let floor = self.scale * libm::pow(10.0, -(SMOOTHING_STAGES as f64));
        let start = self.b.clone();
        let mut mu = self.first_mu;
        let mut ok = true;
        // the smoothed minimizer moves about linearly in mu, so each level
        // starts from the extrapolation of the last two
        let mut previous: Option<(f64, Vec<f64>)> = None;
        while ok && mu >= floor {
            ok = self.newton(mu);
            let next = mu * STAGE_RATIO;
            let solved = self.b.clone();
            if let Some((mu_prev, b_prev)) = &previous {
                let t = (next - mu) / (mu - mu_prev);
                for (b, (&now, &before)) in self.b.iter_mut().zip(solved.iter().zip(b_prev)) {
                    *b = now + t * (now - before);
                }
            }
            previous = Some((mu, solved));
            mu = next;
        }
        if let Some((_, solved)) = previous {
            self.b = solved;
        }
        let moved = 1e-9 * self.scale;
        for ((t, &b), &b0) in self.touched.iter_mut().zip(&self.b).zip(&start) {
            *t |= (b - b0).abs() > moved;
        }
        for _ in 0..64 {
            if !ok {
                break;
            }
            self.touched
                .iter()
                .zip(self.dirty.iter_mut())
                .for_each(|(&t, d)| *d |= t);
            ok = self.descend(0.0);
            if !ok || !self.escape() {
                break;
            }
        }
        if ok && self.cfg.tie_break == TieBreak::MinNorm {
            self.polish();
        }
        self.converged = ok;
    }

    /// Objective terms touching the pair `(b_j, b_{j+1})` evaluated at `(u, v)`.
    fn pair_local(&self, j: usize, u: f64, v: f64) -> f64 {
        let n = self.n();
        let mut f = self.cost(j, u, v, 0.0);
        if j > 0 {
            f += self.cost(j - 1, self.b[j - 1], u, 0.0);
        }
        if j + 2 < n {
            f += self.cost(j + 1, v, self.b[j + 2], 0.0);
        }
        f
    }

    fn pair_slope(&self, j: usize, u: f64, v: f64, d: (f64, f64)) -> f64 {
        let n = self.n();
        let (gl, gr) = self.cost_gradient(j, u, v, 0.0);
        let mut gu = gl;
        let mut gv = gr;
        if j > 0 {
            gu += self.cost_gradient(j - 1, self.b[j - 1], u, 0.0).1;
        }
        if j + 2 < n {
            gv += self.cost_gradient(j + 1, v, self.b[j + 2], 0.0).0;
        }
        gu * d.0 + gv * d.1
    }

    /// Looks for a descent direction in the plane of each adjacent pair of
    /// touched derivatives and takes an exact line search along it. Returns
    /// whether any move was made.
    fn escape(&mut self) -> bool {
        let n = self.n();
        let probe = 1e-7 * self.scale.max(1.0);
        let mut moved = false;
        for j in 0..n - 1 {
            if !(self.touched[j] || self.touched[j + 1]) {
                continue;
            }
            let (u, v) = (self.b[j], self.b[j + 1]);
            let base = self.pair_local(j, u, v);
            let mut best = (0.0, (0.0, 0.0));
            for k in 0..ESCAPE_DIRECTIONS {
                if k % (ESCAPE_DIRECTIONS / 4) == 0 {
                    continue;
                }
                let theta = core::f64::consts::TAU * k as f64 / ESCAPE_DIRECTIONS as f64;
                let d = (libm::cos(theta), libm::sin(theta));
                let gain = self.pair_local(j, u + probe * d.0, v + probe * d.1) - base;
                if gain < best.0 {
                    best = (gain, d);
                }
            }
            if best.0 >= -1e-14 * (1.0 + base) {
                continue;
            }
            let d = best.1;
            let slope = |t: f64| self.pair_slope(j, u + t * d.0, v + t * d.1, d);
            let mut lo = 0.0;
            let mut hi = probe;
            let mut expansions = 0;
            while slope(hi) < 0.0 && expansions < 200 {
                lo = hi;
                hi *= 2.0;
                expansions += 1;
            }
            loop {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if slope(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = if self.pair_local(j, u + lo * d.0, v + lo * d.1)
                <= self.pair_local(j, u + hi * d.0, v + hi * d.1)
            {
                lo
            } else {
                hi
            };
            let (nu, nv) = (u + t * d.0, v + t * d.1);
            if base - self.pair_local(j, nu, nv) > self.cfg.tol * 1e-3 {
                self.b[j] = nu;
                self.b[j + 1] = nv;
                for k in j.saturating_sub(1)..(j + 3).min(n) {
                    self.dirty[k] = true;
                    self.touched[k] = true;
                }
                moved = true;
            }
        }
        moved
    }

    /// Moves each derivative to the point of its flat minimizing interval
    /// nearest zero. The objective is unchanged.
    fn polish(&mut self) {
        let n = self.n();
        for _ in 0..3 {
            let mut changed = false;
            for i in 0..n {
                if !self.touched[i] {
                    continue;
                }
                let b = self.b[i];
                if self.local_slope(i, b, 0.0).abs() > FLAT_SLOPE {
                    continue;
                }
                let (lo, hi) = self.bracket(i);
                let (lo, hi) = (lo.min(b), hi.max(b));
                let left = self.flat_edge(i, b, lo);
                let right = self.flat_edge(i, b, hi);
                let target = 0.0f64.clamp(left, right);
                if target.abs() < b.abs()
                    && (target - b).abs() > self.step_threshold()
                    && self.local(i, target, 0.0) <= self.local(i, b, 0.0)
                {
                    self.b[i] = target;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Last point from `inside` towards `limit` where the 1-D slope is still
    /// flat.
    fn flat_edge(&self, i: usize, inside: f64, limit: f64) -> f64 {
        if self.local_slope(i, limit, 0.0).abs() <= FLAT_SLOPE {
            return limit;
        }
        let (mut a, mut z) = (inside, limit);
        loop {
            let mid = 0.5 * (a + z);
            if mid == a || mid == z {
                return a;
            }
            if self.local_slope(i, mid, 0.0).abs() <= FLAT_SLOPE {
                a = mid;
            } else {
                z = mid;
            }
        }
    }
}

/// Centered divided differences, one-sided at the ends.
fn centered_slopes(x: &[f64], y: &[f64], delta: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                delta[0]
            } else if i == n - 1 {
                delta[n - 2]
            } else {
                (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1])
            }
        })
        .collect()
}
