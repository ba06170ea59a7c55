//! Cubic Hermite splines and their exact curvature functional.

use alloc::vec::Vec;

use crate::{Error, KnotGrid, Result};

/// The second derivative of a cubic on one knot interval, which is affine:
/// `p` at the left end, `q` at the right end, over a segment of length `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCurvature {
    pub p: f64,
    pub q: f64,
    pub h: f64,
}

impl SegmentCurvature {
    /// Second derivative of the Hermite cubic with slope `delta` between its
    /// end values and end derivatives `bl`, `br`.
    #[inline]
    pub fn from_hermite(h: f64, delta: f64, bl: f64, br: f64) -> Self {
        Self {
            p: (6.0 * delta - 4.0 * bl - 2.0 * br) / h,
            q: (-6.0 * delta + 2.0 * bl + 4.0 * br) / h,
            h,
        }
    }

    /// Exact `∫|s''|` over the segment.
    #[inline]
    pub fn abs_integral(&self) -> f64 {
        let (p, q, h) = (self.p, self.q, self.h);
        if p * q >= 0.0 {
            h * (p.abs() + q.abs()) / 2.0
        } else {
            h * (p * p + q * q) / (2.0 * (q - p).abs())
        }
    }

    /// Partial derivatives of `∫|s''|` with respect to the left and right end
    /// derivatives. At a linear segment (`p = q = 0`) the zero subgradient is
    /// returned.
    #[inline]
    pub(crate) fn abs_integral_gradient(&self) -> (f64, f64) {
        let (ip, iq) = unit_abs_integral_gradient(self.p, self.q);
        (-4.0 * ip + 2.0 * iq, -2.0 * ip + 4.0 * iq)
    }

    /// Hessian `[∂ll, ∂lr, ∂rr]` of [`Self::abs_integral`] with respect to
    /// the end derivatives. Zero unless the curvature changes sign inside the
    /// segment, where the integral is smooth with a rank-one Hessian.
    pub(crate) fn abs_integral_hessian(&self) -> [f64; 3] {
        let (p, q) = (self.p, self.q);
        if p * q >= 0.0 {
            return [0.0; 3];
        }
        let d = (q - p).abs();
        let k = 2.0 / (self.h * d * d * d);
        let (wl, wr) = (4.0 * q + 2.0 * p, 2.0 * q + 4.0 * p);
        [k * wl * wl, k * wl * wr, k * wr * wr]
    }
}

/// Gradient of `I(p, q) = ∫₀¹ |p(1−t) + qt| dt`.
#[inline]
fn unit_abs_integral_gradient(p: f64, q: f64) -> (f64, f64) {
    if p == 0.0 && q == 0.0 {
        return (0.0, 0.0);
    }
    if p * q >= 0.0 {
        let s = if p > 0.0 || q > 0.0 { 0.5 } else { -0.5 };
        return (s, s);
    }
    // root of the affine integrand
    let tau = p / (p - q);
    let ip = 2.0 * tau - tau * tau - 0.5;
    let iq = tau * tau - 0.5;
    if p > 0.0 {
        (ip, iq)
    } else {
        (-ip, -iq)
    }
}

pub fn segment_abs_curvature_integral(c: SegmentCurvature) -> f64 {
    c.abs_integral()
}

/// `∫|s''|` over one segment, straight from Hermite data.
#[inline]
pub(crate) fn segment_cost(h: f64, delta: f64, bl: f64, br: f64) -> f64 {
    SegmentCurvature::from_hermite(h, delta, bl, br).abs_integral()
}

#[inline]
pub(crate) fn segment_cost_gradient(h: f64, delta: f64, bl: f64, br: f64) -> (f64, f64) {
    SegmentCurvature::from_hermite(h, delta, bl, br).abs_integral_gradient()
}

#[inline]
pub(crate) fn segment_cost_hessian(h: f64, delta: f64, bl: f64, br: f64) -> [f64; 3] {
    SegmentCurvature::from_hermite(h, delta, bl, br).abs_integral_hessian()
}

/// A C1 piecewise cubic given by its values and first derivatives at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpline {
    grid: KnotGrid,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl HermiteSpline {
    pub fn new(grid: KnotGrid, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() || derivs.len() != grid.len() {
            return Err(Error::Input(alloc::format!(
                "{} knots but {} values and {} derivatives",
                grid.len(),
                values.len(),
                derivs.len()
            )));
        }
        if values.iter().chain(&derivs).any(|v| !v.is_finite()) {
            return Err(Error::input("spline coefficients must be finite"));
        }
        Ok(Self {
            grid,
            values,
            derivs,
        })
    }

    #[inline]
    pub fn grid(&self) -> &KnotGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn into_parts(self) -> (KnotGrid, Vec<f64>, Vec<f64>) {
        (self.grid, self.values, self.derivs)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let i = self.grid.segment_of(t)?;
        Ok(self.eval_on(i, t))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        let i = self.grid.segment_of(t)?;
        Ok(self.derivative_on(i, t))
    }

    /// Evaluates the cubic of segment `i` at `t`; `t` may lie outside the
    /// segment, in which case the cubic is extrapolated.
    #[inline]
    pub fn eval_on(&self, i: usize, t: f64) -> f64 {
        self.view().eval_on(i, t)
    }

    #[inline]
    pub fn derivative_on(&self, i: usize, t: f64) -> f64 {
        self.view().derivative_on(i, t)
    }

    #[inline]
    pub(crate) fn view(&self) -> SplineRef<'_> {
        SplineRef {
            x: self.grid.nodes(),
            y: &self.values,
            b: &self.derivs,
        }
    }

    /// `s''` at the ends of segment `i` (0-based).
    pub fn second_derivative_endpoints(&self, i: usize) -> Result<SegmentCurvature> {
        if i >= self.grid.segments() {
            return Err(Error::Index {
                index: i,
                segments: self.grid.segments(),
            });
        }
        let h = self.grid.width(i);
        let delta = (self.values[i + 1] - self.values[i]) / h;
        Ok(SegmentCurvature::from_hermite(
            h,
            delta,
            self.derivs[i],
            self.derivs[i + 1],
        ))
    }

    /// Exact `∫|s''|` over the whole domain.
    pub fn total_curvature_l1(&self) -> f64 {
        total_curvature(self.grid.nodes(), &self.values, &self.derivs)
    }
}

/// Borrowed Hermite data, used by the solvers to evaluate trial splines
/// without building a [`HermiteSpline`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplineRef<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub b: &'a [f64],
}

impl SplineRef<'_> {
    #[inline]
    pub fn eval_on(&self, i: usize, t: f64) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        self.y[i] * h00 + h * self.b[i] * h10 + self.y[i + 1] * h01 + h * self.b[i + 1] * h11
    }

    #[inline]
    pub fn derivative_on(&self, i: usize, t: f64) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let u2 = u * u;
        let d00 = 6.0 * u2 - 6.0 * u;
        let d10 = 3.0 * u2 - 4.0 * u + 1.0;
        let d11 = 3.0 * u2 - 2.0 * u;
        (self.y[i] - self.y[i + 1]) * d00 / h + self.b[i] * d10 + self.b[i + 1] * d11
    }

    #[inline]
    pub fn segments(&self) -> usize {
        self.x.len() - 1
    }
}

pub(crate) fn total_curvature(x: &[f64], y: &[f64], b: &[f64]) -> f64 {
    (0..x.len() - 1)
        .map(|i| {
            let h = x[i + 1] - x[i];
            segment_cost(h, (y[i + 1] - y[i]) / h, b[i], b[i + 1])
        })
        .sum()
}
