//! Distances between a spline and its target: L1/L2 against a function
//! (quadrature) and ℓ1/ℓ2 against data (exact sums).

use alloc::vec::Vec;
use core::ops::Range;

use crate::data::DataSet;
use crate::hermite::SplineRef;
use crate::{Error, HermiteSpline, Result, TargetFunction};

/// Pointwise loss applied to the error `s − f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Absolute,
    Squared,
}

impl Loss {
    #[inline]
    fn apply(self, e: f64) -> f64 {
        match self {
            Loss::Absolute => e.abs(),
            Loss::Squared => e * e,
        }
    }
}

const ROOT_TOL: f64 = 1e-10;

/// `∫|s − f|` over the spline domain.
///
/// Each knot interval is cut at `f`'s breakpoints, every smooth piece is split
/// into `resolution` panels, and panels are further cut at the sign changes of
/// `s − f` (located by bisection to 1e-10) before composite Simpson is applied.
pub fn l1_distance_continuous<F: TargetFunction + ?Sized>(
    s: &HermiteSpline,
    f: &F,
    resolution: usize,
) -> Result<f64> {
    continuous_distance(s.view(), f, resolution, Loss::Absolute)
}

/// `∫(s − f)²` with the same quadrature as [`l1_distance_continuous`].
pub fn l2_distance_continuous<F: TargetFunction + ?Sized>(
    s: &HermiteSpline,
    f: &F,
    resolution: usize,
) -> Result<f64> {
    continuous_distance(s.view(), f, resolution, Loss::Squared)
}

/// `Σ|s(x̂_j) − ŷ_j|`.
pub fn l1_residual_discrete(s: &HermiteSpline, d: &DataSet) -> Result<f64> {
    discrete_residual(s.view(), d, Loss::Absolute)
}

/// `Σ(s(x̂_j) − ŷ_j)²`.
pub fn l2_residual_discrete(s: &HermiteSpline, d: &DataSet) -> Result<f64> {
    discrete_residual(s.view(), d, Loss::Squared)
}

pub(crate) fn discrete_residual(s: SplineRef<'_>, d: &DataSet, loss: Loss) -> Result<f64> {
    let x = s.x;
    let last = s.segments() - 1;
    let (lo, hi) = (x[0], x[last + 1]);
    let mut seg = 0;
    let mut total = 0.0;
    for (xj, yj) in d.points() {
        if !(xj >= lo && xj <= hi) {
            return Err(Error::Domain { t: xj, lo, hi });
        }
        while seg < last && x[seg + 1] <= xj {
            seg += 1;
        }
        total += loss.apply(s.eval_on(seg, xj) - yj);
    }
    Ok(total)
}

pub(crate) fn continuous_distance<F: TargetFunction + ?Sized>(
    s: SplineRef<'_>,
    f: &F,
    resolution: usize,
    loss: Loss,
) -> Result<f64> {
    (0..s.segments()).try_fold(0.0, |acc, i| Ok(acc + continuous_segment(s, f, i, resolution, loss)?))
}

/// Contribution of knot interval `i` to [`continuous_distance`].
pub(crate) fn continuous_segment<F: TargetFunction + ?Sized>(
    s: SplineRef<'_>,
    f: &F,
    i: usize,
    resolution: usize,
    loss: Loss,
) -> Result<f64> {
    let resolution = resolution.max(1);
    let breaks = f.breakpoints();
    let (a, b) = (s.x[i], s.x[i + 1]);
    let first = breaks.partition_point(|&t| t <= a);
    let last = breaks.partition_point(|&t| t < b);
    let mut total = 0.0;
    let mut lo = a;
    for &cut in &breaks[first..last] {
        total += piece(s, f, i, (lo, cut), resolution, loss)?;
        lo = cut;
    }
    Ok(total + piece(s, f, i, (lo, b), resolution, loss)?)
}

/// Index ranges of the data points evaluated on each knot interval, as
/// [`discrete_residual`] assigns them: a point on an interior knot belongs
/// to the interval on its right.
pub(crate) fn segment_data_ranges(x: &[f64], d: &DataSet) -> Vec<Range<usize>> {
    let segments = x.len() - 1;
    let bound = |j: usize| {
        if j == 0 {
            0
        } else if j == segments {
            d.len()
        } else {
            d.x().partition_point(|&t| t < x[j])
        }
    };
    (0..segments).map(|j| bound(j)..bound(j + 1)).collect()
}

/// Contribution of the points `range` (all on knot interval `i`) to
/// [`discrete_residual`].
pub(crate) fn discrete_segment(
    s: SplineRef<'_>,
    d: &DataSet,
    i: usize,
    range: Range<usize>,
    loss: Loss,
) -> f64 {
    let (x, y) = (&d.x()[range.clone()], &d.y()[range]);
    x.iter().zip(y).map(|(&t, &v)| loss.apply(s.eval_on(i, t) - v)).sum()
}

/// Integral over `[u, v]`, a sub-interval of segment `seg` on which `f` is
/// smooth; breakpoint ends are evaluated as one-sided limits.
fn piece<F: TargetFunction + ?Sized>(
    s: SplineRef<'_>,
    f: &F,
    seg: usize,
    (u, v): (f64, f64),
    resolution: usize,
    loss: Loss,
) -> Result<f64> {
    if v <= u {
        return Ok(0.0);
    }
    let breaks = f.breakpoints();
    let is_break = |t: f64| breaks.binary_search_by(|p| p.total_cmp(&t)).is_ok();
    let (u_break, v_break) = (is_break(u), is_break(v));
    let err = |t: f64| -> Result<f64> {
        let at = if t <= u && u_break {
            u.next_up()
        } else if t >= v && v_break {
            v.next_down()
        } else {
            t
        };
        let ft = f.eval(at);
        if !ft.is_finite() {
            return Err(Error::Evaluation { x: at });
        }
        Ok(s.eval_on(seg, t) - ft)
    };

    let width = (v - u) / resolution as f64;
    let mut total = 0.0;
    let mut c = u;
    let mut ec = err(c)?;
    for k in 1..=resolution {
        let d = if k == resolution { v } else { u + width * k as f64 };
        let m = 0.5 * (c + d);
        let em = err(m)?;
        let ed = err(d)?;
        match loss {
            Loss::Squared => {
                total += (d - c) / 6.0 * (ec * ec + 4.0 * em * em + ed * ed);
            }
            Loss::Absolute => {
                total += sign_split(&err, (c, ec), (m, em), loss)?;
                total += sign_split(&err, (m, em), (d, ed), loss)?;
            }
        }
        c = d;
        ec = ed;
    }
    Ok(total)
}

/// Simpson on `[c, d]`, first splitting at a sign change of the error.
fn sign_split<E: Fn(f64) -> Result<f64>>(
    err: &E,
    (c, ec): (f64, f64),
    (d, ed): (f64, f64),
    loss: Loss,
) -> Result<f64> {
    if ec * ed < 0.0 {
        let r = bisect_root(err, (c, ec), (d, ed))?;
        Ok(simpson(err, (c, ec), (r, 0.0), loss)? + simpson(err, (r, 0.0), (d, ed), loss)?)
    } else {
        simpson(err, (c, ec), (d, ed), loss)
    }
}

fn simpson<E: Fn(f64) -> Result<f64>>(
    err: &E,
    (c, ec): (f64, f64),
    (d, ed): (f64, f64),
    loss: Loss,
) -> Result<f64> {
    if d <= c {
        return Ok(0.0);
    }
    let em = err(0.5 * (c + d))?;
    Ok((d - c) / 6.0 * (loss.apply(ec) + 4.0 * loss.apply(em) + loss.apply(ed)))
}

fn bisect_root<E: Fn(f64) -> Result<f64>>(
    err: &E,
    (mut lo, mut elo): (f64, f64),
    (mut hi, _): (f64, f64),
) -> Result<f64> {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let em = err(mid)?;
        if em == 0.0 {
            return Ok(mid);
        }
        if (em < 0.0) == (elo < 0.0) {
            lo = mid;
            elo = em;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{FnTarget, Heaviside, KnotGrid};
    use alloc::vec;

    fn zero_spline() -> HermiteSpline {
        HermiteSpline::new(KnotGrid::new(vec![0.0, 1.0]).unwrap(), vec![0.0; 2], vec![0.0; 2])
            .unwrap()
    }

    #[test]
    fn exact_cubic_has_zero_distance() {
        let cubic = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let dcubic = |x: f64| -2.0 + 1.5 * x * x;
        let g = KnotGrid::new(vec![-1.0, 0.2, 0.9, 2.0]).unwrap();
        let y = g.nodes().iter().map(|&x| cubic(x)).collect();
        let b = g.nodes().iter().map(|&x| dcubic(x)).collect();
        let s = HermiteSpline::new(g, y, b).unwrap();
        for res in [1, 3, 64] {
            assert!(l1_distance_continuous(&s, &FnTarget::new(cubic), res).unwrap() < 1e-12);
        }
    }

    #[test]
    fn constant_gap() {
        let one = FnTarget::new(|_| 1.0);
        assert!((l1_distance_continuous(&zero_spline(), &one, 64).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn step_is_integrated_exactly() {
        let h = Heaviside::new((0.0, 1.0), 0.5).unwrap();
        for res in [1, 7, 64] {
            let v = l1_distance_continuous(&zero_spline(), &h, res).unwrap();
            assert!((v - 0.5).abs() < 1e-14, "{v}");
        }
        // jump not on a panel boundary
        let h = Heaviside::new((0.0, 1.0), 0.3141).unwrap();
        let v = l1_distance_continuous(&zero_spline(), &h, 5).unwrap();
        assert!((v - (1.0 - 0.3141)).abs() < 1e-14);
    }

    #[test]
    fn sign_changes_are_located() {
        // s(x) = x on [0, 1] against f = 1/2: ∫|x − 1/2| = 1/4
        let s = HermiteSpline::new(KnotGrid::new(vec![0.0, 1.0]).unwrap(), vec![0.0, 1.0], vec![1.0, 1.0])
            .unwrap();
        let half = FnTarget::new(|_| 0.5);
        let v = l1_distance_continuous(&s, &half, 3).unwrap();
        assert!((v - 0.25).abs() < 1e-12, "{v}");
        let v = l2_distance_continuous(&s, &half, 1).unwrap();
        assert!((v - 1.0 / 12.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn non_finite_target_is_reported() {
        let bad = FnTarget::new(|x: f64| if x > 0.5 { f64::NAN } else { 0.0 });
        assert!(matches!(
            l1_distance_continuous(&zero_spline(), &bad, 4),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn discrete_examples() {
        let s = zero_spline();
        let d = DataSet::new(vec![0.0, 0.5, 1.0], vec![1.0, -2.0, 0.5]).unwrap();
        assert_eq!(l1_residual_discrete(&s, &d).unwrap(), 3.5);
        let line = HermiteSpline::new(KnotGrid::new(vec![0.0, 1.0]).unwrap(), vec![0.0, 1.0], vec![1.0, 1.0])
            .unwrap();
        let d = DataSet::new(vec![0.5], vec![1.0]).unwrap();
        assert_eq!(l1_residual_discrete(&line, &d).unwrap(), 0.5);
        let d = DataSet::new(vec![0.0, 0.25, 1.0], vec![0.0, 0.25, 1.0]).unwrap();
        assert_eq!(l1_residual_discrete(&line, &d).unwrap(), 0.0);
        let outside = DataSet::new(vec![1.5], vec![0.0]).unwrap();
        assert!(matches!(l1_residual_discrete(&line, &outside), Err(Error::Domain { .. })));
    }
}
