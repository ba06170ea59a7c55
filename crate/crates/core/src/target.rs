//! Functions to approximate in the continuous fit problems.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A real function on an interval, with its known discontinuities.
///
/// Quadrature splits at every declared breakpoint and evaluates the pieces
/// with one-sided limits, so step functions are integrated without smearing.
pub trait TargetFunction {
    fn eval(&self, x: f64) -> f64;

    /// Sorted abscissae of jumps or kinks.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

impl<T: TargetFunction + ?Sized> TargetFunction for &T {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }

    fn breakpoints(&self) -> &[f64] {
        (**self).breakpoints()
    }
}

/// Unit step: 0 left of the jump, 1 at and right of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Heaviside {
    jump: [f64; 1],
    domain: (f64, f64),
}

impl Heaviside {
    pub fn new(domain: (f64, f64), jump: f64) -> Result<Self> {
        let (a, b) = domain;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::input("Heaviside domain must be a finite interval a < b"));
        }
        if !(jump > a && jump < b) {
            return Err(Error::Input(alloc::format!(
                "jump {jump} must lie strictly inside ({a}, {b})"
            )));
        }
        Ok(Self {
            jump: [jump],
            domain,
        })
    }

    pub fn jump(&self) -> f64 {
        self.jump[0]
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

impl TargetFunction for Heaviside {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        if x < self.jump[0] {
            0.0
        } else {
            1.0
        }
    }

    fn breakpoints(&self) -> &[f64] {
        &self.jump
    }
}

/// Piecewise constant function: `levels[k]` on `[edges[k-1], edges[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Steps {
    edges: Vec<f64>,
    levels: Vec<f64>,
}

impl Steps {
    pub fn new(edges: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != edges.len() + 1 {
            return Err(Error::input("need exactly one more level than edges"));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) || edges.iter().any(|e| !e.is_finite()) {
            return Err(Error::input("step edges must be finite and strictly increasing"));
        }
        Ok(Self { edges, levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

impl TargetFunction for Steps {
    fn eval(&self, x: f64) -> f64 {
        self.levels[self.edges.partition_point(|&e| e <= x)]
    }

    fn breakpoints(&self) -> &[f64] {
        &self.edges
    }
}

/// A closure with an explicit breakpoint list.
pub struct FnTarget<F> {
    f: F,
    breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> f64> FnTarget<F> {
    pub fn new(f: F) -> Self {
        Self {
            f,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(f: F, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Self { f, breakpoints }
    }
}

impl<F: Fn(f64) -> f64> TargetFunction for FnTarget<F> {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn heaviside_values() {
        let h = Heaviside::new((0.0, 1.0), 0.5).unwrap();
        assert_eq!(h.eval(0.2), 0.0);
        assert_eq!(h.eval(0.5), 1.0);
        assert_eq!(h.eval(0.9), 1.0);
        assert_eq!(h.breakpoints(), &[0.5]);
    }

    #[test]
    fn heaviside_rejects_boundary_jump() {
        assert!(Heaviside::new((0.0, 1.0), 0.0).is_err());
        assert!(Heaviside::new((0.0, 1.0), 1.0).is_err());
        assert!(Heaviside::new((1.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn steps_values() {
        let s = Steps::new(vec![1.0, 2.0], vec![0.0, 100.0, 0.0]).unwrap();
        assert_eq!(s.eval(0.5), 0.0);
        assert_eq!(s.eval(1.0), 100.0);
        assert_eq!(s.eval(1.99), 100.0);
        assert_eq!(s.eval(2.0), 0.0);
        assert!(Steps::new(vec![1.0], vec![0.0]).is_err());
    }
}
