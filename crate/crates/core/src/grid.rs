use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::{Error, Result};

/// Strictly increasing knot abscissae `x_1 < … < x_n`, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotGrid {
    nodes: Vec<f64>,
}

impl KnotGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::input("a knot grid needs at least two knots"));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("knots must be finite"));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Input(alloc::format!(
                "knots must be strictly increasing (x[{}] = {} ≥ x[{}] = {})",
                i,
                nodes[i],
                i + 1,
                nodes[i + 1]
            )));
        }
        Ok(Self { nodes })
    }

    /// `n` equally spaced knots on `[a, b]`; the last knot is exactly `b`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("a knot grid needs at least two knots"));
        }
        if !(a < b) {
            return Err(Error::input("uniform grid needs a < b"));
        }
        let step = (b - a) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
        nodes[n - 1] = b;
        Self::new(nodes)
    }

    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; a grid has at least two knots.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    #[inline]
    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    #[inline]
    pub fn width(&self, segment: usize) -> f64 {
        self.nodes[segment + 1] - self.nodes[segment]
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start() && t <= self.end()
    }

    /// Index `i` of the segment `[x_i, x_{i+1})` holding `t`; the right end of
    /// the domain belongs to the last segment.
    pub fn segment_of(&self, t: f64) -> Result<usize> {
        if !self.contains(t) {
            return Err(Error::Domain {
                t,
                lo: self.start(),
                hi: self.end(),
            });
        }
        let i = self.nodes.partition_point(|&x| x <= t);
        Ok(i.saturating_sub(1).min(self.segments() - 1))
    }

    /// Sub-grid made of the knots with indices in `range`.
    pub fn slice(&self, range: RangeInclusive<usize>) -> Result<Self> {
        let (lo, hi) = (*range.start(), *range.end());
        if hi >= self.len() || hi <= lo {
            return Err(Error::Index {
                index: hi,
                segments: self.segments(),
            });
        }
        Ok(Self {
            nodes: self.nodes[lo..=hi].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(KnotGrid::new(alloc::vec![0.0]).is_err());
        assert!(KnotGrid::new(alloc::vec![0.0, 0.0]).is_err());
        assert!(KnotGrid::new(alloc::vec![1.0, 0.0]).is_err());
        assert!(KnotGrid::new(alloc::vec![0.0, f64::NAN]).is_err());
        assert!(KnotGrid::uniform(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn segment_lookup() {
        let g = KnotGrid::uniform(0.0, 1.0, 5).unwrap();
        assert_eq!(g.segment_of(0.0).unwrap(), 0);
        assert_eq!(g.segment_of(0.25).unwrap(), 1);
        assert_eq!(g.segment_of(0.3).unwrap(), 1);
        assert_eq!(g.segment_of(1.0).unwrap(), 3);
        assert!(g.segment_of(1.0 + 1e-12).is_err());
        assert!(g.segment_of(-1e-12).is_err());
    }

    #[test]
    fn uniform_hits_endpoints() {
        let g = KnotGrid::uniform(0.0, 2.0 * core::f64::consts::PI, 31).unwrap();
        assert_eq!(g.end(), 2.0 * core::f64::consts::PI);
        assert_eq!(g.len(), 31);
    }
}
