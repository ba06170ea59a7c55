use alloc::vec::Vec;
use core::ops::Range;

use crate::{Error, Result};

/// Discrete points `(x̂_j, ŷ_j)` sorted by abscissa; equal abscissae allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataSet {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl DataSet {
    /// Builds a dataset, sorting the points by abscissa (stable).
    pub fn from_points(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::input("data points must be finite"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (x, y) = points.into_iter().unzip();
        Ok(Self { x, y })
    }

    /// Builds a dataset from parallel coordinate vectors, sorting if needed.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::input("abscissa and ordinate counts differ"));
        }
        if x.windows(2).all(|w| w[0] <= w[1]) {
            if x.iter().chain(&y).any(|v| !v.is_finite()) {
                return Err(Error::input("data points must be finite"));
            }
            return Ok(Self { x, y });
        }
        Self::from_points(x.into_iter().zip(y).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    #[inline]
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    #[inline]
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Indices of the points with `lo ≤ x̂ ≤ hi`.
    pub fn indices_within(&self, lo: f64, hi: f64) -> Range<usize> {
        let start = self.x.partition_point(|&x| x < lo);
        let end = self.x.partition_point(|&x| x <= hi);
        start..end.max(start)
    }

    /// Copy of the points with `lo ≤ x̂ ≤ hi`.
    pub fn within(&self, lo: f64, hi: f64) -> Self {
        let r = self.indices_within(lo, hi);
        Self {
            x: self.x[r.clone()].to_vec(),
            y: self.y[r].to_vec(),
        }
    }

    /// `(min ŷ, max ŷ)` over an index range, `None` when it is empty.
    pub fn ordinate_bounds(&self, range: Range<usize>) -> Option<(f64, f64)> {
        self.y[range].iter().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sorts_on_construction() {
        let d = DataSet::from_points(vec![(1.0, 2.0), (0.0, 1.0), (0.5, 3.0)]).unwrap();
        assert_eq!(d.x(), &[0.0, 0.5, 1.0]);
        assert_eq!(d.y(), &[1.0, 3.0, 2.0]);
        let d = DataSet::new(vec![2.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(d.x(), &[1.0, 2.0]);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(DataSet::from_points(vec![(f64::NAN, 0.0)]).is_err());
        assert!(DataSet::new(vec![0.0], vec![f64::INFINITY]).is_err());
        assert!(DataSet::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn window_slices_are_inclusive() {
        let d = DataSet::new(vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![0.0; 5]).unwrap();
        assert_eq!(d.indices_within(0.25, 0.75), 1..4);
        assert_eq!(d.indices_within(0.3, 0.4), 2..2);
        assert_eq!(d.within(0.0, 0.5).len(), 3);
        assert_eq!(d.ordinate_bounds(0..0), None);
    }
}
