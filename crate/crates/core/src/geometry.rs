//! Euclidean metric substrate: point sets, unit-ball volumes and k-NN radii.
//!
//! The k-NN radius `r_k(x_i)` is the radius of the smallest closed ball
//! around `x_i` holding `k` sample points, the point itself included. So
//! `r_1` is identically zero and `r_2` is the nearest-other-neighbor
//! distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from rows. All rows must share one dimension
    /// `d >= 1` and every coordinate must be finite.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPointSet)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::param("dimension", "must be at least 1"));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for row in &points {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a point set from a flat row-major buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dimension", "must be at least 1"));
        }
        if coords.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if coords.len() % dim != 0 {
            return Err(Error::param(
                "coords",
                format!(
                    "length {} is not a multiple of dimension {dim}",
                    coords.len()
                ),
            ));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate {
                point: pos / dim,
                axis: pos % dim,
            });
        }
        Ok(PointSet { dim, coords })
    }

    /// Convenience constructor for one-dimensional samples.
    pub fn from_1d(values: &[f64]) -> Result<Self> {
        Self::from_flat(1, values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Returns a copy with the points reordered so that point `i` of the
    /// result is point `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in order {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.len(),
                });
            }
            coords.extend_from_slice(self.point(i));
        }
        Self::from_flat(self.dim, coords)
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }
}

/// Euclidean distance with an explicit dimension check.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(euclidean(a, b))
}

// Fixed summation order; symmetric bit-for-bit because (a-b)^2 == (b-a)^2.
#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        acc += t * t;
    }
    acc.sqrt()
}

/// Volume of the unit ball in `R^d`, `pi^(d/2) / Gamma(d/2 + 1)`.
///
/// Evaluated through the recurrence `v_d = v_{d-2} * 2 pi / d` with
/// `v_0 = 1`, `v_1 = 2`, which avoids a Gamma function entirely.
pub fn unit_ball_volume(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::param("d", "dimension must be at least 1"));
    }
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut m = if d % 2 == 0 { 2 } else { 3 };
    while m <= d {
        v *= 2.0 * std::f64::consts::PI / m as f64;
        m += 2;
    }
    Ok(v)
}

/// Per-point k-NN radii `r_k(x_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnRadii {
    pub k: usize,
    pub radii: Vec<f64>,
}

impl KnnRadii {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.radii[i]
    }
}

/// Computes `r_k(x_i)` for every point: the k-th smallest of
/// `dist(x_i, x_j)` over all `j`, `j = i` included.
///
/// Exact. One-dimensional inputs go through a sorted two-pointer scan;
/// everything else uses per-point selection over the full distance row.
/// Both paths return bit-identical radii.
pub fn knn_radii(ps: &PointSet, k: usize) -> Result<KnnRadii> {
    check_k(ps, k)?;
    let radii = if ps.dim() == 1 {
        knn_radii_sorted_1d(ps, k)
    } else {
        knn_radii_exhaustive(ps, k)
    };
    Ok(KnnRadii { k, radii })
}

pub(crate) fn check_k(ps: &PointSet, k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if k > ps.len() {
        return Err(Error::param(
            "k",
            format!("k = {k} exceeds the number of points n = {}", ps.len()),
        ));
    }
    Ok(())
}

pub(crate) fn knn_radii_exhaustive(ps: &PointSet, k: usize) -> Vec<f64> {
    let n = ps.len();
    (0..n)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |row, i| {
                row.clear();
                row.extend((0..n).map(|j| ps.dist(i, j)));
                let (_, kth, _) = row.select_nth_unstable_by(k - 1, f64::total_cmp);
                *kth
            },
        )
        .collect()
}

fn knn_radii_sorted_1d(ps: &PointSet, k: usize) -> Vec<f64> {
    let n = ps.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ps.point(a)[0].total_cmp(&ps.point(b)[0]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| ps.point(i)[0]).collect();
    let by_rank: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|p| {
            // Distances grow monotonically walking away from `p` on either
            // side, so the k-th smallest is a merge of two sorted runs.
            let x = [sorted[p]];
            let (mut left, mut right) = (p, p + 1);
            let mut kth = 0.0;
            for _ in 1..k {
                let dl = (left > 0).then(|| euclidean(&x, &[sorted[left - 1]]));
                let dr = (right < n).then(|| euclidean(&x, &[sorted[right]]));
                kth = match (dl, dr) {
                    (Some(l), Some(r)) if l <= r => {
                        left -= 1;
                        l
                    }
                    (Some(l), None) => {
                        left -= 1;
                        l
                    }
                    (_, Some(r)) => {
                        right += 1;
                        r
                    }
                    (None, None) => unreachable!("k <= n"),
                };
            }
            kth
        })
        .collect();
    let mut radii = vec![0.0; n];
    for (p, &i) in order.iter().enumerate() {
        radii[i] = by_rank[p];
    }
    radii
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&[0.0], &[3.0]).unwrap(), 3.0);
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(matches!(
            distance(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_ball_volumes() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        // v_4 = pi^2 / 2, v_5 = 8 pi^2 / 15
        assert!((unit_ball_volume(4).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(5).unwrap() - 8.0 * PI * PI / 15.0).abs() < 1e-14);
        assert!(unit_ball_volume(0).is_err());
    }

    #[test]
    fn knn_radii_examples() {
        let ps = PointSet::from_1d(&[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(knn_radii(&ps, 2).unwrap().radii, vec![1.0, 1.0, 2.0]);
        assert_eq!(knn_radii(&ps, 3).unwrap().radii, vec![3.0, 2.0, 3.0]);
        assert_eq!(knn_radii(&ps, 1).unwrap().radii, vec![0.0; 3]);
        assert!(knn_radii(&ps, 0).is_err());
        assert!(knn_radii(&ps, 4).is_err());
    }

    #[test]
    fn duplicates_give_zero_radius() {
        let ps = PointSet::from_1d(&[2.0, 2.0, 5.0]).unwrap();
        assert_eq!(knn_radii(&ps, 2).unwrap().radii, vec![0.0, 0.0, 3.0]);
    }

    #[test]
    fn sorted_path_matches_exhaustive() {
        let xs = [0.3, -1.7, 2.2, 0.3, 9.0, 4.4, -0.05, 1.0, 1.0, 7.5];
        let ps = PointSet::from_1d(&xs).unwrap();
        for k in 1..=xs.len() {
            assert_eq!(
                knn_radii_sorted_1d(&ps, k),
                knn_radii_exhaustive(&ps, k),
                "k={k}"
            );
        }
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(matches!(
            PointSet::new(vec![vec![0.0, 1.0], vec![2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            PointSet::new(vec![vec![0.0], vec![f64::NAN]]),
            Err(Error::NonFiniteCoordinate { point: 1, axis: 0 })
        ));
        assert!(PointSet::new(vec![]).is_err());
    }
}
