//! Direction grid: an antipodally closed set of unit directions on the circle.
//!
//! Every object in the crate (support vectors, measures, certificates) is a
//! vector indexed by one grid, so all of the calculus is finite-dimensional
//! linear algebra.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::scalar::Scalar;

#[derive(Debug)]
struct Inner<F> {
    n: usize,
    delta: F,
    directions: Vec<Vec2<F>>,
}

/// Evenly spaced unit directions `u_i = (cos(2pi i/n), sin(2pi i/n))`.
///
/// `n` is even so the grid is closed under negation: `u_{i + n/2} = -u_i`.
/// Cheap to clone (shared internally).
#[derive(Clone, Debug)]
pub struct DirectionGrid<F>(Arc<Inner<F>>);

impl<F: Scalar> DirectionGrid<F> {
    /// Build a grid with `n` directions. `n` must be even and at least 4.
    pub fn new(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::OddGridSize(n));
        }
        if n < 4 {
            return Err(Error::GridTooSmall(n));
        }
        let two_pi = F::PI() + F::PI();
        let delta = two_pi / F::of_usize(n);
        let directions = (0..n)
            .map(|i| Vec2::unit(two_pi * F::of_usize(i) / F::of_usize(n)))
            .collect();
        Ok(Self(Arc::new(Inner { n, delta, directions })))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Angular step `2pi/n`.
    pub fn delta(&self) -> F {
        self.0.delta
    }

    pub fn direction(&self, i: usize) -> Vec2<F> {
        self.0.directions[i % self.0.n]
    }

    pub fn directions(&self) -> &[Vec2<F>] {
        &self.0.directions
    }

    pub fn angle(&self, i: usize) -> F {
        self.0.delta * F::of_usize(i % self.0.n)
    }

    /// Index of `-u_i`.
    pub fn opposite(&self, i: usize) -> usize {
        (i + self.0.n / 2) % self.0.n
    }

    /// Index of the grid direction closest to angle `theta`.
    pub fn nearest_index(&self, theta: F) -> usize {
        let two_pi = F::PI() + F::PI();
        let mut t = theta % two_pi;
        if t < F::zero() {
            t += two_pi;
        }
        let k = (t / self.0.delta).round();
        let k = <f64 as num_traits::NumCast>::from(k).unwrap_or(0.0) as usize;
        k % self.0.n
    }

    /// Grids are interchangeable iff they have the same size.
    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.n == other.0.n
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(self.0.n, other.0.n))
        }
    }

    /// Weight of each atom of the grid-disk measure: `2 tan(pi/n)`.
    pub fn disk_weight(&self) -> F {
        let t = (F::PI() / F::of_usize(self.0.n)).tan();
        t + t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_directions_for_n4() {
        let g: DirectionGrid<f64> = DirectionGrid::new(4).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (i, &(x, y)) in expect.iter().enumerate() {
            assert!((g.direction(i).x - x).abs() < 1e-15);
            assert!((g.direction(i).y - y).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_direction_for_n8() {
        let g: DirectionGrid<f64> = DirectionGrid::new(8).unwrap();
        let s = 0.5f64.sqrt();
        assert!((g.direction(1).x - s).abs() < 1e-15);
        assert!((g.direction(1).y - s).abs() < 1e-15);
    }

    #[test]
    fn odd_size_rejected() {
        assert!(matches!(DirectionGrid::<f64>::new(7), Err(Error::OddGridSize(7))));
        assert!(matches!(DirectionGrid::<f64>::new(2), Err(Error::GridTooSmall(2))));
    }

    #[test]
    fn antipodal_closure_and_unit_norm() {
        let g: DirectionGrid<f64> = DirectionGrid::new(360).unwrap();
        for i in 0..g.n() {
            let u = g.direction(i);
            let m = g.direction(g.opposite(i));
            assert!((u.x + m.x).abs() < 1e-12 && (u.y + m.y).abs() < 1e-12);
            assert!((u.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nearest_index_wraps() {
        let g: DirectionGrid<f64> = DirectionGrid::new(8).unwrap();
        assert_eq!(g.nearest_index(-0.1), 0);
        assert_eq!(g.nearest_index(std::f64::consts::PI), 4);
        assert_eq!(g.nearest_index(6.28), 0);
    }

    #[test]
    fn works_at_f32() {
        let g: DirectionGrid<f32> = DirectionGrid::new(8).unwrap();
        assert!((g.direction(2).y - 1.0).abs() < 1e-6);
    }
}
