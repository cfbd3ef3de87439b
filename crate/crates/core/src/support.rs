//! Convex bodies as sampled support functions on a direction grid.
//!
//! A vector `h` is a valid support vector when every discrete edge length
//! `(h_{i-1} - 2 h_i cos d + h_{i+1}) / sin d` is nonnegative; the body it
//! describes is the intersection of the half-planes `(x, u_i) <= h_i`.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::grid::DirectionGrid;
use crate::lp::{self, LinearProgram, LpStatus};
use crate::polygon::Polygon;
use crate::scalar::Scalar;
use crate::tol;

/// Support values of a convex body on a grid.
///
/// Construction does not enforce validity (membership in the support cone is
/// a property one often wants to *test*); operations that require a valid
/// input say so.
#[derive(Clone, Debug)]
pub struct SupportVector<F> {
    grid: DirectionGrid<F>,
    values: Vec<F>,
}

impl<F: Scalar> SupportVector<F> {
    pub fn new(grid: DirectionGrid<F>, values: Vec<F>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    /// Grid disk of radius `r` (the regular n-gon circumscribing the disk).
    pub fn disk(grid: &DirectionGrid<F>, r: F) -> Self {
        Self { grid: grid.clone(), values: vec![r; grid.n()] }
    }

    /// Support of a finite point set: `h_i = max_p (p, u_i)`.
    pub fn from_points(grid: &DirectionGrid<F>, points: &[Vec2<F>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let values = grid
            .directions()
            .iter()
            .map(|&u| points.iter().map(|p| p.dot(u)).fold(F::neg_infinity(), F::max))
            .collect();
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn from_polygon(grid: &DirectionGrid<F>, polygon: &Polygon<F>) -> Result<Self> {
        Self::from_points(grid, polygon.vertices())
    }

    pub fn grid(&self) -> &DirectionGrid<F> {
        &self.grid
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn value(&self, i: usize) -> F {
        self.values[i % self.grid.n()]
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    /// Discrete edge lengths; linear in the support values.
    pub fn edge_lengths(&self) -> Vec<F> {
        edge_lengths_of(&self.grid, &self.values)
    }

    /// Membership test for the discrete support cone.
    pub fn is_valid(&self, tolerance: F) -> bool {
        self.edge_lengths().into_iter().all(|l| l >= -tolerance)
    }

    /// Errs with the most negative edge length when invalid.
    pub fn require_valid(&self, tolerance: F) -> Result<()> {
        let ls = self.edge_lengths();
        let mut worst = F::zero();
        let mut at = 0;
        for (i, &l) in ls.iter().enumerate() {
            if l < worst {
                worst = l;
                at = i;
            }
        }
        if worst < -tolerance {
            return Err(Error::InvalidSupport(
                num_traits::ToPrimitive::to_f64(&worst).unwrap_or(f64::NAN),
                at,
            ));
        }
        Ok(())
    }

    /// Breadth in direction `i`: `h_i + h_{-i}`.
    pub fn breadth(&self, i: usize) -> Result<F> {
        if i >= self.grid.n() {
            return Err(Error::IndexOutOfRange(i, self.grid.n()));
        }
        Ok(self.values[i] + self.values[self.grid.opposite(i)])
    }

    /// Even part: `(h_i + h_{-i}) / 2`. Projects onto Minkowski balls.
    pub fn symmetrized(&self) -> Self {
        let half = F::c(0.5);
        let values = (0..self.grid.n())
            .map(|i| (self.values[i] + self.values[self.grid.opposite(i)]) * half)
            .collect();
        Self { grid: self.grid.clone(), values }
    }

    pub fn is_even(&self, tolerance: F) -> bool {
        (0..self.grid.n())
            .all(|i| (self.values[i] - self.values[self.grid.opposite(i)]).abs() <= tolerance)
    }

    /// First-harmonic coefficients: the discrete Steiner point.
    pub fn steiner_point(&self) -> Vec2<F> {
        let n = self.grid.n();
        let two_over_n = F::c(2.0) / F::of_usize(n);
        let mut s = Vec2::zero();
        for (i, &h) in self.values.iter().enumerate() {
            let u = self.grid.direction(i);
            s = s + u * h;
        }
        s * two_over_n
    }

    /// Translate so a given point moves to the origin (in support terms,
    /// subtract the linear functional of the translation).
    pub fn translated(&self, by: Vec2<F>) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &h)| h + self.grid.direction(i).dot(by))
            .collect();
        Self { grid: self.grid.clone(), values }
    }

    /// Canonical coset representative: Steiner point moved to the origin.
    /// Edge lengths are unchanged, so validity is preserved exactly.
    pub fn canonicalized(&self) -> Self {
        self.translated(-self.steiner_point())
    }

    /// Gauge (Minkowski functional) of the body, `max_i (z, u_i) / h_i`.
    /// Requires the origin strictly interior (`h_i > 0` for all `i`).
    pub fn gauge(&self, z: Vec2<F>) -> Result<F> {
        for (i, &h) in self.values.iter().enumerate() {
            if h <= F::zero() {
                return Err(Error::OriginNotInterior(
                    num_traits::ToPrimitive::to_f64(&h).unwrap_or(f64::NAN),
                    i,
                ));
            }
        }
        let mut g = F::zero();
        for (i, &h) in self.values.iter().enumerate() {
            g = g.max(z.dot(self.grid.direction(i)) / h);
        }
        Ok(g)
    }

    /// Vertices of the body `{x : (x, u_i) <= h_i}` for a valid `h`.
    ///
    /// Consecutive supporting lines are intersected; runs of zero edge
    /// length collapse to repeated points, which are deduplicated. A fully
    /// degenerate body comes back as a single vertex.
    pub fn reconstruct(&self) -> Result<Polygon<F>> {
        self.require_valid(F::c(tol::VALIDITY))?;
        let n = self.grid.n();
        let sin_d = self.grid.delta().sin();
        let mut verts: Vec<Vec2<F>> = Vec::with_capacity(n);
        let scale = self
            .values
            .iter()
            .fold(F::one(), |a, &b| a.max(b.abs()));
        let dedup = F::c(1e-12) * scale;
        for i in 0..n {
            let j = (i + 1) % n;
            let ui = self.grid.direction(i);
            let uj = self.grid.direction(j);
            // Solve (x,ui)=h_i, (x,uj)=h_j; determinant is sin d.
            let x = (self.values[i] * uj.y - self.values[j] * ui.y) / sin_d;
            let y = (self.values[j] * ui.x - self.values[i] * uj.x) / sin_d;
            let v = Vec2::new(x, y);
            if verts.last().map_or(true, |&p| (p - v).norm() > dedup) {
                verts.push(v);
            }
        }
        if verts.len() > 1 {
            if let (Some(&first), Some(&last)) = (verts.first(), verts.last()) {
                if (first - last).norm() <= dedup {
                    verts.pop();
                }
            }
        }
        Polygon::new(verts)
    }
}

/// `(h_{i-1} - 2 h_i cos d + h_{i+1}) / sin d` for an arbitrary grid function.
pub fn edge_lengths_of<F: Scalar>(grid: &DirectionGrid<F>, values: &[F]) -> Vec<F> {
    let n = grid.n();
    let cos_d = grid.delta().cos();
    let sin_d = grid.delta().sin();
    let two = F::c(2.0);
    (0..n)
        .map(|i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            (prev - two * cos_d * values[i] + next) / sin_d
        })
        .collect()
}

/// Minkowski combination `a x + b y` (same grid, nonnegative weights).
pub fn combine<F: Scalar>(
    a: F,
    x: &SupportVector<F>,
    b: F,
    y: &SupportVector<F>,
) -> Result<SupportVector<F>> {
    x.grid().check_same(y.grid())?;
    if a < F::zero() || b < F::zero() {
        return Err(Error::InvalidArgument(
            "combination weights must be nonnegative".into(),
        ));
    }
    let values = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(&p, &q)| a * p + b * q)
        .collect();
    SupportVector::new(x.grid().clone(), values)
}

/// Largest valid support vector below `f` (the envelope of support functions).
///
/// Solved as one LP: maximize `sum g_i` subject to `g <= f` and all edge
/// lengths nonnegative; the feasible set is closed under pointwise max, so
/// the optimum is the unique pointwise-largest minorant. When no valid
/// minorant exists at all (`f` forces a negative breadth somewhere), the
/// problem is re-solved for `f + C` and the constant is subtracted; the
/// returned vector then fails `is_valid` and callers that care must check.
pub fn convex_envelope<F: Scalar>(grid: &DirectionGrid<F>, f: &[F]) -> Result<SupportVector<F>> {
    if f.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), got: f.len() });
    }
    match envelope_lp(grid, f)? {
        Some(g) => SupportVector::new(grid.clone(), g),
        None => {
            let mut min = F::infinity();
            for &v in f {
                min = min.min(v);
            }
            let shift = F::zero().max(-min) + F::one();
            let shifted: Vec<F> = f.iter().map(|&v| v + shift).collect();
            let g = envelope_lp(grid, &shifted)?.ok_or_else(|| {
                Error::SolverFailure("shifted envelope LP infeasible".into())
            })?;
            SupportVector::new(grid.clone(), g.into_iter().map(|v| v - shift).collect())
        }
    }
}

fn envelope_lp<F: Scalar>(grid: &DirectionGrid<F>, f: &[F]) -> Result<Option<Vec<F>>> {
    let n = grid.n();
    let cos_d = grid.delta().cos();
    let two = F::c(2.0);
    // Variables g_i, free below, g_i <= f_i; rows: -edge_length_i <= 0.
    // The 1/sin d factor is dropped (it does not change the sign).
    let mut ineq_lhs = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![F::zero(); n];
        row[(i + n - 1) % n] -= F::one();
        row[i] += two * cos_d;
        row[(i + 1) % n] -= F::one();
        ineq_lhs.push(row);
    }
    let lp = LinearProgram {
        num_vars: n,
        objective: vec![F::one(); n],
        eq_lhs: vec![],
        eq_rhs: vec![],
        ineq_lhs,
        ineq_rhs: vec![F::zero(); n],
        lower: vec![F::neg_infinity(); n],
        upper: f.to_vec(),
    };
    let sol = lp::solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.x)),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::Unbounded),
        LpStatus::Failed => Err(Error::SolverFailure("envelope LP failed".into())),
    }
}
