//! Feasible regions for the volume solvers: a polyhedron in support-vector
//! space intersected with the validity cone, with optional evenness
//! (Minkowski balls), body sandwiching, breadth pinning, and flattening cap.

use crate::error::{Error, Result};
use crate::grid::DirectionGrid;
use crate::lp::{self, LinearProgram, LpConfig, PreparedLp};
use crate::scalar::Scalar;
use crate::support::SupportVector;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreadthRelation {
    Equal,
    AtLeast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// Extra linear constraint `coeffs . h (relation) rhs` on the full grid.
#[derive(Clone, Debug)]
pub struct LinearConstraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

/// Constraint system over support vectors on one grid.
#[derive(Clone, Debug)]
pub struct FeasibleRegion<F> {
    pub grid: DirectionGrid<F>,
    /// Restrict to even support vectors (centrally symmetric bodies).
    pub symmetric: bool,
    /// Containment from below: `h >= h_lower` (body contains this one).
    pub lower_body: Option<SupportVector<F>>,
    /// Containment from above: `h <= h_upper` (body inside this one).
    pub upper_body: Option<SupportVector<F>>,
    /// Pin or lower-bound the integral breadth `tan(pi/n) sum h_i`.
    pub integral_breadth: Option<(F, BreadthRelation)>,
    /// Cap the breadth in one direction: `h_z + h_{-z} <= cap`.
    pub flatten: Option<(usize, F)>,
    pub extra_linear: Vec<LinearConstraint<F>>,
}

impl<F: Scalar> FeasibleRegion<F> {
    pub fn new(grid: &DirectionGrid<F>) -> Self {
        Self {
            grid: grid.clone(),
            symmetric: false,
            lower_body: None,
            upper_body: None,
            integral_breadth: None,
            flatten: None,
            extra_linear: Vec::new(),
        }
    }

    /// Number of LP variables: half the grid when even symmetry is imposed.
    pub fn dim(&self) -> usize {
        if self.symmetric {
            self.grid.n() / 2
        } else {
            self.grid.n()
        }
    }

    /// Fold a full-grid index onto the variable space.
    fn fold(&self, i: usize) -> usize {
        if self.symmetric {
            i % (self.grid.n() / 2)
        } else {
            i
        }
    }

    /// Expand an LP variable vector into a full support vector.
    pub fn expand(&self, vars: &[F]) -> SupportVector<F> {
        let n = self.grid.n();
        let values: Vec<F> = (0..n).map(|i| vars[self.fold(i)]).collect();
        SupportVector::new(self.grid.clone(), values).expect("length matches grid")
    }

    /// Project a full support vector onto the variable space.
    pub fn reduce(&self, h: &SupportVector<F>) -> Vec<F> {
        h.values()[..self.dim()].to_vec()
    }

    fn validate(&self) -> Result<()> {
        for body in self.lower_body.iter().chain(&self.upper_body) {
            self.grid.check_same(body.grid())?;
        }
        if let Some((z, cap)) = self.flatten {
            if z >= self.grid.n() {
                return Err(Error::IndexOutOfRange(z, self.grid.n()));
            }
            if cap < F::zero() {
                return Err(Error::InvalidArgument("flattening cap must be nonnegative".into()));
            }
        }
        for c in &self.extra_linear {
            if c.coeffs.len() != self.grid.n() {
                return Err(Error::LengthMismatch {
                    expected: self.grid.n(),
                    got: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Variable bounds from the sandwich bodies and the flattening cap
    /// (which is a plain box bound in the symmetric case).
    fn bounds(&self) -> (Vec<F>, Vec<F>) {
        let d = self.dim();
        let n = self.grid.n();
        let mut lower = vec![F::neg_infinity(); d];
        let mut upper = vec![F::infinity(); d];
        if let Some(lb) = &self.lower_body {
            for i in 0..n {
                let j = self.fold(i);
                lower[j] = lower[j].max(lb.value(i));
            }
        }
        if let Some(ub) = &self.upper_body {
            for i in 0..n {
                let j = self.fold(i);
                upper[j] = upper[j].min(ub.value(i));
            }
        }
        if self.symmetric {
            if let Some((z, cap)) = self.flatten {
                let j = self.fold(z);
                upper[j] = upper[j].min(cap / F::c(2.0));
            }
        }
        (lower, upper)
    }

    /// Assemble the LP over the region with a zero objective; the caller
    /// swaps objectives in for each linear subproblem.
    pub fn build_lp(&self) -> Result<LinearProgram<F>> {
        self.validate()?;
        let n = self.grid.n();
        let d = self.dim();
        let rows = if self.symmetric { n / 2 } else { n };
        let cos_d = self.grid.delta().cos();
        let two = F::c(2.0);
        let mut lp = LinearProgram::new(d);
        let (lower, upper) = self.bounds();
        lp.lower = lower;
        lp.upper = upper;
        // Validity: -(h_{i-1} - 2 cos d h_i + h_{i+1}) <= 0.
        for i in 0..rows {
            let mut row = vec![F::zero(); d];
            row[self.fold((i + n - 1) % n)] -= F::one();
            row[self.fold(i)] += two * cos_d;
            row[self.fold((i + 1) % n)] -= F::one();
            lp.ineq_lhs.push(row);
            lp.ineq_rhs.push(F::zero());
        }
        if let Some((value, rel)) = self.integral_breadth {
            let t = (F::PI() / F::of_usize(n)).tan();
            let mult = if self.symmetric { two } else { F::one() };
            let row: Vec<F> = vec![t * mult; d];
            match rel {
                BreadthRelation::Equal => {
                    lp.eq_lhs.push(row);
                    lp.eq_rhs.push(value);
                }
                BreadthRelation::AtLeast => {
                    lp.ineq_lhs.push(row.into_iter().map(|v| -v).collect());
                    lp.ineq_rhs.push(-value);
                }
            }
        }
        if !self.symmetric {
            if let Some((z, cap)) = self.flatten {
                let mut row = vec![F::zero(); d];
                row[z] += F::one();
                row[self.grid.opposite(z)] += F::one();
                lp.ineq_lhs.push(row);
                lp.ineq_rhs.push(cap);
            }
        }
        for c in &self.extra_linear {
            let mut row = vec![F::zero(); d];
            for i in 0..n {
                row[self.fold(i)] += c.coeffs[i];
            }
            match c.relation {
                Relation::Le => {
                    lp.ineq_lhs.push(row);
                    lp.ineq_rhs.push(c.rhs);
                }
                Relation::Ge => {
                    lp.ineq_lhs.push(row.into_iter().map(|v| -v).collect());
                    lp.ineq_rhs.push(-c.rhs);
                }
                Relation::Eq => {
                    lp.eq_lhs.push(row);
                    lp.eq_rhs.push(c.rhs);
                }
            }
        }
        Ok(lp)
    }

    pub fn prepare(&self) -> Result<PreparedLp<F>> {
        PreparedLp::new(&self.build_lp()?, LpConfig::default())
    }

    /// Any feasible support vector, or `None`.
    pub fn feasibility_probe(&self) -> Result<Option<SupportVector<F>>> {
        let lp = self.build_lp()?;
        Ok(lp::feasible(&lp)?.map(|x| self.expand(&x)))
    }

    /// Constraint satisfaction within `slack` (absolute, scaled by size).
    pub fn is_feasible(&self, h: &SupportVector<F>, slack: F) -> bool {
        let scale = h.values().iter().fold(F::one(), |a, v| a.max(v.abs()));
        let tol = slack * scale;
        if self.symmetric && !h.is_even(tol) {
            return false;
        }
        if !h.is_valid(F::c(crate::tol::VALIDITY).max(tol)) {
            return false;
        }
        if let Some(lb) = &self.lower_body {
            for i in 0..self.grid.n() {
                if h.value(i) < lb.value(i) - tol {
                    return false;
                }
            }
        }
        if let Some(ub) = &self.upper_body {
            for i in 0..self.grid.n() {
                if h.value(i) > ub.value(i) + tol {
                    return false;
                }
            }
        }
        if let Some((value, rel)) = self.integral_breadth {
            let ib = crate::measure::integral_breadth(h);
            match rel {
                BreadthRelation::Equal => {
                    if (ib - value).abs() > tol.max(F::c(tol::ROUND_TRIP)) {
                        return false;
                    }
                }
                BreadthRelation::AtLeast => {
                    if ib < value - tol {
                        return false;
                    }
                }
            }
        }
        if let Some((z, cap)) = self.flatten {
            if h.value(z) + h.value(self.grid.opposite(z)) > cap + tol {
                return false;
            }
        }
        for c in &self.extra_linear {
            let mut v = F::zero();
            for i in 0..self.grid.n() {
                v += c.coeffs[i] * h.value(i);
            }
            let ok = match c.relation {
                Relation::Le => v <= c.rhs + tol,
                Relation::Ge => v >= c.rhs - tol,
                Relation::Eq => (v - c.rhs).abs() <= tol,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}
