//! Volume maximization over a feasible region by conditional gradients.
//!
//! The objective is the square root of the quadratic area form, concave on
//! the support cone; its supergradient direction at `h` is the edge-length
//! vector, so every subproblem is a linear maximization over the region,
//! warm-started on a shared basis. Exact line search (the area is quadratic
//! along segments) plus an active-set Newton polish once the face
//! stabilizes; the polish solves the equality-constrained quadratic
//! maximization on the current face and is accepted only when feasible and
//! improving, so it never degrades the conditional-gradient guarantee.

use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, nullspace, Mat};
use crate::lp::{LpStatus, PreparedLp};
use crate::scalar::Scalar;
use crate::solvers::region::FeasibleRegion;
use crate::support::{edge_lengths_of, SupportVector};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwStatus {
    Converged,
    IterationCap,
}

#[derive(Clone, Debug)]
pub struct FwOutcome<F> {
    pub support: SupportVector<F>,
    /// Final Frank-Wolfe gap on sqrt(V), relative form used by the stop rule.
    pub gap: F,
    pub iterations: usize,
    pub status: FwStatus,
}

struct Engine<'a, F> {
    region: &'a FeasibleRegion<F>,
    lp: PreparedLp<F>,
}

impl<'a, F: Scalar> Engine<'a, F> {
    fn new(region: &'a FeasibleRegion<F>) -> Result<Self> {
        Ok(Self { region, lp: region.prepare()? })
    }

    /// Area of the expanded body, as a quadratic form of the variables.
    fn volume(&self, vars: &[F]) -> F {
        let h = self.region.expand(vars);
        let ls = h.edge_lengths();
        let mut s = F::zero();
        for (a, b) in h.values().iter().zip(&ls) {
            s += *a * *b;
        }
        s * F::c(0.5)
    }

    /// Gradient of the area in variable coordinates.
    fn gradient(&self, vars: &[F]) -> Vec<F> {
        let h = self.region.expand(vars);
        let ls = h.edge_lengths();
        self.fold_full(&ls)
    }

    fn fold_full(&self, full: &[F]) -> Vec<F> {
        let d = self.region.dim();
        let n = self.region.grid.n();
        let mut out = vec![F::zero(); d];
        for (i, &v) in full.iter().enumerate().take(n) {
            out[if self.region.symmetric { i % d } else { i }] += v;
        }
        out
    }

    /// Hessian-vector product of the area form in variable coordinates.
    fn hessian_apply(&self, dir: &[F]) -> Vec<F> {
        let n = self.region.grid.n();
        let full: Vec<F> = (0..n)
            .map(|i| dir[if self.region.symmetric { i % self.region.dim() } else { i }])
            .collect();
        let l = edge_lengths_of(&self.region.grid, &full);
        self.fold_full(&l)
    }

    fn dot(a: &[F], b: &[F]) -> F {
        a.iter().zip(b).map(|(&x, &y)| x * y).sum()
    }

    fn linear_max(&mut self, objective: &[F]) -> Result<(Vec<F>, F)> {
        let sol = self.lp.solve_with(objective)?;
        match sol.status {
            LpStatus::Optimal => Ok((sol.x, sol.objective_value)),
            LpStatus::Infeasible => Err(Error::Infeasible("region is empty".into())),
            LpStatus::Unbounded => Err(Error::Unbounded),
            LpStatus::Failed => Err(Error::SolverFailure("region LP failed".into())),
        }
    }
}

/// Maximize the body area over the region. Requires the region to be
/// nonempty and bounded (pin the breadth or give an upper body).
pub fn maximize_volume<F: Scalar>(region: &FeasibleRegion<F>) -> Result<FwOutcome<F>> {
    let mut eng = Engine::new(region)?;
    // Feasible start: solve with the zero objective.
    let (mut x, _) = eng.linear_max(&vec![F::zero(); region.dim()])?;

    let mut gap_rel = F::infinity();
    let mut iterations = 0usize;
    let mut since_polish = 0usize;
    let mut converged = false;

    while iterations < tol::FW_MAX_ITERS {
        iterations += 1;
        since_polish += 1;
        let grad = eng.gradient(&x);
        let (vertex, best_lin) = eng.linear_max(&grad)?;
        let here = Engine::<F>::dot(&grad, &x);
        let gap = best_lin - here; // directional derivative of V toward the vertex
        let v = eng.volume(&x).max(F::zero());
        let phi = v.sqrt();
        // Stop rule on phi = sqrt(V): gap_phi = gap / (2 phi).
        let denom = (F::c(2.0) * phi).max(F::c(1e-300));
        gap_rel = gap / denom / phi.max(F::one());
        if gap_rel <= F::c(tol::FW_GAP_REL) {
            converged = true;
            break;
        }

        // Exact line search along [x, vertex]: V is quadratic there.
        let d: Vec<F> = vertex.iter().zip(&x).map(|(&g, &h)| g - h).collect();
        let slope = Engine::<F>::dot(&grad, &d);
        let curv = Engine::<F>::dot(&eng.hessian_apply(&d), &d);
        let gamma = if curv < F::zero() {
            (-slope / curv).max(F::zero()).min(F::one())
        } else {
            F::one()
        };
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += gamma * *di;
        }

        // Periodic active-set polish.
        if since_polish >= 25 {
            since_polish = 0;
            if let Some(better) = polish(&mut eng, &x)? {
                x = better;
            }
        }
    }

    // Final polish and gap audit.
    if let Some(better) = polish(&mut eng, &x)? {
        x = better;
    }
    let grad = eng.gradient(&x);
    let (_, best_lin) = eng.linear_max(&grad)?;
    let gap = best_lin - Engine::<F>::dot(&grad, &x);
    let phi = eng.volume(&x).max(F::zero()).sqrt();
    let denom = (F::c(2.0) * phi).max(F::c(1e-300));
    gap_rel = gap / denom / phi.max(F::one());
    if gap_rel <= F::c(tol::FW_GAP_REL) {
        converged = true;
    }

    Ok(FwOutcome {
        support: region.expand(&x),
        gap: gap_rel,
        iterations,
        status: if converged { FwStatus::Converged } else { FwStatus::IterationCap },
    })
}

/// Equality-constrained Newton step on the active face. Collects tight
/// constraints, solves the reduced quadratic maximization on the face's
/// nullspace, and returns the candidate only when it is feasible and does
/// not lose volume.
fn polish<F: Scalar>(eng: &mut Engine<F>, x: &[F]) -> Result<Option<Vec<F>>> {
    let region = eng.region;
    let d = region.dim();
    let lp = region.build_lp()?;
    let scale = x.iter().fold(F::one(), |a, v| a.max(v.abs()));
    let mut best: Option<(F, Vec<F>)> = None;
    let base_volume = eng.volume(x);

    for &thr in &[1e-4, 1e-6, 1e-8] {
        let tight = F::c(thr) * scale;
        // Active rows: equalities always; inequalities and bounds when tight.
        let mut rows: Vec<(Vec<F>, F)> = Vec::new();
        for (row, rhs) in lp.eq_lhs.iter().zip(&lp.eq_rhs) {
            rows.push((row.clone(), *rhs));
        }
        for (row, rhs) in lp.ineq_lhs.iter().zip(&lp.ineq_rhs) {
            let v = Engine::<F>::dot(row, x);
            if (v - *rhs).abs() <= tight {
                rows.push((row.clone(), *rhs));
            }
        }
        for j in 0..d {
            if lp.lower[j].is_finite() && (x[j] - lp.lower[j]).abs() <= tight {
                let mut r = vec![F::zero(); d];
                r[j] = F::one();
                rows.push((r, lp.lower[j]));
            } else if lp.upper[j].is_finite() && (x[j] - lp.upper[j]).abs() <= tight {
                let mut r = vec![F::zero(); d];
                r[j] = F::one();
                rows.push((r, lp.upper[j]));
            }
        }
        if rows.is_empty() {
            continue;
        }
        let mut a = Mat::zeros(rows.len(), d);
        for (r, (row, _)) in rows.iter().enumerate() {
            for c in 0..d {
                a.set(r, c, row[c]);
            }
        }
        let z = nullspace(&a, F::c(1e-10));
        if z.cols == 0 {
            continue;
        }
        // Reduced system: (Z^T H Z) y = -Z^T grad; H negative definite on
        // genuine faces, so solve with -M via Cholesky.
        let grad = eng.gradient(x);
        let mut zt_g = vec![F::zero(); z.cols];
        for j in 0..z.cols {
            let mut s = F::zero();
            for r in 0..d {
                s += z.at(r, j) * grad[r];
            }
            zt_g[j] = s;
        }
        let mut m = Mat::zeros(z.cols, z.cols);
        for j in 0..z.cols {
            let col: Vec<F> = (0..d).map(|r| z.at(r, j)).collect();
            let hcol = eng.hessian_apply(&col);
            for i in 0..z.cols {
                let mut s = F::zero();
                for r in 0..d {
                    s += z.at(r, i) * hcol[r];
                }
                m.set(i, j, -s); // negate: solve with positive definite -M
            }
        }
        let Some(y) = cholesky_solve(&mut m, &zt_g, F::c(1e-14)) else {
            continue;
        };
        let mut cand = x.to_vec();
        for r in 0..d {
            let mut s = F::zero();
            for j in 0..z.cols {
                s += z.at(r, j) * y[j];
            }
            cand[r] += s;
        }
        let h = region.expand(&cand);
        if !region.is_feasible(&h, F::c(1e-9)) {
            continue;
        }
        let v = eng.volume(&cand);
        if v >= base_volume - F::c(1e-12) * base_volume.abs().max(F::one())
            && best.as_ref().map_or(true, |(bv, _)| v > *bv)
        {
            best = Some((v, cand));
        }
    }
    Ok(best.map(|(_, c)| c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use crate::grid::DirectionGrid;
    use crate::measure;
    use crate::solvers::region::BreadthRelation;

    #[test]
    fn constraint_forced_square() {
        // Upper body = square, breadth pinned to the square's own: the square
        // is the unique feasible body.
        let g: DirectionGrid<f64> = DirectionGrid::new(16).unwrap();
        let sq = SupportVector::from_points(
            &g,
            &[
                Vec2::new(0.5, 0.5),
                Vec2::new(-0.5, 0.5),
                Vec2::new(-0.5, -0.5),
                Vec2::new(0.5, -0.5),
            ],
        )
        .unwrap();
        let mut region = FeasibleRegion::new(&g);
        region.symmetric = true;
        region.upper_body = Some(sq.clone());
        region.integral_breadth =
            Some((measure::integral_breadth(&sq), BreadthRelation::Equal));
        let out = maximize_volume(&region).unwrap();
        for i in 0..16 {
            assert!(
                (out.support.value(i) - sq.value(i)).abs() < 1e-7,
                "index {i}: {} vs {}",
                out.support.value(i),
                sq.value(i)
            );
        }
    }

    #[test]
    fn discrete_isoperimetry_gives_grid_disk() {
        // Fixed integral breadth, no body constraints: the grid disk wins.
        let g: DirectionGrid<f64> = DirectionGrid::new(24).unwrap();
        let disk = SupportVector::disk(&g, 1.0);
        let c = measure::integral_breadth(&disk);
        let mut region = FeasibleRegion::new(&g);
        region.symmetric = true;
        region.integral_breadth = Some((c, BreadthRelation::Equal));
        let out = maximize_volume(&region).unwrap();
        for i in 0..24 {
            assert!(
                (out.support.value(i) - 1.0).abs() < 1e-7,
                "index {i}: {}",
                out.support.value(i)
            );
        }
        assert_eq!(out.status, FwStatus::Converged);
        // No feasible perturbation does better.
        let v = measure::volume(&out.support);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let mut vals: Vec<f64> = (0..12).map(|_| rng.gen_range(0.2..2.0)).collect();
            let s: f64 = vals.iter().sum();
            let target: f64 = 12.0; // sum of halves for the disk
            for v in &mut vals {
                *v *= target / s;
            }
            let full: Vec<f64> = (0..24).map(|i| vals[i % 12]).collect();
            let h = SupportVector::new(g.clone(), full).unwrap();
            if h.is_valid(1e-9) {
                assert!(measure::volume(&h) <= v + 1e-7);
            }
        }
    }

    #[test]
    fn infeasible_region_reported() {
        let g: DirectionGrid<f64> = DirectionGrid::new(8).unwrap();
        let disk = SupportVector::disk(&g, 1.0);
        let mut region = FeasibleRegion::new(&g);
        region.upper_body = Some(disk.clone());
        // Demand more breadth than the upper body allows.
        region.integral_breadth =
            Some((10.0 * measure::integral_breadth(&disk), BreadthRelation::AtLeast));
        assert!(matches!(maximize_volume(&region), Err(Error::Infeasible(_))));
    }

    #[test]
    fn unbounded_region_reported() {
        let g: DirectionGrid<f64> = DirectionGrid::new(8).unwrap();
        let disk = SupportVector::disk(&g, 1.0);
        let mut region = FeasibleRegion::new(&g);
        region.lower_body = Some(disk);
        assert!(matches!(maximize_volume(&region), Err(Error::Unbounded)));
    }
}
