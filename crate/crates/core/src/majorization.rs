//! Linear majorization between atomic measures, decided by a transport LP.
//!
//! `mu` dominates `nu` when `mu` splits into per-atom pieces whose first
//! moments match `nu`'s atoms, with the leftover mass annihilating linear
//! functionals. For atomic measures the binding Borel partition isolates
//! each atom of `nu` plus a remainder cell, which is exactly the LP below.
//! Equivalently (and this is checked against each other in the tests),
//! `mu - nu` lies in the dual cone of the discrete support cone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::DirectionGrid;
use crate::lp::{self, LinearProgram, LpStatus};
use crate::measure::{surface_measure, GridMeasure};
use crate::scalar::Scalar;
use crate::support::{self, SupportVector};
use crate::tol;

/// Transport plan realizing a majorization: row `k` collects the mass sent
/// to `nu`'s atom `k`, column `j` draws from `mu`'s atom `j`.
#[derive(Clone, Debug)]
pub struct TransportWitness<F> {
    /// Grid indices of nu's positive atoms (rows).
    pub nu_atoms: Vec<usize>,
    /// Grid indices of mu's positive atoms (columns).
    pub mu_atoms: Vec<usize>,
    /// Row-major plan, `nu_atoms.len() x mu_atoms.len()`.
    pub plan: Vec<F>,
}

impl<F: Scalar> TransportWitness<F> {
    pub fn entry(&self, k: usize, j: usize) -> F {
        self.plan[k * self.mu_atoms.len() + j]
    }

    /// Largest violation of the witness conditions: nonnegativity, column
    /// draws within `mu`, per-row moment match, zero leftover moment.
    pub fn max_violation(&self, mu: &GridMeasure<F>, nu: &GridMeasure<F>) -> F {
        let grid = mu.grid();
        let mut worst = F::zero();
        for &t in &self.plan {
            worst = worst.max(-t);
        }
        let mut leftover_moment_x = F::zero();
        let mut leftover_moment_y = F::zero();
        for (jj, &j) in self.mu_atoms.iter().enumerate() {
            let mut col = F::zero();
            for k in 0..self.nu_atoms.len() {
                col += self.entry(k, jj);
            }
            worst = worst.max(col - mu.weights()[j]);
            let rest = mu.weights()[j] - col;
            let u = grid.direction(j);
            leftover_moment_x += rest * u.x;
            leftover_moment_y += rest * u.y;
        }
        for (kk, &k) in self.nu_atoms.iter().enumerate() {
            let v = grid.direction(k);
            let target_x = nu.weights()[k] * v.x;
            let target_y = nu.weights()[k] * v.y;
            let mut mx = F::zero();
            let mut my = F::zero();
            for (jj, &j) in self.mu_atoms.iter().enumerate() {
                let u = grid.direction(j);
                mx += self.entry(kk, jj) * u.x;
                my += self.entry(kk, jj) * u.y;
            }
            worst = worst.max((mx - target_x).abs()).max((my - target_y).abs());
        }
        worst.max(leftover_moment_x.abs()).max(leftover_moment_y.abs())
    }
}

/// Outcome of a majorization test.
#[derive(Clone, Debug)]
pub struct Majorization<F> {
    pub dominates: bool,
    pub witness: Option<TransportWitness<F>>,
    /// When domination fails: a valid support vector `p` (a sublinear test
    /// function sampled on the grid) with `int p dmu < int p dnu`.
    pub violator: Option<SupportVector<F>>,
}

/// Decide `mu >> nu` by the per-atom transport LP.
pub fn majorizes<F: Scalar>(
    mu: &GridMeasure<F>,
    nu: &GridMeasure<F>,
    tolerance: F,
) -> Result<Majorization<F>> {
    mu.grid().check_same(nu.grid())?;
    let grid = mu.grid();
    let atom_tol = F::c(1e-14) * mu.total_mass().max(nu.total_mass()).max(F::one());
    let mu_atoms: Vec<usize> =
        (0..grid.n()).filter(|&j| mu.weights()[j] > atom_tol).collect();
    let nu_atoms: Vec<usize> =
        (0..grid.n()).filter(|&k| nu.weights()[k] > atom_tol).collect();

    if nu_atoms.is_empty() {
        return Ok(Majorization {
            dominates: true,
            witness: Some(TransportWitness { nu_atoms, mu_atoms, plan: vec![] }),
            violator: None,
        });
    }

    let kn = nu_atoms.len();
    let jn = mu_atoms.len();
    let nv = kn * jn;
    let mut lp = LinearProgram::new(nv);
    // Column draws: sum_k T_kj <= mu_j.
    for (jj, &j) in mu_atoms.iter().enumerate() {
        let mut row = vec![F::zero(); nv];
        for k in 0..kn {
            row[k * jn + jj] = F::one();
        }
        lp.ineq_lhs.push(row);
        lp.ineq_rhs.push(mu.weights()[j]);
    }
    // Row moments: sum_j T_kj u_j = nu_k v_k.
    for (kk, &k) in nu_atoms.iter().enumerate() {
        let v = grid.direction(k);
        let mut row_x = vec![F::zero(); nv];
        let mut row_y = vec![F::zero(); nv];
        for (jj, &j) in mu_atoms.iter().enumerate() {
            let u = grid.direction(j);
            row_x[kk * jn + jj] = u.x;
            row_y[kk * jn + jj] = u.y;
        }
        lp.eq_lhs.push(row_x);
        lp.eq_rhs.push(nu.weights()[k] * v.x);
        lp.eq_lhs.push(row_y);
        lp.eq_rhs.push(nu.weights()[k] * v.y);
    }
    let _ = tolerance;
    match lp::feasible(&lp)? {
        Some(plan) => {
            let witness = TransportWitness { nu_atoms, mu_atoms, plan };
            Ok(Majorization { dominates: true, witness: Some(witness), violator: None })
        }
        None => {
            let violator = violating_sublinear(mu, nu)?;
            Ok(Majorization { dominates: false, witness: None, violator })
        }
    }
}

/// Search a separating sublinear functional: minimize `<p, mu - nu>` over
/// valid `p` in the unit box. A strictly negative optimum certifies failure.
pub fn violating_sublinear<F: Scalar>(
    mu: &GridMeasure<F>,
    nu: &GridMeasure<F>,
) -> Result<Option<SupportVector<F>>> {
    let grid = mu.grid();
    let n = grid.n();
    let cos_d = grid.delta().cos();
    let two = F::c(2.0);
    let mut lp = LinearProgram::new(n);
    lp.objective = (0..n).map(|i| nu.weights()[i] - mu.weights()[i]).collect();
    for i in 0..n {
        let mut row = vec![F::zero(); n];
        row[(i + n - 1) % n] -= F::one();
        row[i] += two * cos_d;
        row[(i + 1) % n] -= F::one();
        lp.ineq_lhs.push(row);
        lp.ineq_rhs.push(F::zero());
    }
    lp.lower = vec![-F::one(); n];
    lp.upper = vec![F::one(); n];
    let sol = lp::solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let gain = sol.objective_value; // <p, nu - mu> up to the 1/2 factor
    if gain > F::c(1e-9) * mu.total_mass().max(F::one()) {
        Ok(Some(SupportVector::new(grid.clone(), sol.x)?))
    } else {
        Ok(None)
    }
}

/// Membership of a signed weight vector in the dual of the support cone:
/// `delta = L q` with `q >= 0`, where `L` is the edge-length map. Returns
/// the representing `q` when it exists.
pub fn dual_cone_representation<F: Scalar>(
    grid: &DirectionGrid<F>,
    delta: &[F],
) -> Result<Option<Vec<F>>> {
    if delta.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), got: delta.len() });
    }
    let n = grid.n();
    let mut lp = LinearProgram::new(n);
    for i in 0..n {
        let mut row = vec![F::zero(); n];
        // row i of L: (q_{i-1} - 2 cos d q_i + q_{i+1}) / sin d
        let sin_d = grid.delta().sin();
        let cos_d = grid.delta().cos();
        row[(i + n - 1) % n] += F::one() / sin_d;
        row[i] -= F::c(2.0) * cos_d / sin_d;
        row[(i + 1) % n] += F::one() / sin_d;
        lp.eq_lhs.push(row);
        lp.eq_rhs.push(delta[i]);
    }
    lp::feasible(&lp)
}

/// Sampled Reshetnyak test: `int p dmu >= int p dnu` for random sublinear
/// `p` built as the max of up to five linear functionals. Necessary for
/// majorization; used as a guard on every positive transport answer.
pub fn reshetnyak_check<F: Scalar>(
    mu: &GridMeasure<F>,
    nu: &GridMeasure<F>,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    mu.grid().check_same(nu.grid())?;
    let grid = mu.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = F::c(1e-8) * mu.total_mass().max(nu.total_mass()).max(F::one());
    for _ in 0..trials {
        let k = rng.gen_range(1..=5usize);
        let funcs: Vec<(F, F)> = (0..k)
            .map(|_| {
                let a: f64 = rng.gen_range(-1.0..1.0);
                let b: f64 = rng.gen_range(-1.0..1.0);
                (F::c(a), F::c(b))
            })
            .collect();
        let mut lhs = F::zero();
        let mut rhs = F::zero();
        for i in 0..grid.n() {
            let u = grid.direction(i);
            let p = funcs
                .iter()
                .map(|&(a, b)| a * u.x + b * u.y)
                .fold(F::neg_infinity(), F::max);
            lhs += p * mu.weights()[i];
            rhs += p * nu.weights()[i];
        }
        if lhs < rhs - slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dual-cone comparison of two bodies through their measures; the symmetric
/// flag compares the even parts (the Minkowski-ball variant).
pub fn in_dual_cone_diff<F: Scalar>(
    x: &SupportVector<F>,
    y: &SupportVector<F>,
    symmetric: bool,
) -> Result<bool> {
    let mut mx = surface_measure(x)?;
    let mut my = surface_measure(y)?;
    if symmetric {
        mx = mx.symmetrized();
        my = my.symmetrized();
    }
    Ok(majorizes(&mx, &my, F::c(1e-8))?.dominates)
}

/// Can `y` be translated into `x`? A two-variable LP over the translation.
pub fn inclusion_up_to_translation<F: Scalar>(
    x: &SupportVector<F>,
    y: &SupportVector<F>,
) -> Result<Option<crate::geom::Vec2<F>>> {
    x.grid().check_same(y.grid())?;
    let grid = x.grid();
    let n = grid.n();
    let mut lp = LinearProgram::new(2);
    for i in 0..n {
        let u = grid.direction(i);
        lp.ineq_lhs.push(vec![u.x, u.y]);
        lp.ineq_rhs.push(x.value(i) - y.value(i));
    }
    lp.lower = vec![F::neg_infinity(); 2];
    lp.upper = vec![F::infinity(); 2];
    Ok(lp::feasible(&lp)?.map(|t| crate::geom::Vec2::new(t[0], t[1])))
}

/// Iterate the extreme rays of the discrete translation-invariant cone:
/// antipodal pairs and positively spanning triples. `f` is fed each ray's
/// (index, weight) atoms and may stop the scan early by returning `false`.
fn for_each_extreme_ray<F: Scalar>(
    grid: &DirectionGrid<F>,
    mut f: impl FnMut(&[(usize, F)]) -> bool,
) -> bool {
    let n = grid.n();
    for i in 0..n / 2 {
        if !f(&[(i, F::one()), (i + n / 2, F::one())]) {
            return false;
        }
    }
    // Triples u_i, u_j, u_k with the origin interior to their positive hull:
    // weights solve w_j u_j + w_k u_k = -u_i with w_i = 1, w_j, w_k > 0.
    for i in 0..n {
        for j in (i + 1)..n {
            if j == (i + n / 2) % n {
                continue;
            }
            for k in (j + 1)..n {
                if k == (i + n / 2) % n || k == (j + n / 2) % n {
                    continue;
                }
                let ui = grid.direction(i);
                let uj = grid.direction(j);
                let uk = grid.direction(k);
                let det = uj.cross(uk);
                if det.abs() < F::c(1e-13) {
                    continue;
                }
                let wj = (-ui).cross(uk) / det;
                let wk = uj.cross(-ui) / det;
                if wj > F::c(1e-12) && wk > F::c(1e-12) {
                    if !f(&[(i, F::one()), (j, wj), (k, wk)]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Membership in the dual of the feasible-direction cone at `x_bar`:
/// nonnegative against every extreme ray of the measure cone, and
/// orthogonal to `x_bar` under the canonical pairing.
pub fn in_feasible_dual<F: Scalar>(f: &[F], x_bar: &GridMeasure<F>) -> Result<bool> {
    let grid = x_bar.grid();
    if f.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), got: f.len() });
    }
    let scale = f.iter().fold(F::one(), |a, v| a.max(v.abs()));
    let slack = F::c(1e-8) * scale;
    let mut pair = F::zero();
    for (i, &w) in x_bar.weights().iter().enumerate() {
        pair += f[i] * w;
    }
    pair *= F::c(0.5);
    if pair.abs() > slack * x_bar.total_mass().max(F::one()) {
        return Ok(false);
    }
    let ok = for_each_extreme_ray(grid, |atoms| {
        let mut v = F::zero();
        for &(i, w) in atoms {
            v += f[i] * w;
        }
        v >= -slack
    });
    Ok(ok)
}

/// Snap an angle to the nearest grid index (always within half a step).
pub fn snap_direction<F: Scalar>(grid: &DirectionGrid<F>, theta: F) -> usize {
    grid.nearest_index(theta)
}

/// Random valid bodies for property tests and oracles.
pub fn random_body<F: Scalar>(
    grid: &DirectionGrid<F>,
    rng: &mut ChaCha8Rng,
    points: usize,
    symmetric: bool,
) -> SupportVector<F> {
    let mut pts = Vec::new();
    for _ in 0..points.max(3) {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        pts.push(crate::geom::Vec2::new(F::c(x), F::c(y)));
        if symmetric {
            pts.push(crate::geom::Vec2::new(F::c(-x), F::c(-y)));
        }
    }
    SupportVector::from_points(grid, &pts).expect("nonempty point set")
}

/// Random sparse symmetric measure: a sum of segment measures at random
/// grid directions (zonotope surface measure).
pub fn random_zonotope_measure<F: Scalar>(
    grid: &DirectionGrid<F>,
    rng: &mut ChaCha8Rng,
    segments: usize,
) -> GridMeasure<F> {
    let mut w = vec![F::zero(); grid.n()];
    for _ in 0..segments.max(2) {
        let i = rng.gen_range(0..grid.n() / 2);
        let len = F::c(rng.gen_range(0.2..1.5));
        w[i] += len;
        w[i + grid.n() / 2] += len;
    }
    GridMeasure::new(grid.clone(), w).expect("segment sums close up")
}
