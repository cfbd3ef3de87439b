//! Dense linear programming: bounded-variable primal simplex, two phases,
//! explicit basis inverse with periodic refactorization, Bland fallback
//! after a run of degenerate pivots. Deterministic by construction: fixed
//! pricing rule, ties broken by lowest index.
//!
//! A `PreparedLp` keeps the standard form and the current basis so callers
//! that repeatedly change only the objective (conditional-gradient loops)
//! pay for phase 1 once.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solver tolerances, centralized so certificate checks stay consistent.
#[derive(Clone, Copy, Debug)]
pub struct LpConfig {
    pub pivot_tol: f64,
    pub feas_tol: f64,
    pub refactor_every: usize,
    pub max_iters: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self { pivot_tol: 1e-10, feas_tol: 1e-8, refactor_every: 128, max_iters: 200_000 }
    }
}

/// Dense LP instance: maximize `c.x` subject to `A x = b`, `G x <= d`,
/// `lower <= x <= upper` (infinities allowed in the bounds).
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    pub num_vars: usize,
    pub objective: Vec<F>,
    pub eq_lhs: Vec<Vec<F>>,
    pub eq_rhs: Vec<F>,
    pub ineq_lhs: Vec<Vec<F>>,
    pub ineq_rhs: Vec<F>,
    pub lower: Vec<F>,
    pub upper: Vec<F>,
}

impl<F: Scalar> LinearProgram<F> {
    /// All-default-bounds instance (x >= 0).
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![F::zero(); num_vars],
            eq_lhs: vec![],
            eq_rhs: vec![],
            ineq_lhs: vec![],
            ineq_rhs: vec![],
            lower: vec![F::zero(); num_vars],
            upper: vec![F::infinity(); num_vars],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        let check_len = |len: usize, what: &str| {
            if len != n {
                Err(Error::LpDimensionMismatch(format!("{what}: {len} entries for {n} vars")))
            } else {
                Ok(())
            }
        };
        check_len(self.objective.len(), "objective")?;
        check_len(self.lower.len(), "lower bounds")?;
        check_len(self.upper.len(), "upper bounds")?;
        if self.eq_lhs.len() != self.eq_rhs.len() {
            return Err(Error::LpDimensionMismatch("eq rows vs rhs".into()));
        }
        if self.ineq_lhs.len() != self.ineq_rhs.len() {
            return Err(Error::LpDimensionMismatch("ineq rows vs rhs".into()));
        }
        for row in self.eq_lhs.iter().chain(&self.ineq_lhs) {
            check_len(row.len(), "constraint row")?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::LpDimensionMismatch("non-finite matrix entry".into()));
            }
        }
        for v in self.eq_rhs.iter().chain(&self.ineq_rhs).chain(&self.objective) {
            if !v.is_finite() {
                return Err(Error::LpDimensionMismatch("non-finite rhs or objective".into()));
            }
        }
        for (l, u) in self.lower.iter().zip(&self.upper) {
            if *l > *u {
                return Err(Error::LpDimensionMismatch("lower bound above upper".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Numerical breakdown, distinct from infeasibility.
    Failed,
}

/// Solve outcome. `duals` has one entry per row (equalities first, then
/// inequalities); `reduced_costs` one per structural variable.
#[derive(Clone, Debug)]
pub struct LpSolution<F> {
    pub status: LpStatus,
    pub x: Vec<F>,
    pub objective_value: F,
    pub duals: Vec<F>,
    pub reduced_costs: Vec<F>,
    pub primal_residual: F,
    pub dual_residual: F,
    pub duality_gap: F,
}

impl<F: Scalar> LpSolution<F> {
    fn empty(status: LpStatus, n: usize, m: usize) -> Self {
        Self {
            status,
            x: vec![F::zero(); n],
            objective_value: F::zero(),
            duals: vec![F::zero(); m],
            reduced_costs: vec![F::zero(); n],
            primal_residual: F::zero(),
            dual_residual: F::zero(),
            duality_gap: F::zero(),
        }
    }
}

pub fn solve_lp<F: Scalar>(lp: &LinearProgram<F>) -> Result<LpSolution<F>> {
    PreparedLp::new(lp, LpConfig::default())?.solve()
}

/// Phase-one wrapper: is the system feasible, and if so, a witness point.
pub fn feasible<F: Scalar>(lp: &LinearProgram<F>) -> Result<Option<Vec<F>>> {
    let mut prep = PreparedLp::new(lp, LpConfig::default())?;
    if prep.ensure_feasible()? {
        Ok(Some(prep.structural_values()))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RowKind {
    Eq,
    Ineq,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Failed(&'static str),
}

/// Standard-form instance with persistent basis for warm restarts.
pub struct PreparedLp<F> {
    cfg: LpConfig,
    m: usize,
    n_struct: usize,
    n_slack: usize,
    /// columns[j] is the m-vector A_j; structural, then slack, then artificial.
    columns: Vec<Vec<F>>,
    rhs: Vec<F>,
    lower: Vec<F>,
    upper: Vec<F>,
    row_kinds: Vec<RowKind>,
    /// original row index (position among eq rows / ineq rows) for dual output
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    nb_value: Vec<F>,
    binv: Vec<F>,
    xb: Vec<F>,
    feasible_basis: bool,
    degenerate_streak: usize,
    bland: bool,
    pivots_since_refactor: usize,
    last_duals: Vec<F>,
    stored_objective: Vec<F>,
}

impl<F: Scalar> PreparedLp<F> {
    pub fn new(lp: &LinearProgram<F>, cfg: LpConfig) -> Result<Self> {
        lp.validate()?;
        let n_struct = lp.num_vars;
        let n_eq = lp.eq_lhs.len();
        let n_ineq = lp.ineq_lhs.len();
        let m = n_eq + n_ineq;
        let mut columns = vec![vec![F::zero(); m]; n_struct + n_ineq];
        for (r, row) in lp.eq_lhs.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                columns[j][r] = v;
            }
        }
        for (r, row) in lp.ineq_lhs.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                columns[j][n_eq + r] = v;
            }
        }
        for s in 0..n_ineq {
            columns[n_struct + s][n_eq + s] = F::one();
        }
        let mut rhs = lp.eq_rhs.clone();
        rhs.extend_from_slice(&lp.ineq_rhs);
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        lower.extend(std::iter::repeat(F::zero()).take(n_ineq));
        upper.extend(std::iter::repeat(F::infinity()).take(n_ineq));
        let mut row_kinds = vec![RowKind::Eq; n_eq];
        row_kinds.extend(std::iter::repeat(RowKind::Ineq).take(n_ineq));
        let n_total = n_struct + n_ineq;
        Ok(Self {
            cfg,
            m,
            n_struct,
            n_slack: n_ineq,
            columns,
            rhs,
            lower,
            upper,
            row_kinds,
            basis: Vec::new(),
            is_basic: vec![false; n_total],
            nb_value: vec![F::zero(); n_total],
            binv: Vec::new(),
            xb: Vec::new(),
            feasible_basis: false,
            degenerate_streak: 0,
            bland: false,
            pivots_since_refactor: 0,
            last_duals: vec![F::zero(); m],
            stored_objective: lp.objective.clone(),
        })
    }

    fn n_total(&self) -> usize {
        self.columns.len()
    }

    fn start_value(lower: F, upper: F) -> F {
        if lower.is_finite() {
            if upper.is_finite() && upper.abs() < lower.abs() {
                upper
            } else {
                lower
            }
        } else if upper.is_finite() {
            upper
        } else {
            F::zero()
        }
    }

    /// Run phase 1. Returns false (and keeps Farkas duals in `last_duals`)
    /// when the constraints are inconsistent.
    pub fn ensure_feasible(&mut self) -> Result<bool> {
        if self.feasible_basis {
            return Ok(true);
        }
        // Drop any artificial columns from an earlier attempt.
        let base = self.n_struct + self.n_slack;
        self.columns.truncate(base);
        self.lower.truncate(base);
        self.upper.truncate(base);
        self.is_basic = vec![false; self.n_total()];
        self.nb_value = (0..self.n_total())
            .map(|j| Self::start_value(self.lower[j], self.upper[j]))
            .collect();

        // Row activity with every column at its start value.
        let mut activity = vec![F::zero(); self.m];
        for j in 0..self.n_struct {
            let v = self.nb_value[j];
            if v != F::zero() {
                for r in 0..self.m {
                    activity[r] += self.columns[j][r] * v;
                }
            }
        }

        self.basis = Vec::with_capacity(self.m);
        let mut artificials = Vec::new();
        for r in 0..self.m {
            let resid = self.rhs[r] - activity[r];
            let slack_ok = self.row_kinds[r] == RowKind::Ineq && resid >= F::zero();
            if slack_ok {
                let s = self.n_struct + self.slack_index(r);
                self.basis.push(s);
                self.is_basic[s] = true;
            } else {
                let sign = if resid >= F::zero() { F::one() } else { -F::one() };
                let mut col = vec![F::zero(); self.m];
                col[r] = sign;
                self.columns.push(col);
                self.lower.push(F::zero());
                self.upper.push(F::infinity());
                let a = self.columns.len() - 1;
                self.nb_value.push(F::zero());
                self.is_basic.push(true);
                self.basis.push(a);
                artificials.push(a);
            }
        }
        self.refactor()?;

        if !artificials.is_empty() {
            let mut cost = vec![F::zero(); self.n_total()];
            for &a in &artificials {
                cost[a] = -F::one();
            }
            self.degenerate_streak = 0;
            self.bland = false;
            match self.simplex(&cost)? {
                StepOutcome::Optimal => {}
                StepOutcome::Unbounded => {
                    return Err(Error::SolverFailure("phase 1 unbounded".into()))
                }
                StepOutcome::Failed(why) => return Err(Error::SolverFailure(why.into())),
            }
            let infeas: F = artificials
                .iter()
                .map(|&a| if self.is_basic[a] { self.basic_value(a) } else { self.nb_value[a] })
                .sum();
            let scale = F::one() + self.rhs.iter().fold(F::zero(), |acc, v| acc.max(v.abs()));
            self.last_duals = self.prices(&cost);
            if infeas > F::c(self.cfg.feas_tol) * scale {
                return Ok(false);
            }
            self.evict_artificials(&artificials)?;
            // Freeze all artificial columns at zero.
            for &a in &artificials {
                self.lower[a] = F::zero();
                self.upper[a] = F::zero();
                if !self.is_basic[a] {
                    self.nb_value[a] = F::zero();
                }
            }
            self.recompute_xb();
        }
        self.feasible_basis = true;
        Ok(true)
    }

    /// Optimize a (structural) objective from the current feasible basis.
    pub fn solve_with(&mut self, objective: &[F]) -> Result<LpSolution<F>> {
        if objective.len() != self.n_struct {
            return Err(Error::LpDimensionMismatch("objective length".into()));
        }
        if !self.ensure_feasible()? {
            let mut sol = LpSolution::empty(LpStatus::Infeasible, self.n_struct, self.m);
            sol.duals = self.last_duals.clone();
            return Ok(sol);
        }
        let mut cost = vec![F::zero(); self.n_total()];
        cost[..self.n_struct].copy_from_slice(objective);
        self.degenerate_streak = 0;
        self.bland = false;
        let out = self.simplex(&cost)?;
        match out {
            StepOutcome::Optimal => Ok(self.extract(&cost)),
            StepOutcome::Unbounded => {
                Ok(LpSolution::empty(LpStatus::Unbounded, self.n_struct, self.m))
            }
            StepOutcome::Failed(_) => {
                Ok(LpSolution::empty(LpStatus::Failed, self.n_struct, self.m))
            }
        }
    }

    pub fn solve(&mut self) -> Result<LpSolution<F>> {
        let obj = self.objective_or_zero();
        self.solve_with(&obj)
    }

    fn objective_or_zero(&self) -> Vec<F> {
        self.stored_objective.clone()
    }

    pub fn structural_values(&self) -> Vec<F> {
        let mut x = vec![F::zero(); self.n_struct];
        for j in 0..self.n_struct {
            x[j] = if self.is_basic[j] { self.basic_value(j) } else { self.nb_value[j] };
        }
        x
    }

    /// Farkas/optimal duals from the most recent solve.
    pub fn duals(&self) -> &[F] {
        &self.last_duals
    }

    fn slack_index(&self, row: usize) -> usize {
        // Slack s is attached to the s-th inequality row; rows are ordered
        // eq first, so the slack for absolute row r is r - n_eq.
        let n_eq = self.row_kinds.iter().filter(|k| **k == RowKind::Eq).count();
        row - n_eq
    }

    fn basic_value(&self, j: usize) -> F {
        let pos = self.basis.iter().position(|&b| b == j).expect("basic var in basis");
        self.xb[pos]
    }

    fn prices(&self, cost: &[F]) -> Vec<F> {
        let m = self.m;
        let mut y = vec![F::zero(); m];
        for (k, &bj) in self.basis.iter().enumerate() {
            let cb = cost[bj];
            if cb != F::zero() {
                let row = &self.binv[k * m..(k + 1) * m];
                for i in 0..m {
                    y[i] += cb * row[i];
                }
            }
        }
        y
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        let mut a = vec![F::zero(); m * m];
        for (k, &bj) in self.basis.iter().enumerate() {
            for r in 0..m {
                a[r * m + k] = self.columns[bj][r];
            }
        }
        let mut inv = vec![F::zero(); m * m];
        for i in 0..m {
            inv[i * m + i] = F::one();
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = a[col * m + col].abs();
            for r in (col + 1)..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < F::c(self.cfg.pivot_tol) {
                return Err(Error::SolverFailure("singular basis".into()));
            }
            if piv != col {
                for j in 0..m {
                    a.swap(col * m + j, piv * m + j);
                    inv.swap(col * m + j, piv * m + j);
                }
            }
            let d = a[col * m + col];
            for j in 0..m {
                a[col * m + j] /= d;
                inv[col * m + j] /= d;
            }
            for r in 0..m {
                if r != col {
                    let f = a[r * m + col];
                    if f != F::zero() {
                        for j in 0..m {
                            let t = a[col * m + j] * f;
                            a[r * m + j] -= t;
                            let t = inv[col * m + j] * f;
                            inv[r * m + j] -= t;
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        self.recompute_xb();
        Ok(())
    }

    fn recompute_xb(&mut self) {
        let m = self.m;
        let mut resid = self.rhs.clone();
        for j in 0..self.n_total() {
            if !self.is_basic[j] && self.nb_value[j] != F::zero() {
                let v = self.nb_value[j];
                for r in 0..m {
                    resid[r] -= self.columns[j][r] * v;
                }
            }
        }
        let mut xb = vec![F::zero(); m];
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            let mut s = F::zero();
            for i in 0..m {
                s += row[i] * resid[i];
            }
            xb[k] = s;
        }
        self.xb = xb;
    }

    fn ftran(&self, col: &[F]) -> Vec<F> {
        let m = self.m;
        let mut w = vec![F::zero(); m];
        for (k, wk) in w.iter_mut().enumerate() {
            let row = &self.binv[k * m..(k + 1) * m];
            let mut s = F::zero();
            for i in 0..m {
                s += row[i] * col[i];
            }
            *wk = s;
        }
        w
    }

    fn simplex(&mut self, cost: &[F]) -> Result<StepOutcome> {
        let piv_tol = F::c(self.cfg.pivot_tol);
        let opt_tol = F::c(self.cfg.feas_tol * 1e-1);
        let degen_tol = F::c(1e-12);
        let bland_after = 3 * (self.m + self.n_total());
        for _iter in 0..self.cfg.max_iters {
            let y = self.prices(cost);
            self.last_duals = y.clone();

            // Pricing: most violating reduced cost (Dantzig), or Bland.
            let mut enter: Option<(usize, F, F)> = None; // (j, d_j, direction)
            for j in 0..self.n_total() {
                if self.is_basic[j] {
                    continue;
                }
                let range = self.upper[j] - self.lower[j];
                if range <= F::zero() {
                    continue; // fixed (incl. frozen artificials)
                }
                let col = &self.columns[j];
                let mut d = cost[j];
                for r in 0..self.m {
                    d -= y[r] * col[r];
                }
                let v = self.nb_value[j];
                let at_lower = self.lower[j].is_finite() && (v - self.lower[j]).abs() <= degen_tol;
                let at_upper = self.upper[j].is_finite() && (v - self.upper[j]).abs() <= degen_tol;
                let dir = if at_lower && !at_upper {
                    if d > opt_tol {
                        F::one()
                    } else {
                        continue;
                    }
                } else if at_upper && !at_lower {
                    if d < -opt_tol {
                        -F::one()
                    } else {
                        continue;
                    }
                } else if !at_lower && !at_upper {
                    // free at interior value (typically 0)
                    if d > opt_tol {
                        F::one()
                    } else if d < -opt_tol {
                        -F::one()
                    } else {
                        continue;
                    }
                } else {
                    continue; // fixed in effect
                };
                let score = d.abs();
                let better = match &enter {
                    None => true,
                    Some((bj, bd, _)) => {
                        if self.bland {
                            j < *bj
                        } else {
                            score > bd.abs()
                        }
                    }
                };
                if better {
                    enter = Some((j, d, dir));
                    if self.bland {
                        break;
                    }
                }
            }
            let Some((j, _dj, dir)) = enter else {
                return Ok(StepOutcome::Optimal);
            };

            let w = self.ftran(&self.columns[j]);

            // Ratio test: entering moves by t * dir, basics by -t * dir * w.
            let own_range = self.upper[j] - self.lower[j];
            let mut t_best = if own_range.is_finite() { own_range } else { F::infinity() };
            let mut leave: Option<(usize, F)> = None; // (basis position, bound hit)
            for k in 0..self.m {
                let coeff = dir * w[k];
                let bj = self.basis[k];
                if coeff > piv_tol {
                    let lo = self.lower[bj];
                    if lo.is_finite() {
                        let t = (self.xb[k] - lo) / coeff;
                        if t < -F::c(self.cfg.feas_tol) {
                            continue;
                        }
                        let t = t.max(F::zero());
                        if t < t_best - degen_tol
                            || (t <= t_best + degen_tol && self.better_leave(&leave, k, &w, t, t_best))
                        {
                            t_best = t.min(t_best);
                            leave = Some((k, lo));
                        }
                    }
                } else if coeff < -piv_tol {
                    let hi = self.upper[bj];
                    if hi.is_finite() {
                        let t = (self.xb[k] - hi) / coeff;
                        if t < -F::c(self.cfg.feas_tol) {
                            continue;
                        }
                        let t = t.max(F::zero());
                        if t < t_best - degen_tol
                            || (t <= t_best + degen_tol && self.better_leave(&leave, k, &w, t, t_best))
                        {
                            t_best = t.min(t_best);
                            leave = Some((k, hi));
                        }
                    }
                }
            }

            if !t_best.is_finite() {
                return Ok(StepOutcome::Unbounded);
            }
            if t_best <= degen_tol {
                self.degenerate_streak += 1;
                if self.degenerate_streak > bland_after {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
            }

            let step = t_best * dir;
            for k in 0..self.m {
                self.xb[k] -= step * w[k];
            }
            let new_val = self.nb_value[j] + step;

            match leave {
                None => {
                    // Bound flip: entering hits its opposite bound.
                    self.nb_value[j] = new_val;
                }
                Some((r, bound)) => {
                    let out = self.basis[r];
                    self.is_basic[out] = false;
                    self.nb_value[out] = bound;
                    self.basis[r] = j;
                    self.is_basic[j] = true;
                    self.xb[r] = new_val;
                    self.pivot_update(r, &w)?;
                    self.pivots_since_refactor += 1;
                    if self.pivots_since_refactor >= self.cfg.refactor_every {
                        self.refactor()?;
                    }
                }
            }
        }
        Ok(StepOutcome::Failed("iteration cap reached"))
    }

    fn better_leave(
        &self,
        current: &Option<(usize, F)>,
        k: usize,
        w: &[F],
        t: F,
        t_best: F,
    ) -> bool {
        if t > t_best + F::c(1e-12) {
            return false;
        }
        match current {
            None => true,
            Some((ck, _)) => {
                if self.bland {
                    self.basis[k] < self.basis[*ck]
                } else {
                    let a = w[k].abs();
                    let b = w[*ck].abs();
                    a > b || (a == b && self.basis[k] < self.basis[*ck])
                }
            }
        }
    }

    fn pivot_update(&mut self, r: usize, w: &[F]) -> Result<()> {
        let m = self.m;
        let piv = w[r];
        if piv.abs() < F::c(self.cfg.pivot_tol) {
            return self.refactor();
        }
        // binv <- E^{-1} binv where E is identity with column r replaced by w.
        for i in 0..m {
            self.binv[r * m + i] /= piv;
        }
        for k in 0..m {
            if k != r {
                let f = w[k];
                if f != F::zero() {
                    for i in 0..m {
                        let t = self.binv[r * m + i] * f;
                        self.binv[k * m + i] -= t;
                    }
                }
            }
        }
        Ok(())
    }

    fn evict_artificials(&mut self, artificials: &[usize]) -> Result<()> {
        let arts: Vec<usize> = artificials.iter().copied().filter(|&a| self.is_basic[a]).collect();
        for a in arts {
            let r = self.basis.iter().position(|&b| b == a).expect("basic artificial");
            let mut replacement = None;
            for j in 0..(self.n_struct + self.n_slack) {
                if self.is_basic[j] {
                    continue;
                }
                let w = self.ftran(&self.columns[j]);
                if w[r].abs() > F::c(1e-7) {
                    replacement = Some((j, w));
                    break;
                }
            }
            if let Some((j, w)) = replacement {
                let out = self.basis[r];
                self.is_basic[out] = false;
                self.nb_value[out] = F::zero();
                self.basis[r] = j;
                self.is_basic[j] = true;
                self.pivot_update(r, &w)?;
                self.recompute_xb();
            }
            // Otherwise the row is redundant; the artificial stays basic at 0
            // and is frozen by its [0, 0] bounds.
        }
        Ok(())
    }

    fn extract(&mut self, cost: &[F]) -> LpSolution<F> {
        let m = self.m;
        let x = self.structural_values();
        let y = self.prices(cost);
        self.last_duals = y.clone();
        let mut obj = F::zero();
        for j in 0..self.n_struct {
            obj += cost[j] * x[j];
        }

        // Reduced costs for structural variables.
        let mut reduced = vec![F::zero(); self.n_struct];
        for (j, red) in reduced.iter_mut().enumerate() {
            if self.is_basic[j] {
                continue;
            }
            let col = &self.columns[j];
            let mut d = cost[j];
            for r in 0..m {
                d -= y[r] * col[r];
            }
            *red = d;
        }

        // Primal residual over rows and bounds.
        let mut activity = vec![F::zero(); m];
        for j in 0..self.n_struct {
            if x[j] != F::zero() {
                for r in 0..m {
                    activity[r] += self.columns[j][r] * x[j];
                }
            }
        }
        let n_eq = self.row_kinds.iter().filter(|k| **k == RowKind::Eq).count();
        let mut primal = F::zero();
        for r in 0..m {
            let resid = match self.row_kinds[r] {
                RowKind::Eq => (activity[r] - self.rhs[r]).abs(),
                RowKind::Ineq => (activity[r] - self.rhs[r]).max(F::zero()),
            };
            primal = primal.max(resid);
        }
        for j in 0..self.n_struct {
            if self.lower[j].is_finite() {
                primal = primal.max(self.lower[j] - x[j]);
            }
            if self.upper[j].is_finite() {
                primal = primal.max(x[j] - self.upper[j]);
            }
        }

        // Dual residual: sign conditions on reduced costs and ineq duals.
        let mut dual = F::zero();
        let tolv = F::c(1e-13);
        for j in 0..self.n_total() {
            if self.is_basic[j] {
                continue;
            }
            let col = &self.columns[j];
            let mut d = cost[j];
            for r in 0..m {
                d -= y[r] * col[r];
            }
            let v = if j < self.n_struct { x[j] } else { self.nb_value[j] };
            let at_lower = self.lower[j].is_finite() && (v - self.lower[j]).abs() <= tolv.max(F::c(1e-9) * (F::one() + v.abs()));
            let at_upper = self.upper[j].is_finite() && (v - self.upper[j]).abs() <= tolv.max(F::c(1e-9) * (F::one() + v.abs()));
            if self.upper[j] - self.lower[j] <= F::zero() {
                continue;
            }
            if at_lower && !at_upper {
                dual = dual.max(d);
            } else if at_upper && !at_lower {
                dual = dual.max(-d);
            } else if !at_lower && !at_upper {
                dual = dual.max(d.abs());
            }
        }

        // Duality gap via c.x = y.b + sum of nonbasic d_j x_j at an exact basis.
        let mut dual_obj = F::zero();
        for r in 0..m {
            dual_obj += y[r] * self.rhs[r];
        }
        for j in 0..self.n_total() {
            if self.is_basic[j] {
                continue;
            }
            let col = &self.columns[j];
            let mut d = cost[j];
            for r in 0..m {
                d -= y[r] * col[r];
            }
            let v = if j < self.n_struct { x[j] } else { self.nb_value[j] };
            dual_obj += d * v;
        }

        let _ = n_eq;
        LpSolution {
            status: LpStatus::Optimal,
            x,
            objective_value: obj,
            duals: y,
            reduced_costs: reduced,
            primal_residual: primal,
            dual_residual: dual,
            duality_gap: (obj - dual_obj).abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp1() -> LinearProgram<f64> {
        // maximize x, x <= 3, x >= 0
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.ineq_lhs = vec![vec![1.0]];
        lp.ineq_rhs = vec![3.0];
        lp
    }

    #[test]
    fn simple_bounded() {
        let sol = solve_lp(&lp1()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
        assert!((sol.objective_value - 3.0).abs() < 1e-9);
        assert!(sol.duality_gap < 1e-7 * (1.0 + sol.objective_value.abs()));
    }

    #[test]
    fn infeasible_detected() {
        // x >= 1 and x <= 0
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.ineq_lhs = vec![vec![-1.0]];
        lp.ineq_rhs = vec![-1.0];
        lp.upper = vec![0.0];
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_free_vars() {
        // maximize -|x| style: maximize -x - y s.t. x - y = 2, x,y free in [-10, 10]
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, -1.0];
        lp.eq_lhs = vec![vec![1.0, -1.0]];
        lp.eq_rhs = vec![2.0];
        lp.lower = vec![-10.0, -10.0];
        lp.upper = vec![10.0, 10.0];
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        // optimum x = -4? objective -x-y with x = y + 2: -(2y+2), max at y = -10 -> 18
        assert!((sol.objective_value - 18.0).abs() < 1e-8);
    }

    #[test]
    fn feasibility_witness() {
        // {x = 1, x >= 0} -> witness 1; {x = -1, x >= 0} -> none
        let mut lp = LinearProgram::new(1);
        lp.eq_lhs = vec![vec![1.0]];
        lp.eq_rhs = vec![1.0];
        let w = feasible(&lp).unwrap().unwrap();
        assert!((w[0] - 1.0).abs() < 1e-9);
        lp.eq_rhs = vec![-1.0];
        assert!(feasible(&lp).unwrap().is_none());
    }

    #[test]
    fn transport_polytope_witness() {
        // 2x2 transport polytope with consistent margins.
        let mut lp = LinearProgram::new(4);
        lp.eq_lhs = vec![
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
        ];
        lp.eq_rhs = vec![3.0, 2.0, 1.5, 3.5];
        let w = feasible(&lp).unwrap().expect("feasible");
        let sums = [w[0] + w[1], w[2] + w[3], w[0] + w[2], w[1] + w[3]];
        for (s, e) in sums.iter().zip([3.0, 2.0, 1.5, 3.5]) {
            assert!((s - e).abs() < 1e-8);
        }
        assert!(w.iter().all(|&v| v >= -1e-9));
    }

    /// Brute-force reference: enumerate candidate active sets (rows + bounds)
    /// and keep the best feasible vertex.
    fn brute_force(lp: &LinearProgram<f64>) -> Option<(f64, Vec<f64>)> {
        let n = lp.num_vars;
        let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
        for (row, rhs) in lp.eq_lhs.iter().zip(&lp.eq_rhs) {
            planes.push((row.clone(), *rhs));
        }
        for (row, rhs) in lp.ineq_lhs.iter().zip(&lp.ineq_rhs) {
            planes.push((row.clone(), *rhs));
        }
        for j in 0..n {
            if lp.lower[j].is_finite() {
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                planes.push((r, lp.lower[j]));
            }
            if lp.upper[j].is_finite() {
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                planes.push((r, lp.upper[j]));
            }
        }
        let k = planes.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            // solve the n x n system from planes[idx]
            let mut a = vec![0.0; n * n];
            let mut b = vec![0.0; n];
            for (r, &pi) in idx.iter().enumerate() {
                for c in 0..n {
                    a[r * n + c] = planes[pi].0[c];
                }
                b[r] = planes[pi].1;
            }
            if let Some(x) = dense_solve(&mut a, &mut b, n) {
                if is_feasible(lp, &x) {
                    let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    if best.as_ref().map_or(true, |(bo, _)| obj > *bo + 1e-12) {
                        best = Some((obj, x));
                    }
                }
            }
            // next combination
            let mut i = n;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if idx[i] + (n - i) <= k {
                    idx[i] += 1;
                    for j2 in (i + 1)..n {
                        idx[j2] = idx[j2 - 1] + 1;
                    }
                    if idx[n - 1] < k {
                        break;
                    }
                } else {
                    continue;
                }
                break;
            }
            if idx[n - 1] >= k {
                return best;
            }
        }
    }

    fn dense_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col].abs() < 1e-9 {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                b.swap(col, piv);
            }
            for r in 0..n {
                if r != col {
                    let f = a[r * n + col] / a[col * n + col];
                    if f != 0.0 {
                        for j in col..n {
                            a[r * n + j] -= f * a[col * n + j];
                        }
                        b[r] -= f * b[col];
                    }
                }
            }
        }
        Some((0..n).map(|i| b[i] / a[i * n + i]).collect())
    }

    fn is_feasible(lp: &LinearProgram<f64>, x: &[f64]) -> bool {
        let tol = 1e-7;
        for (row, rhs) in lp.eq_lhs.iter().zip(&lp.eq_rhs) {
            let v: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if (v - rhs).abs() > tol {
                return false;
            }
        }
        for (row, rhs) in lp.ineq_lhs.iter().zip(&lp.ineq_rhs) {
            let v: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if v > rhs + tol {
                return false;
            }
        }
        for j in 0..lp.num_vars {
            if x[j] < lp.lower[j] - tol || x[j] > lp.upper[j] + tol {
                return false;
            }
        }
        true
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..40 {
            let n = 2 + case % 3;
            let m = 2 + case % 4;
            let mut lp = LinearProgram::new(n);
            lp.objective = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                lp.ineq_lhs.push(row);
                lp.ineq_rhs.push(rng.gen_range(0.5..2.0));
            }
            lp.upper = vec![5.0; n];
            let sol = solve_lp(&lp).unwrap();
            let reference = brute_force(&lp);
            match sol.status {
                LpStatus::Optimal => {
                    let (ro, _) = reference.expect("reference finds a vertex");
                    assert!(
                        (sol.objective_value - ro).abs() <= 1e-6 * (1.0 + ro.abs()),
                        "case {case}: {} vs {}",
                        sol.objective_value,
                        ro
                    );
                }
                LpStatus::Infeasible => assert!(reference.is_none()),
                other => panic!("unexpected status {other:?} in case {case}"),
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let lp = lp1();
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.objective_value, b.objective_value);
    }

    #[test]
    fn warm_restart_with_new_objective() {
        let mut lp = LinearProgram::new(2);
        lp.ineq_lhs = vec![vec![1.0, 1.0]];
        lp.ineq_rhs = vec![1.0];
        let mut prep = PreparedLp::new(&lp, LpConfig::default()).unwrap();
        let a = prep.solve_with(&[1.0, 0.0]).unwrap();
        assert!((a.objective_value - 1.0).abs() < 1e-9);
        let b = prep.solve_with(&[0.0, 1.0]).unwrap();
        assert!((b.objective_value - 1.0).abs() < 1e-9);
        assert!((b.x[1] - 1.0).abs() < 1e-9);
    }
}
