//! Small dense linear algebra: Householder QR with column pivoting (least
//! squares, rank, nullspace) and Cholesky for definite reduced systems.
//! Sizes here are a few hundred, so simple dense routines are enough.

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug)]
pub struct Mat<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Scalar> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn at(&self, r: usize, c: usize) -> F {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn matvec(&self, x: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.rows];
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let mut s = F::zero();
            for (a, b) in row.iter().zip(x) {
                s += *a * *b;
            }
            out[r] = s;
        }
        out
    }
}

/// QR factorization with column pivoting, kept in compact Householder form.
pub struct PivotedQr<F> {
    qr: Mat<F>,
    betas: Vec<F>,
    perm: Vec<usize>,
    pub rank: usize,
}

/// Factor `a` (consumed) with Householder reflections and column pivoting.
pub fn qr_factor<F: Scalar>(mut a: Mat<F>, rank_tol: F) -> PivotedQr<F> {
    let m = a.rows;
    let n = a.cols;
    let kmax = m.min(n);
    let mut betas = vec![F::zero(); kmax];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut col_norms: Vec<F> = (0..n)
        .map(|c| (0..m).map(|r| a.at(r, c) * a.at(r, c)).fold(F::zero(), |x, y| x + y))
        .collect();
    let mut max_diag = F::zero();
    let mut rank = 0;
    for k in 0..kmax {
        // Pivot: column with the largest remaining norm.
        let mut best = k;
        for c in (k + 1)..n {
            if col_norms[c] > col_norms[best] {
                best = c;
            }
        }
        if best != k {
            for r in 0..m {
                let t = a.at(r, k);
                a.set(r, k, a.at(r, best));
                a.set(r, best, t);
            }
            col_norms.swap(k, best);
            perm.swap(k, best);
        }
        // Householder vector for column k below the diagonal.
        let mut norm = F::zero();
        for r in k..m {
            norm = norm.hypot(a.at(r, k));
        }
        if rank == 0 {
            max_diag = norm;
        }
        if norm <= rank_tol * max_diag.max(F::one()) {
            break;
        }
        rank += 1;
        let alpha = if a.at(k, k) >= F::zero() { -norm } else { norm };
        let v0 = a.at(k, k) - alpha;
        a.set(k, k, alpha);
        let mut vnorm2 = v0 * v0;
        for r in (k + 1)..m {
            vnorm2 += a.at(r, k) * a.at(r, k);
        }
        if vnorm2 == F::zero() {
            betas[k] = F::zero();
            continue;
        }
        let beta = F::c(2.0) / vnorm2;
        betas[k] = beta;
        // Apply H = I - beta v v^T to the remaining columns; v is stored in
        // column k below the diagonal with implicit head v0.
        for c in (k + 1)..n {
            let mut dot = v0 * a.at(k, c);
            for r in (k + 1)..m {
                dot += a.at(r, k) * a.at(r, c);
            }
            let f = beta * dot;
            a.set(k, c, a.at(k, c) - f * v0);
            for r in (k + 1)..m {
                a.set(r, c, a.at(r, c) - f * a.at(r, k));
            }
            col_norms[c] = col_norms[c] - a.at(k, c) * a.at(k, c);
            if col_norms[c] < F::zero() {
                col_norms[c] = F::zero();
            }
        }
        // Stash v0 in a spare slot: keep it implicitly by storing v0 where
        // the diagonal used to be is not possible (alpha lives there), so we
        // remember it in betas' companion array below.
        a.set(k, k, alpha);
        hh_heads_push(&mut a, k, v0, m);
    }
    PivotedQr { qr: a, betas, perm, rank }
}

// The Householder head v0 for column k is stored in an extra row appended to
// the matrix data. Helpers keep that bookkeeping in one place.
fn hh_heads_push<F: Scalar>(a: &mut Mat<F>, k: usize, v0: F, m: usize) {
    if a.data.len() == a.rows * a.cols {
        a.data.extend(std::iter::repeat(F::zero()).take(a.cols));
    }
    let base = m * a.cols;
    a.data[base + k] = v0;
}

fn hh_head<F: Scalar>(a: &Mat<F>, k: usize, m: usize) -> F {
    let base = m * a.cols;
    if a.data.len() > base + k {
        a.data[base + k]
    } else {
        F::zero()
    }
}

impl<F: Scalar> PivotedQr<F> {
    /// Apply Q^T to a vector of length `rows`.
    pub fn qt_apply(&self, b: &mut [F]) {
        let m = self.qr.rows;
        for k in 0..self.rank {
            let beta = self.betas[k];
            if beta == F::zero() {
                continue;
            }
            let v0 = hh_head(&self.qr, k, m);
            let mut dot = v0 * b[k];
            for r in (k + 1)..m {
                dot += self.qr.at(r, k) * b[r];
            }
            let f = beta * dot;
            b[k] -= f * v0;
            for r in (k + 1)..m {
                b[r] -= f * self.qr.at(r, k);
            }
        }
    }

    /// Apply Q to a vector of length `rows`.
    pub fn q_apply(&self, b: &mut [F]) {
        let m = self.qr.rows;
        for k in (0..self.rank).rev() {
            let beta = self.betas[k];
            if beta == F::zero() {
                continue;
            }
            let v0 = hh_head(&self.qr, k, m);
            let mut dot = v0 * b[k];
            for r in (k + 1)..m {
                dot += self.qr.at(r, k) * b[r];
            }
            let f = beta * dot;
            b[k] -= f * v0;
            for r in (k + 1)..m {
                b[r] -= f * self.qr.at(r, k);
            }
        }
    }

    /// Least-squares basic solution of `A x = b` (free variables zero when
    /// rank-deficient). Returns the solution and the residual norm.
    pub fn solve(&self, b: &[F]) -> (Vec<F>, F) {
        let n = self.qr.cols;
        let mut c = b.to_vec();
        self.qt_apply(&mut c);
        let mut z = vec![F::zero(); n];
        for k in (0..self.rank).rev() {
            let mut s = c[k];
            for j in (k + 1)..self.rank {
                s -= self.qr.at(k, j) * z[j];
            }
            z[k] = s / self.qr.at(k, k);
        }
        let mut x = vec![F::zero(); n];
        for k in 0..n {
            x[self.perm[k]] = z[k];
        }
        let mut resid = F::zero();
        for r in self.rank..self.qr.rows {
            resid = resid.hypot(c[r]);
        }
        (x, resid)
    }
}

/// Orthonormal basis of the nullspace of `a` (rows x cols, rows <= cols is
/// typical). Columns of the result span `{x : a x = 0}`.
pub fn nullspace<F: Scalar>(a: &Mat<F>, rank_tol: F) -> Mat<F> {
    // Factor A^T = Q R; the last cols-rank columns of Q span null(A).
    let mut at = Mat::zeros(a.cols, a.rows);
    for r in 0..a.rows {
        for c in 0..a.cols {
            at.set(c, r, a.at(r, c));
        }
    }
    let f = qr_factor(at, rank_tol);
    let n = a.cols;
    let null_dim = n - f.rank;
    let mut z = Mat::zeros(n, null_dim);
    for j in 0..null_dim {
        let mut e = vec![F::zero(); n];
        e[f.rank + j] = F::one();
        f.q_apply(&mut e);
        for r in 0..n {
            z.set(r, j, e[r]);
        }
    }
    z
}

/// Solve `M x = b` for symmetric positive definite `M` (in place Cholesky).
/// Returns `None` when a pivot drops below `tol`.
pub fn cholesky_solve<F: Scalar>(m: &mut Mat<F>, b: &[F], tol: F) -> Option<Vec<F>> {
    let n = m.rows;
    for k in 0..n {
        let mut d = m.at(k, k);
        for j in 0..k {
            d -= m.at(k, j) * m.at(k, j);
        }
        if d <= tol {
            return None;
        }
        let d = d.sqrt();
        m.set(k, k, d);
        for i in (k + 1)..n {
            let mut v = m.at(i, k);
            for j in 0..k {
                v -= m.at(i, j) * m.at(k, j);
            }
            m.set(i, k, v / d);
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for j in 0..i {
            s -= m.at(i, j) * y[j];
        }
        y[i] = s / m.at(i, i);
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in (i + 1)..n {
            s -= m.at(j, i) * y[j];
        }
        y[i] = s / m.at(i, i);
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_solves_square_system() {
        let mut a = Mat::zeros(3, 3);
        let rows = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                a.set(r, c, *v);
            }
        }
        let x_true = vec![1.0, -2.0, 3.0];
        let b = a.matvec(&x_true);
        let f = qr_factor(a, 1e-12);
        assert_eq!(f.rank, 3);
        let (x, resid) = f.solve(&b);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-10);
        }
        assert!(resid < 1e-10);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let mut a = Mat::zeros(1, 3);
        a.set(0, 0, 1.0);
        a.set(0, 1, 1.0);
        a.set(0, 2, 1.0);
        let z = nullspace(&a, 1e-12);
        assert_eq!(z.cols, 2);
        for j in 0..2 {
            let v: Vec<f64> = (0..3).map(|r| z.at(r, j)).collect();
            let s: f64 = v.iter().sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_round_trip() {
        let mut m = Mat::zeros(2, 2);
        m.set(0, 0, 4.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 3.0);
        let x = cholesky_solve(&mut m, &[9.0, 7.0], 1e-14).unwrap();
        assert!((4.0 * x[0] + x[1] - 9.0).abs() < 1e-12);
        assert!((x[0] + 3.0 * x[1] - 7.0).abs() < 1e-12);
    }
}
