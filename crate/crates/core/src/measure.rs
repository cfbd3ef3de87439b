//! Atomic surface-area measures on the grid and the calculus built on the
//! canonical pairing `<f, mu> = (1/2) sum f_i w_i`: mixed areas, volume,
//! Blaschke sums, symmetrization, integral breadth, and the planar
//! reconstruction of a body from its measure.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::grid::DirectionGrid;
use crate::scalar::Scalar;
use crate::support::{self, SupportVector};
use crate::tol;

/// Nonnegative atomic measure on the grid with zero first moment
/// (translation invariance). Weights are edge lengths in the plane.
#[derive(Clone, Debug)]
pub struct GridMeasure<F> {
    grid: DirectionGrid<F>,
    weights: Vec<F>,
}

/// A symmetric pair of Dirac atoms `weight * (e_i + e_{-i})`; the flattening
/// multiplier in the Urysohn certificates.
#[derive(Clone, Copy, Debug)]
pub struct DiracPair<F> {
    pub index: usize,
    pub weight: F,
}

impl<F: Scalar> DiracPair<F> {
    pub fn new(index: usize, weight: F) -> Result<Self> {
        if weight < F::zero() {
            return Err(Error::InvalidArgument("Dirac weight must be nonnegative".into()));
        }
        Ok(Self { index, weight })
    }

    pub fn to_measure(self, grid: &DirectionGrid<F>) -> Result<GridMeasure<F>> {
        let mut w = vec![F::zero(); grid.n()];
        if self.index >= grid.n() {
            return Err(Error::IndexOutOfRange(self.index, grid.n()));
        }
        w[self.index] = self.weight;
        w[grid.opposite(self.index)] = self.weight;
        GridMeasure::new(grid.clone(), w)
    }
}

impl<F: Scalar> GridMeasure<F> {
    /// Validates nonnegativity (tiny negatives are clamped) and closure.
    pub fn new(grid: DirectionGrid<F>, mut weights: Vec<F>) -> Result<Self> {
        if weights.len() != grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: weights.len() });
        }
        let clamp = F::c(tol::EXACT);
        for w in &mut weights {
            if *w < F::zero() {
                if *w < -clamp {
                    return Err(Error::InvalidArgument(format!(
                        "negative weight {:e}",
                        num_traits::ToPrimitive::to_f64(w).unwrap_or(f64::NAN)
                    )));
                }
                *w = F::zero();
            }
        }
        let m = Self { grid, weights };
        m.check_closure()?;
        Ok(m)
    }

    /// Zero measure.
    pub fn zero(grid: &DirectionGrid<F>) -> Self {
        Self { grid: grid.clone(), weights: vec![F::zero(); grid.n()] }
    }

    /// The grid disk's measure: uniform weights `r * 2 tan(pi/n)`.
    pub fn disk(grid: &DirectionGrid<F>, r: F) -> Self {
        Self { grid: grid.clone(), weights: vec![r * grid.disk_weight(); grid.n()] }
    }

    pub fn grid(&self) -> &DirectionGrid<F> {
        &self.grid
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn total_mass(&self) -> F {
        self.weights.iter().copied().sum()
    }

    pub fn first_moment(&self) -> Vec2<F> {
        let mut s = Vec2::zero();
        for (i, &w) in self.weights.iter().enumerate() {
            s = s + self.grid.direction(i) * w;
        }
        s
    }

    fn check_closure(&self) -> Result<()> {
        let mass = self.total_mass();
        let m = self.first_moment().norm();
        if m > F::c(tol::CLOSURE_REL) * mass.max(F::one()) {
            return Err(Error::ClosureViolated(
                num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN),
            ));
        }
        Ok(())
    }

    /// True when the positive atoms span the whole plane positively, i.e.
    /// they are not contained in any closed half-circle.
    pub fn is_nondegenerate(&self, weight_tol: F) -> bool {
        let mut angles: Vec<F> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > weight_tol)
            .map(|(i, _)| self.grid.angle(i))
            .collect();
        if angles.len() < 3 {
            return false;
        }
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let two_pi = F::PI() + F::PI();
        let mut max_gap = angles[0] + two_pi - angles[angles.len() - 1];
        for w in angles.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        max_gap < F::PI() - F::c(1e-12)
    }

    /// Even part `(w_i + w_{-i}) / 2`; the dual of the even part operator on
    /// support functions.
    pub fn symmetrized(&self) -> Self {
        let half = F::c(0.5);
        let weights = (0..self.grid.n())
            .map(|i| (self.weights[i] + self.weights[self.grid.opposite(i)]) * half)
            .collect();
        Self { grid: self.grid.clone(), weights }
    }

    pub fn scaled(&self, t: F) -> Result<Self> {
        if t < F::zero() {
            return Err(Error::InvalidArgument("scale must be nonnegative".into()));
        }
        Ok(Self {
            grid: self.grid.clone(),
            weights: self.weights.iter().map(|&w| w * t).collect(),
        })
    }
}

/// Surface-area measure of a valid body: the discrete edge lengths.
/// Linear in `h`; negative values within the validity tolerance are clamped.
pub fn surface_measure<F: Scalar>(h: &SupportVector<F>) -> Result<GridMeasure<F>> {
    h.require_valid(F::c(tol::VALIDITY))?;
    let weights = h
        .edge_lengths()
        .into_iter()
        .map(|l| l.max(F::zero()))
        .collect();
    Ok(GridMeasure { grid: h.grid().clone(), weights })
}

/// Unique (canonical-translate) body with the given surface measure: the
/// planar Minkowski problem. Edge vectors `w_i rot90(u_i)` are chained in
/// angular order; closure guarantees the chain closes up.
pub fn body_from_measure<F: Scalar>(w: &GridMeasure<F>) -> Result<SupportVector<F>> {
    w.check_closure()?;
    let mass = w.total_mass();
    let weight_tol = F::c(1e-14) * mass.max(F::one());
    if !w.is_nondegenerate(weight_tol) {
        return Err(Error::DegenerateMeasure);
    }
    let grid = w.grid();
    let n = grid.n();
    let mut verts = Vec::with_capacity(n);
    let mut p = Vec2::zero();
    for i in 0..n {
        verts.push(p);
        p = p + grid.direction(i).perp() * w.weights[i];
    }
    let h = SupportVector::from_points(grid, &verts)?;
    Ok(h.canonicalized())
}

/// Canonical pairing `<f, mu> = (1/2) sum f_i w_i`. With `f` the support of
/// `x` and `mu` the measure of `y` this is the mixed area `V1(y, x)`.
pub fn pairing<F: Scalar>(f: &[F], mu: &GridMeasure<F>) -> Result<F> {
    if f.len() != mu.grid.n() {
        return Err(Error::LengthMismatch { expected: mu.grid.n(), got: f.len() });
    }
    let mut s = F::zero();
    for (a, b) in f.iter().zip(&mu.weights) {
        s += *a * *b;
    }
    Ok(s * F::c(0.5))
}

/// Mixed area `V1(y, x) = <h_x, mu(y)>`.
pub fn mixed_area<F: Scalar>(y: &SupportVector<F>, x: &SupportVector<F>) -> Result<F> {
    x.grid().check_same(y.grid())?;
    pairing(x.values(), &surface_measure(y)?)
}

/// Area of a valid body: `<h, mu(h)> = (1/2) sum h_i l_i(h)`.
/// For an invalid raw sample the extended volume is used instead.
pub fn volume<F: Scalar>(h: &SupportVector<F>) -> F {
    if h.is_valid(F::c(tol::VALIDITY)) {
        let ls = h.edge_lengths();
        let mut s = F::zero();
        for (a, b) in h.values().iter().zip(&ls) {
            s += *a * b.max(F::zero());
        }
        s * F::c(0.5)
    } else {
        extended_volume(h.grid(), h.values()).unwrap_or(F::nan())
    }
}

/// Extended volume of an arbitrary grid function: `V(f) = <f, mu(co f)>`,
/// which equals `V(co f)` because the envelope touches `f` wherever its
/// measure is positive.
pub fn extended_volume<F: Scalar>(grid: &DirectionGrid<F>, f: &[F]) -> Result<F> {
    let env = support::convex_envelope(grid, f)?;
    env.require_valid(F::c(tol::VALIDITY))?;
    pairing(f, &surface_measure(&env)?)
}

/// Blaschke sum: weights add.
pub fn blaschke_sum<F: Scalar>(a: &GridMeasure<F>, b: &GridMeasure<F>) -> Result<GridMeasure<F>> {
    a.grid.check_same(&b.grid)?;
    let weights = a.weights.iter().zip(&b.weights).map(|(&x, &y)| x + y).collect();
    GridMeasure::new(a.grid.clone(), weights)
}

/// Integral breadth: the pairing with the grid disk's measure,
/// `tan(pi/n) * sum h_i`.
pub fn integral_breadth<F: Scalar>(h: &SupportVector<F>) -> F {
    let t = (F::PI() / F::of_usize(h.n())).tan();
    let s: F = h.values().iter().copied().sum();
    t * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;

    fn grid(n: usize) -> DirectionGrid<f64> {
        DirectionGrid::new(n).unwrap()
    }

    fn square(g: &DirectionGrid<f64>, half_side: f64) -> SupportVector<f64> {
        let pts = [
            Vec2::new(half_side, half_side),
            Vec2::new(-half_side, half_side),
            Vec2::new(-half_side, -half_side),
            Vec2::new(half_side, -half_side),
        ];
        SupportVector::from_points(g, &pts).unwrap()
    }

    #[test]
    fn square_edges() {
        let g = grid(4);
        let h = square(&g, 0.5);
        let mu = surface_measure(&h).unwrap();
        for &w in mu.weights() {
            assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_weights_closed_form() {
        for n in [4usize, 8, 60, 360] {
            let g = grid(n);
            let h = SupportVector::disk(&g, 1.0);
            let mu = surface_measure(&h).unwrap();
            let expect = 2.0 * (std::f64::consts::PI / n as f64).tan();
            for &w in mu.weights() {
                assert!((w - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_measure_atoms() {
        // Circumradius 1, vertex at 90 degrees; normals at 30, 150, 270 on n=12.
        let g = grid(12);
        let pts: Vec<Vec2<f64>> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|d| Vec2::unit(d.to_radians()))
            .collect();
        let h = SupportVector::from_points(&g, &pts).unwrap();
        let mu = surface_measure(&h).unwrap();
        let side = 3.0f64.sqrt();
        for (i, &w) in mu.weights().iter().enumerate() {
            if i == 1 || i == 5 || i == 9 {
                assert!((w - side).abs() < 1e-9, "atom {i}: {w}");
            } else {
                assert!(w.abs() < 1e-9, "atom {i}: {w}");
            }
        }
        // Support at the outer normals is the inradius 1/2.
        for i in [1usize, 5, 9] {
            assert!((h.value(i) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn body_from_square_measure() {
        let g = grid(4);
        let w = GridMeasure::new(g.clone(), vec![1.0; 4]).unwrap();
        let h = body_from_measure(&w).unwrap();
        for &v in h.values() {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn closure_violation_rejected() {
        let g = grid(4);
        let r = GridMeasure::new(g, vec![2.0, 1.0, 1.0, 1.0]);
        assert!(matches!(r, Err(Error::ClosureViolated(_))));
    }

    #[test]
    fn degenerate_support_rejected() {
        let g = grid(4);
        let w = GridMeasure::new(g, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(body_from_measure(&w), Err(Error::DegenerateMeasure)));
    }

    #[test]
    fn pairing_half_perimeter() {
        let g = grid(4);
        let disk = SupportVector::disk(&g, 1.0);
        let sq = square(&g, 0.5);
        let v = pairing(disk.values(), &surface_measure(&sq).unwrap()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let zero = vec![0.0; 4];
        assert_eq!(pairing(&zero, &surface_measure(&sq).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn volume_closed_forms() {
        let g = grid(4);
        assert!((volume(&square(&g, 0.5)) - 1.0).abs() < 1e-12);
        for n in [8usize, 360] {
            let g = grid(n);
            let disk = SupportVector::disk(&g, 1.0);
            let expect = n as f64 * (std::f64::consts::PI / n as f64).tan();
            assert!((volume(&disk) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn integral_breadth_examples() {
        let g = grid(4);
        let sq = square(&g, 0.5);
        assert!((integral_breadth(&sq) - 2.0).abs() < 1e-12);
        let g8 = grid(8);
        let disk = SupportVector::disk(&g8, 1.0);
        let expect = 8.0 * (std::f64::consts::PI / 8.0).tan();
        assert!((integral_breadth(&disk) - expect).abs() < 1e-12);
        // A singleton has zero breadth.
        let pt = SupportVector::from_points(&g8, &[Vec2::new(0.3, -0.7)]).unwrap();
        assert!(integral_breadth(&pt).abs() < 1e-12);
    }

    #[test]
    fn blaschke_squares() {
        let g = grid(4);
        let m1 = surface_measure(&square(&g, 0.5)).unwrap();
        let sum = blaschke_sum(&m1, &m1).unwrap();
        let m2 = surface_measure(&square(&g, 1.0)).unwrap();
        for (a, b) in sum.weights().iter().zip(m2.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
        // Identity: adding the zero measure changes nothing.
        let z = GridMeasure::zero(&g);
        let same = blaschke_sum(&m1, &z).unwrap();
        for (a, b) in same.weights().iter().zip(m1.weights()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn symmetrize_measure_adjoint_identity() {
        use rand::{Rng, SeedableRng};
        let g = grid(12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let pts: Vec<Vec2<f64>> = (0..6)
                .map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let body = SupportVector::from_points(&g, &pts).unwrap();
            let mu = surface_measure(&body).unwrap();
            let f: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sym_f: Vec<f64> = (0..12).map(|i| 0.5 * (f[i] + f[(i + 6) % 12])).collect();
            let lhs = pairing(&f, &mu.symmetrized()).unwrap();
            let rhs = pairing(&sym_f, &mu).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_symmetrization_hexagon_measure() {
        let g = grid(12);
        let pts: Vec<Vec2<f64>> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|d| Vec2::unit(d.to_radians()))
            .collect();
        let tri = SupportVector::from_points(&g, &pts).unwrap();
        let mu_sym = surface_measure(&tri).unwrap().symmetrized();
        let side = 3.0f64.sqrt();
        for (i, &w) in mu_sym.weights().iter().enumerate() {
            if [1usize, 3, 5, 7, 9, 11].contains(&i) {
                assert!((w - side / 2.0).abs() < 1e-9);
            } else {
                assert!(w.abs() < 1e-9);
            }
        }
        // Matches the measure of the symmetrized support (duality).
        let hex = tri.symmetrized();
        let mu_hex = surface_measure(&hex).unwrap();
        for (a, b) in mu_sym.weights().iter().zip(mu_hex.weights()) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
