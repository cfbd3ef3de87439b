//! Convex polygons in the plane, counterclockwise vertex order.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::scalar::Scalar;

/// Convex polygon (possibly degenerate: a point or a segment).
#[derive(Clone, Debug)]
pub struct Polygon<F> {
    vertices: Vec<Vec2<F>>,
}

impl<F: Scalar> Polygon<F> {
    /// Build from counterclockwise vertices; rejects concave chains.
    pub fn new(vertices: Vec<Vec2<F>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let n = vertices.len();
        if n > 2 {
            let scale = vertices
                .iter()
                .map(|v| v.norm())
                .fold(F::one(), |a, b| a.max(b));
            let tol = F::c(1e-9) * scale * scale;
            for i in 0..n {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                let cross = (b - a).cross(c - b);
                if cross < -tol {
                    return Err(Error::NotConvex(
                        num_traits::ToPrimitive::to_f64(&cross).unwrap_or(f64::NAN),
                        i,
                    ));
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec2<F>] {
        &self.vertices
    }

    /// Shoelace area (0 for points and segments).
    pub fn area(&self) -> F {
        let n = self.vertices.len();
        if n < 3 {
            return F::zero();
        }
        let mut twice = F::zero();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            twice += a.cross(b);
        }
        twice / F::c(2.0)
    }

    /// Support value `max_p (p, u)`.
    pub fn support(&self, u: Vec2<F>) -> F {
        self.vertices
            .iter()
            .map(|p| p.dot(u))
            .fold(F::neg_infinity(), F::max)
    }

    /// Point membership up to `tol` (half-plane test against every edge).
    pub fn contains(&self, p: Vec2<F>, tol: F) -> bool {
        let n = self.vertices.len();
        match n {
            1 => (p - self.vertices[0]).norm() <= tol,
            2 => {
                let a = self.vertices[0];
                let b = self.vertices[1];
                let d = b - a;
                let len2 = d.dot(d);
                if len2 == F::zero() {
                    return (p - a).norm() <= tol;
                }
                let t = (p - a).dot(d) / len2;
                let t = t.max(F::zero()).min(F::one());
                (p - (a + d * t)).norm() <= tol
            }
            _ => {
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let edge = b - a;
                    if edge.cross(p - a) < -tol * edge.norm().max(F::one()) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Vertices of the Minkowski sum, via the convex hull of pairwise sums.
    /// Quadratic, used as a test oracle and for small inputs.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(*a + *b);
            }
        }
        convex_hull(pts)
    }
}

/// Convex hull (Andrew monotone chain). Collinear points are dropped.
pub fn convex_hull<F: Scalar>(mut pts: Vec<Vec2<F>>) -> Polygon<F> {
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup_by(|a, b| (*a - *b).norm() < F::c(1e-14));
    if pts.len() <= 2 {
        return Polygon { vertices: pts };
    }
    let mut lower: Vec<Vec2<F>> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 {
            let a = lower[lower.len() - 2];
            let b = lower[lower.len() - 1];
            if (b - a).cross(p - a) <= F::zero() {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2<F>> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let a = upper[upper.len() - 2];
            let b = upper[upper.len() - 1];
            if (b - a).cross(p - a) <= F::zero() {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Polygon { vertices: lower }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn unit_square_area() {
        let p = Polygon::new(vec![v(0., 0.), v(1., 0.), v(1., 1.), v(0., 1.)]).unwrap();
        assert_eq!(p.area(), 1.0);
        assert!(p.contains(v(0.5, 0.5), 1e-12));
        assert!(!p.contains(v(1.5, 0.5), 1e-12));
    }

    #[test]
    fn concave_rejected() {
        let r = Polygon::new(vec![v(0., 0.), v(2., 0.), v(1., 0.5), v(0., 2.)]);
        assert!(r.is_err());
    }

    #[test]
    fn hull_of_square_sum() {
        let p = Polygon::new(vec![v(0., 0.), v(1., 0.), v(1., 1.), v(0., 1.)]).unwrap();
        let s = p.minkowski_sum(&p);
        assert!((s.area() - 4.0).abs() < 1e-12);
    }
}
