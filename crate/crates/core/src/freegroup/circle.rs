//! The boundary circle as the real projective line, with the Möbius action.

use super::GroupError;
use crate::numcore::{Mat, Scalar, Sign, Tolerance};

/// Point of RP^1 stored as a homogeneous pair `(x, y)`, real coordinate `x/y`.
/// Counter-clockwise order is increasing real coordinate, passing through
/// infinity `(1, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CirclePoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> CirclePoint<T> {
    pub fn new(x: T, y: T) -> Self {
        CirclePoint { x, y }
    }

    pub fn real(z: T) -> Self {
        CirclePoint { x: z, y: T::one() }
    }

    pub fn infinity() -> Self {
        CirclePoint {
            x: T::one(),
            y: T::zero(),
        }
    }

    /// Point at angle `theta` on the unit circle of the disk model; angle 0
    /// is infinity and angle pi is 0.
    pub fn from_angle(theta: f64) -> Self {
        let h = theta / 2.0;
        CirclePoint {
            x: T::from_f64(-h.cos()),
            y: T::from_f64(h.sin()),
        }
    }

    /// Disk-model angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        let (x, y) = (self.x.to_f64(), self.y.to_f64());
        // (x, y) ~ (-cos(h), sin(h)) up to sign, h in [0, pi).
        let mut h = y.atan2(-x);
        if h < 0.0 {
            h += std::f64::consts::PI;
        }
        if h >= std::f64::consts::PI {
            h -= std::f64::consts::PI;
        }
        2.0 * h
    }

    pub fn as_vec(&self) -> Vec<T> {
        vec![self.x.clone(), self.y.clone()]
    }

    /// Möbius image `z -> (a z + b) / (c z + d)`.
    pub fn mobius(&self, g: &Mat<T>) -> Self {
        let v = g.mul_vec(&self.as_vec());
        CirclePoint {
            x: v[0].clone(),
            y: v[1].clone(),
        }
    }

    /// Scaled to unit Euclidean length (float backends).
    pub fn normalized(&self) -> Self {
        let n = (self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone()).sqrt();
        match n {
            Some(n) if !n.is_zero() => CirclePoint {
                x: self.x.clone() / n.clone(),
                y: self.y.clone() / n,
            },
            _ => self.clone(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CirclePoint<U> {
        CirclePoint {
            x: f(&self.x),
            y: f(&self.y),
        }
    }
}

fn cross<T: Scalar>(p: &CirclePoint<T>, q: &CirclePoint<T>) -> T {
    p.x.clone() * q.y.clone() - p.y.clone() * q.x.clone()
}

/// `+` when `p, q, r` are in counter-clockwise order, `-` when clockwise,
/// zero when two coincide. Independent of the homogeneous representatives.
pub fn cyclic_sign<T: Scalar>(
    p: &CirclePoint<T>,
    q: &CirclePoint<T>,
    r: &CirclePoint<T>,
    tol: &Tolerance,
) -> Sign {
    let (p, q, r) = (p.normalized(), q.normalized(), r.normalized());
    let s = |a: &CirclePoint<T>, b: &CirclePoint<T>| cross(a, b).sign(tol, 1.0);
    s(&p, &q).mul(s(&q, &r)).mul(s(&r, &p))
}

/// Whether the points are pairwise distinct and in counter-clockwise order.
pub fn is_counter_clockwise<T: Scalar>(points: &[CirclePoint<T>], tol: &Tolerance) -> bool {
    let k = points.len();
    (0..k).all(|i| {
        (i + 1..k).all(|j| (j + 1..k).all(|l| cyclic_sign(&points[i], &points[j], &points[l], tol) == Sign::Pos))
    })
}

/// Whether `p` lies on the closed counter-clockwise arc from `start` to `end`.
pub fn on_arc<T: Scalar>(
    p: &CirclePoint<T>,
    start: &CirclePoint<T>,
    end: &CirclePoint<T>,
    tol: &Tolerance,
) -> bool {
    let s = cyclic_sign(start, p, end, tol);
    s == Sign::Pos || same_point(p, start, tol) || same_point(p, end, tol)
}

pub fn same_point<T: Scalar>(p: &CirclePoint<T>, q: &CirclePoint<T>, tol: &Tolerance) -> bool {
    cross(&p.normalized(), &q.normalized()).sign(tol, 1.0) == Sign::Zero
}

pub fn trace<T: Scalar>(g: &Mat<T>) -> T {
    g[(0, 0)].clone() + g[(1, 1)].clone()
}

/// Inverse of a determinant-one 2x2 matrix.
pub fn sl2_inverse<T: Scalar>(g: &Mat<T>) -> Mat<T> {
    Mat::from_rows(vec![
        vec![g[(1, 1)].clone(), -g[(0, 1)].clone()],
        vec![-g[(1, 0)].clone(), g[(0, 0)].clone()],
    ])
    .expect("2x2")
}

fn check_hyperbolic<T: Scalar>(g: &Mat<T>) -> Result<f64, GroupError> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(GroupError::NotSl2);
    }
    let tr = trace(g).to_f64().abs();
    if !(tr > 2.0) {
        return Err(GroupError::NotHyperbolic { trace: tr });
    }
    Ok(tr)
}

/// `2 arccosh(|tr g| / 2)`.
pub fn translation_length<T: Scalar>(g: &Mat<T>) -> Result<f64, GroupError> {
    Ok(2.0 * (check_hyperbolic(g)? / 2.0).acosh())
}

/// Attracting and repelling fixed points of a hyperbolic element.
pub fn mobius_fixed_points<T: Scalar>(
    g: &Mat<T>,
) -> Result<(CirclePoint<T>, CirclePoint<T>), GroupError> {
    check_hyperbolic(g)?;
    let tr = trace(g);
    let disc = (tr.clone() * tr.clone() - T::from_i64(4))
        .sqrt()
        .ok_or(GroupError::Irrational)?;
    let half = T::half();
    let big_sign = if tr.to_f64() > 0.0 { T::one() } else { -T::one() };
    // Eigenvalue of larger modulus attracts.
    let lam_big = (tr.clone() + big_sign.clone() * disc.clone()) * half.clone();
    let lam_small = (tr - big_sign * disc) * half;
    Ok((eigenline(g, &lam_big), eigenline(g, &lam_small)))
}

/// Eigenvector of a 2x2 matrix for `lambda`, from the better conditioned row.
fn eigenline<T: Scalar>(g: &Mat<T>, lambda: &T) -> CirclePoint<T> {
    let (a, b, c, d) = (
        g[(0, 0)].clone(),
        g[(0, 1)].clone(),
        g[(1, 0)].clone(),
        g[(1, 1)].clone(),
    );
    // (a - l) x + b y = 0  ->  (b, l - a);   c x + (d - l) y = 0  ->  (l - d, c)
    let v1 = CirclePoint::new(b.clone(), lambda.clone() - a);
    let v2 = CirclePoint::new(lambda.clone() - d, c);
    let n = |p: &CirclePoint<T>| p.x.to_f64().abs() + p.y.to_f64().abs();
    if n(&v1) >= n(&v2) {
        v1
    } else {
        v2
    }
}
