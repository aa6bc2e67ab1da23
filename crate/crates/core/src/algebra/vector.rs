use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quaternion::ComplexQuaternion;
use crate::error::{Error, Result};

/// Point or vector of R^{1,3}, signature (-,+,+,+).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MinkowskiVector(pub [f64; 4]);

impl MinkowskiVector {
    pub const ZERO: Self = Self([0.0; 4]);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self([x0, x1, x2, x3])
    }

    /// Canonical basis vector `e_k`.
    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        Self(v)
    }

    pub fn dot(self, o: Self) -> f64 {
        let (a, b) = (self.0, o.0);
        -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    /// Minkowski square `<x,x>`.
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn euclid_dot(self, o: Self) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_dot(self).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn is_future(self) -> bool {
        self.0[0] > 0.0
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for MinkowskiVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl Add for MinkowskiVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl AddAssign for MinkowskiVector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for MinkowskiVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Neg for MinkowskiVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<f64> for MinkowskiVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }
}

impl Mul<MinkowskiVector> for f64 {
    type Output = MinkowskiVector;
    fn mul(self, v: MinkowskiVector) -> MinkowskiVector {
        v * self
    }
}

impl fmt::Display for MinkowskiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `x -> i x0 + x1 I + x2 J + x3 K`.
pub fn embed_vector(x: MinkowskiVector) -> ComplexQuaternion {
    let [a, b, c, d] = x.0;
    ComplexQuaternion::new(
        Complex64::new(0.0, a),
        Complex64::new(b, 0.0),
        Complex64::new(c, 0.0),
        Complex64::new(d, 0.0),
    )
}

const VECTOR_TOL: f64 = 1e-10;

/// Inverse of [`embed_vector`]; fails unless `xi = -hat(bar(xi))` within tolerance.
pub fn project_vector(xi: ComplexQuaternion) -> Result<MinkowskiVector> {
    let defect = vector_defect(xi);
    if defect > VECTOR_TOL * xi.max_abs().max(1.0) {
        return Err(Error::NotAVector { defect });
    }
    Ok(project_unchecked(xi))
}

/// Reads `(Im q0, Re q1, Re q2, Re q3)` without validating.
pub fn project_unchecked(xi: ComplexQuaternion) -> MinkowskiVector {
    MinkowskiVector::new(xi.q0.im, xi.q1.re, xi.q2.re, xi.q3.re)
}

fn vector_defect(xi: ComplexQuaternion) -> f64 {
    xi.q0.re.abs().max(xi.q1.im.abs()).max(xi.q2.im.abs()).max(xi.q3.im.abs())
}

/// Image of `u ^ v` in Im H^C: the antisymmetric part of `xi_u hat(xi_v)`.
/// Sends `e2^e3 -> I`, `e3^e1 -> J`, `e1^e2 -> K`, `e0^e1 -> iI`.
pub fn wedge_to_bivector(u: MinkowskiVector, v: MinkowskiVector) -> ComplexQuaternion {
    let (a, b) = (embed_vector(u), embed_vector(v));
    let w = (a * b.hat() - b * a.hat()).scale_real(0.5);
    w.vector_part()
}
