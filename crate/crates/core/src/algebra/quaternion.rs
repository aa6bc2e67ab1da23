use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Complexified quaternion `q0 + q1 I + q2 J + q3 K` with complex coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ComplexQuaternion {
    pub q0: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
    pub q3: Complex64,
}

impl ComplexQuaternion {
    pub const ZERO: Self = Self::new(C0, C0, C0, C0);
    pub const ONE: Self = Self::new(C1, C0, C0, C0);
    pub const I: Self = Self::new(C0, C1, C0, C0);
    pub const J: Self = Self::new(C0, C0, C1, C0);
    pub const K: Self = Self::new(C0, C0, C0, C1);

    pub const fn new(q0: Complex64, q1: Complex64, q2: Complex64, q3: Complex64) -> Self {
        Self { q0, q1, q2, q3 }
    }

    pub fn from_real(q: [f64; 4]) -> Self {
        Self::from_array(q.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_array(q: [Complex64; 4]) -> Self {
        Self::new(q[0], q[1], q[2], q[3])
    }

    pub fn to_array(self) -> [Complex64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    /// Scalar plus imaginary part built from complex numbers: `s + v1 I + v2 J + v3 K`.
    pub fn from_scalar_vector(s: Complex64, v: [Complex64; 3]) -> Self {
        Self::new(s, v[0], v[1], v[2])
    }

    /// The imaginary part `q1 I + q2 J + q3 K`.
    pub fn vector_part(self) -> Self {
        Self::new(C0, self.q1, self.q2, self.q3)
    }

    /// The complex bilinear form `q0 q0' + q1 q1' + q2 q2' + q3 q3'` (no conjugation).
    pub fn h(self, other: Self) -> Complex64 {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    /// Complex conjugation of every coefficient.
    pub fn hat(self) -> Self {
        Self::new(self.q0.conj(), self.q1.conj(), self.q2.conj(), self.q3.conj())
    }

    /// Quaternion conjugation: negates the I, J, K coefficients.
    pub fn bar(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    pub fn scale_real(self, s: f64) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    /// `bar(q) / H(q,q)`.
    pub fn inverse(self) -> Result<Self> {
        let n = self.h(self);
        if n.norm() < 1e-12 {
            return Err(Error::NotInvertible { norm: n.norm() });
        }
        Ok(self.bar().scale(n.inv()))
    }

    /// Largest modulus among the four coefficients.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for ComplexQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)
    }
}

impl AddAssign for ComplexQuaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for ComplexQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.q0 - o.q0, self.q1 - o.q1, self.q2 - o.q2, self.q3 - o.q3)
    }
}

impl Neg for ComplexQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for ComplexQuaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0,
        )
    }
}

impl Mul<Complex64> for ComplexQuaternion {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexQuaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_real(s)
    }
}

impl fmt::Display for ComplexQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})I + ({})J + ({})K",
            self.q0, self.q1, self.q2, self.q3
        )
    }
}

pub fn quat_mul(a: ComplexQuaternion, b: ComplexQuaternion) -> ComplexQuaternion {
    a * b
}

pub fn h_form(a: ComplexQuaternion, b: ComplexQuaternion) -> Complex64 {
    a.h(b)
}

pub fn conj_hat(a: ComplexQuaternion) -> ComplexQuaternion {
    a.hat()
}

pub fn conj_bar(a: ComplexQuaternion) -> ComplexQuaternion {
    a.bar()
}
