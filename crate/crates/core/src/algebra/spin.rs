use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::quaternion::ComplexQuaternion;
use super::vector::{embed_vector, project_unchecked, MinkowskiVector};
use crate::error::{Error, Result};

const SPIN_TOL: f64 = 1e-10;

/// Element of Spin(1,3): a complex quaternion with `H(q,q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinElement {
    q: ComplexQuaternion,
}

impl SpinElement {
    pub const IDENTITY: Self = Self { q: ComplexQuaternion::ONE };

    pub fn new(q: ComplexQuaternion) -> Result<Self> {
        let defect = (q.h(q) - Complex64::new(1.0, 0.0)).norm();
        if defect > SPIN_TOL {
            return Err(Error::NotInSpin { defect });
        }
        Ok(Self { q })
    }

    /// Divides by the principal square root of `H(q,q)`.
    pub fn normalize(q: ComplexQuaternion) -> Result<Self> {
        let n = q.h(q);
        if n.norm() < 1e-12 {
            return Err(Error::NotInvertible { norm: n.norm() });
        }
        Ok(Self { q: q.scale(n.sqrt().inv()) })
    }

    /// Random element from 8 Gaussian coefficients; rejects samples with `|H(q,q)| < 1e-6`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut c = [0.0f64; 8];
            for v in c.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let q = ComplexQuaternion::new(
                Complex64::new(c[0], c[1]),
                Complex64::new(c[2], c[3]),
                Complex64::new(c[4], c[5]),
                Complex64::new(c[6], c[7]),
            );
            if q.h(q).norm() >= 1e-6 {
                if let Ok(s) = Self::normalize(q) {
                    return s;
                }
            }
        }
    }

    /// Rotation by `theta` in the (e2, e3) plane.
    pub fn rotation_e23(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self { q: ComplexQuaternion::from_real([c, s, 0.0, 0.0]) }
    }

    /// Boost of rapidity `phi` in the (e0, e1) plane: sends `e0` to `(cosh phi, -sinh phi, 0, 0)`.
    pub fn boost_e01(phi: f64) -> Self {
        let (c, s) = ((phi / 2.0).cosh(), (phi / 2.0).sinh());
        Self {
            q: ComplexQuaternion::new(
                Complex64::new(c, 0.0),
                Complex64::new(0.0, s),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ),
        }
    }

    pub fn quaternion(&self) -> ComplexQuaternion {
        self.q
    }

    /// `H(q,q) = 1`, so the inverse is just `bar(q)`.
    pub fn inverse(&self) -> Self {
        Self { q: self.q.bar() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { q: self.q * other.q }
    }

    pub fn neg(&self) -> Self {
        Self { q: -self.q }
    }

    /// `q xi hat(q)^{-1}` read back as a vector.
    pub fn act(&self, x: MinkowskiVector) -> MinkowskiVector {
        let r = self.q * embed_vector(x) * self.q.hat().bar();
        project_unchecked(r)
    }

    /// Action on bivectors (and on any element of Im H^C): `q eta q^{-1}`.
    pub fn act_bivector(&self, eta: ComplexQuaternion) -> ComplexQuaternion {
        self.q * eta * self.q.bar()
    }

    /// Lorentz matrix of the action, column k = image of `e_k`.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let cols: [MinkowskiVector; 4] = std::array::from_fn(|k| self.act(MinkowskiVector::basis(k)));
        std::array::from_fn(|r| std::array::from_fn(|k| cols[k][r]))
    }
}

/// `Phi(q) x` for a raw quaternion; fails with `NotInSpin` unless `H(q,q) = 1`.
pub fn spin_act(q: ComplexQuaternion, x: MinkowskiVector) -> Result<MinkowskiVector> {
    Ok(SpinElement::new(q)?.act(x))
}

fn require_imaginary(xi: ComplexQuaternion) -> Result<()> {
    let r = xi.q0.norm();
    if r > 1e-12 * xi.max_abs().max(1.0) {
        return Err(Error::NotImaginary { real_part: r });
    }
    Ok(())
}

/// Vectorial product `(xi xi' - xi' xi) / 2` on Im H^C.
pub fn vector_cross(a: ComplexQuaternion, b: ComplexQuaternion) -> Result<ComplexQuaternion> {
    require_imaginary(a)?;
    require_imaginary(b)?;
    Ok(cross_unchecked(a, b))
}

pub(crate) fn cross_unchecked(a: ComplexQuaternion, b: ComplexQuaternion) -> ComplexQuaternion {
    ComplexQuaternion::new(
        Complex64::new(0.0, 0.0),
        a.q2 * b.q3 - a.q3 * b.q2,
        a.q3 * b.q1 - a.q1 * b.q3,
        a.q1 * b.q2 - a.q2 * b.q1,
    )
}

/// Complex volume `H(xi x xi', xi'')`.
pub fn mixed_product(
    a: ComplexQuaternion,
    b: ComplexQuaternion,
    c: ComplexQuaternion,
) -> Result<Complex64> {
    require_imaginary(c)?;
    Ok(vector_cross(a, b)?.h(c))
}
