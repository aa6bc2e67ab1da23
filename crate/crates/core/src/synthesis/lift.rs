use num_complex::Complex64;

use crate::algebra::ComplexQuaternion;
use crate::cmath;
use crate::error::Result;
use crate::planes::ComplexAngle;

/// `|sin psi|` below which the lift and the frame formulas are singular.
pub const MIN_SIN_PSI: f64 = 1e-8;

/// `(c1, c2) = (-2 Re cot psi, 2 Im cot psi)`.
pub fn angle_constants(psi: ComplexAngle) -> Result<(f64, f64)> {
    psi.constants()
}

pub(crate) fn require_regular(psi: ComplexAngle) -> Result<Complex64> {
    let s = psi.sin();
    if s.norm() < MIN_SIN_PSI {
        return Err(psi.degenerate("sin psi vanishes"));
    }
    Ok(s)
}

/// Horizontal lift of the constant-angle Gauss map with left gauge `cos A + sin A I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HorizontalLift {
    pub psi: ComplexAngle,
    pub gauge: Complex64,
}

impl HorizontalLift {
    pub fn new(psi: ComplexAngle, gauge: Complex64) -> Result<Self> {
        require_regular(psi)?;
        Ok(Self { psi, gauge })
    }

    fn gauge_quaternion(&self) -> ComplexQuaternion {
        let a = self.gauge;
        ComplexQuaternion::new(a.cos(), a.sin(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    fn raw(&self, z: Complex64) -> (ComplexQuaternion, ComplexQuaternion) {
        let half = self.psi.as_complex() / 2.0;
        let (c, s) = (half.cos(), half.sin());
        let t = half.tan();
        let ct = t.inv();
        let (zt, zc) = (z * t, z * ct);
        let g = ComplexQuaternion::new(-c * zt.sin(), c * zt.cos(), s * zc.cos(), -s * zc.sin());
        let dg = ComplexQuaternion::new(
            -c * t * zt.cos(),
            -c * t * zt.sin(),
            -s * ct * zc.sin(),
            -s * ct * zc.cos(),
        );
        (g, dg)
    }

    /// `g(z)`.
    pub fn g(&self, z: Complex64) -> ComplexQuaternion {
        self.gauge_quaternion() * self.raw(z).0
    }

    /// Complex derivative `g'(z)`.
    pub fn dg(&self, z: Complex64) -> ComplexQuaternion {
        self.gauge_quaternion() * self.raw(z).1
    }

    /// `beta = -2 z cot psi + 2 A`.
    pub fn beta(&self, z: Complex64) -> Complex64 {
        -2.0 * z * cmath::cot(self.psi.as_complex()) + 2.0 * self.gauge
    }

    /// Bundle projection `g^{-1} I g`.
    pub fn gauss_map(&self, z: Complex64) -> ComplexQuaternion {
        let g = self.g(z);
        g.bar() * ComplexQuaternion::I * g
    }

    /// Tangent frame `g^{-1} (sin u J - cos u K) hat(g)`, `g^{-1} (cos u J + sin u K) hat(g)`
    /// with `u = Re beta`.
    pub fn tangent_frame(&self, z: Complex64) -> (ComplexQuaternion, ComplexQuaternion) {
        let g = self.g(z);
        let (su, cu) = self.beta(z).re.sin_cos();
        let (j, k) = (ComplexQuaternion::J, ComplexQuaternion::K);
        let gi = g.bar();
        let gh = g.hat();
        (gi * (j * su - k * cu) * gh, gi * (j * cu + k * su) * gh)
    }
}

/// `(g(z), beta(z))` for the lift with gauge `A`.
pub fn horizontal_lift(
    psi: ComplexAngle,
    gauge: Complex64,
    z: Complex64,
) -> Result<(ComplexQuaternion, Complex64)> {
    let l = HorizontalLift::new(psi, gauge)?;
    Ok((l.g(z), l.beta(z)))
}

/// `G(z) = cos psi I + sin psi J (cos phi + sin phi I)` with `phi = 2z / sin psi`.
pub fn gauss_map_formula(psi: ComplexAngle, z: Complex64) -> Result<ComplexQuaternion> {
    let s = require_regular(psi)?;
    let phi = 2.0 * z / s;
    let rot = ComplexQuaternion::new(phi.cos(), phi.sin(), 0.0.into(), 0.0.into());
    Ok(ComplexQuaternion::I.scale(psi.cos()) + (ComplexQuaternion::J * rot).scale(s))
}
