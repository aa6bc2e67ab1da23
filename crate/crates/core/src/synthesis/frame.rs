use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lift::require_regular;
use crate::algebra::MinkowskiVector;
use crate::error::Result;
use crate::planes::ComplexAngle;

/// Orthonormal frame along a constant-angle surface: `T1, T2` tangent,
/// `N1` spacelike normal, `N2` future timelike normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptedFrame {
    pub t1: MinkowskiVector,
    pub t2: MinkowskiVector,
    pub n1: MinkowskiVector,
    pub n2: MinkowskiVector,
}

impl AdaptedFrame {
    pub fn as_array(&self) -> [MinkowskiVector; 4] {
        [self.t1, self.t2, self.n1, self.n2]
    }

    /// `det(N2, N1, T1, T2)`.
    pub fn orientation(&self) -> f64 {
        let cols = [self.n2, self.n1, self.t1, self.t2];
        nalgebra::Matrix4::from_fn(|r, c| cols[c][r]).determinant()
    }
}

/// Closed-form adapted frame at `z`, with `phi = 2z / sin psi`.
pub fn adapted_frame(psi: ComplexAngle, z: Complex64) -> Result<AdaptedFrame> {
    let s = require_regular(psi)?;
    let phi = 2.0 * z / s;
    let (sf1, cf1) = phi.re.sin_cos();
    let (chf2, shf2) = (phi.im.cosh(), phi.im.sinh());
    let (sp1, cp1) = psi.psi1.sin_cos();
    let (chp2, shp2) = (psi.psi2.cosh(), psi.psi2.sinh());
    Ok(AdaptedFrame {
        t1: MinkowskiVector::new(-shp2 * chf2, -shp2 * shf2, chp2 * sf1, chp2 * cf1),
        t2: MinkowskiVector::new(sp1 * shf2, sp1 * chf2, -cp1 * cf1, cp1 * sf1),
        n1: MinkowskiVector::new(cp1 * shf2, cp1 * chf2, sp1 * cf1, -sp1 * sf1),
        n2: MinkowskiVector::new(chp2 * chf2, chp2 * shf2, -shp2 * sf1, -shp2 * cf1),
    })
}

/// Right-hand sides of the frame equations: `(d/dx, d/dy)` of `(T1, T2, N1, N2)`.
pub fn frame_derivatives(
    f: &AdaptedFrame,
    c1: f64,
    c2: f64,
) -> ([MinkowskiVector; 4], [MinkowskiVector; 4]) {
    let AdaptedFrame { t1, t2, n1, n2 } = *f;
    let dx = [
        t2 * c1 + n1 * 2.0,
        -(t1 * c1),
        -(t1 * 2.0) + n2 * c2,
        n1 * c2,
    ];
    let dy = [
        t2 * c2,
        -(t1 * c2) + n2 * 2.0,
        -(n2 * c1),
        t2 * 2.0 - n1 * c1,
    ];
    (dx, dy)
}
