//! Oriented spacelike planes of R^{1,3} as unit bivectors in the complex 2-sphere,
//! and the complex angle between two of them.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix4x2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{wedge_to_bivector, ComplexQuaternion, MinkowskiVector, SpinElement};
use crate::cmath;
use crate::error::{Error, Result};

/// Oriented spacelike plane with an orthonormal basis and its unit bivector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedPlane {
    u1: MinkowskiVector,
    u2: MinkowskiVector,
    bivector: ComplexQuaternion,
}

impl OrientedPlane {
    /// The plane spanned by `(e2, e3)`, bivector `I`.
    pub fn e1() -> Self {
        Self::basis_plane(2, 3)
    }

    /// The plane spanned by `(e3, e1)`, bivector `J`.
    pub fn e2() -> Self {
        Self::basis_plane(3, 1)
    }

    /// The plane spanned by `(e1, e2)`, bivector `K`.
    pub fn e3() -> Self {
        Self::basis_plane(1, 2)
    }

    fn basis_plane(a: usize, b: usize) -> Self {
        let (u1, u2) = (MinkowskiVector::basis(a), MinkowskiVector::basis(b));
        Self { u1, u2, bivector: wedge_to_bivector(u1, u2) }
    }

    pub fn basis(&self) -> (MinkowskiVector, MinkowskiVector) {
        (self.u1, self.u2)
    }

    pub fn bivector(&self) -> ComplexQuaternion {
        self.bivector
    }

    /// Same plane, opposite orientation.
    pub fn reversed(&self) -> Self {
        Self { u1: self.u2, u2: self.u1, bivector: -self.bivector }
    }

    /// Image under the Lorentz transform of `g`.
    pub fn transformed(&self, g: &SpinElement) -> Self {
        let (u1, u2) = (g.act(self.u1), g.act(self.u2));
        // re-orthonormalize to absorb rounding
        plane_from_frame(u1, u2).unwrap_or(Self { u1, u2, bivector: g.act_bivector(self.bivector) })
    }

    /// Orthogonal projection onto the plane.
    pub fn project(&self, v: MinkowskiVector) -> MinkowskiVector {
        self.u1 * v.dot(self.u1) + self.u2 * v.dot(self.u2)
    }

    /// Quarter turn inside the plane: `u1 -> u2`, `u2 -> -u1`.
    pub fn rotate_quarter(&self, v: MinkowskiVector) -> MinkowskiVector {
        self.u2 * v.dot(self.u1) - self.u1 * v.dot(self.u2)
    }

    /// Spin element whose action carries the E1-plane onto this plane.
    pub fn spin_from_e1(&self) -> SpinElement {
        let a = ComplexQuaternion::I;
        let b = self.bivector;
        // half-angle construction q = 1 - b a; degenerate only when b = -a
        let q = ComplexQuaternion::ONE - b * a;
        if q.h(q).norm() > 1e-8 {
            if let Ok(s) = SpinElement::normalize(q) {
                return s;
            }
        }
        SpinElement::new(ComplexQuaternion::J).expect("J has unit H-norm")
    }
}

/// Orthonormalizes `(u1, u2)` keeping the orientation of their span.
pub fn plane_from_frame(u1: MinkowskiVector, u2: MinkowskiVector) -> Result<OrientedPlane> {
    let (g11, g12, g22) = (u1.norm2(), u1.dot(u2), u2.norm2());
    let gram = g11 * g22 - g12 * g12;
    if !gram.is_finite() || gram <= 1e-12 * (1.0 + g11.abs() * g22.abs()) {
        return Err(Error::DegeneratePlane(format!(
            "Gram determinant {gram:e} is not positive"
        )));
    }
    if g11 <= 0.0 || g22 <= 0.0 {
        return Err(Error::DegeneratePlane("span is not spacelike".into()));
    }
    let e1 = u1 * (1.0 / g11.sqrt());
    let w = u2 - e1 * u2.dot(e1);
    let ww = w.norm2();
    if ww <= 0.0 {
        return Err(Error::DegeneratePlane("span is not spacelike".into()));
    }
    let e2 = w * (1.0 / ww.sqrt());
    Ok(OrientedPlane { u1: e1, u2: e2, bivector: wedge_to_bivector(e1, e2) })
}

/// Normalized complex angle `psi1 + i psi2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexAngle {
    pub psi1: f64,
    pub psi2: f64,
}

impl ComplexAngle {
    /// Applies the normalization: `psi2 >= 0`; `psi1` in `[0, pi]` when `psi2 = 0`,
    /// in `(-pi, pi]` otherwise.
    pub fn new(psi1: f64, psi2: f64) -> Self {
        let (mut a, mut b) = (psi1, psi2);
        if b < 0.0 {
            a = -a;
            b = -b;
        }
        // reduce a into (-pi, pi]
        a = a.rem_euclid(2.0 * PI);
        if a > PI {
            a -= 2.0 * PI;
        }
        if b == 0.0 {
            a = a.abs();
        }
        Self { psi1: a, psi2: b }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    /// Principal arccosine of `c`, normalized.
    pub fn from_cos(c: Complex64) -> Self {
        Self::from_complex(cmath::acos(c))
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.psi1, self.psi2)
    }

    pub fn cos(&self) -> Complex64 {
        self.as_complex().cos()
    }

    pub fn sin(&self) -> Complex64 {
        self.as_complex().sin()
    }

    /// `sin^2 psi1 + sinh^2 psi2`, i.e. `|sin psi|^2`.
    pub fn sin_modulus2(&self) -> f64 {
        self.psi1.sin().powi(2) + self.psi2.sinh().powi(2)
    }

    /// The real constants `(c1, c2)` of the compatibility system.
    pub fn constants(&self) -> Result<(f64, f64)> {
        let d = self.sin_modulus2();
        if d < 1e-14 {
            return Err(self.degenerate("sin^2 psi1 + sinh^2 psi2 vanishes"));
        }
        Ok((-(2.0 * self.psi1).sin() / d, -(2.0 * self.psi2).sinh() / d))
    }

    pub(crate) fn degenerate(&self, reason: &str) -> Error {
        Error::AngleDegenerate { psi1: self.psi1, psi2: self.psi2, reason: reason.into() }
    }

    /// Parses `"re+imi"`, `"re-imi"`, `"re"` or `"imi"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("cannot parse complex angle '{s}'"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<f64>().map(|re| Self::new(re, 0.0)).map_err(|_| bad());
        };
        // split at the last sign that is not the leading sign or part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.parse().map_err(|_| bad())?;
        Ok(Self::new(re, im))
    }
}

impl fmt::Display for ComplexAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.psi2 < 0.0 {
            write!(f, "{}{}i", self.psi1, self.psi2)
        } else {
            write!(f, "{}+{}i", self.psi1, self.psi2)
        }
    }
}

/// `cos psi = H(p, q)`, normalized.
pub fn complex_angle(p: &OrientedPlane, q: &OrientedPlane) -> ComplexAngle {
    ComplexAngle::from_cos(p.bivector.h(q.bivector))
}

/// Result of writing `q` along the complex geodesic from `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decomposition {
    /// `q = cos psi p + sin psi V` with `H(V,V) = 1`, `H(p,V) = 0`.
    Regular { psi: ComplexAngle, v: ComplexQuaternion },
    /// `q = sign p + xi` with `H(xi,xi) = 0`.
    Null { sign: f64, xi: ComplexQuaternion },
}

const NULL_BRANCH_SIN: f64 = 1e-8;

pub fn decompose_angle(p: &OrientedPlane, q: &OrientedPlane) -> Decomposition {
    let psi = complex_angle(p, q);
    let s = psi.sin();
    if s.norm() >= NULL_BRANCH_SIN {
        let c = psi.cos();
        let v = (q.bivector - p.bivector.scale(c)).scale(s.inv());
        Decomposition::Regular { psi, v }
    } else {
        let sign = if p.bivector.h(q.bivector).re >= 0.0 { 1.0 } else { -1.0 };
        Decomposition::Null { sign, xi: q.bivector - p.bivector.scale_real(sign) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelativePosition {
    Generic,
    SpacelikeHyperplane,
    TimelikeHyperplane,
    NullHyperplane,
    Coincident,
    AntiCoincident,
}

impl fmt::Display for RelativePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const POSITION_TOL: f64 = 1e-10;

/// With `a + ib = H(p,q) = cos psi1 cosh psi2 - i sin psi1 sinh psi2`:
/// `b != 0` iff both parts are nondegenerate, and for `b = 0` the size of `|a|`
/// tells which of `psi1 = 0 [pi]` or `psi2 = 0` holds.
pub fn classify_position(p: &OrientedPlane, q: &OrientedPlane) -> RelativePosition {
    let h = p.bivector.h(q.bivector);
    let (a, b) = (h.re, h.im);
    if b.abs() > POSITION_TOL {
        RelativePosition::Generic
    } else if a.abs() < 1.0 - POSITION_TOL {
        RelativePosition::SpacelikeHyperplane
    } else if a.abs() > 1.0 + POSITION_TOL {
        RelativePosition::TimelikeHyperplane
    } else if (q.bivector - p.bivector).max_abs() < POSITION_TOL {
        RelativePosition::Coincident
    } else if (q.bivector + p.bivector).max_abs() < POSITION_TOL {
        RelativePosition::AntiCoincident
    } else {
        RelativePosition::NullHyperplane
    }
}

/// Output of the orthogonal-projection construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionAngles {
    pub psi1: f64,
    pub psi2: f64,
    /// Rank of the projection of `q` onto the orthogonal complement of `p`.
    pub rank: usize,
}

impl ProjectionAngles {
    pub fn angle(&self) -> ComplexAngle {
        ComplexAngle::new(self.psi1, self.psi2)
    }
}

const RANK_TOL: f64 = 1e-10;

/// Principal angles read from the orthogonal projections of `q` onto `p` and `p^perp`.
pub fn projection_angles(p: &OrientedPlane, q: &OrientedPlane) -> ProjectionAngles {
    let (v1, v2) = p.basis();
    let (w1, w2) = q.basis();
    let perp = |w: MinkowskiVector| w - p.project(w);

    let a = Matrix2::new(w1.dot(v1), w2.dot(v1), w1.dot(v2), w2.dot(v2));
    let pw = [perp(w1), perp(w2)];
    let pm = Matrix4x2::from_fn(|r, c| pw[c][r]);
    let rank = pm
        .svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL)
        .count();

    let m = a.transpose() * a;
    let eig = SymmetricEigen::new(m);
    let kmax = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
    let lmax = eig.eigenvalues[kmax];
    let (ca, cb) = (eig.eigenvectors[(0, kmax)], eig.eigenvectors[(1, kmax)]);
    let mut u = w1 * ca + w2 * cb;
    let mut u_perp = w2 * ca - w1 * cb;

    let sign_of_det = |a: &Matrix2<f64>| if a.determinant() > 0.0 { 0.0 } else { PI };

    match rank {
        0 => ProjectionAngles { psi1: sign_of_det(&a), psi2: 0.0, rank },
        1 => {
            let img = perp(u_perp).norm2() + perp(u).norm2();
            if img > RANK_TOL {
                // spacelike image: u spans q ∩ p
                let c = u_perp.dot(p.rotate_quarter(u)).clamp(-1.0, 1.0);
                ProjectionAngles { psi1: c.acos(), psi2: 0.0, rank }
            } else if img < -RANK_TOL {
                timelike_branch(p, &mut u, &mut u_perp, lmax, rank)
            } else {
                ProjectionAngles { psi1: sign_of_det(&a), psi2: 0.0, rank }
            }
        }
        _ => timelike_branch(p, &mut u, &mut u_perp, lmax, rank),
    }
}

fn timelike_branch(
    p: &OrientedPlane,
    u: &mut MinkowskiVector,
    u_perp: &mut MinkowskiVector,
    lmax: f64,
    rank: usize,
) -> ProjectionAngles {
    let perp = |w: MinkowskiVector| w - p.project(w);
    if !perp(*u).is_future() {
        *u = -*u;
        *u_perp = -*u_perp;
    }
    let pu = p.project(*u);
    let e2 = pu * (1.0 / pu.norm2().sqrt());
    let e3 = p.rotate_quarter(e2);
    let t = perp(*u);
    let e0 = t * (1.0 / (-t.norm2()).abs().sqrt());
    let e1 = complete_frame(e0, e2, e3);
    let psi1 = (-u_perp.dot(e1)).atan2(u_perp.dot(e3));
    let psi2 = (lmax - 1.0).max(0.0).sqrt().asinh();
    ProjectionAngles { psi1, psi2, rank }
}

/// Unit vector Minkowski-orthogonal to `a, c, d` with `det(a, e, c, d) > 0`.
fn complete_frame(a: MinkowskiVector, c: MinkowskiVector, d: MinkowskiVector) -> MinkowskiVector {
    // cofactor expansion of det(a, x, c, d) along x
    let m = |r: usize, k: usize| match k {
        0 => a[r],
        1 => c[r],
        _ => d[r],
    };
    let minor = |skip: usize| {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
        let e = |i: usize, k: usize| m(rows[i], k);
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    let cof: [f64; 4] = std::array::from_fn(|r| {
        let s = if (r + 1) % 2 == 0 { 1.0 } else { -1.0 };
        s * minor(r)
    });
    // raise the index so the Euclidean pairing becomes the Minkowski one
    let n = MinkowskiVector::new(-cof[0], cof[1], cof[2], cof[3]);
    n * (1.0 / n.norm2().abs().sqrt())
}
