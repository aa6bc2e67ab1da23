use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use super::grid::ImmersionGrid;
use crate::algebra::{cross_unchecked, wedge_to_bivector, MinkowskiVector};
use crate::error::{Error, Result};
use crate::planes::{complex_angle, plane_from_frame, ComplexAngle, OrientedPlane};

/// Central-difference tangents `(d_x F, d_y F)` at an interior node.
pub fn tangents(grid: &ImmersionGrid, i: usize, j: usize) -> Result<(MinkowskiVector, MinkowskiVector)> {
    let g = &grid.geom;
    if g.ring(i, j) < 1 {
        return Err(Error::NotInterior { i, j, nx: g.nx, ny: g.ny });
    }
    let fx = (grid.point(i + 1, j) - grid.point(i - 1, j)) * (0.5 / g.hx);
    let fy = (grid.point(i, j + 1) - grid.point(i, j - 1)) * (0.5 / g.hy);
    Ok((fx, fy))
}

/// Oriented tangent plane spanned by the central-difference tangents.
pub fn gauss_map(grid: &ImmersionGrid, i: usize, j: usize) -> Result<OrientedPlane> {
    let (fx, fy) = tangents(grid, i, j)?;
    plane_from_frame(fx, fy)
}

/// Angle against a reference plane at one node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleSample {
    pub i: usize,
    pub j: usize,
    pub psi: ComplexAngle,
    /// `H(p0, G)`, i.e. `cos psi` without the branch choice.
    pub cos: Complex64,
}

/// Complex angle between `p0` and the discrete Gauss map at every unmasked interior node.
pub fn angle_field(grid: &ImmersionGrid, p0: &OrientedPlane) -> Result<Vec<AngleSample>> {
    let mut out = Vec::new();
    for (i, j) in grid.geom.nodes() {
        if !grid.stencil_ok(i, j, 1) {
            continue;
        }
        let q = gauss_map(grid, i, j)?;
        out.push(AngleSample { i, j, psi: complex_angle(p0, &q), cos: p0.bivector().h(q.bivector()) });
    }
    Ok(out)
}

/// Same as [`angle_field`] but from the analytic tangents `T1, T2` stored on the grid.
/// `None` when the grid carries no frames.
pub fn frame_angle_field(grid: &ImmersionGrid, p0: &OrientedPlane) -> Option<Vec<AngleSample>> {
    let frames = grid.frames.as_ref()?;
    let mut out = Vec::with_capacity(frames.len());
    for (i, j) in grid.geom.nodes() {
        if grid.is_masked(i, j) {
            continue;
        }
        let f = frames[grid.geom.idx(i, j)];
        let b = wedge_to_bivector(f.t1, f.t2);
        let cos = p0.bivector().h(b);
        out.push(AngleSample { i, j, psi: ComplexAngle::from_cos(cos), cos });
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantAngleReport {
    pub mean_cos: Complex64,
    /// `max |cos psi - mean|` over the sampled nodes.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
}

impl ConstantAngleReport {
    pub fn mean_angle(&self) -> ComplexAngle {
        ComplexAngle::from_cos(self.mean_cos)
    }
}

fn constancy(samples: &[AngleSample], tol: f64) -> ConstantAngleReport {
    let n = samples.len();
    let mean = if n == 0 {
        Complex64::new(f64::NAN, f64::NAN)
    } else {
        samples.iter().map(|s| s.cos).sum::<Complex64>() / n as f64
    };
    let dev = samples.iter().map(|s| (s.cos - mean).norm()).fold(0.0, f64::max);
    ConstantAngleReport { mean_cos: mean, max_deviation: dev, tolerance: tol, samples: n, pass: n > 0 && dev < tol }
}

/// Passes when `cos psi` of the discrete Gauss map varies by less than `tol`.
pub fn check_constant_angle(grid: &ImmersionGrid, p0: &OrientedPlane, tol: f64) -> Result<ConstantAngleReport> {
    Ok(constancy(&angle_field(grid, p0)?, tol))
}

/// Constant-angle check on the analytic tangents.
pub fn check_constant_angle_frames(
    grid: &ImmersionGrid,
    p0: &OrientedPlane,
    tol: f64,
) -> Option<ConstantAngleReport> {
    frame_angle_field(grid, p0).map(|s| constancy(&s, tol))
}

/// Projection onto the normal plane of `span(u, v)`.
fn normal_projector(u: MinkowskiVector, v: MinkowskiVector) -> Result<impl Fn(MinkowskiVector) -> MinkowskiVector> {
    let (e, f, g) = (u.norm2(), u.dot(v), v.norm2());
    let det = e * g - f * f;
    if !(det > 1e-14 * (e * g).abs()) || e <= 0.0 || g <= 0.0 {
        return Err(Error::DegeneratePlane("tangents are not spacelike and independent".into()));
    }
    Ok(move |w: MinkowskiVector| {
        let (a, b) = (w.dot(u), w.dot(v));
        let cu = (g * a - f * b) / det;
        let cv = (e * b - f * a) / det;
        w - u * cu - v * cv
    })
}

fn det4(cols: [MinkowskiVector; 4]) -> f64 {
    Matrix4::from_fn(|r, c| cols[c][r]).determinant()
}

/// Orthonormal normal frame `(N2, N1)` of the spacelike plane spanned by `(u, v)`:
/// `N2` future timelike, `det(N2, N1, u, v) > 0`.
pub fn normal_frame(u: MinkowskiVector, v: MinkowskiVector) -> Result<(MinkowskiVector, MinkowskiVector)> {
    let proj = normal_projector(u, v)?;
    let p0 = proj(MinkowskiVector::basis(0));
    let n2n = p0.norm2();
    if !(n2n < 0.0) {
        return Err(Error::DegeneratePlane("projected time axis is not timelike".into()));
    }
    let n2 = p0 * (1.0 / (-n2n).sqrt());
    let (best, len2) = (1..4)
        .map(|k| {
            let w = proj(MinkowskiVector::basis(k));
            let w = w + n2 * w.dot(n2);
            (w, w.norm2())
        })
        .fold((MinkowskiVector::ZERO, 0.0), |acc, c| if c.1 > acc.1 { c } else { acc });
    if !(len2 > 1e-20) {
        return Err(Error::DegeneratePlane("no spacelike normal direction".into()));
    }
    let mut n1 = best * (1.0 / len2.sqrt());
    if det4([n2, n1, u, v]) < 0.0 {
        n1 = -n1;
    }
    Ok((n2, n1))
}

/// Second-order invariants at one interior node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NodeInvariants {
    pub i: usize,
    pub j: usize,
    /// Gauss curvature from the Gauss equation.
    pub k: f64,
    /// Gauss curvature read off the pull-back of the Gauss map.
    pub k_gauss_map: f64,
    pub k_n: f64,
    /// Minkowski square of the mean curvature vector.
    pub h2: f64,
    /// Discriminant of `delta` relative to the first fundamental form.
    pub delta: f64,
    /// `delta` in the orthonormal frame of `(d_x F, d_y F)`.
    pub delta_matrix: [[f64; 2]; 2],
    /// First fundamental form `(E, F, G)`.
    pub metric: [f64; 3],
    pub psi: ComplexAngle,
    /// False where `dG` is nearly degenerate and `delta` cannot be trusted.
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub nodes: Vec<NodeInvariants>,
    pub max_abs_k: f64,
    pub max_abs_k_n: f64,
    pub max_abs_h2: f64,
    /// Spread `max |cos psi - mean|` of the angle against the E1-plane.
    pub angle_spread: f64,
    pub unreliable: usize,
}

/// Normal components `(a, b)` of `w = a N1 + b N2 + tangent`.
fn normal_components(w: MinkowskiVector, n1: MinkowskiVector, n2: MinkowskiVector) -> [f64; 2] {
    [w.dot(n1), -w.dot(n2)]
}

fn ndot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] - a[1] * b[1]
}

/// `K`, `K_N`, `|H|^2` and the `delta` invariant at every node whose 5x5 stencil is unmasked.
pub fn curvatures(grid: &ImmersionGrid) -> Result<InvariantReport> {
    let geom = &grid.geom;
    if geom.nx < 5 || geom.ny < 5 {
        return Err(Error::InvalidInput("curvatures need at least a 5x5 grid".into()));
    }
    let (hx, hy) = (geom.hx, geom.hy);
    // Gauss map bivectors on the ring-1 interior
    let mut gmap = vec![None; geom.len()];
    for (i, j) in geom.nodes() {
        if grid.stencil_ok(i, j, 1) {
            gmap[geom.idx(i, j)] = Some(gauss_map(grid, i, j)?.bivector());
        }
    }
    let e1 = OrientedPlane::e1();
    let mut nodes = Vec::new();
    for (i, j) in geom.nodes() {
        if !grid.stencil_ok(i, j, 2) {
            continue;
        }
        let p = |a: usize, b: usize| grid.point(a, b);
        let c = p(i, j);
        let (fx, fy) = tangents(grid, i, j)?;
        let fxx = (p(i + 1, j) - c * 2.0 + p(i - 1, j)) * (1.0 / (hx * hx));
        let fyy = (p(i, j + 1) - c * 2.0 + p(i, j - 1)) * (1.0 / (hy * hy));
        let fxy = (p(i + 1, j + 1) - p(i + 1, j - 1) - p(i - 1, j + 1) + p(i - 1, j - 1))
            * (0.25 / (hx * hy));
        let (e, f, g) = (fx.norm2(), fx.dot(fy), fy.norm2());
        let w = e * g - f * f;
        let (n2, n1) = normal_frame(fx, fy).map_err(|_| Error::DegenerateNormalFrame { i, j })?;
        if (n1.norm2() - 1.0).abs() > 1e-10 || (n2.norm2() + 1.0).abs() > 1e-10 {
            return Err(Error::DegenerateNormalFrame { i, j });
        }
        let [iixx, iixy, iiyy] = [fxx, fxy, fyy].map(|v| normal_components(v, n1, n2));
        let k = (ndot(iixx, iiyy) - ndot(iixy, iixy)) / w;
        let hv = [0, 1].map(|t| (g * iixx[t] - 2.0 * f * iixy[t] + e * iiyy[t]) / (2.0 * w));
        let h2 = ndot(hv, hv);

        let gb = |a: usize, b: usize| gmap[geom.idx(a, b)].expect("ring-1 Gauss map");
        let g0 = gb(i, j);
        let gx = (gb(i + 1, j) - gb(i - 1, j)).scale_real(0.5 / hx);
        let gy = (gb(i, j + 1) - gb(i, j - 1)).scale_real(0.5 / hy);
        let pull = cross_unchecked(gx, gy).h(g0) / w.sqrt();
        let (d11, d12, d22) = (0.5 * gx.h(gx).im, 0.5 * gx.h(gy).im, 0.5 * gy.h(gy).im);
        let delta = (d11 * d22 - d12 * d12) / w;
        // delta in the orthonormal frame (e_1 = F_x/|F_x|, e_2 completing it)
        let (se, sw) = (e.sqrt(), w.sqrt());
        let a = [[1.0 / se, 0.0], [-f / (se * sw), se / sw]];
        let dm = [[d11, d12], [d12, d22]];
        let mut delta_matrix = [[0.0; 2]; 2];
        for r in 0..2 {
            for s in 0..2 {
                delta_matrix[r][s] = (0..2)
                    .flat_map(|u| (0..2).map(move |v| (u, v)))
                    .map(|(u, v)| a[r][u] * dm[u][v] * a[s][v])
                    .sum();
            }
        }
        let (r11, r12, r22) = (gx.h(gx).re, gx.h(gy).re, gy.h(gy).re);
        let rgram = r11 * r22 - r12 * r12;
        let rscale = (r11.abs() + r22.abs()).powi(2).max(f64::MIN_POSITIVE);
        let psi = complex_angle(&e1, &plane_from_frame(fx, fy)?);
        nodes.push(NodeInvariants {
            i,
            j,
            k,
            k_gauss_map: pull.re,
            k_n: pull.im,
            h2,
            delta,
            delta_matrix,
            metric: [e, f, g],
            psi,
            reliable: rgram.abs() > 1e-8 * rscale,
        });
    }
    let max_of = |f: fn(&NodeInvariants) -> f64| nodes.iter().map(f).fold(0.0, f64::max);
    let cos: Vec<Complex64> = nodes.iter().map(|n| n.psi.cos()).collect();
    let mean = cos.iter().sum::<Complex64>() / (cos.len().max(1) as f64);
    Ok(InvariantReport {
        max_abs_k: max_of(|n| n.k.abs()),
        max_abs_k_n: max_of(|n| n.k_n.abs()),
        max_abs_h2: max_of(|n| n.h2.abs()),
        angle_spread: cos.iter().map(|c| (c - mean).norm()).fold(0.0, f64::max),
        unreliable: nodes.iter().filter(|n| !n.reliable).count(),
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{sample_immersion, GridGeometry};

    fn sphere(r: f64) -> ImmersionGrid {
        let geom = GridGeometry::covering(0.2, 0.8, -0.3, 0.3, 0.01).unwrap();
        sample_immersion(
            |u, v| MinkowskiVector::new(0.0, r * u.cos() * v.cos(), r * u.sin() * v.cos(), r * v.sin()),
            geom,
        )
        .unwrap()
    }

    #[test]
    fn flat_plane_is_flat() {
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.1).unwrap();
        let grid = sample_immersion(|x, y| MinkowskiVector::new(0.0, 0.0, x, y), geom).unwrap();
        let rep = curvatures(&grid).unwrap();
        assert_eq!(rep.max_abs_k, 0.0);
        assert_eq!(rep.max_abs_k_n, 0.0);
        assert_eq!(rep.max_abs_h2, 0.0);
        let c = check_constant_angle(&grid, &OrientedPlane::e1(), 1e-14).unwrap();
        assert!(c.pass);
        assert!(angle_field(&grid, &OrientedPlane::e1()).unwrap().iter().all(|s| s.psi.psi1 == 0.0 && s.psi.psi2 == 0.0));
    }

    #[test]
    fn round_sphere_curvature() {
        let r = 2.0;
        let rep = curvatures(&sphere(r)).unwrap();
        for n in &rep.nodes {
            assert!((n.k - 1.0 / (r * r)).abs() < 1e-3, "{}", n.k);
            assert!((n.k_gauss_map - 1.0 / (r * r)).abs() < 1e-3, "{}", n.k_gauss_map);
            assert!(n.k_n.abs() < 1e-8);
            // mean curvature vector of a round sphere in a spacelike hyperplane has |H|^2 = 1/r^2
            assert!((n.h2 - 1.0 / (r * r)).abs() < 1e-3);
        }
    }

    #[test]
    fn lightcone_surface_has_lightlike_mean_curvature() {
        let (a, b) = (0.5, 0.3);
        let geom = GridGeometry::covering(-1.0, 1.0, -1.0, 1.0, 0.01).unwrap();
        let grid = sample_immersion(
            |x, y| MinkowskiVector::new(x.cosh(), x.sinh(), y.cos(), y.sin()) * (a * x - b * y).exp(),
            geom,
        )
        .unwrap();
        let rep = curvatures(&grid).unwrap();
        assert!(rep.max_abs_k < 1e-3 && rep.max_abs_k_n < 1e-3 && rep.max_abs_h2 < 1e-3);
        let c = check_constant_angle(&grid, &OrientedPlane::e1(), 1e-3).unwrap();
        assert!(c.pass);
        assert!((c.mean_cos - Complex64::new(a, b)).norm() < 1e-3, "{}", c.mean_cos);
    }

    #[test]
    fn graph_surface_has_varying_angle() {
        let geom = GridGeometry::covering(-1.0, 1.0, -1.0, 1.0, 0.02).unwrap();
        let grid = sample_immersion(|x, y| MinkowskiVector::new(0.0, x, y, x * x), geom).unwrap();
        assert!(!check_constant_angle(&grid, &OrientedPlane::e1(), 1e-3).unwrap().pass);
    }

    #[test]
    fn normal_frame_orientation() {
        let u = MinkowskiVector::new(0.3, 1.0, 0.2, 0.0);
        let v = MinkowskiVector::new(0.1, 0.0, 1.0, 0.4);
        let (n2, n1) = normal_frame(u, v).unwrap();
        assert!((n2.norm2() + 1.0).abs() < 1e-12 && (n1.norm2() - 1.0).abs() < 1e-12);
        assert!(n2.is_future());
        for t in [u, v] {
            assert!(n1.dot(t).abs() < 1e-12 && n2.dot(t).abs() < 1e-12);
        }
        assert!(n1.dot(n2).abs() < 1e-12);
        assert!(det4([n2, n1, u, v]) > 0.0);
    }

    #[test]
    fn boundary_node_is_not_interior() {
        let s = sphere(1.0);
        assert!(matches!(gauss_map(&s, 0, 3), Err(Error::NotInterior { .. })));
    }
}
