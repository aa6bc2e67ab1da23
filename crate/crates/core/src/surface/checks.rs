use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use serde::Serialize;

use super::grid::ImmersionGrid;
use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::planes::{ComplexAngle, OrientedPlane};
use crate::synthesis::MetricField;

/// Total-least-squares hyperplane fit `<n, F>_E = c` with `|n|_E = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HyperplaneReport {
    /// Euclidean unit normal.
    pub normal: MinkowskiVector,
    pub offset: f64,
    /// `max |<n, F>_E - c|` over all nodes.
    pub residual: f64,
    /// Minkowski square of the Euclidean unit normal.
    pub normal_norm2: f64,
    pub is_in_affine_hyperplane: bool,
    pub normal_is_null: bool,
}

pub const HYPERPLANE_TOL: f64 = 1e-8;
pub const NULL_NORMAL_TOL: f64 = 1e-6;

pub fn check_degenerate_hyperplane(grid: &ImmersionGrid) -> Result<HyperplaneReport> {
    let n = grid.points.len();
    if n < 5 {
        return Err(Error::InvalidInput("hyperplane fit needs at least 5 nodes".into()));
    }
    let mean = grid.points.iter().fold(MinkowskiVector::ZERO, |a, p| a + *p) * (1.0 / n as f64);
    let mut m = Matrix4::zeros();
    for p in &grid.points {
        let d = Vector4::from((*p - mean).0);
        m += d * d.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let col = |k: usize| {
        let c = eig.eigenvectors.column(k);
        // Minkowski normal n_M = diag(-1,1,1,1) n_E has the same square as n_E
        MinkowskiVector::new(c[0], c[1], c[2], c[3])
    };
    let spread = |n: MinkowskiVector| {
        let c = n.euclid_dot(mean);
        grid.points.iter().map(|p| (n.euclid_dot(*p) - c).abs()).fold(0.0, f64::max)
    };
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut normal = col(order[0]);
    // a surface contained in a plane fits a whole pencil of hyperplanes; prefer a null one
    if spread(col(order[1])) < HYPERPLANE_TOL {
        if let Some(n) = null_combination(col(order[0]), col(order[1])) {
            normal = n;
        }
    }
    let offset = normal.euclid_dot(mean);
    let residual = spread(normal);
    let normal_norm2 = normal.norm2();
    let is_in = residual < HYPERPLANE_TOL;
    Ok(HyperplaneReport {
        normal,
        offset,
        residual,
        normal_norm2,
        is_in_affine_hyperplane: is_in,
        normal_is_null: is_in && normal_norm2.abs() < NULL_NORMAL_TOL,
    })
}

/// Euclidean unit combination of two orthonormal vectors with vanishing Minkowski square.
fn null_combination(a: MinkowskiVector, b: MinkowskiVector) -> Option<MinkowskiVector> {
    let (p, q, r) = (a.norm2(), a.dot(b), b.norm2());
    // (cos t, sin t): p cos^2 + 2q cos sin + r sin^2 = 0
    let disc = q * q - p * r;
    if disc < 0.0 {
        return None;
    }
    let (c, s) = if r.abs() > p.abs() {
        (r, -q + disc.sqrt())
    } else if p != 0.0 {
        (-q - disc.sqrt(), p)
    } else {
        (1.0, 0.0)
    };
    let n = a * c + b * s;
    let len = n.euclid_norm();
    (len > 0.0).then(|| n * (1.0 / len))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TubeVariant {
    /// Real angle: x-curves lie in translates of the reference plane.
    Real,
    /// Pure imaginary angle: y-curves lie in translates of the reference plane.
    Imaginary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolonomyReport {
    pub variant: TubeVariant,
    /// Worst component orthogonal to the reference plane along the coordinate curves.
    pub curve_residual: f64,
    /// Worst deviation of the transversal product from `cos psi1` (or `cosh psi2`).
    pub angle_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const HOLONOMY_TOL: f64 = 1e-8;
const ANGLE_CLASS_TOL: f64 = 1e-10;

/// Checks the holonomy-tube structure of a synthesized grid with real or imaginary angle.
pub fn check_holonomy_tube(
    grid: &ImmersionGrid,
    p0: &OrientedPlane,
    psi: ComplexAngle,
) -> Result<HolonomyReport> {
    let variant = if psi.psi2.abs() < ANGLE_CLASS_TOL {
        TubeVariant::Real
    } else if psi.psi1.abs() < ANGLE_CLASS_TOL {
        TubeVariant::Imaginary
    } else {
        return Err(Error::WrongAngleClass { psi1: psi.psi1, psi2: psi.psi2 });
    };
    let frames = grid
        .frames
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("holonomy check needs analytic frames".into()))?;
    let g = &grid.geom;
    let off_plane = |d: MinkowskiVector| (d - p0.project(d)).max_abs();
    let frame = |i: usize, j: usize| frames[g.idx(i, j)];
    let mut curve = 0.0f64;
    let mut angle = 0.0f64;
    match variant {
        TubeVariant::Real => {
            for j in 0..g.ny {
                let base = grid.point(0, j);
                for i in 1..g.nx {
                    curve = curve.max(off_plane(grid.point(i, j) - base));
                }
            }
            let a = p0.rotate_quarter(frame(0, 0).t1);
            let want = psi.psi1.cos();
            for j in 0..g.ny {
                angle = angle.max((frame(0, j).t2.dot(a) - want).abs());
            }
        }
        TubeVariant::Imaginary => {
            for i in 0..g.nx {
                let base = grid.point(i, 0);
                for j in 1..g.ny {
                    curve = curve.max(off_plane(grid.point(i, j) - base));
                }
            }
            let a = -p0.rotate_quarter(frame(0, 0).t2);
            let want = psi.psi2.cosh();
            for i in 0..g.nx {
                angle = angle.max((frame(i, 0).t1.dot(a) - want).abs());
            }
        }
    }
    let scale = grid.points.iter().map(|p| p.max_abs()).fold(1.0, f64::max);
    let tolerance = HOLONOMY_TOL * scale;
    Ok(HolonomyReport {
        variant,
        curve_residual: curve,
        angle_residual: angle,
        tolerance,
        pass: curve < tolerance && angle < HOLONOMY_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowupReport {
    /// `true` when checked along columns (`c1 != 0`), `false` along rows.
    pub along_columns: bool,
    pub relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies the incompleteness ODE `(f^2)' = 2 c1 f^3` with `f = 1/|mu|` along columns
/// (or the row analogue with `nu` and `-c2` when `c1 = 0`) by central differences.
pub fn blowup_ode_check(metric: &MetricField) -> Result<BlowupReport> {
    let (c1, c2) = metric.psi.constants()?;
    let g = metric.geom;
    let tolerance = 10.0 * g.h();
    let (z1, z2) = (c1.abs() < 1e-12, c2.abs() < 1e-12);
    let along_columns = !z1 || z2;
    if z1 && z2 {
        return Ok(BlowupReport { along_columns, relative_residual: 0.0, tolerance, pass: true });
    }
    let ok = |i: usize, j: usize| {
        g.ring(i, j) >= 1
            && !metric.is_masked(i, j)
            && (j - 1..=j + 1).all(|jj| (i - 1..=i + 1).all(|ii| !metric.is_masked(ii, jj)))
    };
    let mut worst = 0.0f64;
    for (i, j) in g.nodes() {
        if !ok(i, j) {
            continue;
        }
        let (lhs, rhs) = if along_columns {
            let m = |jj: usize| metric.mu_at(i, jj).powi(-2);
            let d = (m(j + 1) - m(j - 1)) / (2.0 * g.hy);
            (d / metric.nu_at(i, j), 2.0 * c1 * metric.mu_at(i, j).powi(-3))
        } else {
            let n = |ii: usize| metric.nu_at(ii, j).powi(-2);
            let d = (n(i + 1) - n(i - 1)) / (2.0 * g.hx);
            (d / metric.mu_at(i, j), -2.0 * c2 * metric.nu_at(i, j).powi(-3))
        };
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }
    let relative_residual = worst;
    Ok(BlowupReport { along_columns, relative_residual, tolerance, pass: relative_residual < tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{sample_immersion, GridGeometry};
    use crate::synthesis::{integrate_immersion, make_family, FamilySpec};
    use std::f64::consts::PI;

    fn geom() -> GridGeometry {
        GridGeometry::covering(-0.5, 0.5, -0.5, 0.5, 0.05).unwrap()
    }

    #[test]
    fn degenerate_family_lies_in_null_hyperplane() {
        let g = make_family(&FamilySpec::DegenerateHyperplane { a: 1.0, b: 0.5 }, geom()).unwrap();
        let r = check_degenerate_hyperplane(&g).unwrap();
        assert!(r.is_in_affine_hyperplane && r.normal_is_null, "{r:?}");
    }

    #[test]
    fn sphere_piece_is_not_in_a_hyperplane() {
        let g = sample_immersion(|x, y| MinkowskiVector::new(0.0, x.cos() * y.cos(), x.sin() * y.cos(), y.sin()), geom()).unwrap();
        let r = check_degenerate_hyperplane(&g).unwrap();
        assert!(r.is_in_affine_hyperplane && !r.normal_is_null, "{r:?}");
    }

    #[test]
    fn flat_plane_also_fits_a_null_hyperplane() {
        // x0 = 1, x1 = 0 is contained in x0 - x1 = 1
        let g = sample_immersion(|x, y| MinkowskiVector::new(1.0, 0.0, x, y), geom()).unwrap();
        let r = check_degenerate_hyperplane(&g).unwrap();
        assert!(r.normal_is_null, "{r:?}");
    }

    #[test]
    fn lightcone_with_b_zero_is_not_in_a_hyperplane() {
        let g = make_family(&FamilySpec::Lightcone { a: 0.5, b: 0.0 }, geom()).unwrap();
        assert!(!check_degenerate_hyperplane(&g).unwrap().is_in_affine_hyperplane);
    }

    fn synthesized(psi: ComplexAngle) -> ImmersionGrid {
        let (c1, c2) = psi.constants().unwrap();
        let geom = GridGeometry::covering(0.0, 1.0, 0.5, 1.5, 0.02).unwrap();
        let m = MetricField::from_fn(geom, psi, |x, y| {
            let s = c1 * y - c2 * x;
            (2.0 * s.sinh(), -2.0 * s.cosh())
        })
        .unwrap();
        integrate_immersion(&m, MinkowskiVector::ZERO).unwrap().0
    }

    #[test]
    fn holonomy_tube_real_and_imaginary() {
        for psi in [ComplexAngle::new(PI / 3.0, 0.0), ComplexAngle::new(0.0, 0.7)] {
            let g = synthesized(psi);
            let r = check_holonomy_tube(&g, &OrientedPlane::e1(), psi).unwrap();
            assert!(r.pass, "{psi}: {r:?}");
        }
    }

    #[test]
    fn holonomy_tube_rejects_generic_angle() {
        let psi = ComplexAngle::new(PI / 3.0, 0.4);
        let g = synthesized(psi);
        assert!(matches!(
            check_holonomy_tube(&g, &OrientedPlane::e1(), psi),
            Err(Error::WrongAngleClass { .. })
        ));
    }

    #[test]
    fn blowup_relation_on_hypersphere_metric() {
        let psi = ComplexAngle::new(PI / 3.0, 0.4);
        let (c1, c2) = psi.constants().unwrap();
        let m = MetricField::from_fn(GridGeometry::covering(0.0, 1.0, 1.5, 2.5, 0.01).unwrap(), psi, |x, y| {
            let s = c1 * y - c2 * x;
            (2.0 * s.sinh(), -2.0 * s.cosh())
        })
        .unwrap();
        let r = blowup_ode_check(&m).unwrap();
        assert!(r.pass && r.along_columns, "{r:?}");
    }

    #[test]
    fn blowup_relation_on_lightcone_metric() {
        let psi = ComplexAngle::new(PI / 3.0, 0.4);
        let (c1, c2) = psi.constants().unwrap();
        let m = MetricField::from_fn(geom(), psi, |x, y| {
            let e = (c1 * y - c2 * x).exp();
            (e, -e)
        })
        .unwrap();
        let r = blowup_ode_check(&m).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn blowup_trivial_at_right_angle() {
        let m = MetricField::from_fn(geom(), ComplexAngle::new(PI / 2.0, 0.0), |_, _| (1.0, 1.0)).unwrap();
        let r = blowup_ode_check(&m).unwrap();
        assert!(r.pass && r.relative_residual == 0.0);
    }
}
