use super::frame::{adapted_frame, AdaptedFrame};
use super::metric::MetricField;
use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::surface::ImmersionGrid;

/// Worst unit-cell loop integral of the discrete 1-form `mu T1 dx + nu T2 dy`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureReport {
    /// Largest loop integral over a single cell (max-norm of the 4-vector).
    pub max_residual: f64,
    /// Largest loop integral divided by the cell area.
    pub max_curl: f64,
    /// Threshold on `max_curl`: `100 h^2 scale`.
    pub tolerance: f64,
    pub worst_cell: (usize, usize),
}

/// Integrates `dF = mu T1 dx + nu T2 dy` from node `(0, 0)`.
pub fn integrate_immersion(
    metric: &MetricField,
    base: MinkowskiVector,
) -> Result<(ImmersionGrid, ClosureReport)> {
    integrate_immersion_at(metric, base, (0, 0))
}

/// Integrates with `F(base_node) = base`: trapezoid along the base row, then along
/// every column.
pub fn integrate_immersion_at(
    metric: &MetricField,
    base: MinkowskiVector,
    base_node: (usize, usize),
) -> Result<(ImmersionGrid, ClosureReport)> {
    let g = metric.geom;
    let (bi, bj) = base_node;
    if bi >= g.nx || bj >= g.ny {
        return Err(Error::InvalidInput(format!("base node ({bi}, {bj}) outside the grid")));
    }
    let frames: Vec<AdaptedFrame> = g
        .nodes()
        .map(|(i, j)| adapted_frame(metric.psi, g.z(i, j)))
        .collect::<Result<_>>()?;
    let ex: Vec<MinkowskiVector> = (0..g.len()).map(|k| frames[k].t1 * metric.mu[k]).collect();
    let ey: Vec<MinkowskiVector> = (0..g.len()).map(|k| frames[k].t2 * metric.nu[k]).collect();
    let id = |i: usize, j: usize| g.idx(i, j);
    let step_x = |a: usize, b: usize| (ex[a] + ex[b]) * (0.5 * g.hx);
    let step_y = |a: usize, b: usize| (ey[a] + ey[b]) * (0.5 * g.hy);

    let mut pts = vec![MinkowskiVector::ZERO; g.len()];
    pts[id(bi, bj)] = base;
    for i in bi + 1..g.nx {
        pts[id(i, bj)] = pts[id(i - 1, bj)] + step_x(id(i - 1, bj), id(i, bj));
    }
    for i in (0..bi).rev() {
        pts[id(i, bj)] = pts[id(i + 1, bj)] - step_x(id(i, bj), id(i + 1, bj));
    }
    for i in 0..g.nx {
        for j in bj + 1..g.ny {
            pts[id(i, j)] = pts[id(i, j - 1)] + step_y(id(i, j - 1), id(i, j));
        }
        for j in (0..bj).rev() {
            pts[id(i, j)] = pts[id(i, j + 1)] - step_y(id(i, j), id(i, j + 1));
        }
    }

    let scale = metric.scale().max(f64::MIN_POSITIVE);
    let h = g.h();
    let tolerance = 100.0 * h * h * scale;
    let area = g.hx * g.hy;
    let mut report = ClosureReport { max_residual: 0.0, max_curl: 0.0, tolerance, worst_cell: (0, 0) };
    for j in 0..g.ny - 1 {
        for i in 0..g.nx - 1 {
            let loop_sum = step_x(id(i, j), id(i + 1, j)) + step_y(id(i + 1, j), id(i + 1, j + 1))
                - step_x(id(i, j + 1), id(i + 1, j + 1))
                - step_y(id(i, j), id(i, j + 1));
            let r = loop_sum.max_abs();
            if r > report.max_residual {
                report.max_residual = r;
                report.max_curl = r / area;
                report.worst_cell = (i, j);
            }
        }
    }
    if report.max_curl > tolerance {
        return Err(Error::ClosureFailure {
            residual: report.max_curl,
            tolerance,
            i: report.worst_cell.0,
            j: report.worst_cell.1,
        });
    }

    let mut grid = ImmersionGrid::new(g, pts)?;
    grid.frames = Some(frames);
    grid.mu = Some(metric.mu.clone());
    grid.nu = Some(metric.nu.clone());
    grid.masked = Some(metric.masked.clone());
    grid.psi = Some(metric.psi);
    Ok((grid, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planes::ComplexAngle;
    use crate::surface::GridGeometry;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn psi0() -> ComplexAngle {
        ComplexAngle::new(PI / 3.0, 0.4)
    }

    #[test]
    fn right_angle_unit_metric_gives_flat_product() {
        // T1 turns in the E1-plane and T2 in its complement, so unit speeds give a
        // circle of radius 1/2 times a hyperbola of radius 1/2
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.01).unwrap();
        let psi = ComplexAngle::new(FRAC_PI_2, 0.0);
        let m = MetricField::from_fn(geom, psi, |_, _| (1.0, 1.0)).unwrap();
        let base = MinkowskiVector::new(1.0, 2.0, 3.0, 4.0);
        let (grid, rep) = integrate_immersion(&m, base).unwrap();
        assert!(rep.max_residual < 1e-12);
        assert_eq!(grid.point(0, 0), base);
        for q in &grid.points {
            let d = *q - base;
            let (a, b) = (d[2] - 0.5, d[3]);
            assert!((a * a + b * b - 0.25).abs() < 1e-4);
            let (t, s) = (d[0] + 0.5, d[1]);
            assert!((-t * t + s * s + 0.25).abs() < 1e-4);
        }
    }

    #[test]
    fn hypersphere_metric_integrates_onto_hyperboloid() {
        let (c1, c2) = psi0().constants().unwrap();
        let geom = GridGeometry::covering(0.0, 0.5, 1.0, 1.5, 0.0005).unwrap();
        let m = MetricField::from_fn(geom, psi0(), |x, y| {
            let s = c1 * y - c2 * x;
            (2.0 * s.sinh(), -2.0 * s.cosh())
        })
        .unwrap();
        // center chosen so that F(base) matches (-mu N1 + nu N2)/2
        let f0 = adapted_frame(psi0(), geom.z(0, 0)).unwrap();
        let base = (f0.n1 * -m.mu[0] + f0.n2 * m.nu[0]) * 0.5;
        let (grid, rep) = integrate_immersion(&m, base).unwrap();
        assert!(rep.max_residual < 1e-6);
        let worst = grid.points.iter().map(|p| (p.norm2() + 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn inconsistent_metric_fails_closure() {
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.01).unwrap();
        let m = MetricField::from_fn(geom, psi0(), |x, y| (1.0 + x * y, 1.0)).unwrap();
        assert!(matches!(
            integrate_immersion(&m, MinkowskiVector::ZERO),
            Err(Error::ClosureFailure { .. })
        ));
    }

    #[test]
    fn interior_base_node() {
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.1).unwrap();
        let psi = ComplexAngle::new(FRAC_PI_2, 0.0);
        let m = MetricField::from_fn(geom, psi, |_, _| (1.0, 2.0)).unwrap();
        let base = MinkowskiVector::new(0.0, 0.0, 5.0, 5.0);
        let (a, _) = integrate_immersion_at(&m, base, (4, 6)).unwrap();
        let (b, _) = integrate_immersion(&m, MinkowskiVector::ZERO).unwrap();
        assert_eq!(a.point(4, 6), base);
        let shift = base - b.point(4, 6);
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((*p - (*q + shift)).max_abs() < 1e-12);
        }
    }
}
