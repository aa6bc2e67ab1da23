use serde::Serialize;

use super::frame::{adapted_frame, AdaptedFrame};
use super::metric::MetricField;
use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::planes::ComplexAngle;
use crate::surface::{GridGeometry, ImmersionGrid};

/// Support functions `f = <F, T1>`, `g = <F, N1>` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialPair {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl PotentialPair {
    pub fn from_fn<F>(geom: &GridGeometry, p: F) -> Self
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let (f, g) = geom.nodes().map(|(i, j)| p(geom.x(i), geom.y(j))).unzip();
        Self { f, g }
    }
}

/// Residuals of the six potential equations plus the tangent consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialReport {
    /// Max interior residuals of `f_x`, `f_y`, `g_x`, `g_y`, `f_xy`, `g_xy` equations.
    pub residuals: [f64; 6],
    /// `10 h^2 scale`.
    pub tolerance: f64,
    /// `max |d_x F - mu T1|, |d_y F - nu T2|` over nodes at least two steps from the edge.
    pub tangent_residual: f64,
}

impl PotentialReport {
    pub const EQUATIONS: [&'static str; 6] = ["f_x", "f_y", "g_x", "g_y", "f_xy", "g_xy"];

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// First derivative along y: central inside, second-order one-sided on the edges.
fn d_y(v: &[f64], g: &GridGeometry, i: usize, j: usize) -> f64 {
    let at = |jj: usize| v[g.idx(i, jj)];
    let h = g.hy;
    if j == 0 {
        (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
    } else if j == g.ny - 1 {
        (3.0 * at(j) - 4.0 * at(j - 1) + at(j - 2)) / (2.0 * h)
    } else {
        (at(j + 1) - at(j - 1)) / (2.0 * h)
    }
}

/// Builds `F = offset + f T1 + (f_y / c2) T2 + g N1 + (g_y / c1) N2` and audits the potentials.
pub fn immersion_from_potentials(
    psi: ComplexAngle,
    metric: &MetricField,
    pot: &PotentialPair,
    offset: MinkowskiVector,
) -> Result<(ImmersionGrid, PotentialReport)> {
    let (c1, c2) = psi.constants()?;
    if c1.abs() < 1e-12 || c2.abs() < 1e-12 {
        return Err(psi.degenerate("the potential representation needs c1 != 0 and c2 != 0"));
    }
    let geom = metric.geom;
    if geom.ny < 3 {
        return Err(Error::InvalidInput("potentials need at least three rows".into()));
    }
    if pot.f.len() != geom.len() || pot.g.len() != geom.len() {
        return Err(Error::InvalidInput(format!("potential arrays must have {} entries", geom.len())));
    }
    let frames: Vec<AdaptedFrame> =
        geom.nodes().map(|(i, j)| adapted_frame(psi, geom.z(i, j))).collect::<Result<_>>()?;
    let points: Vec<MinkowskiVector> = geom
        .nodes()
        .map(|(i, j)| {
            let k = geom.idx(i, j);
            let fr = frames[k];
            let ft = d_y(&pot.f, &geom, i, j) / c2;
            let gt = d_y(&pot.g, &geom, i, j) / c1;
            offset + fr.t1 * pot.f[k] + fr.t2 * ft + fr.n1 * pot.g[k] + fr.n2 * gt
        })
        .collect();

    let (hx, hy) = (geom.hx, geom.hy);
    let interior = |i: usize, j: usize| {
        geom.ring(i, j) >= 1
            && (j - 1..=j + 1).all(|jj| (i - 1..=i + 1).all(|ii| !metric.is_masked(ii, jj)))
    };
    let mut res = [0.0f64; 6];
    let mut tangent = 0.0f64;
    for (i, j) in geom.nodes() {
        if !interior(i, j) {
            continue;
        }
        let k = geom.idx(i, j);
        let at = |v: &[f64], a: usize, b: usize| v[geom.idx(a, b)];
        let diffs = |v: &[f64]| {
            let x = (at(v, i + 1, j) - at(v, i - 1, j)) / (2.0 * hx);
            let y = (at(v, i, j + 1) - at(v, i, j - 1)) / (2.0 * hy);
            let yy = (at(v, i, j + 1) - 2.0 * v[k] + at(v, i, j - 1)) / (hy * hy);
            let xy = (at(v, i + 1, j + 1) - at(v, i + 1, j - 1) - at(v, i - 1, j + 1)
                + at(v, i - 1, j - 1))
                / (4.0 * hx * hy);
            (x, y, yy, xy)
        };
        let (f, g) = (pot.f[k], pot.g[k]);
        let (fx, fy, fyy, fxy) = diffs(&pot.f);
        let (gx, gy, gyy, gxy) = diffs(&pot.g);
        let (mu, nu) = (metric.mu[k], metric.nu[k]);
        let eqs = [
            fx - (mu + ((4.0 + c1 * c1) * g - gyy) / 2.0),
            fy - c2 * (c1 * c1 * g - gyy) / (2.0 * c1),
            gx - (-c2 * nu / 2.0 + ((c2 * c2 - 4.0) * f + fyy) / 2.0),
            gy - (c1 * nu / 2.0 - c1 * (c2 * c2 * f + fyy) / (2.0 * c2)),
            fxy + c1 * c2 * f,
            gxy + c1 * c2 * g,
        ];
        for (r, e) in res.iter_mut().zip(eqs) {
            *r = r.max(e.abs());
        }
        if geom.ring(i, j) < 2 {
            // one-sided edge derivatives would leak an O(h) term into the differences
            continue;
        }
        let px = (points[geom.idx(i + 1, j)] - points[geom.idx(i - 1, j)]) * (0.5 / hx);
        let py = (points[geom.idx(i, j + 1)] - points[geom.idx(i, j - 1)]) * (0.5 / hy);
        tangent = tangent
            .max((px - frames[k].t1 * mu).max_abs())
            .max((py - frames[k].t2 * nu).max_abs());
    }
    let h = geom.h();
    let tolerance = 10.0 * h * h * metric.scale();
    let report = PotentialReport { residuals: res, tolerance, tangent_residual: tangent };
    if let Some((e, r)) = PotentialReport::EQUATIONS
        .iter()
        .zip(res)
        .find(|(_, r)| !(*r <= tolerance))
    {
        return Err(Error::PotentialsInconsistent { equation: e.to_string(), residual: r, tolerance });
    }
    let mut grid = ImmersionGrid::new(geom, points)?;
    grid.frames = Some(frames);
    grid.mu = Some(metric.mu.clone());
    grid.nu = Some(metric.nu.clone());
    grid.masked = Some(metric.masked.clone());
    grid.psi = Some(psi);
    Ok((grid, report))
}
