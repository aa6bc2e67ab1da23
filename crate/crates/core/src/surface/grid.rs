use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::planes::ComplexAngle;
use crate::synthesis::AdaptedFrame;

/// Rectangular parameter grid. Node `(i, j)` sits at `(x0 + i hx, y0 + j hy)`
/// and is stored at index `j * nx + i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
}

impl GridGeometry {
    pub fn new(nx: usize, ny: usize, x0: f64, y0: f64, hx: f64, hy: f64) -> Result<Self> {
        let g = Self { nx, ny, x0, y0, hx, hy };
        g.validate()?;
        Ok(g)
    }

    /// Grid covering `[xa, xb] x [ya, yb]` with spacing close to `h` that hits both ends.
    pub fn covering(xa: f64, xb: f64, ya: f64, yb: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(xb > xa) || !(yb > ya) {
            return Err(Error::InvalidInput(format!(
                "bad domain [{xa}, {xb}] x [{ya}, {yb}] with h = {h}"
            )));
        }
        let nx = ((xb - xa) / h).round().max(1.0) as usize + 1;
        let ny = ((yb - ya) / h).round().max(1.0) as usize + 1;
        Self::new(nx, ny, xa, ya, (xb - xa) / (nx - 1) as f64, (yb - ya) / (ny - 1) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidInput(format!(
                "grid must be at least 2x2, got {}x{}",
                self.nx, self.ny
            )));
        }
        if !(self.hx > 0.0 && self.hy > 0.0) || !self.x0.is_finite() || !self.y0.is_finite() {
            return Err(Error::InvalidInput("grid spacings must be positive and finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    /// Distance in nodes from the grid boundary.
    pub fn ring(&self, i: usize, j: usize) -> usize {
        i.min(j).min(self.nx - 1 - i).min(self.ny - 1 - j)
    }

    pub fn h(&self) -> f64 {
        self.hx.max(self.hy)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }
}

/// Sampled immersion with optional synthesis data attached.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionGrid {
    pub geom: GridGeometry,
    pub points: Vec<MinkowskiVector>,
    pub frames: Option<Vec<AdaptedFrame>>,
    pub mu: Option<Vec<f64>>,
    pub nu: Option<Vec<f64>>,
    /// `true` marks nodes excluded from analysis.
    pub masked: Option<Vec<bool>>,
    pub psi: Option<ComplexAngle>,
    pub family: Option<String>,
}

impl ImmersionGrid {
    pub fn new(geom: GridGeometry, points: Vec<MinkowskiVector>) -> Result<Self> {
        geom.validate()?;
        if points.len() != geom.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} points, got {}",
                geom.len(),
                points.len()
            )));
        }
        Ok(Self {
            geom,
            points,
            frames: None,
            mu: None,
            nu: None,
            masked: None,
            psi: None,
            family: None,
        })
    }

    pub fn point(&self, i: usize, j: usize) -> MinkowskiVector {
        self.points[self.geom.idx(i, j)]
    }

    pub fn frame(&self, i: usize, j: usize) -> Option<&AdaptedFrame> {
        self.frames.as_ref().map(|f| &f[self.geom.idx(i, j)])
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.masked.as_ref().is_some_and(|m| m[self.geom.idx(i, j)])
    }

    /// True when every node within `r` steps of `(i, j)` exists and is unmasked.
    pub fn stencil_ok(&self, i: usize, j: usize, r: usize) -> bool {
        if self.geom.ring(i, j) < r {
            return false;
        }
        match &self.masked {
            None => true,
            Some(m) => (j - r..=j + r)
                .all(|jj| (i - r..=i + r).all(|ii| !m[self.geom.idx(ii, jj)])),
        }
    }

    /// Fraction of masked nodes.
    pub fn mask_fraction(&self) -> f64 {
        match &self.masked {
            None => 0.0,
            Some(m) => m.iter().filter(|&&b| b).count() as f64 / m.len() as f64,
        }
    }

    /// Applies a Lorentz transform and translation `x -> g x + t` to points and frames.
    pub fn transform(&mut self, g: &crate::algebra::SpinElement, t: MinkowskiVector) {
        for p in self.points.iter_mut() {
            *p = g.act(*p) + t;
        }
        if let Some(frames) = self.frames.as_mut() {
            for f in frames.iter_mut() {
                *f = AdaptedFrame {
                    t1: g.act(f.t1),
                    t2: g.act(f.t2),
                    n1: g.act(f.n1),
                    n2: g.act(f.n2),
                };
            }
        }
    }
}

/// Samples `f` on the grid without differentiating.
pub fn sample_immersion<F>(f: F, geom: GridGeometry) -> Result<ImmersionGrid>
where
    F: Fn(f64, f64) -> MinkowskiVector,
{
    let points = geom.nodes().map(|(i, j)| f(geom.x(i), geom.y(j))).collect();
    ImmersionGrid::new(geom, points)
}
