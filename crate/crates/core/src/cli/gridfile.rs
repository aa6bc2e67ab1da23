use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::planes::ComplexAngle;
use crate::surface::{GridGeometry, ImmersionGrid};
use crate::synthesis::AdaptedFrame;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridHeader {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

/// On-disk grid. Field order is the key order of the JSON encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub format_version: u32,
    pub header: GridHeader,
    pub points: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masked: Option<Vec<bool>>,
    /// Per node `[T1, T2, N1, N2]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<[[f64; 4]; 4]>>,
}

impl GridFile {
    pub fn from_grid(grid: &ImmersionGrid) -> Self {
        let g = grid.geom;
        GridFile {
            format_version: FORMAT_VERSION,
            header: GridHeader {
                nx: g.nx,
                ny: g.ny,
                x0: g.x0,
                y0: g.y0,
                hx: g.hx,
                hy: g.hy,
                psi: grid.psi.map(|p| [p.psi1, p.psi2]),
                family: grid.family.clone(),
            },
            points: grid.points.iter().map(|p| p.0).collect(),
            mu: grid.mu.clone(),
            nu: grid.nu.clone(),
            masked: grid.masked.clone(),
            frames: grid
                .frames
                .as_ref()
                .map(|fs| fs.iter().map(|f| f.as_array().map(|v| v.0)).collect()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let h = &self.header;
        let n = h.nx * h.ny;
        let bad_len = |what: &str, len: usize| {
            Err(Error::InvalidInput(format!("{what} has {len} entries, expected nx*ny = {n}")))
        };
        if self.points.len() != n {
            return bad_len("points", self.points.len());
        }
        for (name, arr) in [("mu", &self.mu), ("nu", &self.nu)] {
            if let Some(a) = arr {
                if a.len() != n {
                    return bad_len(name, a.len());
                }
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput(format!("{name} contains non-finite values")));
                }
            }
        }
        if let Some(m) = &self.masked {
            if m.len() != n {
                return bad_len("masked", m.len());
            }
        }
        if let Some(f) = &self.frames {
            if f.len() != n {
                return bad_len("frames", f.len());
            }
            if f.iter().flatten().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("frames contain non-finite values".into()));
            }
        }
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("points contain non-finite values".into()));
        }
        if let Some(p) = h.psi {
            if !p.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidInput("psi must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn to_grid(&self) -> Result<ImmersionGrid> {
        self.validate()?;
        let h = &self.header;
        let geom = GridGeometry::new(h.nx, h.ny, h.x0, h.y0, h.hx, h.hy)?;
        let mut grid = ImmersionGrid::new(geom, self.points.iter().map(|p| MinkowskiVector(*p)).collect())?;
        grid.mu = self.mu.clone();
        grid.nu = self.nu.clone();
        grid.masked = self.masked.clone();
        // stored angles are kept verbatim so that a round trip is lossless
        grid.psi = h.psi.map(|[a, b]| ComplexAngle { psi1: a, psi2: b });
        grid.family = h.family.clone();
        grid.frames = self.frames.as_ref().map(|fs| {
            fs.iter()
                .map(|[t1, t2, n1, n2]| AdaptedFrame {
                    t1: MinkowskiVector(*t1),
                    t2: MinkowskiVector(*t2),
                    n1: MinkowskiVector(*n1),
                    n2: MinkowskiVector(*n2),
                })
                .collect()
        });
        Ok(grid)
    }

    /// Canonical encoding: compact JSON, shortest round-trip floats, trailing newline.
    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let mut s = serde_json::to_string(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: GridFile = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }
}

pub fn read_grid(path: &Path) -> Result<ImmersionGrid> {
    GridFile::from_json(&fs::read_to_string(path)?)?.to_grid()
}

pub fn write_grid(path: &Path, grid: &ImmersionGrid) -> Result<()> {
    fs::write(path, GridFile::from_grid(grid).to_json()?)?;
    Ok(())
}
