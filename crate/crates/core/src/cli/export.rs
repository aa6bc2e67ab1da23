use std::fmt::Write as _;

use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::surface::{GridGeometry, ImmersionGrid};

use super::gridfile::GridFile;

/// Linear map `R^4 -> R^3` used for OBJ output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Projection {
    /// Drop coordinate `k`.
    Drop(usize),
    /// Rows of a 3x4 matrix.
    Affine([[f64; 4]; 3]),
}

impl Projection {
    /// `drop:k` with `k` in 0..=3, or `affine:` followed by 12 comma-separated reals.
    pub fn parse(s: &str) -> Option<Self> {
        let (kind, rest) = s.split_once(':')?;
        match kind.trim() {
            "drop" => {
                let k: usize = rest.trim().parse().ok()?;
                (k < 4).then_some(Projection::Drop(k))
            }
            "affine" => {
                let v: Vec<f64> = rest.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
                if v.len() != 12 || v.iter().any(|x| !x.is_finite()) {
                    return None;
                }
                let mut m = [[0.0; 4]; 3];
                for (r, row) in m.iter_mut().enumerate() {
                    row.copy_from_slice(&v[4 * r..4 * r + 4]);
                }
                Some(Projection::Affine(m))
            }
            _ => None,
        }
    }

    pub fn apply(&self, p: MinkowskiVector) -> [f64; 3] {
        match *self {
            Projection::Drop(k) => {
                let mut out = [0.0; 3];
                let mut t = 0;
                for (c, v) in p.0.iter().enumerate() {
                    if c != k {
                        out[t] = *v;
                        t += 1;
                    }
                }
                out
            }
            Projection::Affine(m) => m.map(|row| row.iter().zip(p.0).map(|(a, b)| a * b).sum()),
        }
    }
}

/// `i,j,x,y,F0,F1,F2,F3[,mu,nu]`, one node per line after a header row.
pub fn to_csv(grid: &ImmersionGrid) -> Result<String> {
    let with_metric = grid.mu.is_some() && grid.nu.is_some();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["i", "j", "x", "y", "F0", "F1", "F2", "F3"];
    if with_metric {
        head.extend(["mu", "nu"]);
    }
    w.write_record(&head)?;
    let g = grid.geom;
    for (i, j) in g.nodes() {
        let k = g.idx(i, j);
        let mut rec = vec![i.to_string(), j.to_string(), g.x(i).to_string(), g.y(j).to_string()];
        rec.extend(grid.points[k].0.iter().map(|v| v.to_string()));
        if let (Some(mu), Some(nu)) = (&grid.mu, &grid.nu) {
            rec.push(mu[k].to_string());
            rec.push(nu[k].to_string());
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Rebuilds points (and `mu`, `nu` when present) from [`to_csv`] output.
/// Grid geometry is recovered from the `x`, `y` columns.
pub fn from_csv(text: &str) -> Result<ImmersionGrid> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let with_metric = r.headers()?.len() == 10;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let idx = |c: usize| -> Result<usize> {
            rec[c].parse().map_err(|_| Error::InvalidInput(format!("bad index {:?}", &rec[c])))
        };
        let num = |c: usize| -> Result<f64> {
            rec[c].parse().map_err(|_| Error::InvalidInput(format!("bad number {:?}", &rec[c])))
        };
        let vals: Vec<f64> = (2..rec.len()).map(num).collect::<Result<_>>()?;
        rows.push((idx(0)?, idx(1)?, vals));
    }
    let nx = rows.iter().map(|r| r.0).max().map_or(0, |m| m + 1);
    let ny = rows.iter().map(|r| r.1).max().map_or(0, |m| m + 1);
    if rows.len() != nx * ny || nx < 2 || ny < 2 {
        return Err(Error::InvalidInput("csv does not describe a full rectangular grid".into()));
    }
    let find = |i: usize, j: usize| rows.iter().find(|r| r.0 == i && r.1 == j);
    let (Some(a), Some(bx), Some(by)) = (find(0, 0), find(1, 0), find(0, 1)) else {
        return Err(Error::InvalidInput("csv is missing corner nodes".into()));
    };
    let geom = GridGeometry::new(nx, ny, a.2[0], a.2[1], bx.2[0] - a.2[0], by.2[1] - a.2[1])?;
    let mut pts = vec![MinkowskiVector::ZERO; nx * ny];
    let mut mu = vec![0.0; nx * ny];
    let mut nu = vec![0.0; nx * ny];
    for (i, j, v) in &rows {
        let k = geom.idx(*i, *j);
        pts[k] = MinkowskiVector::new(v[2], v[3], v[4], v[5]);
        if with_metric {
            mu[k] = v[6];
            nu[k] = v[7];
        }
    }
    let mut grid = ImmersionGrid::new(geom, pts)?;
    if with_metric {
        grid.mu = Some(mu);
        grid.nu = Some(nu);
    }
    Ok(grid)
}

pub fn to_json(grid: &ImmersionGrid) -> Result<String> {
    GridFile::from_grid(grid).to_json()
}

/// Wavefront OBJ: row-major vertices, each cell split into two triangles.
/// Cells touching a masked node are left out.
pub fn to_obj(grid: &ImmersionGrid, proj: &Projection) -> String {
    let g = grid.geom;
    let mut s = String::new();
    for p in &grid.points {
        let [a, b, c] = proj.apply(*p);
        let _ = writeln!(s, "v {a} {b} {c}");
    }
    // OBJ indices are 1-based
    let v = |i: usize, j: usize| g.idx(i, j) + 1;
    for j in 0..g.ny - 1 {
        for i in 0..g.nx - 1 {
            if [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)].iter().any(|&(a, b)| grid.is_masked(a, b)) {
                continue;
            }
            let _ = writeln!(s, "f {} {} {}", v(i, j), v(i + 1, j), v(i + 1, j + 1));
            let _ = writeln!(s, "f {} {} {}", v(i, j), v(i + 1, j + 1), v(i, j + 1));
        }
    }
    s
}
