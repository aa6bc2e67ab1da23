use std::f64::consts::FRAC_PI_2;
use std::fmt;

use super::frame::{adapted_frame, AdaptedFrame};
use crate::algebra::MinkowskiVector;
use crate::error::{Error, Result};
use crate::planes::ComplexAngle;
use crate::surface::{normal_frame, GridGeometry, ImmersionGrid};

/// Plane curve used by the product family.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductCurve {
    /// `r (cos t, sin t)`.
    Circle { radius: f64 },
    /// `r (cosh t, sinh t)`; in the timelike factor this is a spacelike branch.
    Hyperbola { radius: f64 },
    /// `(t, 0)`.
    Line,
    /// Points sampled at the grid parameters of the corresponding axis.
    Sampled(Vec<[f64; 2]>),
}

impl ProductCurve {
    fn eval(&self, t: f64, k: usize, h: f64) -> Result<([f64; 2], [f64; 2])> {
        Ok(match self {
            ProductCurve::Circle { radius: r } => {
                let (s, c) = t.sin_cos();
                ([r * c, r * s], [-r * s, r * c])
            }
            ProductCurve::Hyperbola { radius: r } => {
                ([r * t.cosh(), r * t.sinh()], [r * t.sinh(), r * t.cosh()])
            }
            ProductCurve::Line => ([t, 0.0], [1.0, 0.0]),
            ProductCurve::Sampled(pts) => {
                let n = pts.len();
                if n < 3 || k >= n {
                    return Err(Error::BadSpecParameters(format!(
                        "sampled curve has {n} points; the grid needs index {k}"
                    )));
                }
                let d = |a: usize, b: usize, s: f64| {
                    [(pts[b][0] - pts[a][0]) / s, (pts[b][1] - pts[a][1]) / s]
                };
                let tangent = if k == 0 {
                    let (p0, p1, p2) = (pts[0], pts[1], pts[2]);
                    [
                        (-3.0 * p0[0] + 4.0 * p1[0] - p2[0]) / (2.0 * h),
                        (-3.0 * p0[1] + 4.0 * p1[1] - p2[1]) / (2.0 * h),
                    ]
                } else if k == n - 1 {
                    let (p0, p1, p2) = (pts[n - 1], pts[n - 2], pts[n - 3]);
                    [
                        (3.0 * p0[0] - 4.0 * p1[0] + p2[0]) / (2.0 * h),
                        (3.0 * p0[1] - 4.0 * p1[1] + p2[1]) / (2.0 * h),
                    ]
                } else {
                    d(k - 1, k + 1, 2.0 * h)
                };
                (pts[k], tangent)
            }
        })
    }

    fn expected_len(&self) -> Option<usize> {
        match self {
            ProductCurve::Sampled(p) => Some(p.len()),
            _ => None,
        }
    }
}

/// Closed-form constant-angle families.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// `e^{ax-by} (cosh x, sinh x, cos y, sin y)`, inside the light cone.
    Lightcone { a: f64, b: f64 },
    /// `(-mu N1 + nu N2)/2` with `mu = r1 e^s + r2 e^{-s}`, `nu = -r1 e^s + r2 e^{-s}`,
    /// `s = c1 y - c2 x`; lies on `|F|^2 = r1 r2`.
    Hypersphere { psi: ComplexAngle, r1: f64, r2: f64 },
    /// `gamma1(x)` in the E1-plane and `gamma2(y)` in its orthogonal complement.
    Product { gamma1: ProductCurve, gamma2: ProductCurve },
    /// `mu = sin s`, `nu = -cos s`, `s = c1 y + c2 x`.
    Trig { psi: ComplexAngle },
    /// `mu = r (sin s - cos s)`, `nu = (1-r) cos s - (1+r) sin s`, `r = c1 y - c2 x`.
    PolyTrig { psi: ComplexAngle },
    /// `(s, s, x, y)` with `s = a sin x cos y + b x y`, inside a null hyperplane.
    DegenerateHyperplane { a: f64, b: f64 },
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Lightcone { .. } => "lightcone",
            FamilySpec::Hypersphere { .. } => "hypersphere",
            FamilySpec::Product { .. } => "product",
            FamilySpec::Trig { .. } => "trig",
            FamilySpec::PolyTrig { .. } => "polytrig",
            FamilySpec::DegenerateHyperplane { .. } => "degenerate",
        }
    }

    /// Parses `name:key=value,...`, e.g. `lightcone:a=0.5,b=0.3`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::BadSpecParameters(format!("expected key=value in '{part}'")))?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        let get = |key: &str| kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match get(key) {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::BadSpecParameters(format!("'{key}' is not a number: {v}"))),
                None => default
                    .ok_or_else(|| Error::BadSpecParameters(format!("missing parameter '{key}'"))),
            }
        };
        let angle = |default: Option<ComplexAngle>| -> Result<ComplexAngle> {
            match get("psi") {
                Some(v) => ComplexAngle::parse(v).map_err(|e| Error::BadSpecParameters(e.to_string())),
                None => default.ok_or_else(|| Error::BadSpecParameters("missing parameter 'psi'".into())),
            }
        };
        let allowed: &[&str] = match name.trim() {
            "lightcone" => &["a", "b"],
            "hypersphere" => &["psi", "r1", "r2"],
            "product" => &["c1", "c2", "r1", "r2"],
            "trig" | "polytrig" => &["psi"],
            "degenerate" => &["a", "b"],
            other => return Err(Error::BadSpecParameters(format!("unknown family '{other}'"))),
        };
        if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::BadSpecParameters(format!("unknown parameter '{k}' for {name}")));
        }
        let spec = match name.trim() {
            "lightcone" => FamilySpec::Lightcone { a: num("a", None)?, b: num("b", None)? },
            "hypersphere" => FamilySpec::Hypersphere {
                psi: angle(None)?,
                r1: num("r1", Some(1.0))?,
                r2: num("r2", Some(-1.0))?,
            },
            "product" => {
                let curve = |key: &str, rkey: &str, default: &str| -> Result<ProductCurve> {
                    let r = num(rkey, Some(1.0))?;
                    match get(key).unwrap_or(default) {
                        "circle" => Ok(ProductCurve::Circle { radius: r }),
                        "hyperbola" => Ok(ProductCurve::Hyperbola { radius: r }),
                        "line" => Ok(ProductCurve::Line),
                        other => Err(Error::BadSpecParameters(format!("unknown curve '{other}'"))),
                    }
                };
                FamilySpec::Product {
                    gamma1: curve("c1", "r1", "circle")?,
                    gamma2: curve("c2", "r2", "hyperbola")?,
                }
            }
            "trig" => FamilySpec::Trig { psi: angle(None)? },
            "polytrig" => FamilySpec::PolyTrig { psi: angle(None)? },
            _ => FamilySpec::DegenerateHyperplane { a: num("a", Some(1.0))?, b: num("b", Some(0.5))? },
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        let ok = match self {
            FamilySpec::Lightcone { a, b } => finite(&[*a, *b]),
            FamilySpec::Hypersphere { psi, r1, r2 } => {
                if *r1 * *r2 == 0.0 {
                    return Err(Error::BadSpecParameters(
                        "r1 r2 = 0 is the light-cone branch; use the lightcone family".into(),
                    ));
                }
                finite(&[psi.psi1, psi.psi2, *r1, *r2])
            }
            FamilySpec::Product { gamma1, gamma2 } => {
                for g in [gamma1, gamma2] {
                    match g {
                        ProductCurve::Circle { radius } | ProductCurve::Hyperbola { radius }
                            if !(radius.is_finite() && *radius > 0.0) =>
                        {
                            return Err(Error::BadSpecParameters("curve radius must be positive".into()))
                        }
                        _ => {}
                    }
                }
                if matches!(gamma1, ProductCurve::Hyperbola { .. }) {
                    return Err(Error::BadSpecParameters(
                        "a hyperbola in the E1-plane is not a curve of the first factor".into(),
                    ));
                }
                if matches!(gamma2, ProductCurve::Circle { .. }) {
                    return Err(Error::BadSpecParameters(
                        "a circle in the timelike factor is not spacelike".into(),
                    ));
                }
                true
            }
            FamilySpec::Trig { psi } => {
                let (c1, c2) = constants(*psi)?;
                if (2.0 + c1 * c1 - c2 * c2).abs() < 1e-10 {
                    return Err(Error::BadSpecParameters("2 + c1^2 - c2^2 vanishes".into()));
                }
                true
            }
            FamilySpec::PolyTrig { psi } => {
                let (c1, c2) = constants(*psi)?;
                if c1.abs() < 1e-12 || c2.abs() < 1e-12 || (2.0 + c1 * c1 - c2 * c2).abs() < 1e-10 {
                    return Err(Error::BadSpecParameters(
                        "the poly-trig family needs c1 c2 != 0 and 2 + c1^2 - c2^2 != 0".into(),
                    ));
                }
                true
            }
            FamilySpec::DegenerateHyperplane { a, b } => finite(&[*a, *b]),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadSpecParameters("parameters must be finite".into()))
        }
    }

    /// Constant complex angle to the E1-plane, when the family has one.
    pub fn psi(&self) -> Option<ComplexAngle> {
        match self {
            FamilySpec::Lightcone { a, b } => {
                Some(ComplexAngle::from_cos(num_complex::Complex64::new(*a, *b)))
            }
            FamilySpec::Hypersphere { psi, .. }
            | FamilySpec::Trig { psi }
            | FamilySpec::PolyTrig { psi } => Some(*psi),
            FamilySpec::Product { .. } => Some(ComplexAngle::new(FRAC_PI_2, 0.0)),
            FamilySpec::DegenerateHyperplane { .. } => Some(ComplexAngle::new(0.0, 0.0)),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Lightcone { a, b } => write!(f, "lightcone:a={a},b={b}"),
            FamilySpec::Hypersphere { psi, r1, r2 } => write!(f, "hypersphere:psi={psi},r1={r1},r2={r2}"),
            FamilySpec::Product { gamma1, gamma2 } => {
                let name = |c: &ProductCurve| match c {
                    ProductCurve::Circle { radius } => format!("circle({radius})"),
                    ProductCurve::Hyperbola { radius } => format!("hyperbola({radius})"),
                    ProductCurve::Line => "line".into(),
                    ProductCurve::Sampled(p) => format!("sampled({})", p.len()),
                };
                write!(f, "product:{}x{}", name(gamma1), name(gamma2))
            }
            FamilySpec::Trig { psi } => write!(f, "trig:psi={psi}"),
            FamilySpec::PolyTrig { psi } => write!(f, "polytrig:psi={psi}"),
            FamilySpec::DegenerateHyperplane { a, b } => write!(f, "degenerate:a={a},b={b}"),
        }
    }
}

fn constants(psi: ComplexAngle) -> Result<(f64, f64)> {
    psi.constants().map_err(|e| Error::BadSpecParameters(e.to_string()))
}

/// Closed-form metric of the families that carry one.
pub fn family_metric(spec: &FamilySpec, x: f64, y: f64) -> Option<(f64, f64)> {
    match spec {
        FamilySpec::Lightcone { a, b } => {
            let m = (a * x - b * y).exp();
            Some((m, m))
        }
        FamilySpec::Hypersphere { psi, r1, r2 } => {
            let (c1, c2) = psi.constants().ok()?;
            let s = c1 * y - c2 * x;
            let (ep, em) = (s.exp(), (-s).exp());
            Some((r1 * ep + r2 * em, -r1 * ep + r2 * em))
        }
        FamilySpec::Trig { psi } => {
            let (c1, c2) = psi.constants().ok()?;
            let s = c1 * y + c2 * x;
            Some((s.sin(), -s.cos()))
        }
        FamilySpec::PolyTrig { psi } => {
            let (c1, c2) = psi.constants().ok()?;
            let (s, r) = (c1 * y + c2 * x, c1 * y - c2 * x);
            let (sn, cs) = s.sin_cos();
            Some((r * (sn - cs), (1.0 - r) * cs - (1.0 + r) * sn))
        }
        _ => None,
    }
}

/// Closed-form potentials `(f, g, f_y / c2, g_y / c1)` of the poly-trig family.
pub fn polytrig_potentials(c1: f64, c2: f64, x: f64, y: f64) -> [f64; 4] {
    let (s, r) = (c1 * y + c2 * x, c1 * y - c2 * x);
    let (sn, cs) = s.sin_cos();
    let d = 2.0 + c1 * c1 - c2 * c2;
    let e = c1 * c1 + c2 * c2;
    let d2 = d * d;
    let f = c2 * (d * r * (cs + sn) + e * (cs - sn)) / d2;
    let g = (d * r * (cs - sn) - e * (cs + sn)) / d2;
    let ft = (d * c1 * (cs + sn) + d * r * c1 * (cs - sn) - e * c1 * (sn + cs)) / d2;
    let gt = (d * (cs - sn) - d * r * (sn + cs) - e * (cs - sn)) / d2;
    [f, g, ft, gt]
}

/// Closed-form potentials `(f, g)` of the trig family.
pub fn trig_potentials(c1: f64, c2: f64, x: f64, y: f64) -> (f64, f64) {
    let s = c1 * y + c2 * x;
    let d = 2.0 + c1 * c1 - c2 * c2;
    (c2 * s.cos() / d, -s.sin() / d)
}

/// Samples the family on `geom`.
pub fn make_family(spec: &FamilySpec, geom: GridGeometry) -> Result<ImmersionGrid> {
    spec.validate()?;
    geom.validate()?;
    let mut grid = match spec {
        FamilySpec::Lightcone { a, b } => {
            let (a, b) = (*a, *b);
            let pts = geom
                .nodes()
                .map(|(i, j)| {
                    let (x, y) = (geom.x(i), geom.y(j));
                    let e = (a * x - b * y).exp();
                    MinkowskiVector::new(x.cosh(), x.sinh(), y.cos(), y.sin()) * e
                })
                .collect();
            // the conformal factor lives in non-adapted coordinates, so it is not stored
            ImmersionGrid::new(geom, pts)?
        }
        FamilySpec::Hypersphere { psi, .. } => framed(spec, *psi, geom, |_, _, mu, nu, f| {
            (f.n1 * -mu + f.n2 * nu) * 0.5
        })?,
        FamilySpec::Trig { psi } => {
            let (c1, c2) = constants(*psi)?;
            let d = 2.0 + c1 * c1 - c2 * c2;
            framed(spec, *psi, geom, move |_, _, mu, nu, f| {
                (f.t1 * (-c2 * nu) + f.t2 * (-c1 * mu) + f.n1 * -mu + f.n2 * nu) * (1.0 / d)
            })?
        }
        FamilySpec::PolyTrig { psi } => {
            let (c1, c2) = constants(*psi)?;
            framed(spec, *psi, geom, move |x, y, _, _, f| {
                let [pf, pg, ft, gt] = polytrig_potentials(c1, c2, x, y);
                f.t1 * pf + f.t2 * ft + f.n1 * pg + f.n2 * gt
            })?
        }
        FamilySpec::Product { gamma1, gamma2 } => product(gamma1, gamma2, geom)?,
        FamilySpec::DegenerateHyperplane { a, b } => {
            let (a, b) = (*a, *b);
            let pts = geom
                .nodes()
                .map(|(i, j)| {
                    let (x, y) = (geom.x(i), geom.y(j));
                    let s = a * x.sin() * y.cos() + b * x * y;
                    MinkowskiVector::new(s, s, x, y)
                })
                .collect();
            ImmersionGrid::new(geom, pts)?
        }
    };
    grid.family = Some(spec.to_string());
    grid.psi = spec.psi();
    Ok(grid)
}

fn attach_metric(grid: &mut ImmersionGrid, spec: &FamilySpec) {
    let geom = grid.geom;
    let vals: Option<Vec<(f64, f64)>> =
        geom.nodes().map(|(i, j)| family_metric(spec, geom.x(i), geom.y(j))).collect();
    if let Some(v) = vals {
        let (mu, nu): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        let masked = super::metric::compute_mask(&mu, &nu);
        grid.mu = Some(mu);
        grid.nu = Some(nu);
        grid.masked = Some(masked);
    }
}

fn framed<F>(spec: &FamilySpec, psi: ComplexAngle, geom: GridGeometry, point: F) -> Result<ImmersionGrid>
where
    F: Fn(f64, f64, f64, f64, &AdaptedFrame) -> MinkowskiVector,
{
    let mut frames = Vec::with_capacity(geom.len());
    let mut pts = Vec::with_capacity(geom.len());
    for (i, j) in geom.nodes() {
        let (x, y) = (geom.x(i), geom.y(j));
        let f = adapted_frame(psi, geom.z(i, j))?;
        let (mu, nu) = family_metric(spec, x, y).expect("framed families carry a metric");
        pts.push(point(x, y, mu, nu, &f));
        frames.push(f);
    }
    let mut g = ImmersionGrid::new(geom, pts)?;
    g.frames = Some(frames);
    attach_metric(&mut g, spec);
    Ok(g)
}

fn product(gamma1: &ProductCurve, gamma2: &ProductCurve, geom: GridGeometry) -> Result<ImmersionGrid> {
    if gamma1.expected_len().is_some_and(|n| n != geom.nx)
        || gamma2.expected_len().is_some_and(|n| n != geom.ny)
    {
        return Err(Error::BadSpecParameters(
            "sampled product curves must match the grid dimensions".into(),
        ));
    }
    let mut pts = Vec::with_capacity(geom.len());
    let mut frames = Vec::with_capacity(geom.len());
    for (i, j) in geom.nodes() {
        let (p1, d1) = gamma1.eval(geom.x(i), i, geom.hx)?;
        let (p2, d2) = gamma2.eval(geom.y(j), j, geom.hy)?;
        pts.push(MinkowskiVector::new(p2[0], p2[1], p1[0], p1[1]));
        let t1 = MinkowskiVector::new(0.0, 0.0, d1[0], d1[1]);
        let t2 = MinkowskiVector::new(d2[0], d2[1], 0.0, 0.0);
        let (l1, l2) = (t1.norm2(), t2.norm2());
        if l1 <= 0.0 || l2 <= 0.0 {
            return Err(Error::BadSpecParameters(format!(
                "product curve is not spacelike at node ({i}, {j})"
            )));
        }
        let (t1, t2) = (t1 * (1.0 / l1.sqrt()), t2 * (1.0 / l2.sqrt()));
        let (n2, n1) = normal_frame(t1, t2)?;
        frames.push(AdaptedFrame { t1, t2, n1, n2 });
    }
    // arc-length speeds are not adapted-coordinate coefficients, so no mu/nu here
    let mut g = ImmersionGrid::new(geom, pts)?;
    g.frames = Some(frames);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{wedge_to_bivector, ComplexQuaternion};
    use std::f64::consts::PI;

    fn psi0() -> ComplexAngle {
        ComplexAngle::new(PI / 3.0, 0.4)
    }

    fn geom() -> GridGeometry {
        GridGeometry::covering(0.1, 0.9, 0.6, 1.4, 0.05).unwrap()
    }

    /// Max of `|d_x F - mu T1|` and `|d_y F - nu T2|` by central differences of the family map.
    fn tangent_defect(spec: &FamilySpec) -> f64 {
        let g = geom();
        let h = 1e-5;
        let mut worst = 0.0f64;
        for (i, j) in g.nodes() {
            let (x, y) = (g.x(i), g.y(j));
            let eval = |x: f64, y: f64| {
                let gg = GridGeometry::new(2, 2, x, y, 1.0, 1.0).unwrap();
                make_family(spec, gg).unwrap().points[0]
            };
            let fx = (eval(x + h, y) - eval(x - h, y)) * (0.5 / h);
            let fy = (eval(x, y + h) - eval(x, y - h)) * (0.5 / h);
            let f = adapted_frame(spec.psi().unwrap(), g.z(i, j)).unwrap();
            let (mu, nu) = family_metric(spec, x, y).unwrap();
            worst = worst.max((fx - f.t1 * mu).max_abs()).max((fy - f.t2 * nu).max_abs());
        }
        worst
    }

    #[test]
    fn framed_families_have_tangents_mu_t1_and_nu_t2() {
        for psi in [psi0(), ComplexAngle::new(1.2, 0.0), ComplexAngle::new(0.0, 0.7), ComplexAngle::new(2.0, 0.3)] {
            for spec in [
                FamilySpec::Hypersphere { psi, r1: 1.0, r2: -1.0 },
                FamilySpec::Hypersphere { psi, r1: 0.5, r2: 2.0 },
                FamilySpec::Trig { psi },
            ] {
                let d = tangent_defect(&spec);
                assert!(d < 1e-6, "{spec}: {d}");
            }
        }
        let spec = FamilySpec::PolyTrig { psi: psi0() };
        assert!(tangent_defect(&spec) < 1e-8);
    }

    #[test]
    fn lightcone_is_null_with_conformal_metric() {
        let spec = FamilySpec::Lightcone { a: 0.5, b: 0.3 };
        let g = make_family(&spec, geom()).unwrap();
        assert!(g.points.iter().all(|p| p.norm2().abs() < 1e-12));
        let at0 = make_family(&spec, GridGeometry::new(2, 2, 0.0, 0.0, 0.1, 0.1).unwrap()).unwrap();
        assert_eq!(at0.points[0], MinkowskiVector::new(1.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn hypersphere_norm() {
        let spec = FamilySpec::Hypersphere { psi: psi0(), r1: 1.0, r2: -1.0 };
        let g = make_family(&spec, geom()).unwrap();
        assert!(g.points.iter().all(|p| (p.norm2() + 1.0).abs() < 1e-12));
        let spec = FamilySpec::Hypersphere { psi: psi0(), r1: 0.5, r2: 2.0 };
        let g = make_family(&spec, geom()).unwrap();
        assert!(g.points.iter().all(|p| (p.norm2() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn hypersphere_rejects_lightcone_branch() {
        let spec = FamilySpec::Hypersphere { psi: psi0(), r1: 0.0, r2: 1.0 };
        assert!(matches!(make_family(&spec, geom()), Err(Error::BadSpecParameters(_))));
    }

    #[test]
    fn product_is_at_right_angle() {
        let spec = FamilySpec::parse("product:c1=circle,c2=hyperbola").unwrap();
        let g = make_family(&spec, geom()).unwrap();
        for f in g.frames.as_ref().unwrap() {
            let c = wedge_to_bivector(f.t1, f.t2).h(ComplexQuaternion::I);
            assert!(c.norm() < 1e-12);
            assert!(f.orientation() > 0.0 && f.n2.is_future());
        }
    }

    #[test]
    fn degenerate_family_is_in_null_hyperplane() {
        let spec = FamilySpec::DegenerateHyperplane { a: 1.0, b: 0.5 };
        let g = make_family(&spec, geom()).unwrap();
        assert!(g.points.iter().all(|p| p[0] == p[1]));
    }

    #[test]
    fn parse_round_trips() {
        for s in [
            "lightcone:a=0.5,b=0.3",
            "hypersphere:psi=1.0471975512+0.4i,r1=1,r2=-1",
            "trig:psi=1.2+0.1i",
            "polytrig:psi=1+0.4i",
            "degenerate:a=1,b=0.5",
        ] {
            let spec = FamilySpec::parse(s).unwrap();
            assert_eq!(FamilySpec::parse(&spec.to_string()).unwrap(), spec);
        }
        assert!(FamilySpec::parse("torus:r=1").is_err());
        assert!(FamilySpec::parse("lightcone:a=0.5").is_err());
        assert!(FamilySpec::parse("lightcone:a=0.5,b=x").is_err());
        assert!(FamilySpec::parse("lightcone:a=0.5,b=0.1,c=2").is_err());
        assert!(FamilySpec::parse("product:c1=hyperbola").is_err());
    }
}
