use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath;
use crate::error::{Error, Result};
use crate::planes::ComplexAngle;
use crate::surface::GridGeometry;

/// Relative threshold on `|mu nu|` below which nodes are masked.
pub const MASK_THRESHOLD: f64 = 1e-6;

/// Sampled metric coefficients of `mu^2 dx^2 + nu^2 dy^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    pub geom: GridGeometry,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub psi: ComplexAngle,
    pub masked: Vec<bool>,
}

impl MetricField {
    /// Wraps sampled values and computes the mask.
    pub fn new(geom: GridGeometry, mu: Vec<f64>, nu: Vec<f64>, psi: ComplexAngle) -> Result<Self> {
        geom.validate()?;
        if mu.len() != geom.len() || nu.len() != geom.len() {
            return Err(Error::InvalidInput(format!(
                "metric arrays must have {} entries",
                geom.len()
            )));
        }
        if mu.iter().chain(nu.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("metric contains non-finite values".into()));
        }
        let masked = compute_mask(&mu, &nu);
        Ok(Self { geom, mu, nu, psi, masked })
    }

    /// Samples closed-form `(mu, nu)`.
    pub fn from_fn<F>(geom: GridGeometry, psi: ComplexAngle, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let (mu, nu) = geom.nodes().map(|(i, j)| f(geom.x(i), geom.y(j))).unzip();
        Self::new(geom, mu, nu, psi)
    }

    pub fn mu_at(&self, i: usize, j: usize) -> f64 {
        self.mu[self.geom.idx(i, j)]
    }

    pub fn nu_at(&self, i: usize, j: usize) -> f64 {
        self.nu[self.geom.idx(i, j)]
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.masked[self.geom.idx(i, j)]
    }

    pub fn mask_fraction(&self) -> f64 {
        self.masked.iter().filter(|&&b| b).count() as f64 / self.masked.len() as f64
    }

    /// `max |mu| + max |nu|`, the natural size of the solution.
    pub fn scale(&self) -> f64 {
        let m = self.mu.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let n = self.nu.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        m + n
    }

    fn mask_ok(&self, i: usize, j: usize) -> bool {
        let g = &self.geom;
        g.ring(i, j) >= 1
            && (j - 1..=j + 1).all(|jj| (i - 1..=i + 1).all(|ii| !self.masked[g.idx(ii, jj)]))
    }

    /// Max interior residuals `(|d_y mu + c1 nu|, |d_x nu - c2 mu|)` by central differences.
    pub fn condition_residual(&self) -> Result<(f64, f64)> {
        let (c1, c2) = constants_or_zero(self.psi)?;
        let g = self.geom;
        let (mut r1, mut r2) = (0.0f64, 0.0f64);
        for (i, j) in g.nodes() {
            if !self.mask_ok(i, j) {
                continue;
            }
            let dmu = (self.mu_at(i, j + 1) - self.mu_at(i, j - 1)) / (2.0 * g.hy);
            let dnu = (self.nu_at(i + 1, j) - self.nu_at(i - 1, j)) / (2.0 * g.hx);
            r1 = r1.max((dmu + c1 * self.nu_at(i, j)).abs());
            r2 = r2.max((dnu - c2 * self.mu_at(i, j)).abs());
        }
        Ok((r1, r2))
    }

    /// Mask of the well-resolved immersed region: nodes where `|mu|` or `|nu|` drops
    /// below `floor` times the largest coefficient, or where `mu nu` has the opposite
    /// sign to its value at the strongest node (the parametrization folds there), are
    /// excluded together with the existing mask.
    pub fn regular_mask(&self, floor: f64) -> Vec<bool> {
        let big = self.mu.iter().chain(&self.nu).fold(0.0f64, |a, v| a.max(v.abs()));
        let strongest = self
            .mu
            .iter()
            .zip(&self.nu)
            .map(|(a, b)| a * b)
            .fold(0.0f64, |acc, p| if p.abs() > acc.abs() { p } else { acc });
        let cut = floor * big;
        (0..self.geom.len())
            .map(|k| {
                let (m, n) = (self.mu[k], self.nu[k]);
                self.masked[k] || m.abs() < cut || n.abs() < cut || (m * n).signum() != strongest.signum()
            })
            .collect()
    }

    /// `v = Im(-2 z cot psi)`, the hyperbolic part of the lift phase with zero gauge.
    pub fn phase(&self, i: usize, j: usize) -> Result<Complex64> {
        super::lift::require_regular(self.psi)?;
        Ok(-2.0 * self.geom.z(i, j) * cmath::cot(self.psi.as_complex()))
    }

    /// Mean-curvature components `(h0, h1)` in the parallel normal frame.
    pub fn h0_h1(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        let v = self.phase(i, j)?.im;
        let (mu, nu) = (self.mu_at(i, j), self.nu_at(i, j));
        Ok((v.cosh() / nu - v.sinh() / mu, v.cosh() / mu - v.sinh() / nu))
    }

    /// Parallel tangent frame `(alpha1, alpha2)` as complex numbers `a + ib = a d_x + b d_y`.
    pub fn alphas(&self, i: usize, j: usize) -> Result<(Complex64, Complex64)> {
        let u = self.phase(i, j)?.re;
        let (mu, nu) = (self.mu_at(i, j), self.nu_at(i, j));
        let (su, cu) = u.sin_cos();
        Ok((Complex64::new(su / mu, cu / nu), Complex64::new(-cu / mu, su / nu)))
    }
}

pub(crate) fn compute_mask(mu: &[f64], nu: &[f64]) -> Vec<bool> {
    let prod: Vec<f64> = mu.iter().zip(nu).map(|(a, b)| (a * b).abs()).collect();
    let max = prod.iter().fold(0.0f64, |a, &v| a.max(v));
    prod.iter().map(|&p| p < MASK_THRESHOLD * max || max == 0.0).collect()
}

/// `(c1, c2)`, allowing the right-angle case where both vanish.
pub(crate) fn constants_or_zero(psi: ComplexAngle) -> Result<(f64, f64)> {
    psi.constants()
}

/// Marches `d_y mu = -c1 nu`, `d_x nu = c2 mu` from `mu` on the bottom edge and
/// `nu` on the left edge with a Heun predictor-corrector.
pub fn solve_goursat(
    psi: ComplexAngle,
    mu_bottom: &[f64],
    nu_left: &[f64],
    geom: GridGeometry,
) -> Result<MetricField> {
    geom.validate()?;
    if mu_bottom.len() != geom.nx || nu_left.len() != geom.ny {
        return Err(Error::InvalidInput(format!(
            "edge data must have {} and {} samples, got {} and {}",
            geom.nx,
            geom.ny,
            mu_bottom.len(),
            nu_left.len()
        )));
    }
    let (c1, c2) = constants_or_zero(psi)?;
    let (nx, ny) = (geom.nx, geom.ny);
    let mut mu = vec![0.0; geom.len()];
    let mut nu = vec![0.0; geom.len()];
    let id = |i: usize, j: usize| geom.idx(i, j);

    for i in 0..nx {
        mu[id(i, 0)] = mu_bottom[i];
    }
    for j in 0..ny {
        nu[id(0, j)] = nu_left[j];
    }
    let (a, b) = (0.5 * geom.hy * c1, 0.5 * geom.hx * c2);
    // bottom edge: d_x nu = c2 mu with mu known
    for i in 1..nx {
        nu[id(i, 0)] = nu[id(i - 1, 0)] + b * (mu[id(i - 1, 0)] + mu[id(i, 0)]);
    }
    // left edge: d_y mu = -c1 nu with nu known
    for j in 1..ny {
        mu[id(0, j)] = mu[id(0, j - 1)] - a * (nu[id(0, j - 1)] + nu[id(0, j)]);
    }
    for j in 1..ny {
        for i in 1..nx {
            let (mu_s, nu_s) = (mu[id(i, j - 1)], nu[id(i, j - 1)]);
            let (mu_w, nu_w) = (mu[id(i - 1, j)], nu[id(i - 1, j)]);
            let mu_p = mu_s - 2.0 * a * nu_s;
            let nu_p = nu_w + 2.0 * b * mu_w;
            mu[id(i, j)] = mu_s - a * (nu_s + nu_p);
            nu[id(i, j)] = nu_w + b * (mu_w + mu_p);
        }
    }
    MetricField::new(geom, mu, nu, psi)
}

/// Which metric coefficient the Cauchy data prescribe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CauchyField {
    Mu,
    Nu,
}

/// Values and normal derivatives of `zeta` along a monotone curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CauchyData {
    /// Polyline `(x, y)`; the unit normal is the tangent turned by +90 degrees.
    pub curve: Vec<[f64; 2]>,
    pub values: Vec<f64>,
    pub normal_derivatives: Vec<f64>,
    pub which: CauchyField,
}

impl CauchyData {
    fn validate(&self) -> Result<()> {
        let n = self.curve.len();
        if n < 2 || self.values.len() != n || self.normal_derivatives.len() != n {
            return Err(Error::InvalidInput(
                "Cauchy data need at least two points and matching value arrays".into(),
            ));
        }
        let sx = (self.curve[1][0] - self.curve[0][0]).signum();
        let sy = (self.curve[1][1] - self.curve[0][1]).signum();
        for k in 1..n {
            let dx = self.curve[k][0] - self.curve[k - 1][0];
            let dy = self.curve[k][1] - self.curve[k - 1][1];
            if dx == 0.0 || dy == 0.0 || dx.signum() != sx || dy.signum() != sy {
                return Err(Error::NonMonotoneCurve { index: k });
            }
        }
        Ok(())
    }
}

/// 4-point Lagrange interpolation of `ys(xs)` at `t`; `xs` strictly increasing.
pub(crate) fn lagrange4(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    let k = match xs.partition_point(|&x| x <= t) {
        0 => 0,
        p => p - 1,
    }
    .min(n - 2);
    if n < 4 {
        let w = (t - xs[k]) / (xs[k + 1] - xs[k]);
        return ys[k] * (1.0 - w) + ys[k + 1] * w;
    }
    let start = k.saturating_sub(1).min(n - 4);
    let mut acc = 0.0;
    for a in start..start + 4 {
        let mut l = 1.0;
        for b in start..start + 4 {
            if a != b {
                l *= (t - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += l * ys[a];
    }
    acc
}

/// Second-order derivative of uniformly spaced samples.
fn derivative(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|k| {
            if n < 3 {
                (v[n - 1] - v[0]) / (h * (n - 1) as f64)
            } else if k == 0 {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
            } else {
                (v[k + 1] - v[k - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Solves the Klein-Gordon Cauchy problem `d_xy zeta = -c1 c2 zeta` from data on a
/// monotone curve and recovers the partner coefficient.
pub fn solve_cauchy_curve(psi: ComplexAngle, data: &CauchyData, h: f64) -> Result<MetricField> {
    data.validate()?;
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    let (c1, c2) = constants_or_zero(psi)?;
    match data.which {
        CauchyField::Mu if c1.abs() < 1e-12 => return Err(psi.degenerate("c1 vanishes")),
        CauchyField::Nu if c2.abs() < 1e-12 => return Err(psi.degenerate("c2 vanishes")),
        _ => {}
    }
    let lam = c1 * c2;

    // order the curve by increasing x; reversing the direction flips the normal
    let mut curve = data.curve.clone();
    let mut vals = data.values.clone();
    let mut norms = data.normal_derivatives.clone();
    if curve[1][0] < curve[0][0] {
        curve.reverse();
        vals.reverse();
        norms.reverse();
        norms.iter_mut().for_each(|g| *g = -*g);
    }
    let cx: Vec<f64> = curve.iter().map(|p| p[0]).collect();
    let cy: Vec<f64> = curve.iter().map(|p| p[1]).collect();
    let (xa, xb) = (cx[0], cx[cx.len() - 1]);
    let n = ((xb - xa) / h).round().max(2.0) as usize + 1;
    let hx = (xb - xa) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|k| xa + k as f64 * hx).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| lagrange4(&cx, &cy, x)).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| lagrange4(&cx, &vals, x)).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| lagrange4(&cx, &norms, x)).collect();
    for k in 1..n {
        if (ys[k] - ys[k - 1]) * (cy[cy.len() - 1] - cy[0]) <= 0.0 {
            return Err(Error::NonMonotoneCurve { index: k });
        }
    }
    let dy = derivative(&ys, hx);
    let df = derivative(&fs, hx);

    // gradient on the curve: p + y' q = f', -y' p + q = g sqrt(1 + y'^2)
    let mut zeta = vec![0.0; n * n];
    let mut p = vec![0.0; n * n];
    let mut q = vec![0.0; n * n];
    let id = |i: usize, k: usize| k * n + i;
    for k in 0..n {
        let s = dy[k];
        let gn = gs[k] * (1.0 + s * s).sqrt();
        let det = 1.0 + s * s;
        zeta[id(k, k)] = fs[k];
        p[id(k, k)] = (df[k] - s * gn) / det;
        q[id(k, k)] = (s * df[k] + gn) / det;
    }

    // characteristic staircase on the tensor grid (xs[i], ys[k]); node (k, k) is on the curve
    for d in 1..n {
        for i in 0..n {
            for k in [i + d, i.wrapping_sub(d)] {
                if k >= n {
                    continue;
                }
                // neighbours one step closer to the curve
                let ia = if k > i { i + 1 } else { i - 1 };
                let kb = if k > i { k - 1 } else { k + 1 };
                let (a, b) = (id(ia, k), id(i, kb));
                let dx = xs[i] - xs[ia];
                let dyk = ys[k] - ys[kb];
                let z_pred =
                    0.5 * ((zeta[b] + dyk * q[b]) + (zeta[a] + dx * p[a]));
                let mut zn = z_pred;
                let (mut pn, mut qn) = (0.0, 0.0);
                for _ in 0..2 {
                    pn = p[b] - lam * dyk * 0.5 * (zeta[b] + zn);
                    qn = q[a] - lam * dx * 0.5 * (zeta[a] + zn);
                    let za = zeta[b] + dyk * 0.5 * (q[b] + qn);
                    let zb = zeta[a] + dx * 0.5 * (p[a] + pn);
                    zn = 0.5 * (za + zb);
                }
                let t = id(i, k);
                zeta[t] = zn;
                p[t] = pn;
                q[t] = qn;
            }
        }
    }

    // interpolate columns from the curve-induced y nodes to a uniform grid
    let increasing = ys[n - 1] > ys[0];
    let order: Vec<usize> = if increasing { (0..n).collect() } else { (0..n).rev().collect() };
    let yk: Vec<f64> = order.iter().map(|&k| ys[k]).collect();
    let (ya, yb) = (yk[0], yk[n - 1]);
    let geom = GridGeometry::covering(xa, xb, ya, yb, h)?;
    let geom = GridGeometry { nx: n, hx, ..geom };
    let mut mu = vec![0.0; geom.len()];
    let mut nu = vec![0.0; geom.len()];
    for i in 0..n {
        let col = |arr: &[f64]| -> Vec<f64> { order.iter().map(|&k| arr[id(i, k)]).collect() };
        let (zc, pc, qc) = (col(&zeta), col(&p), col(&q));
        for j in 0..geom.ny {
            let y = geom.y(j);
            let z = lagrange4(&yk, &zc, y);
            let t = geom.idx(i, j);
            match data.which {
                CauchyField::Mu => {
                    mu[t] = z;
                    nu[t] = -lagrange4(&yk, &qc, y) / c1;
                }
                CauchyField::Nu => {
                    nu[t] = z;
                    mu[t] = lagrange4(&yk, &pc, y) / c2;
                }
            }
        }
    }
    MetricField::new(geom, mu, nu, psi)
}

/// Max interior `|d_xy zeta + c1 c2 zeta|` over `zeta in {mu, nu}`.
pub fn kg_residual(metric: &MetricField) -> Result<f64> {
    let (c1, c2) = constants_or_zero(metric.psi)?;
    let g = metric.geom;
    let mut r = 0.0f64;
    for (i, j) in g.nodes() {
        if !metric.mask_ok(i, j) {
            continue;
        }
        for field in [&metric.mu, &metric.nu] {
            let v = |a: usize, b: usize| field[g.idx(a, b)];
            let dxy = (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) + v(i - 1, j - 1))
                / (4.0 * g.hx * g.hy);
            r = r.max((dxy + c1 * c2 * v(i, j)).abs());
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn psi0() -> ComplexAngle {
        ComplexAngle::new(PI / 3.0, 0.4)
    }

    fn hyper(c1: f64, c2: f64) -> impl Fn(f64, f64) -> (f64, f64) {
        move |x, y| {
            let s = c1 * y - c2 * x;
            (2.0 * s.sinh(), -2.0 * s.cosh())
        }
    }

    fn trig(c1: f64, c2: f64) -> impl Fn(f64, f64) -> (f64, f64) {
        move |x, y| {
            let s = c1 * y + c2 * x;
            (s.sin(), -s.cos())
        }
    }

    fn goursat_error<F: Fn(f64, f64) -> (f64, f64)>(psi: ComplexAngle, f: F, h: f64, dom: [f64; 4]) -> f64 {
        let geom = GridGeometry::covering(dom[0], dom[1], dom[2], dom[3], h).unwrap();
        let mb: Vec<f64> = (0..geom.nx).map(|i| f(geom.x(i), geom.y(0)).0).collect();
        let nl: Vec<f64> = (0..geom.ny).map(|j| f(geom.x(0), geom.y(j)).1).collect();
        let m = solve_goursat(psi, &mb, &nl, geom).unwrap();
        geom.nodes()
            .map(|(i, j)| {
                let (a, b) = f(geom.x(i), geom.y(j));
                (m.mu_at(i, j) - a).abs().max((m.nu_at(i, j) - b).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn flat_metric_for_right_angle() {
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.1).unwrap();
        let psi = ComplexAngle::new(FRAC_PI_2, 0.0);
        let m = solve_goursat(psi, &vec![1.0; geom.nx], &vec![1.0; geom.ny], geom).unwrap();
        assert!(m.mu.iter().chain(m.nu.iter()).all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn goursat_reproduces_closed_forms_at_second_order() {
        let (c1, c2) = psi0().constants().unwrap();
        let dom = [0.0, 1.0, 0.5, 1.5];
        for f in [&hyper(c1, c2) as &dyn Fn(f64, f64) -> (f64, f64), &trig(c1, c2)] {
            let e1 = goursat_error(psi0(), f, 0.02, dom);
            let e2 = goursat_error(psi0(), f, 0.01, dom);
            assert!(e1 < 1e-3, "error {e1}");
            let ratio = e1 / e2;
            assert!(ratio > 3.3 && ratio < 4.7, "ratio {ratio}");
        }
    }

    #[test]
    fn regular_mask_drops_folds_and_small_coefficients() {
        let (c1, c2) = psi0().constants().unwrap();
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.05).unwrap();
        let m = MetricField::from_fn(geom, psi0(), trig(c1, c2)).unwrap();
        let mask = m.regular_mask(0.25);
        for (k, (mu, nu)) in m.mu.iter().zip(&m.nu).enumerate() {
            let keep = mu.abs() >= 0.25 && nu.abs() >= 0.25 && mu * nu > 0.0;
            // max |mu|, |nu| is within rounding of 1 on this grid
            if (mu.abs() - 0.25).abs() > 1e-2 && (nu.abs() - 0.25).abs() > 1e-2 {
                assert_eq!(!mask[k], keep, "node {k}: mu {mu} nu {nu}");
            }
        }
        assert!(m.regular_mask(0.0).iter().filter(|&&b| b).count() > 0);
    }

    #[test]
    fn kg_residual_examples() {
        let (c1, c2) = psi0().constants().unwrap();
        let geom = GridGeometry::covering(0.0, 1.0, 0.5, 1.5, 0.01).unwrap();
        let m = MetricField::from_fn(geom, psi0(), hyper(c1, c2)).unwrap();
        assert!(kg_residual(&m).unwrap() < 1e-3);
        let bad = MetricField::from_fn(geom, psi0(), |x, y| (x * y + 0.1, 1.0)).unwrap();
        assert!(kg_residual(&bad).unwrap() > 0.5);
        let rect = ComplexAngle::new(FRAC_PI_2, 0.0);
        let sep = MetricField::from_fn(geom, rect, |x, y| (1.0 + x * x, 2.0 + y.sin())).unwrap();
        assert!(kg_residual(&sep).unwrap() < 1e-12);
    }

    #[test]
    fn condition_residual_small_for_solutions() {
        let (c1, c2) = psi0().constants().unwrap();
        let geom = GridGeometry::covering(0.0, 1.0, 0.5, 1.5, 0.01).unwrap();
        let m = MetricField::from_fn(geom, psi0(), trig(c1, c2)).unwrap();
        let (r1, r2) = m.condition_residual().unwrap();
        assert!(r1 < 10.0 * 1e-4 && r2 < 10.0 * 1e-4);
    }

    #[test]
    fn mask_flags_vanishing_products() {
        let geom = GridGeometry::new(3, 1 + 1, 0.0, 0.0, 1.0, 1.0).unwrap();
        let m = MetricField::new(geom, vec![1.0, 0.0, 1.0, 1.0, 1.0, 1.0], vec![1.0; 6], psi0())
            .unwrap();
        assert_eq!(m.masked, vec![false, true, false, false, false, false]);
    }

    #[test]
    fn h0_h1_reproduce_metric() {
        let (c1, c2) = psi0().constants().unwrap();
        let geom = GridGeometry::covering(0.0, 1.0, 0.5, 1.5, 0.1).unwrap();
        let m = MetricField::from_fn(geom, psi0(), hyper(c1, c2)).unwrap();
        for (i, j) in geom.nodes() {
            let (h0, h1) = m.h0_h1(i, j).unwrap();
            let v = m.phase(i, j).unwrap().im;
            assert!((1.0 / m.mu_at(i, j) - (h0 * v.sinh() + h1 * v.cosh())).abs() < 1e-12);
            assert!((1.0 / m.nu_at(i, j) - (h0 * v.cosh() + h1 * v.sinh())).abs() < 1e-12);
        }
    }

    fn diagonal_data(c1: f64, c2: f64, n: usize) -> CauchyData {
        // zeta = sin(c1 y + c2 x) on y = x; unit normal (-1, 1)/sqrt 2
        let pts: Vec<[f64; 2]> = (0..n).map(|k| {
            let t = k as f64 / (n - 1) as f64;
            [t, t]
        }).collect();
        let values = pts.iter().map(|p| (c1 * p[1] + c2 * p[0]).sin()).collect();
        let normal_derivatives = pts
            .iter()
            .map(|p| {
                let c = (c1 * p[1] + c2 * p[0]).cos();
                (-c2 * c + c1 * c) / 2f64.sqrt()
            })
            .collect();
        CauchyData { curve: pts, values, normal_derivatives, which: CauchyField::Mu }
    }

    fn cauchy_error(h: f64) -> f64 {
        let (c1, c2) = psi0().constants().unwrap();
        let m = solve_cauchy_curve(psi0(), &diagonal_data(c1, c2, 201), h).unwrap();
        let f = trig(c1, c2);
        m.geom
            .nodes()
            .map(|(i, j)| {
                let (a, b) = f(m.geom.x(i), m.geom.y(j));
                (m.mu_at(i, j) - a).abs().max((m.nu_at(i, j) - b).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn cauchy_diagonal_recovers_trig_solution() {
        let e1 = cauchy_error(0.02);
        let e2 = cauchy_error(0.01);
        assert!(e1 < 1e-3, "error {e1}");
        assert!(e1 / e2 > 3.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn cauchy_antidiagonal_and_nu_data() {
        let (c1, c2) = psi0().constants().unwrap();
        // nu = -cos(c1 y + c2 x) on y = 1 - x, traversed with increasing x
        let n = 101;
        let pts: Vec<[f64; 2]> =
            (0..n).map(|k| { let t = k as f64 / (n - 1) as f64; [t, 1.0 - t] }).collect();
        let values = pts.iter().map(|p| -(c1 * p[1] + c2 * p[0]).cos()).collect();
        // tangent (1,-1)/sqrt2, normal (1,1)/sqrt2
        let normal_derivatives = pts
            .iter()
            .map(|p| {
                let s = (c1 * p[1] + c2 * p[0]).sin();
                (c2 * s + c1 * s) / 2f64.sqrt()
            })
            .collect();
        let data = CauchyData { curve: pts, values, normal_derivatives, which: CauchyField::Nu };
        let m = solve_cauchy_curve(psi0(), &data, 0.01).unwrap();
        let f = trig(c1, c2);
        let err = m
            .geom
            .nodes()
            .map(|(i, j)| {
                let (a, b) = f(m.geom.x(i), m.geom.y(j));
                (m.mu_at(i, j) - a).abs().max((m.nu_at(i, j) - b).abs())
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "error {err}");
    }

    #[test]
    fn cauchy_zero_data_gives_zero() {
        let (c1, c2) = psi0().constants().unwrap();
        let mut d = diagonal_data(c1, c2, 11);
        d.values.iter_mut().for_each(|v| *v = 0.0);
        d.normal_derivatives.iter_mut().for_each(|v| *v = 0.0);
        let m = solve_cauchy_curve(psi0(), &d, 0.05).unwrap();
        assert!(m.mu.iter().chain(m.nu.iter()).all(|&v| v == 0.0));
        assert!(m.masked.iter().all(|&b| b));
    }

    #[test]
    fn cauchy_rejects_non_monotone() {
        let (c1, c2) = psi0().constants().unwrap();
        let mut d = diagonal_data(c1, c2, 11);
        d.curve[5][0] = d.curve[4][0];
        assert!(matches!(
            solve_cauchy_curve(psi0(), &d, 0.05),
            Err(Error::NonMonotoneCurve { index: 5 })
        ));
        let mut d = diagonal_data(c1, c2, 11);
        d.curve[6][1] = d.curve[4][1];
        assert!(matches!(solve_cauchy_curve(psi0(), &d, 0.05), Err(Error::NonMonotoneCurve { .. })));
    }

    #[test]
    fn cauchy_needs_nonzero_constant() {
        let psi = ComplexAngle::new(1.0, 0.0);
        let d = CauchyData { which: CauchyField::Nu, ..diagonal_data(1.0, 1.0, 11) };
        assert!(matches!(solve_cauchy_curve(psi, &d, 0.05), Err(Error::AngleDegenerate { .. })));
    }

    #[test]
    fn lagrange_is_exact_on_cubics() {
        let xs: Vec<f64> = (0..7).map(|k| (k as f64).powf(1.3)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x * x - 2.0 * x + 1.0).collect();
        for &t in &[0.1, 1.7, 4.2, 11.0] {
            let v = lagrange4(&xs, &ys, t);
            assert!((v - (t * t * t - 2.0 * t + 1.0)).abs() < 1e-9);
        }
    }
}
