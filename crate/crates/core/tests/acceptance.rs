//! End-to-end acceptance suite. Prints one `PASS`/`FAIL` line per criterion and
//! fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::time::Instant;

use cas_core::algebra::{MinkowskiVector, SpinElement};
use cas_core::planes::{complex_angle, projection_angles, ComplexAngle, OrientedPlane};
use cas_core::surface::*;
use cas_core::synthesis::*;
use cas_core::Error;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    id: usize,
    name: &'static str,
    failures: Vec<String>,
    details: Vec<String>,
}

impl Outcome {
    fn new(id: usize, name: &'static str) -> Self {
        Self { id, name, failures: Vec::new(), details: Vec::new() }
    }

    /// Records `value < tol` under `label`.
    fn below(&mut self, label: &str, value: f64, tol: f64) {
        let line = format!("{label}={value:.3e} (< {tol:.0e})");
        if value.partial_cmp(&tol) != Some(std::cmp::Ordering::Less) {
            self.failures.push(line.clone());
        }
        self.details.push(line);
    }

    fn within(&mut self, label: &str, value: f64, lo: f64, hi: f64) {
        let line = format!("{label}={value:.3} (in [{lo}, {hi}])");
        if !(lo..=hi).contains(&value) {
            self.failures.push(line.clone());
        }
        self.details.push(line);
    }

    fn holds(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
        self.details.push(format!("{label}={ok}"));
    }

    fn print(&self) -> bool {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        // straight to the stdout handle so the lines survive output capture
        let _ = writeln!(
            std::io::stdout().lock(),
            "{status} criterion {:>2} {}: {}",
            self.id,
            self.name,
            self.details.join(", ")
        );
        self.failures.is_empty()
    }
}

fn psi0() -> ComplexAngle {
    ComplexAngle::new(PI / 3.0, 0.4)
}

/// Trig metric synthesized from its Goursat edges on `[0,1]^2`, restricted to the
/// region where `|mu|, |nu| >= 0.25` with the orientation of the first quadrant.
fn trig_surface(h: f64) -> (MetricField, ImmersionGrid, ClosureReport) {
    let psi = psi0();
    let (c1, c2) = psi.constants().unwrap();
    let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, h).unwrap();
    let mb: Vec<f64> = (0..geom.nx).map(|i| (c2 * geom.x(i)).sin()).collect();
    let nl: Vec<f64> = (0..geom.ny).map(|j| -(c1 * geom.y(j)).cos()).collect();
    let m = solve_goursat(psi, &mb, &nl, geom).unwrap();
    let (mut grid, rep) = integrate_immersion(&m, MinkowskiVector::ZERO).unwrap();
    grid.masked = Some(m.regular_mask(0.25));
    (m, grid, rep)
}

struct TrigErrors {
    metric: f64,
    angle: f64,
    /// Gauss equation estimate.
    k: f64,
    /// Gauss map pull-back estimate.
    k_gauss_map: f64,
    k_n: f64,
}

/// Errors over the unmasked nodes with both indices divisible by `stride`, so grids
/// refined by `stride` are compared at the same points.
fn trig_errors(m: &MetricField, grid: &ImmersionGrid, stride: usize) -> TrigErrors {
    let (c1, c2) = psi0().constants().unwrap();
    let g = m.geom;
    let on = |i: usize, j: usize| i.is_multiple_of(stride) && j.is_multiple_of(stride);
    let metric = g
        .nodes()
        .filter(|&(i, j)| on(i, j) && !grid.is_masked(i, j))
        .map(|(i, j)| {
            let s = c1 * g.y(j) + c2 * g.x(i);
            (m.mu_at(i, j) - s.sin()).abs().max((m.nu_at(i, j) + s.cos()).abs())
        })
        .fold(0.0, f64::max);
    let angle = angle_field(grid, &OrientedPlane::e1())
        .unwrap()
        .iter()
        .filter(|s| on(s.i, s.j))
        .map(|s| (s.cos - psi0().cos()).norm())
        .fold(0.0, f64::max);
    let inv = curvatures(grid).unwrap();
    let nodes = || inv.nodes.iter().filter(|n| on(n.i, n.j));
    let k = nodes().map(|n| n.k.abs()).fold(0.0, f64::max);
    let k_gauss_map = nodes().map(|n| n.k_gauss_map.abs()).fold(0.0, f64::max);
    let k_n = nodes().map(|n| n.k_n.abs()).fold(0.0, f64::max);
    TrigErrors { metric, angle, k, k_gauss_map, k_n }
}

fn lightcone() -> Outcome {
    let mut o = Outcome::new(1, "lightcone golden grid");
    let start = Instant::now();
    let (a, b) = (0.5, 0.3);
    let spec = FamilySpec::parse("lightcone:a=0.5,b=0.3").unwrap();
    let geom = GridGeometry::covering(-1.0, 1.0, -1.0, 1.0, 0.01).unwrap();
    let grid = make_family(&spec, geom).unwrap();
    let want = Complex64::new(a, b);
    let angle = angle_field(&grid, &OrientedPlane::e1())
        .unwrap()
        .iter()
        .map(|s| (s.cos - want).norm())
        .fold(0.0, f64::max);
    let null = grid.points.iter().map(|p| p.norm2().abs()).fold(0.0, f64::max);
    let inv = curvatures(&grid).unwrap();
    let mut metric = 0.0f64;
    let mut h2 = 0.0f64;
    for n in &inv.nodes {
        let (x, y) = (geom.x(n.i), geom.y(n.j));
        let conf = (2.0 * (a * x - b * y)).exp();
        let [e, f, g] = n.metric;
        metric = metric.max((e - conf).abs().max((g - conf).abs()).max(f.abs()) / conf);
        h2 = h2.max(n.h2.abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    o.below("max|H(G,I)-(a+ib)|", angle, 1e-3);
    o.below("max||F|^2|", null, 1e-10);
    o.below("metric_rel", metric, 1e-3);
    o.below("max|H|^2", h2, 1e-3);
    o.below("runtime_s", elapsed, 5.0);
    o
}

fn hypersphere() -> Outcome {
    let mut o = Outcome::new(2, "hypersphere golden grid");
    let start = Instant::now();
    let spec = FamilySpec::parse("hypersphere:psi=1.0471975511965976+0.4i,r1=1,r2=-1").unwrap();
    // c1 y = c2 x is the line through the origin with slope ~1.03; this box stays clear of it
    let geom = GridGeometry::covering(0.0, 0.5, 1.0, 1.5, 0.0005).unwrap();
    let grid = make_family(&spec, geom).unwrap();
    let dev = grid.points.iter().map(|p| (p.norm2() + 1.0).abs()).fold(0.0, f64::max);
    o.below("max||F|^2+1|", dev, 1e-6);
    o.below("runtime_s", start.elapsed().as_secs_f64(), 5.0);
    o
}

fn representation_round_trip() -> Outcome {
    let mut o = Outcome::new(3, "representation round trip");
    let (m, grid, rep) = trig_surface(0.005);
    let e = trig_errors(&m, &grid, 1);
    o.below("angle_dev", e.angle, 1e-3);
    o.below("max|K|", e.k.max(e.k_gauss_map), 1e-3);
    o.below("max|K_N|", e.k_n, 1e-3);
    o.below("closure", rep.max_residual, 1e-6);
    let (m2, grid2, _) = trig_surface(0.0025);
    let f = trig_errors(&m2, &grid2, 2);
    o.within("ratio_metric", e.metric / f.metric, 3.3, 4.7);
    o.within("ratio_angle", e.angle / f.angle, 3.3, 4.7);
    o.within("ratio_K", e.k / f.k, 3.3, 4.7);
    o.within("ratio_K_N", e.k_n / f.k_n, 3.3, 4.7);
    // the Gauss map estimate differentiates the points three times and is only first
    // order two steps from the edge, so it is reported but not graded
    o.details.push(format!("ratio_K_gauss_map={:.3}", e.k_gauss_map / f.k_gauss_map));
    o
}

fn random_plane(rng: &mut StdRng) -> OrientedPlane {
    OrientedPlane::e1().transformed(&SpinElement::random(rng))
}

fn angle_oracles() -> Outcome {
    let mut o = Outcome::new(4, "angle oracle equivalence");
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut worst_rel = 0.0f64;
    for _ in 0..1000 {
        let (p, q) = (random_plane(&mut rng), random_plane(&mut rng));
        let h = p.bivector().h(q.bivector());
        let d = (projection_angles(&p, &q).angle().cos() - h).norm();
        worst = worst.max(d);
        worst_rel = worst_rel.max(d / (1.0 + h.norm()));
    }
    o.below("max|cos(psi_proj)-H|/(1+|H|)", worst_rel, 1e-9);
    o.details.push(format!("absolute={worst:.3e}"));
    let mut inv = 0.0f64;
    for _ in 0..100 {
        let (p, q) = (random_plane(&mut rng), random_plane(&mut rng));
        let g = SpinElement::random(&mut rng);
        let before = complex_angle(&p, &q).cos();
        let after = complex_angle(&p.transformed(&g), &q.transformed(&g)).cos();
        inv = inv.max((before - after).norm() / (1.0 + before.norm()));
    }
    o.below("lorentz_invariance", inv, 1e-10);
    o
}

fn random_vector(rng: &mut StdRng) -> MinkowskiVector {
    MinkowskiVector::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn mat_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            c[r][k] = (0..4).map(|t| a[r][t] * b[t][k]).sum();
        }
    }
    c
}

fn mat_max(a: &[[f64; 4]; 4]) -> f64 {
    a.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
}

fn spin_cover() -> Outcome {
    let mut o = Outcome::new(5, "spin double cover");
    let mut rng = StdRng::seed_from_u64(5);
    let (mut metric, mut metric_abs, mut hom) = (0.0f64, 0.0f64, 0.0f64);
    let mut exact = true;
    for _ in 0..1000 {
        let s = SpinElement::random(&mut rng);
        let t = SpinElement::random(&mut rng);
        let (x, y) = (random_vector(&mut rng), random_vector(&mut rng));
        let (a, b) = (s.act(x), s.act(y));
        let d = (a.dot(b) - x.dot(y)).abs();
        // the images can be large, so scale by the size of the terms in the product
        metric = metric.max(d / (1.0 + a.euclid_norm() * b.euclid_norm()));
        metric_abs = metric_abs.max(d);
        exact &= s.matrix() == s.neg().matrix();
        let lhs = s.compose(&t).matrix();
        let rhs = mat_mul(&s.matrix(), &t.matrix());
        let diff = mat_max(&std::array::from_fn(|r| std::array::from_fn(|k| lhs[r][k] - rhs[r][k])));
        hom = hom.max(diff / (1.0 + mat_max(&s.matrix()) * mat_max(&t.matrix())));
    }
    o.below("metric_preservation_rel", metric, 1e-12);
    o.details.push(format!("absolute={metric_abs:.3e}"));
    o.holds("phi(q)=phi(-q)", exact);
    o.below("homomorphism_rel", hom, 1e-10);
    o
}

fn frame_identities() -> Outcome {
    let mut o = Outcome::new(6, "frame derivative identities");
    let mut rng = StdRng::seed_from_u64(6);
    let h = 1e-3;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let psi = ComplexAngle::new(rng.random_range(0.2..PI - 0.2), rng.random_range(-1.5..1.5));
        let (c1, c2) = psi.constants().unwrap();
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let fr = |w: Complex64| adapted_frame(psi, w).unwrap().as_array();
        let (dx, dy) = frame_derivatives(&adapted_frame(psi, z).unwrap(), c1, c2);
        let (xp, xm) = (fr(z + h), fr(z - h));
        let (yp, ym) = (fr(z + Complex64::i() * h), fr(z - Complex64::i() * h));
        for k in 0..4 {
            for (fd, rhs) in [((xp[k] - xm[k]) * (0.5 / h), dx[k]), ((yp[k] - ym[k]) * (0.5 / h), dy[k])] {
                worst = worst.max((fd - rhs).max_abs() / rhs.max_abs().max(1.0));
            }
        }
    }
    o.below("max_rel", worst, 1e-4);
    o
}

fn invariant_formulas() -> Outcome {
    let mut o = Outcome::new(7, "invariant formulas");
    let (m, grid, _) = trig_surface(0.005);
    let inv = curvatures(&grid).unwrap();
    let (mut delta, mut h2) = (0.0f64, 0.0f64);
    for n in &inv.nodes {
        let k = m.geom.idx(n.i, n.j);
        let (a, b) = (m.mu[k].powi(-2), m.nu[k].powi(-2));
        if n.reliable {
            let want = -4.0 * a * b;
            delta = delta.max(((n.delta - want) / want).abs());
        }
        // 1/mu^2 - 1/nu^2 vanishes inside the region, so scale by 1/mu^2 + 1/nu^2
        h2 = h2.max((n.h2 - (a - b)).abs() / (a + b));
    }
    o.below("delta_rel", delta, 1e-3);
    o.below("mean_curvature_rel", h2, 1e-3);
    o.details.push(format!("nodes={} unreliable={}", inv.nodes.len(), inv.unreliable));
    o
}

fn product_characterization() -> Outcome {
    let mut o = Outcome::new(8, "right-angle product characterization");
    let spec = FamilySpec::parse("product:c1=circle,r1=0.5,c2=hyperbola,r2=0.5").unwrap();
    let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.01).unwrap();
    let grid = make_family(&spec, geom).unwrap();
    let ca = check_constant_angle_frames(&grid, &OrientedPlane::e1(), 1e-10).unwrap();
    let spread = angle_field(&grid, &OrientedPlane::e1()).unwrap();
    let worst = spread.iter().map(|s| s.cos.norm()).fold(0.0, f64::max);
    o.below("frames max|cos psi - cos(pi/2)|", ca.max_deviation.max(ca.mean_cos.norm()), 1e-10);
    o.details.push(format!("finite_difference={worst:.3e}"));

    let psi = ComplexAngle::new(FRAC_PI_2, 0.0);
    let mb: Vec<f64> = (0..geom.nx).map(|i| 1.0 + 0.3 * geom.x(i).sin()).collect();
    let nl: Vec<f64> = (0..geom.ny).map(|j| 1.0 + 0.2 * geom.y(j)).collect();
    let m = solve_goursat(psi, &mb, &nl, geom).unwrap();
    let (g, _) = integrate_immersion(&m, MinkowskiVector::ZERO).unwrap();
    let tube = check_holonomy_tube(&g, &OrientedPlane::e1(), psi).unwrap();
    o.below("x-curves off E1 translates", tube.curve_residual, 1e-8);
    o.below("transversal angle", tube.angle_residual, 1e-8);
    o
}

fn potentials_route() -> Outcome {
    let mut o = Outcome::new(9, "potentials route");
    let psi = psi0();
    let spec = FamilySpec::PolyTrig { psi };
    let (c1, c2) = psi.constants().unwrap();
    let mut tangents = Vec::new();
    for h in [0.01, 0.005] {
        let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, h).unwrap();
        let m = MetricField::from_fn(geom, psi, |x, y| family_metric(&spec, x, y).unwrap()).unwrap();
        let pot = PotentialPair::from_fn(&geom, |x, y| {
            let p = polytrig_potentials(c1, c2, x, y);
            (p[0], p[1])
        });
        match immersion_from_potentials(psi, &m, &pot, MinkowskiVector::ZERO) {
            Ok((_, rep)) => {
                if h == 0.01 {
                    for (name, r) in PotentialReport::EQUATIONS.iter().zip(rep.residuals) {
                        o.below(name, r, rep.tolerance);
                    }
                    o.below("tangent", rep.tangent_residual, rep.tolerance);
                }
                tangents.push(rep.tangent_residual);
            }
            Err(e) => o.holds(&format!("potentials accepted ({e})"), false),
        }
    }
    if let [a, b] = tangents[..] {
        o.within("tangent_ratio", a / b, 3.3, 4.7);
    }
    o
}

fn negative_controls() -> Outcome {
    let mut o = Outcome::new(10, "negative controls");
    let psi = psi0();
    let geom = GridGeometry::covering(0.0, 1.0, 0.0, 1.0, 0.01).unwrap();
    let bad = MetricField::from_fn(geom, psi, |x, y| (1.0 + x * y, 1.0)).unwrap();
    let closure = integrate_immersion(&bad, MinkowskiVector::ZERO);
    o.holds("closure_failure", matches!(closure, Err(Error::ClosureFailure { .. })));

    let spec = FamilySpec::parse("lightcone:a=0.5,b=0.3").unwrap();
    let mut grid = make_family(&spec, GridGeometry::covering(-1.0, 1.0, -1.0, 1.0, 0.02).unwrap()).unwrap();
    let g = grid.geom;
    for (i, j) in g.nodes() {
        let k = g.idx(i, j);
        grid.points[k].0[2] += 1e-2 * (3.0 * g.x(i)).sin() * (2.0 * g.y(j)).cos();
    }
    let ca = check_constant_angle(&grid, &OrientedPlane::e1(), 1e-3).unwrap();
    o.holds("perturbed_angle_rejected", !ca.pass);
    o.details.push(format!("deviation={:.3e}", ca.max_deviation));

    let spec = FamilySpec::PolyTrig { psi };
    let m = MetricField::from_fn(geom, psi, |x, y| family_metric(&spec, x, y).unwrap()).unwrap();
    let pot = PotentialPair::from_fn(&geom, |x, y| (x * x + y, (x * y).sin()));
    let r = immersion_from_potentials(psi, &m, &pot, MinkowskiVector::ZERO);
    o.holds("potentials_inconsistent", matches!(r, Err(Error::PotentialsInconsistent { .. })));
    o
}

#[test]
fn acceptance() {
    let outcomes = [
        lightcone(),
        hypersphere(),
        representation_round_trip(),
        angle_oracles(),
        spin_cover(),
        frame_identities(),
        invariant_formulas(),
        product_characterization(),
        potentials_route(),
        negative_controls(),
    ];
    let passed = outcomes.iter().filter(|o| o.print()).count();
    let _ = writeln!(std::io::stdout().lock(), "{passed}/{} criteria passed", outcomes.len());
    assert_eq!(passed, outcomes.len());
}
