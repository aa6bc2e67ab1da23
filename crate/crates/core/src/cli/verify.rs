use std::fmt;

use crate::error::{Error, Result};
use crate::planes::OrientedPlane;
use crate::surface::{
    check_constant_angle, check_degenerate_hyperplane, check_holonomy_tube, curvatures, blowup_ode_check,
    ImmersionGrid, HYPERPLANE_TOL, NULL_NORMAL_TOL,
};
use crate::synthesis::{kg_residual, MetricField};

/// Names accepted by `--checks`, in report order.
pub const CHECK_NAMES: [&str; 12] = [
    "constant_angle",
    "angle_value",
    "curvature_k",
    "curvature_kn",
    "mean_curvature",
    "delta",
    "metric",
    "metric_condition",
    "kg_residual",
    "blowup_ode",
    "holonomy_tube",
    "degenerate_hyperplane",
];

/// Default tolerance factors: constant-angle checks use `10 h^2`, the
/// second-order invariants `100 h^2`, metric PDE residuals `10 h^2 scale`.
pub const ANGLE_FACTOR: f64 = 10.0;
pub const INVARIANT_FACTOR: f64 = 100.0;
pub const PDE_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {status} {:e} {:e}", self.name, self.value, self.tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub plane: OrientedPlane,
    /// Replaces every default tolerance.
    pub tol: Option<f64>,
    /// Restrict to [`MetricField::regular_mask`] with this floor.
    pub regular_floor: Option<f64>,
    /// `None` runs every applicable check.
    pub checks: Option<Vec<String>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { plane: OrientedPlane::e1(), tol: None, regular_floor: None, checks: None }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckLine>,
    /// Human-readable remarks (skipped checks and the like).
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn get(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn verify_grid(grid: &ImmersionGrid, opts: &VerifyOptions) -> Result<VerifyReport> {
    if let Some(list) = &opts.checks {
        if let Some(bad) = list.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
            return Err(Error::InvalidInput(format!(
                "unknown check '{bad}' (known: {})",
                CHECK_NAMES.join(", ")
            )));
        }
    }
    let mut grid = grid.clone();
    let mut metric = match (&grid.mu, &grid.nu, grid.psi) {
        (Some(mu), Some(nu), Some(psi)) => Some(MetricField::new(grid.geom, mu.clone(), nu.clone(), psi)?),
        _ => None,
    };
    if let Some(m) = metric.as_mut() {
        if let Some(gm) = &grid.masked {
            for (a, b) in m.masked.iter_mut().zip(gm) {
                *a |= *b;
            }
        }
        if let Some(floor) = opts.regular_floor {
            m.masked = m.regular_mask(floor);
        }
        grid.masked = Some(m.masked.clone());
    } else if opts.regular_floor.is_some() {
        return Err(Error::InvalidInput("--regular-floor needs a grid with mu, nu and psi".into()));
    }

    let h = grid.geom.h();
    let tol = |default: f64| opts.tol.unwrap_or(default);
    let want = |n: &str| opts.checks.as_ref().is_none_or(|l| l.iter().any(|x| x == n));
    let mut rep = VerifyReport::default();
    let push = |rep: &mut VerifyReport, name: &'static str, value: f64, tolerance: f64, pass: Option<bool>| {
        if want(name) {
            let pass = pass.unwrap_or(value < tolerance);
            rep.checks.push(CheckLine { name, pass: pass && value.is_finite(), value, tolerance });
        }
    };

    let angle_tol = tol(ANGLE_FACTOR * h * h);
    let ca = check_constant_angle(&grid, &opts.plane, angle_tol)?;
    push(&mut rep, "constant_angle", ca.max_deviation, angle_tol, Some(ca.pass));
    if let Some(psi) = grid.psi {
        if opts.plane == OrientedPlane::e1() {
            push(&mut rep, "angle_value", (ca.mean_cos - psi.cos()).norm(), angle_tol, None);
        } else {
            rep.notes.push("angle_value skipped: the stored angle refers to the E1-plane".into());
        }
    }

    let inv_tol = tol(INVARIANT_FACTOR * h * h);
    let inv = curvatures(&grid)?;
    let k = inv.nodes.iter().map(|n| n.k_gauss_map.abs()).fold(inv.max_abs_k, f64::max);
    push(&mut rep, "curvature_k", k, inv_tol, None);
    push(&mut rep, "curvature_kn", inv.max_abs_k_n, inv_tol, None);

    if let Some(m) = &metric {
        let idx = |n: &crate::surface::NodeInvariants| grid.geom.idx(n.i, n.j);
        let mut hmax = 0.0f64;
        let mut dmax = 0.0f64;
        let mut gmax = 0.0f64;
        for n in &inv.nodes {
            let (mu, nu) = (m.mu[idx(n)], m.nu[idx(n)]);
            let (a, b) = (mu.powi(-2), nu.powi(-2));
            // 1/mu^2 - 1/nu^2 changes sign, so scale by its largest term
            hmax = hmax.max((n.h2 - (a - b)).abs() / (a + b));
            if n.reliable {
                dmax = dmax.max(rel(n.delta, -4.0 * a * b));
            }
            let [e, f, g] = n.metric;
            gmax = gmax.max(rel(e, mu * mu)).max(rel(g, nu * nu)).max(f.abs() / (mu * nu).abs());
        }
        push(&mut rep, "mean_curvature", hmax, inv_tol, None);
        push(&mut rep, "delta", dmax, inv_tol, None);
        push(&mut rep, "metric", gmax, inv_tol, None);

        if m.psi.constants().is_ok() {
            let pde_tol = tol(PDE_FACTOR * h * h * m.scale());
            let (r1, r2) = m.condition_residual()?;
            push(&mut rep, "metric_condition", r1.max(r2), pde_tol, None);
            push(&mut rep, "kg_residual", kg_residual(m)?, pde_tol, None);
            let b = blowup_ode_check(m)?;
            push(&mut rep, "blowup_ode", b.relative_residual, tol(b.tolerance), None);
        } else {
            rep.notes.push("metric PDE checks skipped: sin psi = 0".into());
        }
    } else {
        rep.notes.push("metric checks skipped: grid has no mu, nu, psi".into());
    }

    match (grid.psi, &grid.frames) {
        (Some(psi), Some(_)) => match check_holonomy_tube(&grid, &opts.plane, psi) {
            Ok(r) => {
                let value = r.curve_residual.max(r.angle_residual);
                let pass = opts.tol.map(|t| value < t);
                push(&mut rep, "holonomy_tube", value, tol(r.tolerance), pass.or(Some(r.pass)));
            }
            Err(Error::WrongAngleClass { .. }) => {
                rep.notes.push("holonomy_tube skipped: angle is neither real nor imaginary".into())
            }
            Err(e) => return Err(e),
        },
        _ => rep.notes.push("holonomy_tube skipped: grid has no frames".into()),
    }

    let hp = check_degenerate_hyperplane(&grid)?;
    let s2 = (1.0 - ca.mean_cos * ca.mean_cos).norm();
    if ca.pass && s2 < angle_tol {
        let t = tol(HYPERPLANE_TOL);
        let pass = hp.residual < t && hp.normal_norm2.abs() < NULL_NORMAL_TOL;
        push(&mut rep, "degenerate_hyperplane", hp.residual, t, Some(pass));
    } else {
        rep.notes.push(format!(
            "degenerate_hyperplane skipped: angle is not 0 mod pi (fit residual {:e}, normal square {:e})",
            hp.residual, hp.normal_norm2
        ));
    }

    if let Some(list) = &opts.checks {
        if let Some(miss) = list.iter().find(|n| rep.get(n).is_none()) {
            return Err(Error::InvalidInput(format!("check '{miss}' does not apply to this grid")));
        }
    }
    Ok(rep)
}
