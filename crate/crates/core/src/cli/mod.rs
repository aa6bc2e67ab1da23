//! Command-line front end. The `cas` binary is a thin wrapper around [`run`].
//!
//! Exit codes (stable):
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage, configuration, i/o or any other error |
//! | 2 | degenerate plane |
//! | 3 | loop closure failure |
//! | 4 | degenerate angle |
//! | 5 | bad family parameters |
//! | 6 | at least one verify check failed |
//! | 7 | unknown export format or projection |
//!
//! Errors are reported on stderr as one JSON object per line:
//! `{"error":"ClosureFailure","exit":3,"message":"..."}`.

pub mod config;
pub mod export;
pub mod gridfile;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::MinkowskiVector;
use crate::error::Error;
use crate::planes::{classify_position, complex_angle, plane_from_frame, projection_angles, ComplexAngle, OrientedPlane};
use crate::surface::GridGeometry;
use crate::synthesis::{
    family_metric, integrate_immersion, make_family, solve_cauchy_curve, solve_goursat, CauchyData, FamilySpec,
    MetricField,
};

use config::{RunConfig, DEFAULT_DOMAIN, DEFAULT_H};
use export::Projection;
use gridfile::{read_grid, GridFile};
use verify::{verify_grid, VerifyOptions};

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DEGENERATE_PLANE: i32 = 2;
    pub const CLOSURE_FAILURE: i32 = 3;
    pub const ANGLE_DEGENERATE: i32 = 4;
    pub const BAD_SPEC: i32 = 5;
    pub const CHECK_FAILED: i32 = 6;
    pub const UNKNOWN_FORMAT: i32 = 7;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("unknown export format or projection: {0}")]
    UnknownFormat(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::DegeneratePlane(_)) => exit::DEGENERATE_PLANE,
            CliError::Core(Error::ClosureFailure { .. }) => exit::CLOSURE_FAILURE,
            CliError::Core(Error::AngleDegenerate { .. }) => exit::ANGLE_DEGENERATE,
            CliError::Core(Error::BadSpecParameters(_)) => exit::BAD_SPEC,
            CliError::ChecksFailed { .. } => exit::CHECK_FAILED,
            CliError::UnknownFormat(_) => exit::UNKNOWN_FORMAT,
            CliError::Core(_) | CliError::Usage(_) => exit::USAGE,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "Usage",
            CliError::UnknownFormat(_) => "UnknownFormat",
            CliError::ChecksFailed { .. } => "ChecksFailed",
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cas", version, about = "Complex angles of spacelike planes and constant angle surfaces in R^{1,3}")]
pub struct Cli {
    /// TOML file with parameter defaults; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Replace every check tolerance by this value.
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tol: Option<f64>,
    /// Grid step [default: 0.01].
    #[arg(long = "h", global = true, value_name = "FLOAT")]
    pub h: Option<f64>,
    /// Print only machine-readable lines.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complex angle between two oriented spacelike planes.
    Angle(AngleArgs),
    /// Solve for the metric and integrate the immersion.
    Synth(SynthArgs),
    /// Sample a closed-form family.
    Family(FamilyArgs),
    /// Run geometric checks on a grid file.
    Verify(VerifyArgs),
    /// Convert a grid file to csv, json or obj.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    /// `e1`, `e2`, `e3` or eight comma-separated reals (two basis vectors).
    #[arg(allow_hyphen_values = true)]
    pub p: String,
    #[arg(allow_hyphen_values = true)]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Complex angle as `re+imi`.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// Goursat data: mu along the bottom edge, one value per grid column.
    #[arg(long, value_name = "PATH", requires = "nu_left")]
    pub mu_bottom: Option<PathBuf>,
    /// Goursat data: nu along the left edge, one value per grid row.
    #[arg(long, value_name = "PATH", requires = "mu_bottom")]
    pub nu_left: Option<PathBuf>,
    /// Cauchy data as JSON `{curve, values, normal_derivatives, which}`.
    #[arg(long, value_name = "PATH")]
    pub cauchy: Option<PathBuf>,
    /// Goursat edges taken from a closed form: hypersphere, lightcone, trig or polytrig.
    #[arg(long)]
    pub edges: Option<String>,
    /// Integrate the mu, nu stored in this grid file as they are (no PDE solve).
    #[arg(long, value_name = "PATH")]
    pub metric: Option<PathBuf>,
    /// `xa,xb,ya,yb` [default: 0,1,0,1].
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Image of node (0, 0) as `x0,x1,x2,x3` [default: origin].
    #[arg(long, allow_hyphen_values = true)]
    pub base: Option<String>,
    /// Store the regular-region mask with this floor in the output.
    #[arg(long)]
    pub regular_floor: Option<f64>,
    /// Output grid file; `-` for stdout [default: -].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// e.g. `lightcone:a=0.5,b=0.3` or `hypersphere:psi=1.0471975512+0.4i,r1=1,r2=-1`.
    #[arg(allow_hyphen_values = true)]
    pub spec: Option<String>,
    /// `xa,xb,ya,yb` [default: 0,1,0,1].
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Output grid file; `-` for stdout [default: -].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub grid: PathBuf,
    /// Reference plane, same syntax as `angle` [default: e1].
    #[arg(long, allow_hyphen_values = true)]
    pub plane: Option<String>,
    /// Restrict to nodes where |mu|, |nu| exceed this fraction of their maximum
    /// and the orientation matches [default: off].
    #[arg(long)]
    pub regular_floor: Option<f64>,
    /// Comma-separated subset of checks [default: all applicable].
    #[arg(long, value_delimiter = ',')]
    pub checks: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub grid: PathBuf,
    /// csv, json or obj [default: json].
    #[arg(long)]
    pub format: Option<String>,
    /// For obj: `drop:k` or `affine:` with 12 reals.
    #[arg(long)]
    pub projection: Option<String>,
    /// Output file; `-` for stdout [default: -].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses arguments (including the program name) and runs one command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    exit::OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    report(&CliError::Usage(first_line(&text)), err);
                    exit::USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => exit::OK,
        Err(e) => {
            report(&e, err);
            e.exit_code()
        }
    }
}

fn first_line(s: &str) -> String {
    s.lines().next().unwrap_or("").trim_start_matches("error: ").to_string()
}

fn report(e: &CliError, err: &mut dyn Write) {
    let line = serde_json::json!({ "error": e.kind(), "exit": e.exit_code(), "message": e.to_string() });
    let _ = writeln!(err, "{line}");
}

struct Ctx {
    cfg: RunConfig,
    tol: Option<f64>,
    h: f64,
    quiet: bool,
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let h = cli.h.or(cfg.h).unwrap_or(DEFAULT_H);
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Usage(format!("--h must be positive, got {h}")));
    }
    let ctx = Ctx { tol: cli.tol.or(cfg.tol), h, quiet: cli.quiet || cfg.quiet.unwrap_or(false), cfg };
    match &cli.command {
        Command::Angle(a) => cmd_angle(&ctx, a, out),
        Command::Synth(a) => cmd_synth(&ctx, a, out, err),
        Command::Family(a) => cmd_family(&ctx, a, out),
        Command::Verify(a) => cmd_verify(&ctx, a, out),
        Command::Export(a) => cmd_export(&ctx, a, out),
    }
}

/// `e1`, `e2`, `e3` or eight comma-separated reals.
pub fn parse_plane(s: &str) -> CliResult<OrientedPlane> {
    match s.trim() {
        "e1" => return Ok(OrientedPlane::e1()),
        "e2" => return Ok(OrientedPlane::e2()),
        "e3" => return Ok(OrientedPlane::e3()),
        _ => {}
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse plane '{s}'")))?;
    if v.len() != 8 {
        return Err(CliError::Usage(format!("a plane needs 8 reals, got {}", v.len())));
    }
    let u = MinkowskiVector::new(v[0], v[1], v[2], v[3]);
    let w = MinkowskiVector::new(v[4], v[5], v[6], v[7]);
    Ok(plane_from_frame(u, w)?)
}

/// Four comma-separated reals.
fn parse_four(what: &str, s: &str) -> CliResult<[f64; 4]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse {what} '{s}'")))?;
    v.try_into().map_err(|_| CliError::Usage(format!("{what} needs 4 comma-separated reals, got '{s}'")))
}

fn domain_geom(domain: Option<&str>, cfg: Option<[f64; 4]>, h: f64) -> CliResult<GridGeometry> {
    let d = match domain {
        Some(d) => parse_four("--domain", d)?,
        None => cfg.unwrap_or(DEFAULT_DOMAIN),
    };
    Ok(GridGeometry::covering(d[0], d[1], d[2], d[3], h)?)
}

fn write_text(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text)?,
        _ => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_stdout(path: Option<&Path>) -> bool {
    path.is_none_or(|p| p == Path::new("-"))
}

/// Shortest round-trip decimal, switching to exponent form for very small or large values.
fn num(v: f64) -> String {
    let v = v + 0.0; // drop the sign of zero
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn cmd_angle(ctx: &Ctx, a: &AngleArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = parse_plane(&a.p)?;
    let q = parse_plane(&a.q)?;
    let psi = complex_angle(&p, &q);
    let h = p.bivector().h(q.bivector());
    let proj = projection_angles(&p, &q);
    let dev = (proj.angle().cos() - h).norm();
    if !ctx.quiet {
        writeln!(out, "# angle between p and q, cos psi = H(p, q)")?;
    }
    writeln!(out, "psi1 {}", num(psi.psi1))?;
    writeln!(out, "psi2 {}", num(psi.psi2))?;
    writeln!(out, "cos_psi {} {}", num(h.re), num(h.im))?;
    match psi.constants() {
        Ok((c1, c2)) => {
            writeln!(out, "c1 {}", num(c1))?;
            writeln!(out, "c2 {}", num(c2))?;
        }
        Err(_) => {
            writeln!(out, "c1 undefined")?;
            writeln!(out, "c2 undefined")?;
        }
    }
    writeln!(out, "position {}", classify_position(&p, &q))?;
    writeln!(out, "projection_psi1 {}", num(proj.psi1))?;
    writeln!(out, "projection_psi2 {}", num(proj.psi2))?;
    writeln!(out, "projection_deviation {dev:e}")?;
    Ok(())
}

fn read_values(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Core(Error::InvalidInput(format!("{}: bad number '{t}'", path.display()))))
        })
        .collect()
}

/// Goursat edge data from a closed-form metric.
fn closed_form_edges(kind: &str, psi: ComplexAngle, geom: &GridGeometry) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let (c1, c2) = psi.constants()?;
    let field: Box<dyn Fn(f64, f64) -> (f64, f64)> = match kind {
        "lightcone" => Box::new(move |x, y| {
            let e = (c1 * y - c2 * x).exp();
            (e, -e)
        }),
        "hypersphere" | "trig" | "polytrig" => {
            let spec = match kind {
                "hypersphere" => FamilySpec::Hypersphere { psi, r1: 1.0, r2: -1.0 },
                "trig" => FamilySpec::Trig { psi },
                _ => FamilySpec::PolyTrig { psi },
            };
            Box::new(move |x, y| family_metric(&spec, x, y).expect("closed-form metric"))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown edge family '{other}' (hypersphere, lightcone, trig, polytrig)"
            )))
        }
    };
    let bottom = (0..geom.nx).map(|i| field(geom.x(i), geom.y(0)).0).collect();
    let left = (0..geom.ny).map(|j| field(geom.x(0), geom.y(j)).1).collect();
    Ok((bottom, left))
}

fn cmd_synth(ctx: &Ctx, a: &SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let c = &ctx.cfg.synth;
    let stored = match a.metric.as_ref().or(c.metric.as_ref()) {
        Some(path) => Some(read_grid(path)?),
        None => None,
    };
    let psi = match (a.psi.clone().or_else(|| c.psi.clone()), stored.as_ref().and_then(|g| g.psi)) {
        (Some(s), _) => ComplexAngle::parse(&s)?,
        (None, Some(p)) => p,
        (None, None) => return Err(CliError::Usage("synth needs --psi".into())),
    };
    let mu_bottom = a.mu_bottom.clone().or_else(|| c.mu_bottom.clone());
    let nu_left = a.nu_left.clone().or_else(|| c.nu_left.clone());
    let cauchy = a.cauchy.clone().or_else(|| c.cauchy.clone());
    let edges = a.edges.clone().or_else(|| c.edges.clone());
    let sources = [mu_bottom.is_some() || nu_left.is_some(), cauchy.is_some(), edges.is_some(), stored.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --mu-bottom/--nu-left, --cauchy, --edges or --metric".into(),
        ));
    }
    let metric: MetricField = if let Some(g) = stored {
        match (g.mu, g.nu) {
            (Some(mu), Some(nu)) => MetricField::new(g.geom, mu, nu, psi)?,
            _ => return Err(CliError::Usage("--metric file carries no mu, nu".into())),
        }
    } else if let Some(path) = cauchy {
        if a.domain.is_some() {
            return Err(CliError::Usage("--domain does not apply to Cauchy data".into()));
        }
        let data: CauchyData = serde_json::from_str(&std::fs::read_to_string(&path)?).map_err(Error::from)?;
        solve_cauchy_curve(psi, &data, ctx.h)?
    } else {
        let geom = domain_geom(a.domain.as_deref(), c.domain, ctx.h)?;
        let (bottom, left) = match (mu_bottom, nu_left, edges) {
            (Some(mb), Some(nl), _) => (read_values(&mb)?, read_values(&nl)?),
            (_, _, Some(kind)) => closed_form_edges(&kind, psi, &geom)?,
            _ => return Err(CliError::Usage("Goursat data need both --mu-bottom and --nu-left".into())),
        };
        solve_goursat(psi, &bottom, &left, geom)?
    };
    let base = match a.base.as_deref() {
        Some(b) => parse_four("--base", b)?,
        None => c.base.unwrap_or([0.0; 4]),
    };
    let (mut grid, rep) = integrate_immersion(&metric, MinkowskiVector(base))?;
    if let Some(floor) = a.regular_floor.or(c.regular_floor) {
        grid.masked = Some(metric.regular_mask(floor));
    }
    let output = a.output.clone().or_else(|| c.output.clone());
    write_text(output.as_deref(), &GridFile::from_grid(&grid).to_json()?, out)?;
    let summary: &mut dyn Write = if to_stdout(output.as_deref()) { err } else { out };
    if !ctx.quiet {
        writeln!(summary, "# {}x{} grid, psi = {psi}", grid.geom.nx, grid.geom.ny)?;
    }
    writeln!(summary, "closure_residual {:e} curl {:e} tolerance {:e}", rep.max_residual, rep.max_curl, rep.tolerance)?;
    writeln!(summary, "mask_fraction {}", grid.mask_fraction())?;
    Ok(())
}

fn cmd_family(ctx: &Ctx, a: &FamilyArgs, out: &mut dyn Write) -> CliResult<()> {
    let c = &ctx.cfg.family;
    let spec_s = a.spec.clone().or_else(|| c.spec.clone()).ok_or_else(|| CliError::Usage("family needs a spec".into()))?;
    let spec = FamilySpec::parse(&spec_s)?;
    let geom = domain_geom(a.domain.as_deref(), c.domain, ctx.h)?;
    let grid = make_family(&spec, geom)?;
    let output = a.output.clone().or_else(|| c.output.clone());
    write_text(output.as_deref(), &GridFile::from_grid(&grid).to_json()?, out)
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let c = &ctx.cfg.verify;
    let grid = read_grid(&a.grid)?;
    let plane = match a.plane.as_ref().or(c.plane.as_ref()) {
        Some(s) => parse_plane(s)?,
        None => OrientedPlane::e1(),
    };
    let opts = VerifyOptions {
        plane,
        tol: ctx.tol,
        regular_floor: a.regular_floor.or(c.regular_floor),
        checks: a.checks.clone().or_else(|| c.checks.clone()),
    };
    let rep = verify_grid(&grid, &opts)?;
    if !ctx.quiet {
        let g = grid.geom;
        writeln!(out, "# {}: {}x{} grid, h = {}", a.grid.display(), g.nx, g.ny, g.h())?;
        for n in &rep.notes {
            writeln!(out, "# {n}")?;
        }
    }
    for line in &rep.checks {
        writeln!(out, "{line}")?;
    }
    match rep.failed() {
        0 => Ok(()),
        failed => Err(CliError::ChecksFailed { failed, total: rep.checks.len() }),
    }
}

fn cmd_export(ctx: &Ctx, a: &ExportArgs, out: &mut dyn Write) -> CliResult<()> {
    let c = &ctx.cfg.export;
    let format = a.format.clone().or_else(|| c.format.clone()).unwrap_or_else(|| "json".into());
    let projection = a.projection.clone().or_else(|| c.projection.clone());
    let output = a.output.clone().or_else(|| c.output.clone());
    // validate the request before touching the grid file
    let text_of = match format.as_str() {
        "csv" | "json" => None,
        "obj" => {
            let spec = projection
                .ok_or_else(|| CliError::UnknownFormat("obj export needs --projection drop:k or affine:...".into()))?;
            Some(Projection::parse(&spec).ok_or(CliError::UnknownFormat(spec))?)
        }
        other => return Err(CliError::UnknownFormat(other.to_string())),
    };
    let grid = read_grid(&a.grid)?;
    let text = match (format.as_str(), text_of) {
        ("csv", _) => export::to_csv(&grid)?,
        ("json", _) => export::to_json(&grid)?,
        (_, Some(p)) => export::to_obj(&grid, &p),
        _ => unreachable!("format validated above"),
    };
    write_text(output.as_deref(), &text, out)
}
