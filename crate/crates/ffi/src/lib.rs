//! C ABI over `cas-core`.
//!
//! Conventions: every function returns a [`CasStatus`]; results go through out
//! pointers. Handles are opaque and must be released with the matching `*_free`.
//! After a non-zero status, [`cas_last_error`] describes the failure on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use cas_core::algebra::MinkowskiVector;
use cas_core::cli::gridfile::{read_grid, write_grid};
use cas_core::cli::verify::{verify_grid, VerifyOptions};
use cas_core::planes::{complex_angle, plane_from_frame, ComplexAngle, OrientedPlane};
use cas_core::surface::{check_constant_angle, GridGeometry, ImmersionGrid};
use cas_core::synthesis::{integrate_immersion, make_family, solve_goursat, FamilySpec, MetricField};
use cas_core::Error;

/// Status codes. Values are stable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DegeneratePlane = 3,
    ClosureFailure = 4,
    AngleDegenerate = 5,
    BadSpecParameters = 6,
    PotentialsInconsistent = 7,
    WrongAngleClass = 8,
    NonMonotoneCurve = 9,
    Io = 10,
    Other = 11,
    Panic = 12,
}

impl From<&Error> for CasStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DegeneratePlane(_) | Error::DegenerateNormalFrame { .. } => CasStatus::DegeneratePlane,
            Error::ClosureFailure { .. } => CasStatus::ClosureFailure,
            Error::AngleDegenerate { .. } => CasStatus::AngleDegenerate,
            Error::BadSpecParameters(_) => CasStatus::BadSpecParameters,
            Error::PotentialsInconsistent { .. } => CasStatus::PotentialsInconsistent,
            Error::WrongAngleClass { .. } => CasStatus::WrongAngleClass,
            Error::NonMonotoneCurve { .. } => CasStatus::NonMonotoneCurve,
            Error::InvalidInput(_) | Error::NotInterior { .. } | Error::Json(_) | Error::Csv(_) => {
                CasStatus::InvalidInput
            }
            Error::Io(_) => CasStatus::Io,
            _ => CasStatus::Other,
        }
    }
}

/// Oriented spacelike plane.
pub struct CasPlane(OrientedPlane);

/// Sampled metric `(mu, nu)` with its angle.
pub struct CasMetric(MetricField);

/// Immersion grid with optional metric, frames and mask.
pub struct CasGrid(ImmersionGrid);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> CasStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CasStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CasStatus::Panic
        }
    }
}

struct Fail(CasStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CasStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read4(p: *const f64, what: &str) -> Result<MinkowskiVector, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, 4);
    Ok(MinkowskiVector::new(s[0], s[1], s[2], s[3]))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CasStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cas_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cas_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Plane spanned by `u`, `v` (4 doubles each), oriented by their order.
///
/// # Safety
/// `u` and `v` must point to 4 doubles; `out_plane` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_plane_new(u: *const f64, v: *const f64, out_plane: *mut *mut CasPlane) -> CasStatus {
    guard(|| {
        let p = plane_from_frame(read4(u, "u")?, read4(v, "v")?)?;
        out(out_plane, Box::into_raw(Box::new(CasPlane(p))), "out_plane")
    })
}

/// # Safety
/// `plane` must come from [`cas_plane_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cas_plane_free(plane: *mut CasPlane) {
    if !plane.is_null() {
        drop(Box::from_raw(plane));
    }
}

/// Normalized complex angle `psi1 + i psi2` between `p` and `q`.
///
/// # Safety
/// Handles must be valid; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cas_complex_angle(
    p: *const CasPlane,
    q: *const CasPlane,
    psi1: *mut f64,
    psi2: *mut f64,
) -> CasStatus {
    guard(|| {
        let a = complex_angle(&handle(p, "p")?.0, &handle(q, "q")?.0);
        out(psi1, a.psi1, "psi1")?;
        out(psi2, a.psi2, "psi2")
    })
}

/// `c1 = -2 Re cot psi`, `c2 = 2 Im cot psi`.
///
/// # Safety
/// Out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_angle_constants(psi1: f64, psi2: f64, c1: *mut f64, c2: *mut f64) -> CasStatus {
    guard(|| {
        let (a, b) = ComplexAngle::new(psi1, psi2).constants()?;
        out(c1, a, "c1")?;
        out(c2, b, "c2")
    })
}

/// Solves the Goursat problem on an `nx` by `ny` grid with origin `(x0, y0)` and steps `hx`, `hy`.
/// `mu_bottom` holds `nx` values along `y = y0`, `nu_left` holds `ny` values along `x = x0`.
///
/// # Safety
/// Arrays must hold the stated number of doubles; `out_metric` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_metric_goursat(
    psi1: f64,
    psi2: f64,
    mu_bottom: *const f64,
    nx: usize,
    nu_left: *const f64,
    ny: usize,
    x0: f64,
    y0: f64,
    hx: f64,
    hy: f64,
    out_metric: *mut *mut CasMetric,
) -> CasStatus {
    guard(|| {
        let geom = GridGeometry::new(nx, ny, x0, y0, hx, hy)?;
        let mb = slice(mu_bottom, nx, "mu_bottom")?;
        let nl = slice(nu_left, ny, "nu_left")?;
        let m = solve_goursat(ComplexAngle::new(psi1, psi2), mb, nl, geom)?;
        out(out_metric, Box::into_raw(Box::new(CasMetric(m))), "out_metric")
    })
}

/// # Safety
/// `metric` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cas_metric_free(metric: *mut CasMetric) {
    if !metric.is_null() {
        drop(Box::from_raw(metric));
    }
}

/// Integrates the immersion with node (0, 0) sent to `base` (4 doubles).
/// `closure_residual` may be null.
///
/// # Safety
/// `metric` must be valid; `base` must hold 4 doubles; `out_grid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_integrate(
    metric: *const CasMetric,
    base: *const f64,
    out_grid: *mut *mut CasGrid,
    closure_residual: *mut f64,
) -> CasStatus {
    guard(|| {
        let (grid, rep) = integrate_immersion(&handle(metric, "metric")?.0, read4(base, "base")?)?;
        if !closure_residual.is_null() {
            closure_residual.write(rep.max_residual);
        }
        out(out_grid, Box::into_raw(Box::new(CasGrid(grid))), "out_grid")
    })
}

/// Samples a family such as `"lightcone:a=0.5,b=0.3"` on `[xa, xb] x [ya, yb]` with step `h`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out_grid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_family_new(
    spec: *const c_char,
    xa: f64,
    xb: f64,
    ya: f64,
    yb: f64,
    h: f64,
    out_grid: *mut *mut CasGrid,
) -> CasStatus {
    guard(|| {
        let spec = FamilySpec::parse(str_arg(spec, "spec")?)?;
        let grid = make_family(&spec, GridGeometry::covering(xa, xb, ya, yb, h)?)?;
        out(out_grid, Box::into_raw(Box::new(CasGrid(grid))), "out_grid")
    })
}

/// # Safety
/// `grid` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cas_grid_free(grid: *mut CasGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// # Safety
/// `grid` must be valid; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cas_grid_dims(grid: *const CasGrid, nx: *mut usize, ny: *mut usize) -> CasStatus {
    guard(|| {
        let g = handle(grid, "grid")?.0.geom;
        out(nx, g.nx, "nx")?;
        out(ny, g.ny, "ny")
    })
}

/// Copies the points, row-major with 4 doubles per node, into `buf` of `len` doubles.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cas_grid_points(grid: *const CasGrid, buf: *mut f64, len: usize) -> CasStatus {
    guard(|| {
        let g = &handle(grid, "grid")?.0;
        let need = 4 * g.points.len();
        if len < need {
            return Err(Fail(CasStatus::InvalidInput, format!("buffer holds {len} doubles, need {need}")));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (chunk, p) in dst.chunks_exact_mut(4).zip(&g.points) {
            chunk.copy_from_slice(&p.0);
        }
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out_grid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cas_grid_read(path: *const c_char, out_grid: *mut *mut CasGrid) -> CasStatus {
    guard(|| {
        let g = read_grid(Path::new(str_arg(path, "path")?))?;
        out(out_grid, Box::into_raw(Box::new(CasGrid(g))), "out_grid")
    })
}

/// # Safety
/// `grid` must be valid; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cas_grid_write(grid: *const CasGrid, path: *const c_char) -> CasStatus {
    guard(|| Ok(write_grid(Path::new(str_arg(path, "path")?), &handle(grid, "grid")?.0)?))
}

/// Constant-angle check against the E1-plane. `pass` receives 1 or 0.
///
/// # Safety
/// `grid` must be valid; out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cas_check_constant_angle(
    grid: *const CasGrid,
    tol: f64,
    max_deviation: *mut f64,
    pass: *mut c_int,
) -> CasStatus {
    guard(|| {
        let r = check_constant_angle(&handle(grid, "grid")?.0, &OrientedPlane::e1(), tol)?;
        out(max_deviation, r.max_deviation, "max_deviation")?;
        out(pass, c_int::from(r.pass), "pass")
    })
}

/// Runs every applicable verify check against the E1-plane. A non-positive `tol`
/// keeps the per-check defaults. `failed` receives the number of failing checks
/// and `total` (may be null) the number run.
///
/// # Safety
/// `grid` must be valid; `failed` writable.
#[no_mangle]
pub unsafe extern "C" fn cas_verify(
    grid: *const CasGrid,
    tol: f64,
    failed: *mut usize,
    total: *mut usize,
) -> CasStatus {
    guard(|| {
        let opts = VerifyOptions { tol: (tol > 0.0).then_some(tol), ..Default::default() };
        let rep = verify_grid(&handle(grid, "grid")?.0, &opts)?;
        if !total.is_null() {
            total.write(rep.checks.len());
        }
        out(failed, rep.failed(), "failed")
    })
}
