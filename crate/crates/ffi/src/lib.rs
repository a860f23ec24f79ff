//! C interface to the `lpbm` library.
//!
//! Every function returns an [`LpbmStatus`]. Results come back through out
//! pointers, which are left untouched on failure. After a failure,
//! [`lpbm_last_error`] copies a description of the error raised on the
//! calling thread. Handles are created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use lpbm::bodies::{lp_combination, Body, BodySpec};
use lpbm::cmsolver::{newton_solve_from, CMProblem, ProblemOptions, SolverConfig};
use lpbm::lpbm::check_lpbm;
use lpbm::sphere::{HarmonicExpansion, HarmonicTerm, SphereGrid};
use lpbm::spectral::{assemble_operator, lambda_1e};
use lpbm::volumes::{intrinsic_volume, steiner_check, VolumeOptions};
use lpbm::Error;
use nalgebra::Vector3;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpbmStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad input: parameters, body descriptions, sizes.
    InvalidArgument = 2,
    /// A numerical procedure failed (solver, linear program, eigenproblem).
    Numerical = 3,
    /// A file could not be read.
    Io = 4,
    /// The output buffer is too small.
    BufferTooSmall = 5,
    /// Internal panic; the library state is unchanged.
    Internal = 6,
}

/// Opaque convex body.
pub struct LpbmBody(Body);

/// Opaque quadrature grid on the sphere.
pub struct LpbmGrid(SphereGrid);

/// Both sides of the L_p inequality for `V_j`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LpbmVerdict {
    /// `V_j` of the combination.
    pub lhs: f64,
    pub rhs_geometric: f64,
    pub rhs_p: f64,
    /// Relative margin of the logarithmic inequality, positive on a violation.
    pub margin_geometric: f64,
    /// Relative margin of the L_p inequality, positive on a violation.
    pub margin_p: f64,
}

/// Summary of a Newton solve.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LpbmSolveSummary {
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub min_h: f64,
    pub max_h: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> LpbmStatus {
    match e {
        Error::Io(_) => LpbmStatus::Io,
        e if e.is_numerical() => LpbmStatus::Numerical,
        _ => LpbmStatus::InvalidArgument,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Code(LpbmStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LpbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpbmStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            LpbmStatus::NullPointer
        }
        Ok(Err(Fail::Code(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            LpbmStatus::Internal
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Code(LpbmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Copy `s` with a terminating NUL into `buf`. `needed` receives the full
/// size including the terminator.
unsafe fn write_text(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), Fail> {
    if let Some(n) = needed.as_mut() {
        *n = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return Err(Fail::Code(LpbmStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1)));
    }
    ptr::copy_nonoverlapping(s.as_ptr() as *const c_char, buf, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lpbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn lpbm_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> LpbmStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_text(&msg, buf, len, needed) {
        Ok(()) => LpbmStatus::Ok,
        Err(_) => LpbmStatus::BufferTooSmall,
    }
}

/// Parse a body from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_from_json(json: *const c_char, out_body: *mut *mut LpbmBody) -> LpbmStatus {
    guard(|| {
        let t = text(json, "json")?;
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(Body::from_json(t)?));
        Ok(())
    })
}

/// Load a body from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_load(path: *const c_char, out_body: *mut *mut LpbmBody) -> LpbmStatus {
    guard(|| {
        let t = text(path, "path")?;
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(Body::load(Path::new(t))?));
        Ok(())
    })
}

/// Ball of `radius` in R^n, n in {2, 3}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_ball(n: usize, radius: f64, out_body: *mut *mut LpbmBody) -> LpbmStatus {
    guard(|| {
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(Body::ball(n, radius)?));
        Ok(())
    })
}

/// Axis-aligned ellipsoid with `n` semi-axes.
///
/// # Safety
/// `axes` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_ellipsoid(axes: *const f64, n: usize, out_body: *mut *mut LpbmBody) -> LpbmStatus {
    guard(|| {
        let a = slice(axes, n, "axes")?;
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(Body::ellipsoid_axes(a)?));
        Ok(())
    })
}

/// Cube `[-a, a]^3`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_cube(a: f64, out_body: *mut *mut LpbmBody) -> LpbmStatus {
    guard(|| {
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(Body::cube(a)?));
        Ok(())
    })
}

/// Release a body. Null is ignored.
///
/// # Safety
/// `body` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_free(body: *mut LpbmBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Ambient dimension of a body.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_dimension(body: *const LpbmBody, out_n: *mut usize) -> LpbmStatus {
    guard(|| {
        let b = get(body, "body")?;
        *out(out_n, "out_n")? = b.0.n();
        Ok(())
    })
}

/// Support function at a vector of length equal to the body dimension.
///
/// # Safety
/// `x` must point to `len` values; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_support(
    body: *const LpbmBody,
    x: *const f64,
    len: usize,
    out_value: *mut f64,
) -> LpbmStatus {
    guard(|| {
        let b = get(body, "body")?;
        let v = slice(x, len, "x")?;
        if len != b.0.n() {
            return Err(Error::SizeMismatch(format!("vector of length {len} for a body in R^{}", b.0.n())).into());
        }
        let mut u = Vector3::zeros();
        u.as_mut_slice()[..len].copy_from_slice(v);
        *out(out_value, "out_value")? = b.0.support(&u)?;
        Ok(())
    })
}

/// JSON description of a body, copied into `buf` like [`lpbm_last_error`].
///
/// # Safety
/// `buf` must point to `len` writable bytes or be null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_to_json(
    body: *const LpbmBody,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> LpbmStatus {
    guard(|| {
        let b = get(body, "body")?;
        write_text(&BodySpec::from_body(&b.0).to_text(), buf, len, needed)
    })
}

/// L_p combination `(1 - lambda) K +_p lambda L`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_body_combine(
    k: *const LpbmBody,
    l: *const LpbmBody,
    p: f64,
    lambda: f64,
    out_body: *mut *mut LpbmBody,
) -> LpbmStatus {
    guard(|| {
        let (k, l) = (get(k, "k")?, get(l, "l")?);
        let slot = out(out_body, "out_body")?;
        *slot = boxed(LpbmBody(lp_combination(&k.0, &l.0, p, lambda)?));
        Ok(())
    })
}

/// Product quadrature grid on S^{n-1}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpbm_grid_new(n: usize, resolution: usize, out_grid: *mut *mut LpbmGrid) -> LpbmStatus {
    guard(|| {
        let slot = out(out_grid, "out_grid")?;
        *slot = boxed(LpbmGrid(SphereGrid::new(n, resolution)?));
        Ok(())
    })
}

/// Release a grid. Null is ignored.
///
/// # Safety
/// `grid` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lpbm_grid_free(grid: *mut LpbmGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of grid nodes.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_grid_len(grid: *const LpbmGrid, out_len: *mut usize) -> LpbmStatus {
    guard(|| {
        let g = get(grid, "grid")?;
        *out(out_len, "out_len")? = g.0.len();
        Ok(())
    })
}

/// Intrinsic volume `V_j` by the default method for the body, with the
/// surface-integral grid at `resolution`. `out_error` may be null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_intrinsic_volume(
    body: *const LpbmBody,
    j: usize,
    resolution: usize,
    out_value: *mut f64,
    out_error: *mut f64,
) -> LpbmStatus {
    guard(|| {
        let b = get(body, "body")?;
        let slot = out(out_value, "out_value")?;
        let opts = VolumeOptions { resolution, ..VolumeOptions::default() };
        let e = intrinsic_volume(&b.0, j, &opts)?;
        *slot = e.value;
        if let Some(err) = out_error.as_mut() {
            *err = e.error;
        }
        Ok(())
    })
}

/// Evaluate the L_p inequality for `V_j` on the pair `(K, L)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_check_inequality(
    k: *const LpbmBody,
    l: *const LpbmBody,
    p: f64,
    lambda: f64,
    j: usize,
    out_verdict: *mut LpbmVerdict,
) -> LpbmStatus {
    guard(|| {
        let (k, l) = (get(k, "k")?, get(l, "l")?);
        let slot = out(out_verdict, "out_verdict")?;
        let v = check_lpbm(&k.0, &l.0, p, lambda, j, &VolumeOptions::default())?;
        *slot = LpbmVerdict {
            lhs: v.lhs,
            rhs_geometric: v.rhs_geo,
            rhs_p: v.rhs_p,
            margin_geometric: v.margin_geo,
            margin_p: v.margin_p,
        };
        Ok(())
    })
}

/// Smallest eigenvalue of the second-variation operator (n = 3, j = 2) on
/// even mean-zero fields, with harmonics up to `max_degree`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_spectral_gap(
    body: *const LpbmBody,
    grid: *const LpbmGrid,
    max_degree: usize,
    out_value: *mut f64,
) -> LpbmStatus {
    guard(|| {
        let (b, g) = (get(body, "body")?, get(grid, "grid")?);
        let slot = out(out_value, "out_value")?;
        *slot = lambda_1e(&assemble_operator(&b.0, 2, &g.0, max_degree)?)?;
        Ok(())
    })
}

/// Largest relative gap between parallel-body volumes and the Steiner
/// polynomial over the radii `rhos`.
///
/// # Safety
/// `rhos` must point to `count` values; pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_steiner_gap(
    body: *const LpbmBody,
    grid: *const LpbmGrid,
    rhos: *const f64,
    count: usize,
    out_gap: *mut f64,
) -> LpbmStatus {
    guard(|| {
        let (b, g) = (get(body, "body")?, get(grid, "grid")?);
        let r = slice(rhos, count, "rhos")?;
        let slot = out(out_gap, "out_gap")?;
        *slot = steiner_check(&b.0, &g.0, r)?;
        Ok(())
    })
}

/// Solve `h^(1-p) s_order(h) = 1 + eps Y` on S^2, where only `order = 1`
/// is supported and `Y` is the orthonormal zonal harmonic of degree 2. A failed solve returns `Numerical` and still fills
/// `out_summary` with the last iterate.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn lpbm_solve_quadrupole(
    order: usize,
    p: f64,
    eps: f64,
    allow_excluded_regime: bool,
    out_summary: *mut LpbmSolveSummary,
) -> LpbmStatus {
    guard(|| {
        let slot = out(out_summary, "out_summary")?;
        let y = HarmonicExpansion::new(3, &[HarmonicTerm { degree: 2, order: 0, value: eps }])?;
        let data = HarmonicExpansion::constant(3, 1.0)?.plus(&y)?;
        let options = ProblemOptions { allow_excluded_regime, ..ProblemOptions::default() };
        let problem = CMProblem::new(order, p, data, options)?;
        let r = newton_solve_from(&problem, None, &SolverConfig::default());
        *slot = LpbmSolveSummary {
            converged: r.converged(),
            iterations: r.iterations(),
            residual: r.residual(),
            min_h: r.min_h,
            max_h: r.max_h,
        };
        match r.failure {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}
