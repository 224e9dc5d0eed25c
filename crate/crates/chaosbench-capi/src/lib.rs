//! C ABI for the chaosbench library.
//!
//! Conventions:
//! - Systems and trajectories are opaque handles, freed with the matching
//!   `*_free` function.
//! - Fallible functions return a `ChaosStatus` code; `CHAOS_OK` is 0.
//! - On failure, a thread-local message is readable through
//!   `chaos_last_error_message` until the next failing call on the same
//!   thread.
//! - Output buffers are caller-allocated; size-query functions report the
//!   required lengths.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::sync::OnceLock;

use chaosbench::registry::{self, SystemSpec};
use chaosbench::trajectory::Trajectory;
use chaosbench::{characterize, integrate, ChaosError};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaosStatus {
    /// Success.
    ChaosOk = 0,
    /// A required pointer argument was null.
    ChaosNullPointer = 1,
    /// A string argument was not valid UTF-8.
    ChaosInvalidUtf8 = 2,
    /// No registered system has the requested name.
    ChaosUnknownSystem = 3,
    /// An argument was out of range or inconsistent.
    ChaosInvalidArgument = 4,
    /// The computation failed numerically (divergence, non-convergence...).
    ChaosNumericalFailure = 5,
    /// The supplied buffer is too small.
    ChaosBufferTooSmall = 6,
    /// The system carries no precomputed annotations.
    ChaosMissingAnnotation = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_for(e: &ChaosError) -> ChaosStatus {
    match e {
        ChaosError::UnknownSystem { .. } => ChaosStatus::ChaosUnknownSystem,
        ChaosError::InvalidArgument(_)
        | ChaosError::InvalidPlan(_)
        | ChaosError::InvalidHorizon(_)
        | ChaosError::DimensionMismatch { .. } => ChaosStatus::ChaosInvalidArgument,
        ChaosError::MissingAnnotation { .. } => ChaosStatus::ChaosMissingAnnotation,
        _ => ChaosStatus::ChaosNumericalFailure,
    }
}

fn fail(e: &ChaosError) -> ChaosStatus {
    set_error(&e.to_string());
    status_for(e)
}

/// Opaque handle to a registered dynamical system.
pub struct ChaosSystem {
    spec: &'static SystemSpec,
}

/// Opaque handle to a uniformly sampled trajectory.
pub struct ChaosTrajectory {
    traj: Trajectory,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn chaos_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION
        .get_or_init(|| CString::new(env!("CARGO_PKG_VERSION")).unwrap())
        .as_ptr()
}

/// Message of the last error raised on this thread (empty if none). The
/// pointer is valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn chaos_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Number of registered systems.
#[no_mangle]
pub extern "C" fn chaos_system_count() -> usize {
    registry::all_systems().count()
}

fn static_names() -> &'static [CString] {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    NAMES.get_or_init(|| {
        registry::all_systems()
            .map(|s| CString::new(s.name).unwrap())
            .collect()
    })
}

/// Name of the system at `index` (registry order), or null when out of
/// range. The pointer is static.
#[no_mangle]
pub extern "C" fn chaos_system_name_at(index: usize) -> *const c_char {
    match static_names().get(index) {
        Some(name) => name.as_ptr(),
        None => ptr::null(),
    }
}

/// Look a system up by name. On success `*out` owns a new handle that must
/// be released with `chaos_system_free`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_lookup(
    name: *const c_char,
    out: *mut *mut ChaosSystem,
) -> ChaosStatus {
    if name.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let name = match CStr::from_ptr(name).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("system name is not valid UTF-8");
            return ChaosStatus::ChaosInvalidUtf8;
        }
    };
    match registry::lookup(name) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(ChaosSystem { spec }));
            ChaosStatus::ChaosOk
        }
        Err(e) => fail(&e),
    }
}

/// Release a system handle. Null is a no-op.
///
/// # Safety
/// `system` must come from `chaos_system_lookup` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_free(system: *mut ChaosSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// State-space dimension, or 0 for a null handle.
///
/// # Safety
/// `system` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_dimension(system: *const ChaosSystem) -> usize {
    if system.is_null() {
        return 0;
    }
    (*system).spec.dimension
}

/// Recommended integration timestep.
///
/// # Safety
/// `system` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_dt(system: *const ChaosSystem) -> f64 {
    if system.is_null() {
        return f64::NAN;
    }
    (*system).spec.dt
}

/// Dominant timescale (time units).
///
/// # Safety
/// `system` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_period(system: *const ChaosSystem) -> f64 {
    if system.is_null() {
        return f64::NAN;
    }
    (*system).spec.period
}

/// Copy the default initial condition into `buffer` (length
/// `buffer_len` doubles; must be >= the system dimension).
///
/// # Safety
/// `system` must be live; `buffer` must point to `buffer_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_initial_condition(
    system: *const ChaosSystem,
    buffer: *mut f64,
    buffer_len: usize,
) -> ChaosStatus {
    if system.is_null() || buffer.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let ic = &(*system).spec.default_initial_condition;
    if buffer_len < ic.len() {
        set_error("buffer too small for the initial condition");
        return ChaosStatus::ChaosBufferTooSmall;
    }
    ptr::copy_nonoverlapping(ic.as_ptr(), buffer, ic.len());
    ChaosStatus::ChaosOk
}

/// Annotated largest Lyapunov exponent, written to `*out`.
///
/// # Safety
/// `system` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaos_system_largest_lyapunov(
    system: *const ChaosSystem,
    out: *mut f64,
) -> ChaosStatus {
    if system.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    match (*system).spec.annotations.as_ref() {
        Some(ann) => {
            *out = ann.largest_lyapunov;
            ChaosStatus::ChaosOk
        }
        None => {
            set_error("system carries no annotations");
            ChaosStatus::ChaosMissingAnnotation
        }
    }
}

/// Integrate with the fixed-step RK4 scheme from `ic` (length `dim`):
/// `n_steps` steps of size `dt`, producing `n_steps + 1` samples. On
/// success `*out` owns a trajectory handle.
///
/// # Safety
/// `system` must be live; `ic` must point to `dim` doubles; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chaos_integrate_fixed(
    system: *const ChaosSystem,
    ic: *const f64,
    dim: usize,
    dt: f64,
    n_steps: usize,
    out: *mut *mut ChaosTrajectory,
) -> ChaosStatus {
    if system.is_null() || ic.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let ic = std::slice::from_raw_parts(ic, dim);
    match integrate::integrate_fixed((*system).spec, ic, dt, n_steps) {
        Ok(traj) => {
            *out = Box::into_raw(Box::new(ChaosTrajectory { traj }));
            ChaosStatus::ChaosOk
        }
        Err(e) => fail(&e),
    }
}

/// Release a trajectory handle. Null is a no-op.
///
/// # Safety
/// `trajectory` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn chaos_trajectory_free(trajectory: *mut ChaosTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Number of samples in a trajectory (0 for null).
///
/// # Safety
/// `trajectory` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chaos_trajectory_len(trajectory: *const ChaosTrajectory) -> usize {
    if trajectory.is_null() {
        return 0;
    }
    (*trajectory).traj.len()
}

/// State-space dimension of a trajectory (0 for null).
///
/// # Safety
/// `trajectory` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn chaos_trajectory_dim(trajectory: *const ChaosTrajectory) -> usize {
    if trajectory.is_null() {
        return 0;
    }
    (*trajectory).traj.dim
}

/// Copy the sample times (length `len`) into `buffer`.
///
/// # Safety
/// `trajectory` must be live; `buffer` must point to `buffer_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chaos_trajectory_times(
    trajectory: *const ChaosTrajectory,
    buffer: *mut f64,
    buffer_len: usize,
) -> ChaosStatus {
    if trajectory.is_null() || buffer.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let times = &(*trajectory).traj.times;
    if buffer_len < times.len() {
        set_error("buffer too small for the trajectory times");
        return ChaosStatus::ChaosBufferTooSmall;
    }
    ptr::copy_nonoverlapping(times.as_ptr(), buffer, times.len());
    ChaosStatus::ChaosOk
}

/// Copy the row-major `len * dim` state matrix into `buffer`.
///
/// # Safety
/// `trajectory` must be live; `buffer` must point to `buffer_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chaos_trajectory_states(
    trajectory: *const ChaosTrajectory,
    buffer: *mut f64,
    buffer_len: usize,
) -> ChaosStatus {
    if trajectory.is_null() || buffer.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let states = &(*trajectory).traj.states;
    if buffer_len < states.len() {
        set_error("buffer too small for the trajectory states");
        return ChaosStatus::ChaosBufferTooSmall;
    }
    ptr::copy_nonoverlapping(states.as_ptr(), buffer, states.len());
    ChaosStatus::ChaosOk
}

/// Estimate the Lyapunov spectrum and copy it into `buffer` (length
/// `buffer_len` doubles, must be >= the system dimension). Runs the same
/// replicated estimator as the library's characterization module.
///
/// # Safety
/// `system` must be live; `buffer` must point to `buffer_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn chaos_lyapunov_spectrum(
    system: *const ChaosSystem,
    n_periods: usize,
    replicates: usize,
    seed: u64,
    tolerance: f64,
    buffer: *mut f64,
    buffer_len: usize,
) -> ChaosStatus {
    if system.is_null() || buffer.is_null() {
        set_error("null pointer argument");
        return ChaosStatus::ChaosNullPointer;
    }
    let spec = (*system).spec;
    if buffer_len < spec.dimension {
        set_error("buffer too small for the Lyapunov spectrum");
        return ChaosStatus::ChaosBufferTooSmall;
    }
    match characterize::lyapunov_spectrum(spec, n_periods, replicates, seed, tolerance) {
        Ok(spectrum) => {
            ptr::copy_nonoverlapping(spectrum.exponents.as_ptr(), buffer, spec.dimension);
            ChaosStatus::ChaosOk
        }
        Err(e) => fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lookup(name: &str) -> *mut ChaosSystem {
        let cname = CString::new(name).unwrap();
        let mut handle: *mut ChaosSystem = ptr::null_mut();
        let status = unsafe { chaos_system_lookup(cname.as_ptr(), &mut handle) };
        assert_eq!(status, ChaosStatus::ChaosOk);
        handle
    }

    #[test]
    fn lookup_accessors_and_free() {
        let sys = lookup("Lorenz");
        unsafe {
            assert_eq!(chaos_system_dimension(sys), 3);
            assert!((chaos_system_period(sys) - 1.49).abs() < 1e-12);
            let mut ic = [0.0; 3];
            assert_eq!(
                chaos_system_initial_condition(sys, ic.as_mut_ptr(), 3),
                ChaosStatus::ChaosOk
            );
            assert!(ic.iter().all(|v| v.is_finite()));
            let mut lle = 0.0;
            assert_eq!(
                chaos_system_largest_lyapunov(sys, &mut lle),
                ChaosStatus::ChaosOk
            );
            assert!((lle - 0.906).abs() < 0.05);
            chaos_system_free(sys);
        }
    }

    #[test]
    fn unknown_system_sets_the_error_message() {
        let cname = CString::new("NoSuchSystem").unwrap();
        let mut handle: *mut ChaosSystem = ptr::null_mut();
        let status = unsafe { chaos_system_lookup(cname.as_ptr(), &mut handle) };
        assert_eq!(status, ChaosStatus::ChaosUnknownSystem);
        let msg = unsafe { CStr::from_ptr(chaos_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("NoSuchSystem"));
    }

    #[test]
    fn integrate_round_trip_matches_the_rust_api() {
        let sys = lookup("Lorenz");
        unsafe {
            let mut ic = [0.0; 3];
            chaos_system_initial_condition(sys, ic.as_mut_ptr(), 3);
            let dt = chaos_system_dt(sys);
            let mut traj: *mut ChaosTrajectory = ptr::null_mut();
            let status = chaos_integrate_fixed(sys, ic.as_ptr(), 3, dt, 100, &mut traj);
            assert_eq!(status, ChaosStatus::ChaosOk);
            assert_eq!(chaos_trajectory_len(traj), 101);
            assert_eq!(chaos_trajectory_dim(traj), 3);
            let mut states = vec![0.0; 101 * 3];
            assert_eq!(
                chaos_trajectory_states(traj, states.as_mut_ptr(), states.len()),
                ChaosStatus::ChaosOk
            );
            let spec = registry::lookup("Lorenz").unwrap();
            let reference = integrate::integrate_fixed(spec, &ic, dt, 100).unwrap();
            assert_eq!(states, reference.states);
            let mut times = vec![0.0; 101];
            assert_eq!(
                chaos_trajectory_times(traj, times.as_mut_ptr(), times.len()),
                ChaosStatus::ChaosOk
            );
            assert_eq!(times, reference.times);
            chaos_trajectory_free(traj);
            chaos_system_free(sys);
        }
    }

    #[test]
    fn buffer_too_small_is_reported() {
        let sys = lookup("Lorenz");
        unsafe {
            let mut ic = [0.0; 2];
            assert_eq!(
                chaos_system_initial_condition(sys, ic.as_mut_ptr(), 2),
                ChaosStatus::ChaosBufferTooSmall
            );
            chaos_system_free(sys);
        }
    }

    #[test]
    fn null_arguments_do_not_crash() {
        unsafe {
            assert_eq!(chaos_system_dimension(ptr::null()), 0);
            assert_eq!(chaos_trajectory_len(ptr::null()), 0);
            let mut handle: *mut ChaosSystem = ptr::null_mut();
            assert_eq!(
                chaos_system_lookup(ptr::null(), &mut handle),
                ChaosStatus::ChaosNullPointer
            );
            chaos_system_free(ptr::null_mut());
            chaos_trajectory_free(ptr::null_mut());
        }
    }

    #[test]
    fn name_listing_covers_the_registry() {
        let count = chaos_system_count();
        assert!(count >= 20);
        let mut names = Vec::new();
        for i in 0..count {
            let p = chaos_system_name_at(i);
            assert!(!p.is_null());
            names.push(unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string());
        }
        assert!(names.iter().any(|n| n == "Lorenz"));
        assert!(chaos_system_name_at(count).is_null());
    }

    #[test]
    fn spectrum_through_the_ffi_matches_the_annotation_scale() {
        let sys = lookup("Lorenz");
        unsafe {
            let mut buf = [0.0; 3];
            let status =
                chaos_lyapunov_spectrum(sys, 5, 3, 0, 2e-3, buf.as_mut_ptr(), 3);
            assert_eq!(status, ChaosStatus::ChaosOk);
            assert!((buf[0] - 0.906).abs() < 0.1, "{}", buf[0]);
            chaos_system_free(sys);
        }
    }
}
