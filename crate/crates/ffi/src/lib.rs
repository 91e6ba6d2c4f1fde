//! C interface to the `modorbit` engine.
//!
//! Every fallible function returns an [`MoStatus`]; on failure a message is
//! available from [`mo_last_error`] on the same thread. Handles are opaque and
//! must be released with the matching `*_free` function. Strings returned by
//! the library are released with [`mo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modorbit::analytic::{density_eps, density_gamma, s_partial, table_statistic};
use modorbit::baseline::sample_rho;
use modorbit::dynamics::{parse_map, parse_point, ProjectiveMorphism};
use modorbit::orbit::{orbit_census_with, Census, CensusOptions, Convention};
use modorbit::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Indeterminate = 5,
    FiniteOrbit = 6,
    DimensionMismatch = 7,
    Io = 8,
    OutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoConvention {
    Orbit = 0,
    Cycle = 1,
}

/// A parsed morphism of projective space.
pub struct MoMap(ProjectiveMorphism);

/// Orbit sizes modulo every prime up to a limit.
pub struct MoCensus(Census);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MoRecord {
    pub p: u64,
    pub tail: u64,
    pub cycle: u64,
    /// Nonzero when the orbit size is infinite; `tail` and `cycle` are then 0.
    pub bad: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MoRhoSample {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub mean_tail: f64,
    pub mean_cycle: f64,
    pub mean_rho: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> MoStatus {
    match err {
        Error::Parse { .. } => MoStatus::Parse,
        Error::Indeterminate { .. } => MoStatus::Indeterminate,
        Error::FiniteOrbit { .. } => MoStatus::FiniteOrbit,
        Error::DimensionMismatch { .. } => MoStatus::DimensionMismatch,
        Error::Io(_) => MoStatus::Io,
        _ => MoStatus::InvalidArgument,
    }
}

struct Failure(MoStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MoStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(MoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn mo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn mo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a map such as `"z^2+1"` or a `map PN` block.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mo_map_parse(text: *const c_char, out: *mut *mut MoMap) -> MoStatus {
    guard(|| {
        let phi = parse_map(read_str(text, "map text")?)?;
        write_out(out, Box::into_raw(Box::new(MoMap(phi))))
    })
}

/// # Safety
/// `map` must be null or a handle from [`mo_map_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn mo_map_free(map: *mut MoMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Display form of the map; free with [`mo_string_free`].
///
/// # Safety
/// `map` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mo_map_to_string(map: *const MoMap) -> *mut c_char {
    match map.as_ref() {
        Some(m) => into_c_string(m.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// Orbit census of `start` (e.g. `"0"`, `"1/2"`, `"[1,0]"`) for primes up to
/// `limit`. `jobs = 0` uses the default thread pool.
///
/// # Safety
/// `map` must be a live handle, `start` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_census_compute(
    map: *const MoMap,
    start: *const c_char,
    limit: u64,
    jobs: u32,
    out: *mut *mut MoCensus,
) -> MoStatus {
    guard(|| {
        let phi = handle(map, "map")?;
        let point = parse_point(read_str(start, "start point")?)?;
        let options = CensusOptions {
            jobs: (jobs > 0).then_some(jobs as usize),
            ..CensusOptions::default()
        };
        let census = orbit_census_with(&phi.0, &point, limit, options)?;
        write_out(out, Box::into_raw(Box::new(MoCensus(census))))
    })
}

/// Reads a census from CSV text with header `p,s,r,m,bad`. `limit = 0` takes
/// the largest prime as the limit.
///
/// # Safety
/// `csv` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_census_from_csv(csv: *const c_char, limit: u64, out: *mut *mut MoCensus) -> MoStatus {
    guard(|| {
        let body = read_str(csv, "csv")?;
        let census = Census::read_csv(body.as_bytes(), (limit > 0).then_some(limit))?;
        write_out(out, Box::into_raw(Box::new(MoCensus(census))))
    })
}

/// # Safety
/// `census` must be null or a census handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn mo_census_free(census: *mut MoCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}

/// Number of primes in the census; 0 for a null handle.
///
/// # Safety
/// `census` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mo_census_len(census: *const MoCensus) -> usize {
    census.as_ref().map_or(0, |c| c.0.records.len())
}

/// # Safety
/// `census` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_census_record(census: *const MoCensus, index: usize, out: *mut MoRecord) -> MoStatus {
    guard(|| {
        let c = handle(census, "census")?;
        let r = c.0.records.get(index).ok_or_else(|| {
            Failure(
                MoStatus::OutOfRange,
                format!("index {index} out of range for {} records", c.0.records.len()),
            )
        })?;
        let record = match r.rho {
            Some(rho) => MoRecord {
                p: r.p,
                tail: rho.tail,
                cycle: rho.cycle,
                bad: 0,
            },
            None => MoRecord {
                p: r.p,
                bad: 1,
                ..MoRecord::default()
            },
        };
        write_out(out, record)
    })
}

/// Selects which orbit size the statistics below use.
///
/// # Safety
/// `census` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mo_census_set_convention(census: *mut MoCensus, convention: MoConvention) -> MoStatus {
    guard(|| {
        let c = census.as_mut().ok_or_else(|| null("census"))?;
        c.0.convention = match convention {
            MoConvention::Orbit => Convention::Orbit,
            MoConvention::Cycle => Convention::Cycle,
        };
        Ok(())
    })
}

/// CSV form of the census; free with [`mo_string_free`].
///
/// # Safety
/// `census` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mo_census_to_csv(census: *const MoCensus) -> *mut c_char {
    match census.as_ref() {
        Some(c) => into_c_string(c.0.to_csv_string()),
        None => ptr::null_mut(),
    }
}

/// `(1/log X) sum_{p <= X} log p / m_p^exponent`.
///
/// # Safety
/// `census` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_table_statistic(census: *const MoCensus, exponent: f64, out: *mut f64) -> MoStatus {
    guard(|| {
        let c = handle(census, "census")?;
        write_out(out, table_statistic(&c.0, exponent)?)
    })
}

/// Weighted mass of primes with `m_p >= (log p)^gamma`.
///
/// # Safety
/// `census` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_density_gamma(census: *const MoCensus, gamma: f64, out: *mut f64) -> MoStatus {
    guard(|| {
        let c = handle(census, "census")?;
        write_out(out, density_gamma(&c.0, gamma)?.mass)
    })
}

/// Weighted mass of primes with `m_p >= eps log p`.
///
/// # Safety
/// `census` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_density_eps(census: *const MoCensus, eps: f64, out: *mut f64) -> MoStatus {
    guard(|| {
        let c = handle(census, "census")?;
        write_out(out, density_eps(&c.0, eps)?.mass)
    })
}

/// `S(lambda, s) = sum_{p <= X} (log p / p) exp(-s m_p^lambda)`.
///
/// # Safety
/// `census` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mo_s_partial(census: *const MoCensus, lambda: f64, s: f64, out: *mut f64) -> MoStatus {
    guard(|| {
        let c = handle(census, "census")?;
        write_out(out, s_partial(&c.0, lambda, s)?.value)
    })
}

/// Mean tail, cycle and rho length of `trials` random self-maps of an
/// `n`-element set.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mo_sample_rho(n: u64, trials: u64, seed: u64, out: *mut MoRhoSample) -> MoStatus {
    guard(|| {
        let s = sample_rho(n, trials, seed)?;
        write_out(
            out,
            MoRhoSample {
                n: s.n,
                trials: s.trials,
                seed: s.seed,
                mean_tail: s.mean_tail,
                mean_cycle: s.mean_cycle,
                mean_rho: s.mean_rho,
            },
        )
    })
}
