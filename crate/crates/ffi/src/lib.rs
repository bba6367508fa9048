//! C ABI over the `predictability` crate.
//!
//! Series are passed around as opaque `PredSeries` handles created by one of
//! the constructors and released with [`pred_series_free`]. Every fallible
//! function returns a [`PredStatus`]; on failure a human-readable message is
//! available from [`pred_last_error`] on the same thread. Outputs are written
//! through caller-provided pointers only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::panic::{catch_unwind, AssertUnwindSafe};

use predictability::{
    ber_predictability, empirical_predictability, entropy_predictability, extract_features,
    fano_solve, lz_entropy_rate, read_series, true_predictability, write_series, Error,
    GeneratorKind, GeneratorSpec, PredictabilityEstimate, Series,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidCutoff = 3,
    EmptyInput = 4,
    InsufficientData = 5,
    EmptySubset = 6,
    DegenerateDataset = 7,
    Parse = 8,
    OutOfValidatedRange = 9,
    InsufficientMemory = 10,
    Infeasible = 11,
    Io = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Synthetic generator family. Passing any other value is undefined behaviour.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredGeneratorKind {
    Markov3 = 0,
    Additive = 1,
    Copy = 2,
}

/// Generator parameters. `alphabet_size` is ignored for Markov3 (always 3);
/// `q` is used by Markov3 and Additive, `q1..q3` by Copy.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PredGenerator {
    pub kind: PredGeneratorKind,
    pub alphabet_size: usize,
    pub q: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// Predictability estimate with its bounds.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PredEstimate {
    pub lower: f64,
    pub upper: f64,
    pub point: f64,
}

/// Opaque series handle.
pub struct PredSeries(Series);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PredStatus {
    match e {
        Error::InvalidCutoff { .. } => PredStatus::InvalidCutoff,
        Error::EmptyInput(_) => PredStatus::EmptyInput,
        Error::Parameter { .. } => PredStatus::InvalidParameter,
        Error::InsufficientData(_) => PredStatus::InsufficientData,
        Error::EmptySubset => PredStatus::EmptySubset,
        Error::DegenerateDataset => PredStatus::DegenerateDataset,
        Error::Parse { .. } => PredStatus::Parse,
        Error::OutOfValidatedRange(_) => PredStatus::OutOfValidatedRange,
        Error::InsufficientMemory(_) => PredStatus::InsufficientMemory,
        Error::Infeasible(_) => PredStatus::Infeasible,
        Error::Io(_) => PredStatus::Io,
    }
}

struct Failure(PredStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PredStatus::NullPointer, format!("{what} is null"))
}

// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PredStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PredStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            PredStatus::Panic
        }
    }
}

unsafe fn series_ref<'a>(series: *const PredSeries) -> Result<&'a Series, Failure> {
    series.as_ref().map(|s| &s.0).ok_or_else(|| null("series"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg(path: *const c_char) -> Result<String, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| {
            Failure(
                PredStatus::InvalidParameter,
                "path is not valid UTF-8".into(),
            )
        })
}

fn kind_of(g: &PredGenerator) -> GeneratorKind {
    match g.kind {
        PredGeneratorKind::Markov3 => GeneratorKind::Markov3 { q: g.q },
        PredGeneratorKind::Additive => GeneratorKind::Additive {
            m: g.alphabet_size,
            q: g.q,
        },
        PredGeneratorKind::Copy => GeneratorKind::Copy {
            m: g.alphabet_size,
            q1: g.q1,
            q2: g.q2,
            q3: g.q3,
        },
    }
}

fn estimate(e: PredictabilityEstimate) -> PredEstimate {
    PredEstimate {
        lower: e.lower,
        upper: e.upper,
        point: e.point,
    }
}

unsafe fn emit_series(out: *mut *mut PredSeries, series: Series) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(PredSeries(series))));
    Ok(())
}

/// Message describing the last failed call on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn pred_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Simulates `n` states of `generator` seeded with `seed`.
///
/// # Safety
/// `generator` must point to a valid `PredGenerator`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_generate(
    generator: *const PredGenerator,
    n: usize,
    seed: u64,
    out: *mut *mut PredSeries,
) -> PredStatus {
    guard(|| {
        let g = generator.as_ref().ok_or_else(|| null("generator"))?;
        let series = GeneratorSpec {
            kind: kind_of(g),
            n,
            seed,
        }
        .generate()?;
        emit_series(out, series)
    })
}

/// Builds a series from `len` 0-based state indices.
///
/// # Safety
/// `states` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_series_from_states(
    alphabet_size: usize,
    states: *const u32,
    len: usize,
    out: *mut *mut PredSeries,
) -> PredStatus {
    guard(|| {
        if states.is_null() && len > 0 {
            return Err(null("states"));
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(states, len)
        };
        emit_series(out, Series::from_indices(alphabet_size, slice)?)
    })
}

/// Reads a series file (`M n` header followed by `n` state indices).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_series_read(
    path: *const c_char,
    out: *mut *mut PredSeries,
) -> PredStatus {
    guard(|| {
        let path = path_arg(path)?;
        let file = File::open(&path).map_err(Error::from)?;
        emit_series(out, read_series(BufReader::new(file))?)
    })
}

/// Writes `series` to `path` in the series file format.
///
/// # Safety
/// `series` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pred_series_write(
    series: *const PredSeries,
    path: *const c_char,
) -> PredStatus {
    guard(|| {
        let s = series_ref(series)?;
        let file = File::create(path_arg(path)?).map_err(Error::from)?;
        Ok(write_series(s, BufWriter::new(file))?)
    })
}

/// Number of states in `series`, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pred_series_len(series: *const PredSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

/// Alphabet size of `series`, or 0 for a null handle.
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pred_series_alphabet_size(series: *const PredSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.alphabet_size())
}

/// Copies the state indices into `buf`, which holds `capacity` values.
///
/// # Safety
/// `series` must be a live handle; `buf` must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn pred_series_copy_states(
    series: *const PredSeries,
    buf: *mut u32,
    capacity: usize,
) -> PredStatus {
    guard(|| {
        let s = series_ref(series)?;
        if capacity < s.len() {
            return Err(Failure(
                PredStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, series has {}", s.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        for (i, st) in s.states().iter().enumerate() {
            buf.add(i).write(st.0);
        }
        Ok(())
    })
}

/// Releases a handle. Null is accepted and ignored.
///
/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pred_series_free(series: *mut PredSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Lempel-Ziv entropy-rate estimate in bits per symbol.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_entropy_rate(series: *const PredSeries, out: *mut f64) -> PredStatus {
    guard(|| write_out(out, lz_entropy_rate(series_ref(series)?)?.bits_per_symbol))
}

/// Entropy-based predictability (lower = point = upper).
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_entropy_predictability(
    series: *const PredSeries,
    out: *mut PredEstimate,
) -> PredStatus {
    guard(|| write_out(out, estimate(entropy_predictability(series_ref(series)?)?)))
}

/// Bayes-error-based predictability with window length `r`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_ber_predictability(
    series: *const PredSeries,
    r: usize,
    out: *mut PredEstimate,
) -> PredStatus {
    guard(|| {
        let ds = extract_features(series_ref(series)?, r)?;
        write_out(out, estimate(ber_predictability(&ds)?))
    })
}

/// In-sample fraction of next states predicted by the majority rule over
/// windows of length `r`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_empirical_predictability(
    series: *const PredSeries,
    r: usize,
    out: *mut f64,
) -> PredStatus {
    guard(|| {
        let ds = extract_features(series_ref(series)?, r)?;
        write_out(out, empirical_predictability(&ds)?)
    })
}

/// Predictability implied by entropy `h` (bits) over `alphabet_size` states.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_fano_solve(
    h: f64,
    alphabet_size: usize,
    out: *mut f64,
) -> PredStatus {
    guard(|| write_out(out, fano_solve(h, alphabet_size)?))
}

/// Closed-form true predictability of `generator` at window length `r`.
///
/// # Safety
/// `generator` must point to a valid `PredGenerator`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pred_true_predictability(
    generator: *const PredGenerator,
    r: usize,
    out: *mut f64,
) -> PredStatus {
    guard(|| {
        let g = generator.as_ref().ok_or_else(|| null("generator"))?;
        let kind = kind_of(g);
        kind.validate()?;
        write_out(out, true_predictability(&kind, r)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_reported() {
        let mut v = 0.0;
        let status = unsafe { pred_entropy_rate(ptr::null(), &mut v) };
        assert_eq!(status, PredStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(pred_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "series is null");
        unsafe { pred_series_free(ptr::null_mut()) };
        assert_eq!(unsafe { pred_series_len(ptr::null()) }, 0);
    }

    #[test]
    fn every_error_maps_to_a_distinct_status() {
        let errors = [
            Error::InvalidCutoff { r: 0, n: 1 },
            Error::EmptyInput("x"),
            Error::Parameter {
                name: "q",
                reason: String::new(),
            },
            Error::InsufficientData(String::new()),
            Error::EmptySubset,
            Error::DegenerateDataset,
            Error::Parse {
                position: String::new(),
                reason: String::new(),
            },
            Error::OutOfValidatedRange(String::new()),
            Error::InsufficientMemory(String::new()),
            Error::Infeasible(String::new()),
            Error::Io(std::io::Error::other("x")),
        ];
        let mut codes: Vec<i32> = errors.iter().map(|e| status_of(e) as i32).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), errors.len());
        assert!(!codes.contains(&(PredStatus::Ok as i32)));
    }
}
