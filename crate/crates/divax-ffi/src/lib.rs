//! C ABI for the divax library: opaque distribution handles, status codes,
//! and a JSON-returning axiom suite, so other languages can bind without
//! touching Rust types.
//!
//! Conventions:
//! - Every fallible function returns a [`DivaxStatus`]; outputs go through
//!   pointers that are written only on `DIVAX_STATUS_OK`.
//! - `divax_last_error_message` returns a thread-local description of the
//!   most recent failure; the pointer stays valid until the next failing
//!   call on the same thread.
//! - Handles created by `divax_distribution_create` must be released with
//!   `divax_distribution_free`; strings returned by the suite with
//!   `divax_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use divax::axioms::{run_axiom_suite, SuiteConfig, Verdict};
use divax::divergence::{relative_entropy, relative_entropy_closed};
use divax::measure::TsallisDivergence;
use divax::qlog::{ln_alpha, Alpha};
use divax::report::{axioms_json, AxiomRow, ConfigEcho};
use divax::simplex::{DistPair, Distribution, DomainKind};

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: impl AsRef<str>) {
    let message = message.as_ref().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).unwrap_or_default();
    });
}

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivaxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainError = 3,
}

/// Domain selector for distribution handles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivaxDomain {
    Open = 0,
    Closed = 1,
}

impl From<DivaxDomain> for DomainKind {
    fn from(d: DivaxDomain) -> Self {
        match d {
            DivaxDomain::Open => DomainKind::Open,
            DivaxDomain::Closed => DomainKind::Closed,
        }
    }
}

/// Opaque validated probability vector.
pub struct DivaxDistribution {
    inner: Distribution,
}

/// Validate `entries[0..len]` as a probability vector on the given domain
/// and hand back an owned handle.
///
/// # Safety
/// `entries` must point to `len` readable doubles; `out` must be a valid
/// pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn divax_distribution_create(
    entries: *const f64,
    len: usize,
    domain: DivaxDomain,
    out: *mut *mut DivaxDistribution,
) -> DivaxStatus {
    if entries.is_null() || out.is_null() {
        set_last_error("null pointer");
        return DivaxStatus::NullPointer;
    }
    let slice = std::slice::from_raw_parts(entries, len);
    match Distribution::validate(slice.to_vec(), domain.into()) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DivaxDistribution { inner }));
            DivaxStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            DivaxStatus::InvalidArgument
        }
    }
}

/// Release a handle from `divax_distribution_create`. Null is a no-op.
///
/// # Safety
/// `dist` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn divax_distribution_free(dist: *mut DivaxDistribution) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of entries in the distribution.
///
/// # Safety
/// `dist` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn divax_distribution_len(dist: *const DivaxDistribution) -> usize {
    if dist.is_null() {
        return 0;
    }
    (*dist).inner.len()
}

/// The deformed logarithm `ln_alpha(x)`; requires `x > 0` and finite alpha.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn divax_ln_alpha(x: f64, alpha: f64, out: *mut f64) -> DivaxStatus {
    if out.is_null() {
        set_last_error("null pointer");
        return DivaxStatus::NullPointer;
    }
    let alpha = match Alpha::new(alpha) {
        Ok(a) => a,
        Err(e) => {
            set_last_error(e.to_string());
            return DivaxStatus::InvalidArgument;
        }
    };
    match ln_alpha(x, alpha) {
        Ok(v) => {
            *out = v;
            DivaxStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            DivaxStatus::DomainError
        }
    }
}

/// Relative entropy of `p` against `q` at the given alpha. The handles must
/// share length and domain; evaluation follows the handles' domain. On the
/// closed domain at alpha = 1 the value may be +infinity, reported through
/// `out_finite = 0` with `out_value` set to INFINITY.
///
/// # Safety
/// `p` and `q` must be live handles; `out_value` and `out_finite` valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn divax_relative_entropy(
    p: *const DivaxDistribution,
    q: *const DivaxDistribution,
    alpha: f64,
    out_value: *mut f64,
    out_finite: *mut i32,
) -> DivaxStatus {
    if p.is_null() || q.is_null() || out_value.is_null() || out_finite.is_null() {
        set_last_error("null pointer");
        return DivaxStatus::NullPointer;
    }
    let alpha = match Alpha::new(alpha) {
        Ok(a) => a,
        Err(e) => {
            set_last_error(e.to_string());
            return DivaxStatus::InvalidArgument;
        }
    };
    let pair = match DistPair::new((*p).inner.clone(), (*q).inner.clone()) {
        Ok(pair) => pair,
        Err(e) => {
            set_last_error(e.to_string());
            return DivaxStatus::InvalidArgument;
        }
    };
    let value = match pair.domain_kind() {
        DomainKind::Open => relative_entropy(&pair, alpha),
        DomainKind::Closed => relative_entropy_closed(&pair, alpha),
    };
    match value {
        Ok(v) => {
            *out_value = v.value();
            *out_finite = v.is_finite() as i32;
            DivaxStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            DivaxStatus::DomainError
        }
    }
}

/// Run the axiom suite for the closed-domain divergence family at one alpha
/// and return the JSON report (same schema as the CLI). The returned string
/// must be released with `divax_string_free`.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn divax_axiom_suite_json(
    alpha: f64,
    seed: u64,
    trials: u32,
    n_max: u32,
    out_json: *mut *mut c_char,
) -> DivaxStatus {
    if out_json.is_null() {
        set_last_error("null pointer");
        return DivaxStatus::NullPointer;
    }
    let alpha = match Alpha::new(alpha) {
        Ok(a) => a,
        Err(e) => {
            set_last_error(e.to_string());
            return DivaxStatus::InvalidArgument;
        }
    };
    let mut config = SuiteConfig::new(seed);
    config.trials = trials;
    config.n_max = n_max as usize;
    let measure = TsallisDivergence::closed(alpha);
    let reports = match run_axiom_suite(&measure, alpha, &config) {
        Ok(reports) => reports,
        Err(e) => {
            set_last_error(e.to_string());
            return DivaxStatus::InvalidArgument;
        }
    };
    let echo = ConfigEcho {
        command: "axioms".to_string(),
        alpha_grid: vec![alpha.value()],
        input: None,
        seed,
        trials,
        n_max: n_max as usize,
        format: "json".to_string(),
        rel_tol: config.tolerance.rel,
        abs_tol: config.tolerance.abs,
        domain: "closed".to_string(),
        threads: 1,
        measures: "standard".to_string(),
        initial_element: "divergence".to_string(),
        gamma: 3.0,
    };
    let rows: Vec<AxiomRow> = reports
        .into_iter()
        .map(|report| AxiomRow {
            measure: "divergence".to_string(),
            alpha: alpha.value(),
            expected: Verdict::Pass,
            report,
        })
        .collect();
    let json = axioms_json(&echo, &rows);
    match CString::new(json) {
        Ok(cstring) => {
            *out_json = cstring.into_raw();
            DivaxStatus::Ok
        }
        Err(_) => {
            set_last_error("report contained an interior NUL");
            DivaxStatus::InvalidArgument
        }
    }
}

/// Release a string returned by `divax_axiom_suite_json`. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn divax_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the most recent failure on this thread. Valid until the
/// next failing call from the same thread; never null.
#[no_mangle]
pub extern "C" fn divax_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}
