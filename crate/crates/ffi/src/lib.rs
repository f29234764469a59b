//! C ABI for the backaction library.
//!
//! Scenarios are opaque handles created from the same JSON problem format the
//! CLI reads. Every function returns a [`BaStatus`] code; out-parameters are
//! only written on `BA_OK`. Strings passed in are not retained; buffers
//! passed out are caller-owned.
//!
//! The generated header lives at `include/backaction.h`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use backaction::bound::tradeoff_bound;
use backaction::divergence::{js_divergence_slices, relative_entropy_slices};
use backaction::error::Error;
use backaction::oracle::s2_min_numeric;
use backaction::problem::{parse_problem, Problem};
use backaction::quantum::{born_distribution, disturbed_distribution, ProbDist};
use backaction::report::{canonical_json, AnalyzeReport, BoundSection};
use backaction::synthesis::zezd_basis;
use backaction::Seed;

/// Status codes for every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaStatus {
    BaOk = 0,
    BaErrNullArgument = 1,
    BaErrUtf8 = 2,
    BaErrParse = 3,
    BaErrValidation = 4,
    BaErrDimension = 5,
    BaErrPrecondition = 6,
    BaErrNoZezd = 7,
    BaErrUnsupported = 8,
    BaErrDegenerate = 9,
    BaErrResourceLimit = 10,
    BaErrBufferTooSmall = 11,
    BaErrPanic = 12,
}

fn status_of(e: &Error) -> BaStatus {
    match e {
        Error::Dimension { .. } => BaStatus::BaErrDimension,
        Error::Precondition(_) => BaStatus::BaErrPrecondition,
        Error::Unsupported(_) => BaStatus::BaErrUnsupported,
        Error::NoZezd(_) => BaStatus::BaErrNoZezd,
        Error::Degenerate(_) => BaStatus::BaErrDegenerate,
        Error::ResourceLimit(_) => BaStatus::BaErrResourceLimit,
        Error::Validation(_) => BaStatus::BaErrValidation,
        Error::Parse(_) => BaStatus::BaErrParse,
    }
}

/// Opaque parsed scenario.
pub struct BaScenario {
    problem: Problem,
}

fn guarded(f: impl FnOnce() -> BaStatus) -> BaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(BaStatus::BaErrPanic)
}

/// Parses a NUL-terminated JSON problem document into a scenario handle.
///
/// # Safety
/// `json` must point to a valid NUL-terminated string and `out` to a
/// writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_from_json(
    json: *const c_char,
    out: *mut *mut BaScenario,
) -> BaStatus {
    if json.is_null() || out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return BaStatus::BaErrUtf8,
        };
        match parse_problem(text) {
            Ok(problem) => {
                *out = Box::into_raw(Box::new(BaScenario { problem }));
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a scenario handle. A null handle is a no-op.
///
/// # Safety
/// `handle` must have come from `ba_scenario_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_free(handle: *mut BaScenario) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Hilbert-space dimension of the scenario; 0 for a null handle.
///
/// # Safety
/// `handle` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ba_scenario_dimension(handle: *const BaScenario) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).problem.scenario.dim()
}

/// Lower bound on error + disturbance for two explicit distributions of
/// length `d`. `zezd_possible` is 1 when the bound is zero because the first
/// distribution majorizes the second.
///
/// # Safety
/// `p` and `q` must point to `d` doubles; `bound_out` and
/// `zezd_possible_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_tradeoff_bound(
    p: *const f64,
    q: *const f64,
    d: usize,
    bound_out: *mut f64,
    zezd_possible_out: *mut i32,
) -> BaStatus {
    if p.is_null() || q.is_null() || bound_out.is_null() || zezd_possible_out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        let pv = slice::from_raw_parts(p, d).to_vec();
        let qv = slice::from_raw_parts(q, d).to_vec();
        let run = || -> Result<(f64, bool), Error> {
            let report = tradeoff_bound(&ProbDist::new(pv)?, &ProbDist::new(qv)?)?;
            Ok((report.bound, report.zezd_possible))
        };
        match run() {
            Ok((bound, zezd)) => {
                *bound_out = bound;
                *zezd_possible_out = zezd as i32;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Doubled Jensen–Shannon divergence of two length-`d` distributions, nats.
///
/// # Safety
/// `p1`, `p2` must point to `d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_js_divergence(
    p1: *const f64,
    p2: *const f64,
    d: usize,
    out: *mut f64,
) -> BaStatus {
    if p1.is_null() || p2.is_null() || out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        match js_divergence_slices(
            slice::from_raw_parts(p1, d),
            slice::from_raw_parts(p2, d),
        ) {
            Ok(v) => {
                *out = v;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Relative entropy D(p‖r) in nats; +infinity on support violations.
///
/// # Safety
/// `p`, `r` must point to `d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_relative_entropy(
    p: *const f64,
    r: *const f64,
    d: usize,
    out: *mut f64,
) -> BaStatus {
    if p.is_null() || r.is_null() || out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        match relative_entropy_slices(slice::from_raw_parts(p, d), slice::from_raw_parts(r, d)) {
            Ok(v) => {
                *out = v;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Full analysis (distributions, verdict, bound) of a scenario as canonical
/// JSON. Writes at most `cap` bytes including the trailing NUL; on
/// `BA_ERR_BUFFER_TOO_SMALL` the required capacity is stored in `written`.
///
/// # Safety
/// `handle` must be valid; `buf` must have space for `cap` bytes; `written`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_analyze_json(
    handle: *const BaScenario,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> BaStatus {
    if handle.is_null() || buf.is_null() || written.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        let problem = &(*handle).problem;
        let run = || -> Result<String, Error> {
            let s = &problem.scenario;
            let p = s.ideal_p()?;
            let q = s.ideal_q()?;
            let report = tradeoff_bound(&p, &q)?;
            let verdict = if report.zezd_possible {
                "P>Q"
            } else if backaction::majorization::majorizes(&report.sorted_q, &report.sorted_p)? {
                "Q>P"
            } else {
                "incomparable"
            };
            canonical_json(&AnalyzeReport {
                dimension: s.dim(),
                eta: problem.eta,
                p: p.values().to_vec(),
                q: q.values().to_vec(),
                verdict: verdict.to_string(),
                bound: BoundSection::from_report(&report),
                oracle: None,
            })
        };
        match run() {
            Ok(json) => {
                let needed = json.len() + 1;
                if cap < needed {
                    *written = needed;
                    return BaStatus::BaErrBufferTooSmall;
                }
                let bytes = json.as_bytes();
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
                *buf.add(bytes.len()) = 0;
                *written = needed;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Zero-error zero-disturbance measurement basis for a pure scenario in the
/// majorization regime. `signs` selects the branch (d−1 bytes, 0 or 1; null
/// means all zeros). The basis is written as d×d complex entries in row-major
/// order, interleaved re/im (2·d·d doubles); row i is the vector for outcome
/// label i.
///
/// # Safety
/// `handle` must be valid; `signs` must be null or point to `signs_len`
/// bytes; `basis_out` must have room for `2·d·d` doubles.
#[no_mangle]
pub unsafe extern "C" fn ba_zezd_basis(
    handle: *const BaScenario,
    signs: *const u8,
    signs_len: usize,
    basis_out: *mut f64,
) -> BaStatus {
    if handle.is_null() || basis_out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        let s = &(*handle).problem.scenario;
        let d = s.dim();
        let bits: Vec<bool> = if signs.is_null() {
            vec![false; d - 1]
        } else {
            slice::from_raw_parts(signs, signs_len)
                .iter()
                .map(|&b| b != 0)
                .collect()
        };
        match zezd_basis(s, &bits) {
            Ok(basis) => {
                for (i, v) in basis.vectors().iter().enumerate() {
                    for (j, z) in v.iter().enumerate() {
                        *basis_out.add(2 * (i * d + j)) = z.re;
                        *basis_out.add(2 * (i * d + j) + 1) = z.im;
                    }
                }
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Error + disturbance (nats) of a caller-supplied measurement basis on the
/// scenario, with native outcome labels. The basis uses the same layout as
/// `ba_zezd_basis` writes.
///
/// # Safety
/// `handle` must be valid; `basis` must point to `2·d·d` doubles; the out
/// pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_err_dis(
    handle: *const BaScenario,
    basis: *const f64,
    err_out: *mut f64,
    dis_out: *mut f64,
) -> BaStatus {
    if handle.is_null() || basis.is_null() || err_out.is_null() || dis_out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        let s = &(*handle).problem.scenario;
        let d = s.dim();
        let raw = slice::from_raw_parts(basis, 2 * d * d);
        let vectors: Vec<Vec<backaction::Complex64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        backaction::Complex64::new(raw[2 * (i * d + j)], raw[2 * (i * d + j) + 1])
                    })
                    .collect()
            })
            .collect();
        let run = || -> Result<(f64, f64), Error> {
            let meas = backaction::Basis::new(vectors)?;
            let p = s.ideal_p()?;
            let q = s.ideal_q()?;
            let pp = born_distribution(s.state(), &meas)?;
            let qt = disturbed_distribution(s.state(), &meas, s.basis_b())?;
            Ok((
                backaction::divergence::relative_entropy(&p, &pp)?,
                backaction::divergence::relative_entropy(&q, &qt)?,
            ))
        };
        match run() {
            Ok((err, dis)) => {
                *err_out = err;
                *dis_out = dis;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Numerical oracle minimum of error + disturbance over candidate bases.
///
/// # Safety
/// `handle` must be valid; `min_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ba_oracle_min(
    handle: *const BaScenario,
    budget: u64,
    seed: u64,
    min_out: *mut f64,
) -> BaStatus {
    if handle.is_null() || min_out.is_null() {
        return BaStatus::BaErrNullArgument;
    }
    guarded(|| {
        match s2_min_numeric(&(*handle).problem.scenario, budget, Seed(seed)) {
            Ok(r) => {
                *min_out = r.min_value;
                BaStatus::BaOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ba_status_message(status: BaStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        BaStatus::BaOk => b"ok\0",
        BaStatus::BaErrNullArgument => b"null argument\0",
        BaStatus::BaErrUtf8 => b"input is not valid UTF-8\0",
        BaStatus::BaErrParse => b"problem file could not be parsed\0",
        BaStatus::BaErrValidation => b"input failed numeric validation\0",
        BaStatus::BaErrDimension => b"dimension mismatch\0",
        BaStatus::BaErrPrecondition => b"operation precondition violated\0",
        BaStatus::BaErrNoZezd => b"no zero-error zero-disturbance basis exists\0",
        BaStatus::BaErrUnsupported => b"unsupported input for this operation\0",
        BaStatus::BaErrDegenerate => b"degenerate input\0",
        BaStatus::BaErrResourceLimit => b"resource limit exceeded\0",
        BaStatus::BaErrBufferTooSmall => b"output buffer too small\0",
        BaStatus::BaErrPanic => b"internal panic\0",
    };
    msg.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn qubit_json() -> CString {
        CString::new(
            r#"{
  "dimension": 2,
  "state": {"type": "pure", "data": [[0.9510565162951535, 0.0], [0.3090169943749474, 0.0]]},
  "basis_a": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
  "basis_b": [[[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]],
              [[0.7071067811865476, 0.0], [-0.7071067811865476, 0.0]]]
}"#,
        )
        .unwrap()
    }

    #[test]
    fn scenario_lifecycle_and_analysis() {
        unsafe {
            let mut handle: *mut BaScenario = std::ptr::null_mut();
            let st = ba_scenario_from_json(qubit_json().as_ptr(), &mut handle);
            assert_eq!(st, BaStatus::BaOk);
            assert_eq!(ba_scenario_dimension(handle), 2);

            let mut needed = 0usize;
            let mut small = vec![0i8; 8];
            let st = ba_analyze_json(handle, small.as_mut_ptr(), small.len(), &mut needed);
            assert_eq!(st, BaStatus::BaErrBufferTooSmall);
            let mut buf = vec![0i8; needed];
            let st = ba_analyze_json(handle, buf.as_mut_ptr(), buf.len(), &mut needed);
            assert_eq!(st, BaStatus::BaOk);
            let text = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
            assert!(text.contains("\"verdict\": \"P>Q\""), "{text}");

            ba_scenario_free(handle);
        }
    }

    #[test]
    fn bound_and_divergences() {
        unsafe {
            let p = [0.727, 0.273];
            let q = [0.978, 0.022];
            let mut bound = 0.0;
            let mut zezd = -1;
            let st = ba_tradeoff_bound(p.as_ptr(), q.as_ptr(), 2, &mut bound, &mut zezd);
            assert_eq!(st, BaStatus::BaOk);
            assert_eq!(zezd, 0);
            assert!((bound - 0.144_752_107_051_403_4).abs() < 1e-12);

            let mut js = 0.0;
            assert_eq!(
                ba_js_divergence(p.as_ptr(), q.as_ptr(), 2, &mut js),
                BaStatus::BaOk
            );
            assert!((js - bound).abs() < 1e-15);

            let mut re = 0.0;
            let ideal = [0.5, 0.5];
            let broken = [1.0, 0.0];
            assert_eq!(
                ba_relative_entropy(ideal.as_ptr(), broken.as_ptr(), 2, &mut re),
                BaStatus::BaOk
            );
            assert!(re.is_infinite());
        }
    }

    #[test]
    fn zezd_through_the_c_surface() {
        unsafe {
            let mut handle: *mut BaScenario = std::ptr::null_mut();
            assert_eq!(
                ba_scenario_from_json(qubit_json().as_ptr(), &mut handle),
                BaStatus::BaOk
            );
            let d = ba_scenario_dimension(handle);
            let mut basis = vec![0.0f64; 2 * d * d];
            assert_eq!(
                ba_zezd_basis(handle, std::ptr::null(), 0, basis.as_mut_ptr()),
                BaStatus::BaOk
            );
            let mut err = 1.0;
            let mut dis = 1.0;
            assert_eq!(
                ba_err_dis(handle, basis.as_ptr(), &mut err, &mut dis),
                BaStatus::BaOk
            );
            assert!(err <= 1e-12 && dis <= 1e-12, "err {err:e} dis {dis:e}");

            let mut oracle_min = f64::NAN;
            assert_eq!(
                ba_oracle_min(handle, 5_000, 7, &mut oracle_min),
                BaStatus::BaOk
            );
            assert!(oracle_min <= 1e-9);
            ba_scenario_free(handle);
        }
    }

    #[test]
    fn error_paths() {
        unsafe {
            let mut handle: *mut BaScenario = std::ptr::null_mut();
            let bad = CString::new("{\"dimension\": 2}").unwrap();
            assert_eq!(
                ba_scenario_from_json(bad.as_ptr(), &mut handle),
                BaStatus::BaErrParse
            );
            assert_eq!(
                ba_scenario_from_json(std::ptr::null(), &mut handle),
                BaStatus::BaErrNullArgument
            );
            let msg = CStr::from_ptr(ba_status_message(BaStatus::BaErrNoZezd));
            assert!(msg.to_str().unwrap().contains("zero-disturbance"));
        }
    }
}
