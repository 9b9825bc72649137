//! C ABI for the passage library.
//!
//! Every function returns a [`PassageStatus`] and writes its result through
//! out-pointers; law specifications travel as opaque [`PassageLaw`] handles
//! created by [`passage_law_parse`] and released by [`passage_law_free`].
//! All entry points catch panics at the boundary.

use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use passage::capital::{solve_u, CapitalModel, CapitalQuery};
use passage::classic::{
    diffusion_approx_exp, diffusion_crossing_cdf, normal_above, normal_below, DiffusionParams,
};
use passage::exact::{ExpModel, FirstPassageQuery};
use passage::ig::{
    ig_kernel, ig_kernel_infty, large_t_exp_form, ig_kernel_at_critical, teugels_type_cdf,
    RenewalMoments,
};
use passage::law::LawSpec;
use passage::mc::simulate_first_passage;
use passage::walk::{hitting_cdf, type2_via_walk, walk_pmf, WalkParams};
use passage::Error;

/// Result codes of every `passage_*` entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PassageStatus {
    Ok = 0,
    /// A precondition on the inputs was violated.
    Domain = 1,
    /// The operation is undefined at the critical premium rate.
    CriticalRate = 2,
    /// Quadrature or root refinement missed its tolerance.
    NoConvergence = 3,
    /// A series needed more terms than the hard cap.
    TruncationBound = 4,
    /// The capital equation has no root in the search bracket.
    NoBracket = 5,
    /// A law string could not be parsed or has invalid parameters.
    InvalidLaw = 6,
    /// A required pointer argument was null.
    NullPointer = 7,
    /// The library panicked; the result pointer is untouched.
    Panic = 8,
}

fn status_of(e: &Error) -> PassageStatus {
    match e {
        Error::Domain(_) => PassageStatus::Domain,
        Error::CriticalRate { .. } => PassageStatus::CriticalRate,
        Error::QuadratureNonConvergence { .. } => PassageStatus::NoConvergence,
        Error::TruncationBound { .. } => PassageStatus::TruncationBound,
        Error::NoBracket { .. } => PassageStatus::NoBracket,
        Error::InvalidLaw(_) => PassageStatus::InvalidLaw,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn passage_status_describe(status: PassageStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        PassageStatus::Ok => b"ok\0",
        PassageStatus::Domain => b"domain error: a precondition was violated\0",
        PassageStatus::CriticalRate => b"undefined at the critical premium rate\0",
        PassageStatus::NoConvergence => b"did not converge to the requested tolerance\0",
        PassageStatus::TruncationBound => b"series truncation bound exceeded\0",
        PassageStatus::NoBracket => b"no bracket for the capital equation\0",
        PassageStatus::InvalidLaw => b"invalid law specification\0",
        PassageStatus::NullPointer => b"null pointer argument\0",
        PassageStatus::Panic => b"internal panic\0",
    };
    s.as_ptr() as *const c_char
}

/// Runs a fallible scalar computation and writes the value through `out`.
fn run(out: *mut f64, f: impl FnOnce() -> passage::Result<f64>) -> PassageStatus {
    if out.is_null() {
        return PassageStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` was checked non-null; caller guarantees validity.
            unsafe { *out = v };
            PassageStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => PassageStatus::Panic,
    }
}

// ---------------------------------------------------------------- exact ---

/// Exact Type I c.d.f. P{tau(u,c) <= t} for exponential T and Y.
/// `t` may be infinity (dispatches to the ruin probability).
#[no_mangle]
pub extern "C" fn passage_type1_cdf(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ExpModel::new(lam_t, lam_y, c)?.type1_cdf(&FirstPassageQuery::new(u, t)?))
}

/// Exact Type II c.d.f. (series-integral route).
#[no_mangle]
pub extern "C" fn passage_type2_cdf(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ExpModel::new(lam_t, lam_y, c)?.type2_cdf(&FirstPassageQuery::new(u, t)?))
}

/// Exact Type III c.d.f. (oscillatory-integral route).
#[no_mangle]
pub extern "C" fn passage_type3_cdf(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ExpModel::new(lam_t, lam_y, c)?.type3_cdf(&FirstPassageQuery::new(u, t)?))
}

/// P{tau(u,c) < infinity}.
#[no_mangle]
pub extern "C" fn passage_ruin_prob(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ExpModel::new(lam_t, lam_y, c)?.ruin_prob(u))
}

/// Conditional law P{v < tau <= t | T1 = v} for exponential T and Y.
#[no_mangle]
pub extern "C" fn passage_conditional_cdf(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    v: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ExpModel::new(lam_t, lam_y, c)?.conditional_cdf(&FirstPassageQuery::new(u, t)?, v))
}

/// Type II re-derived through the random-walk decomposition.
#[no_mangle]
pub extern "C" fn passage_type2_via_walk(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || type2_via_walk(&ExpModel::new(lam_t, lam_y, c)?, &FirstPassageQuery::new(u, t)?))
}

// -------------------------------------------------------------- classic ---

/// Normal approximation below the critical rate.
#[no_mangle]
pub extern "C" fn passage_normal_below(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || normal_below(&ExpModel::new(lam_t, lam_y, c)?, &FirstPassageQuery::new(u, t)?))
}

/// Normal approximation above the critical rate.
#[no_mangle]
pub extern "C" fn passage_normal_above(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || normal_above(&ExpModel::new(lam_t, lam_y, c)?, &FirstPassageQuery::new(u, t)?))
}

/// Crossing c.d.f. of a drifted Brownian motion net of premium rate `c`.
#[no_mangle]
pub extern "C" fn passage_diffusion_crossing_cdf(
    drift: f64,
    sigma2: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || {
        diffusion_crossing_cdf(&DiffusionParams::new(drift, sigma2)?, c, &FirstPassageQuery::new(u, t)?)
    })
}

/// Diffusion approximation with moments matched to the exponential model.
#[no_mangle]
pub extern "C" fn passage_diffusion_approx(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || diffusion_approx_exp(&ExpModel::new(lam_t, lam_y, c)?, &FirstPassageQuery::new(u, t)?))
}

// ------------------------------------------------------------------- ig ---

/// Inverse-Gaussian conditional kernel A_M(u,c | t,v).
#[no_mangle]
pub extern "C" fn passage_ig_kernel(
    big_m: f64,
    d2: f64,
    u: f64,
    c: f64,
    t: f64,
    v: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ig_kernel(&RenewalMoments::new(big_m, d2)?, u, c, t, v))
}

/// A(u,c | infinity).
#[no_mangle]
pub extern "C" fn passage_ig_kernel_infty(
    big_m: f64,
    d2: f64,
    u: f64,
    c: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ig_kernel_infty(&RenewalMoments::new(big_m, d2)?, u, c))
}

/// Critical-rate closed form A(u,c*|t); `t` may be infinity.
#[no_mangle]
pub extern "C" fn passage_ig_kernel_at_critical(
    big_m: f64,
    d2: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || ig_kernel_at_critical(&RenewalMoments::new(big_m, d2)?, u, t))
}

/// Teugels-type large-t expansion, clamped to [0, 1].
#[no_mangle]
pub extern "C" fn passage_teugels_cdf(
    big_m: f64,
    d2: f64,
    u: f64,
    c: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || teugels_type_cdf(&RenewalMoments::new(big_m, d2)?, u, c, t))
}

/// Large-t form in the exponential-rate parameterization.
#[no_mangle]
pub extern "C" fn passage_large_t_exp_form(
    lam_t: f64,
    lam_y: f64,
    c: f64,
    u: f64,
    t: f64,
    out: *mut f64,
) -> PassageStatus {
    run(out, || large_t_exp_form(&ExpModel::new(lam_t, lam_y, c)?, u, t))
}

// ----------------------------------------------------------------- walk ---

/// Position p.m.f. P{xi_p(y) = k} of the random walk with random
/// displacements (k may be negative).
#[no_mangle]
pub extern "C" fn passage_walk_pmf(p: f64, y: f64, k: i64, out: *mut f64) -> PassageStatus {
    run(out, || {
        let w = WalkParams::new(p)?;
        if !(y >= 0.0) {
            return Err(Error::Domain(format!("time must be >= 0, got {y}")));
        }
        Ok(walk_pmf(&w, y, k))
    })
}

/// First-hitting-time c.d.f. P{sigma_k(p) <= y}.
#[no_mangle]
pub extern "C" fn passage_hitting_cdf(p: f64, k: u32, y: f64, out: *mut f64) -> PassageStatus {
    run(out, || hitting_cdf(&WalkParams::new(p)?, k, y))
}

// ---------------------------------------------------------------- laws ----

/// Opaque law handle; create with `passage_law_parse`, release with
/// `passage_law_free`.
pub struct PassageLaw(LawSpec);

/// Parse a law specification such as "exponential(2)", "gamma(2,0.5)",
/// "pareto(2.5,1)" or "deterministic(0.5)". On success writes a heap
/// handle the caller owns.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn passage_law_parse(
    spec: *const c_char,
    out: *mut *mut PassageLaw,
) -> PassageStatus {
    if spec.is_null() || out.is_null() {
        return PassageStatus::NullPointer;
    }
    let text = match CStr::from_ptr(spec).to_str() {
        Ok(s) => s,
        Err(_) => return PassageStatus::InvalidLaw,
    };
    match text.parse::<LawSpec>() {
        Ok(law) => {
            *out = Box::into_raw(Box::new(PassageLaw(law)));
            PassageStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a law handle. A null handle is a no-op.
///
/// # Safety
/// `law` must have come from `passage_law_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn passage_law_free(law: *mut PassageLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// Mean, variance, and raw third moment of a law; `has_third` is 0 when the
/// third moment does not exist (Pareto with index <= 3) and `third` is then
/// left untouched.
///
/// # Safety
/// All pointers must be valid; `law` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn passage_law_moments(
    law: *const PassageLaw,
    mean: *mut f64,
    variance: *mut f64,
    third: *mut f64,
    has_third: *mut c_int,
) -> PassageStatus {
    if law.is_null() || mean.is_null() || variance.is_null() || third.is_null() || has_third.is_null()
    {
        return PassageStatus::NullPointer;
    }
    let spec = &(*law).0;
    *mean = spec.mean();
    *variance = spec.variance();
    match spec.third_moment() {
        Some(t3) => {
            *third = t3;
            *has_third = 1;
        }
        None => *has_third = 0,
    }
    PassageStatus::Ok
}

// ------------------------------------------------------------------- mc ---

/// Monte Carlo estimate of P{tau(u,c) <= t} for laws given as handles.
/// `workers` <= 0 uses the available parallelism. Bit-identical for a fixed
/// seed regardless of the worker count.
///
/// # Safety
/// Law handles must be live; `p_hat` and `std_err` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn passage_mc_first_passage(
    t1: *const PassageLaw,
    t_law: *const PassageLaw,
    y_law: *const PassageLaw,
    c: f64,
    u: f64,
    t: f64,
    n_paths: u64,
    seed: u64,
    workers: c_int,
    p_hat: *mut f64,
    std_err: *mut f64,
) -> PassageStatus {
    if t1.is_null() || t_law.is_null() || y_law.is_null() || p_hat.is_null() || std_err.is_null() {
        return PassageStatus::NullPointer;
    }
    let (a, b, y) = ((*t1).0, (*t_law).0, (*y_law).0);
    let run_sim = move || -> passage::Result<(f64, f64)> {
        let est = if workers > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers as usize)
                .build()
                .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;
            pool.install(|| simulate_first_passage(&a, &b, &y, c, u, t, n_paths, seed))?
        } else {
            simulate_first_passage(&a, &b, &y, c, u, t, n_paths, seed)?
        };
        Ok((est.p_hat, est.std_err))
    };
    match catch_unwind(AssertUnwindSafe(run_sim)) {
        Ok(Ok((p, se))) => {
            *p_hat = p;
            *std_err = se;
            PassageStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => PassageStatus::Panic,
    }
}

// -------------------------------------------------------------- capital ---

/// Solve P{tau(u,c) <= t} = alpha for u against the exact exponential
/// backend.
#[no_mangle]
pub extern "C" fn passage_capital_solve_exact(
    lam_t: f64,
    lam_y: f64,
    alpha: f64,
    t: f64,
    c: f64,
    out_u: *mut f64,
) -> PassageStatus {
    run(out_u, || {
        solve_u(&CapitalQuery { alpha, t, c }, &CapitalModel::Exact { lam_t, lam_y })
    })
}

/// Solve the capital equation against the inverse-Gaussian kernel backend.
#[no_mangle]
pub extern "C" fn passage_capital_solve_kernel(
    big_m: f64,
    d2: f64,
    alpha: f64,
    t: f64,
    c: f64,
    out_u: *mut f64,
) -> PassageStatus {
    run(out_u, || {
        solve_u(&CapitalQuery { alpha, t, c }, &CapitalModel::Kernel(RenewalMoments::new(big_m, d2)?))
    })
}
