//! The two classical approximation families: the normal approximation on
//! either side of the critical rate (with its Cramér constants), and the
//! moment-matched diffusion approximation.

use crate::error::{Error, Result};
use crate::exact::{ExpModel, FirstPassageQuery};
use crate::special::{log_std_normal_cdf, std_normal_cdf};

/// Drift/variance constants of the normal approximation.
///
/// Minus-side fields apply for c < c*, plus-side fields (with the Cramér
/// constant and adjustment coefficient) for c > c*; the inapplicable side is
/// populated but carries no sign guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentConstants {
    pub m_minus: f64,
    pub s2_minus: f64,
    pub m_plus: f64,
    pub s2_plus: f64,
    pub big_c: f64,
    pub kappa: f64,
}

/// Drift and variance of the approximating diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionParams {
    pub drift: f64,
    pub sigma2: f64,
}

impl DiffusionParams {
    pub fn new(drift: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::domain(format!("sigma2 must be positive, got {sigma2}")));
        }
        if !drift.is_finite() {
            return Err(Error::domain("drift must be finite"));
        }
        Ok(DiffusionParams { drift, sigma2 })
    }
}

const CRITICAL_REL_EPS: f64 = 1e-12;

fn check_off_critical(m: &ExpModel) -> Result<()> {
    let cs = m.critical_rate();
    if (m.c - cs).abs() <= CRITICAL_REL_EPS * cs.max(1.0) {
        return Err(Error::CriticalRate { c: cs });
    }
    Ok(())
}

/// Closed-form constants for exponential T and Y. Undefined at c = c*.
pub fn cramer_constants_exp(m: &ExpModel) -> Result<MomentConstants> {
    if m.c <= 0.0 {
        return Err(Error::domain("cramer constants require c > 0"));
    }
    check_off_critical(m)?;
    let rho = m.lam_t / (m.c * m.lam_y);
    let one_minus = 1.0 - rho;
    Ok(MomentConstants {
        big_c: rho,
        kappa: m.lam_y * one_minus,
        m_minus: -1.0 / (m.c * one_minus),
        s2_minus: -(2.0 * rho * rho + one_minus * one_minus)
            / (m.lam_t * m.c * one_minus.powi(3)),
        m_plus: rho / (m.c * one_minus),
        s2_plus: 2.0 * rho / (m.c * m.c * m.lam_y * one_minus.powi(3)),
    })
}

/// Drift/variance pair (m, s²) of a first-passage walk from raw moments:
/// m = E T/E X and s² = E(X·ET - T·EX)²/(EX)³, with the mixed second moment
/// E(X·ET - T·EX)² supplied by the caller. Serves both the original and the
/// associated (exponentially tilted) walk; the caller supplies the
/// adjustment coefficient separately when assembling the plus side.
pub fn walk_constants_from_moments(e_t: f64, e_x: f64, mixed_second: f64) -> Result<(f64, f64)> {
    if !(e_x > 0.0) {
        return Err(Error::domain(format!("E X must be positive on the applicable side, got {e_x}")));
    }
    if !(e_t > 0.0) || !(mixed_second >= 0.0) {
        return Err(Error::domain("E T must be positive and the mixed second moment nonnegative"));
    }
    Ok((e_t / e_x, mixed_second / e_x.powi(3)))
}

/// Normal approximation below the critical rate: Φ((t - m⁻u)/(S⁻√u)).
pub fn normal_below(m: &ExpModel, q: &FirstPassageQuery) -> Result<f64> {
    check_off_critical(m)?;
    if m.c >= m.critical_rate() {
        return Err(Error::domain(format!(
            "normal_below applies for 0 < c < c* = {}, got c = {}",
            m.critical_rate(),
            m.c
        )));
    }
    if !(q.u > 0.0) {
        return Err(Error::domain("normal_below requires u > 0"));
    }
    let k = cramer_constants_exp(m)?;
    Ok(std_normal_cdf((q.t - k.m_minus * q.u) / (k.s2_minus * q.u).sqrt()))
}

/// Normal approximation above the critical rate:
/// e^{-κu}·C·Φ((t - m⁺u)/(S⁺√u)).
pub fn normal_above(m: &ExpModel, q: &FirstPassageQuery) -> Result<f64> {
    check_off_critical(m)?;
    if m.c <= m.critical_rate() {
        return Err(Error::domain(format!(
            "normal_above applies for c > c* = {}, got c = {}",
            m.critical_rate(),
            m.c
        )));
    }
    if !(q.u > 0.0) {
        return Err(Error::domain("normal_above requires u > 0"));
    }
    let k = cramer_constants_exp(m)?;
    let phi = std_normal_cdf((q.t - k.m_plus * q.u) / (k.s2_plus * q.u).sqrt());
    Ok((-k.kappa * q.u).exp() * k.big_c * phi)
}

/// Crossing-time c.d.f. of the shifted diffusion `m·s + σW_s - c·s`:
/// `1 - Φ((u-(m-c)t)/(σ√t)) + e^{2(m-c)u/σ²}·Φ((-u-(m-c)t)/(σ√t))`,
/// the second product in the log domain.
pub fn diffusion_crossing_cdf(d: &DiffusionParams, c: f64, q: &FirstPassageQuery) -> Result<f64> {
    if !(q.u > 0.0) || !(q.t > 0.0) {
        return Err(Error::domain("diffusion crossing requires u > 0 and t > 0"));
    }
    if q.t == f64::INFINITY {
        let net = d.drift - c;
        return Ok(if net >= 0.0 { 1.0 } else { (2.0 * net * q.u / d.sigma2).exp() });
    }
    let sigma = d.sigma2.sqrt();
    let net = d.drift - c;
    let sq = sigma * q.t.sqrt();
    let first = 1.0 - std_normal_cdf((q.u - net * q.t) / sq);
    let second =
        (2.0 * net * q.u / d.sigma2 + log_std_normal_cdf((-q.u - net * q.t) / sq)).exp();
    Ok((first + second).clamp(0.0, 1.0))
}

/// Diffusion approximation with moments matched to the exponential model:
/// drift λ_T/λ_Y and variance 2λ_T/λ_Y². Defined and continuous across c*.
pub fn diffusion_approx_exp(m: &ExpModel, q: &FirstPassageQuery) -> Result<f64> {
    let d = DiffusionParams::new(m.lam_t / m.lam_y, 2.0 * m.lam_t / (m.lam_y * m.lam_y))?;
    diffusion_crossing_cdf(&d, m.c, q)
}
