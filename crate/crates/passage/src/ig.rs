//! The inverse-Gaussian approximation family: the conditional kernel in
//! closed and integral form, its t = ∞ limits, the critical-rate forms, the
//! unconditional convolution over the first renewal interval, and the
//! Teugels-type large-t expansion.

use crate::error::{Error, Result};
use crate::exact::ExpModel;
use crate::law::LawSpec;
use crate::quad::{geometric_breaks, integrate_with_breaks, QuadConfig};
use crate::special::{
    defective_ig_cdf, ig_cdf, log_std_normal_cdf, std_normal_cdf, DefectiveIgParams, IgParams,
};

/// First two renewal moments: M = E T/E Y and
/// D² = ((E T)²·Var Y + (E Y)²·Var T)/(E Y)³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenewalMoments {
    pub big_m: f64,
    pub d2: f64,
}

impl RenewalMoments {
    pub fn new(big_m: f64, d2: f64) -> Result<Self> {
        if !(big_m > 0.0) || !big_m.is_finite() {
            return Err(Error::domain(format!("M must be positive, got {big_m}")));
        }
        if !(d2 > 0.0) || !d2.is_finite() {
            return Err(Error::domain(format!("D² must be positive, got {d2}")));
        }
        Ok(RenewalMoments { big_m, d2 })
    }

    /// Critical premium rate c* = 1/M.
    pub fn critical_rate(&self) -> f64 {
        1.0 / self.big_m
    }

    /// Exponential model specialization: M = λ_Y/λ_T, D² = 2λ_Y/λ_T².
    pub fn from_exponential(m: &ExpModel) -> Self {
        RenewalMoments {
            big_m: m.lam_y / m.lam_t,
            d2: 2.0 * m.lam_y / (m.lam_t * m.lam_t),
        }
    }

    /// Moments computed from inter-renewal and jump laws; fails when the
    /// required variance does not exist (e.g. Pareto with index ≤ 2).
    pub fn from_laws(t_law: &LawSpec, y_law: &LawSpec) -> Result<Self> {
        let (et, vt) = (t_law.mean(), t_law.variance());
        let (ey, vy) = (y_law.mean(), y_law.variance());
        if !(et.is_finite() && vt.is_finite() && ey.is_finite() && vy.is_finite()) {
            return Err(Error::domain(
                "renewal moments require finite means and variances of T and Y",
            ));
        }
        RenewalMoments::new(et / ey, (et * et * vy + ey * ey * vt) / ey.powi(3))
    }
}

/// Constants of the Teugels-type expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeugelsConstants {
    /// Amplitude B̂ = √(2/π)·D/(√c·(1-cM)²); diverges at c = c*.
    pub b0: f64,
    /// γ₁ = (1-cM)/(c²D²); sign flips across c*.
    pub g1: f64,
    /// γ₂ = (1-cM)²/(2cD²).
    pub g2: f64,
    /// γ₃ = 1/(2c³D²).
    pub g3: f64,
}

const CRITICAL_REL_EPS: f64 = 1e-12;

fn is_critical(rm: &RenewalMoments, c: f64) -> bool {
    (c * rm.big_m - 1.0).abs() <= CRITICAL_REL_EPS
}

fn check_kernel_inputs(u: f64, c: f64, t: f64, v: f64) -> Result<()> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("kernel requires c > 0, got {c}")));
    }
    if !(v >= 0.0) {
        return Err(Error::domain(format!("kernel requires v >= 0, got {v}")));
    }
    if !(u + c * v > 0.0) {
        return Err(Error::domain("degenerate input: u + c·v must be positive"));
    }
    if t.is_nan() {
        return Err(Error::domain("horizon t must not be NaN"));
    }
    Ok(())
}

/// Conditional kernel A_M(u,c | t,v): the inverse Gaussian c.d.f. increment
/// F(x; μ, λ, -1/2) from x = 1 to x = c(t-v)/(u+cv) + 1, with
/// λ = (u+cv)/(c²D²), μ = 1/(1-cM) below the critical rate and the
/// defective variant with μ̂ = 1/(cM-1) above it. At c = c* the continuous
/// limit 2(Φ(√λ) - Φ(√(λ/x))) applies (see [`ig_kernel_at_critical`]).
pub fn ig_kernel(rm: &RenewalMoments, u: f64, c: f64, t: f64, v: f64) -> Result<f64> {
    check_kernel_inputs(u, c, t, v)?;
    if t <= v {
        return Ok(0.0);
    }
    let lam = (u + c * v) / (c * c * rm.d2);
    let x_hi = if t.is_finite() { c * (t - v) / (u + c * v) + 1.0 } else { f64::INFINITY };
    if is_critical(rm, c) {
        let hi = if x_hi.is_finite() { std_normal_cdf((lam / x_hi).sqrt()) } else { 0.5 };
        return Ok((2.0 * (std_normal_cdf(lam.sqrt()) - hi)).clamp(0.0, 1.0));
    }
    let cm = c * rm.big_m;
    if cm < 1.0 {
        let p = IgParams::new(1.0 / (1.0 - cm), lam)?;
        let hi = if x_hi.is_finite() { ig_cdf(x_hi, &p)? } else { 1.0 };
        Ok((hi - ig_cdf(1.0, &p)?).clamp(0.0, 1.0))
    } else {
        let p = DefectiveIgParams::new(1.0 / (cm - 1.0), lam)?;
        let hi = if x_hi.is_finite() { defective_ig_cdf(x_hi, &p)? } else { p.total_mass() };
        Ok((hi - defective_ig_cdf(1.0, &p)?).clamp(0.0, 1.0))
    }
}

/// The kernel as the direct quadrature of
/// ∫₀^{c(t-v)/(u+cv)} (1+y)⁻¹ φ(y; cM(1+y), c²D²(1+y)/(u+cv)) dy,
/// the internal consistency check against the closed form.
pub fn ig_kernel_integral_form(rm: &RenewalMoments, u: f64, c: f64, t: f64, v: f64) -> Result<f64> {
    check_kernel_inputs(u, c, t, v)?;
    if t <= v {
        return Ok(0.0);
    }
    if !t.is_finite() {
        return Err(Error::domain("the integral form needs a finite horizon"));
    }
    let z_max = c * (t - v) / (u + c * v);
    let cm = c * rm.big_m;
    let s2_scale = c * c * rm.d2 / (u + c * v);
    let f = move |y: f64| {
        let s2 = s2_scale * (1.0 + y);
        let diff = y - cm * (1.0 + y);
        (-(diff * diff) / (2.0 * s2)).exp() / ((1.0 + y) * (2.0 * std::f64::consts::PI * s2).sqrt())
    };
    // the density spikes near y* = cM/(1-cM) (the IG mode region) when the
    // rate is subcritical; seed panels there and geometrically elsewhere
    let mut breaks = geometric_breaks((z_max / 1e4).max(1e-6), z_max);
    if cm < 1.0 {
        let y_star = cm / (1.0 - cm);
        let width = (s2_scale * (1.0 + y_star)).sqrt();
        for k in -6i32..=6 {
            breaks.push(y_star + k as f64 * width);
        }
    }
    let v = integrate_with_breaks(
        f,
        0.0,
        z_max,
        &breaks,
        &QuadConfig { abs_tol: 1e-10, max_panels: 20_000 },
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// A(u,c | ∞): the infinite-horizon limit, on both sides of c* and at c = 0.
pub fn ig_kernel_infty(rm: &RenewalMoments, u: f64, c: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain(format!("kernel limit requires u > 0, got {u}")));
    }
    if !(c >= 0.0) {
        return Err(Error::domain(format!("kernel limit requires c >= 0, got {c}")));
    }
    let d = rm.d2.sqrt();
    let m_term = rm.big_m * u.sqrt() / d;
    if c == 0.0 {
        return Ok(std_normal_cdf(m_term));
    }
    let cm = c * rm.big_m;
    let v = if cm <= 1.0 {
        std_normal_cdf(m_term)
            - (2.0 * (1.0 - cm) * u / (c * c * rm.d2)
                + log_std_normal_cdf(-(2.0 - cm) * u.sqrt() / (c * d)))
            .exp()
    } else {
        (-2.0 * (cm - 1.0) * u / (c * c * rm.d2)
            + log_std_normal_cdf(-(cm - 2.0) * u.sqrt() / (c * d)))
        .exp()
            - std_normal_cdf(-m_term)
    };
    Ok(v.clamp(0.0, 1.0))
}

/// The tail A(u,c|∞) - A(u,c|t) at v = 0, assembled from the inverse
/// Gaussian survival so it stays accurate when the plain difference of two
/// near-equal c.d.f. values would cancel to zero.
pub fn ig_kernel_deficit(rm: &RenewalMoments, u: f64, c: f64, t: f64) -> Result<f64> {
    check_kernel_inputs(u, c, t, 0.0)?;
    if !t.is_finite() {
        return Ok(0.0);
    }
    let lam = u / (c * c * rm.d2);
    let x = c * t / u + 1.0;
    if is_critical(rm, c) {
        return Ok((2.0 * std_normal_cdf((lam / x).sqrt()) - 1.0).max(0.0));
    }
    let cm = c * rm.big_m;
    let s = (lam / x).sqrt();
    if cm < 1.0 {
        let mu = 1.0 / (1.0 - cm);
        let a = s * (x / mu - 1.0);
        let b = s * (x / mu + 1.0);
        Ok((std_normal_cdf(-a) - (2.0 * lam / mu + log_std_normal_cdf(-b)).exp()).max(0.0))
    } else {
        let mu_hat = 1.0 / (cm - 1.0);
        let a = s * (x / mu_hat - 1.0);
        let b = s * (x / mu_hat + 1.0);
        Ok(((-2.0 * lam / mu_hat + log_std_normal_cdf(-a)).exp()
            - log_std_normal_cdf(-b).exp())
        .max(0.0))
    }
}

/// Closed forms of the kernel at the critical rate:
/// A(u,c*|t) = 2(Φ(√u/(c*D)) - Φ(u/(c*D√(c*t+u)))) and
/// A(u,c*|∞) = 2Φ(M√u/D) - 1.
pub fn ig_kernel_at_critical(rm: &RenewalMoments, u: f64, t: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain(format!("the critical-rate form requires u > 0, got {u}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("the critical-rate form requires t > 0, got {t}")));
    }
    let d = rm.d2.sqrt();
    if !t.is_finite() {
        return Ok((2.0 * std_normal_cdf(rm.big_m * u.sqrt() / d) - 1.0).clamp(0.0, 1.0));
    }
    let cs = rm.critical_rate();
    let v = 2.0
        * (std_normal_cdf(u.sqrt() / (cs * d)) - std_normal_cdf(u / (cs * d * (cs * t + u).sqrt())));
    Ok(v.clamp(0.0, 1.0))
}

/// Unconditional approximation: early-crossing term plus the convolution of
/// the reduced-horizon kernel with the law of the first renewal interval,
/// `∫₀ᵗ P{Y > u+cv} f_{T₁}(v) dv + ∫₀ᵗ A(u,c | t-v) f_{T₁}(v) dv`.
/// `y_law = None` drops the early term (it is O(u⁻³) under a third moment).
pub fn unconditional_approx(
    rm: &RenewalMoments,
    u: f64,
    c: f64,
    t: f64,
    t1_law: &LawSpec,
    y_law: Option<&LawSpec>,
) -> Result<f64> {
    check_kernel_inputs(u, c, t, 0.0)?;
    if !(t > 0.0) {
        return Ok(0.0);
    }
    if !t.is_finite() {
        return Err(Error::domain("unconditional_approx needs a finite horizon"));
    }
    // point-mass first interval: the convolution collapses to a shift
    if let Some(a) = t1_law.point_mass() {
        if a > t {
            return Ok(0.0);
        }
        let early = y_law.map(|y| y.tail(u + c * a)).unwrap_or(0.0);
        return Ok((early + ig_kernel(rm, u, c, t - a, 0.0)?).clamp(0.0, 1.0));
    }
    let cfg = QuadConfig { abs_tol: 1e-9, max_panels: 20_000 };
    let breaks = geometric_breaks((t / 1e4).max(1e-4), t);
    let early = match y_law {
        Some(y) => integrate_with_breaks(
            |v| y.tail(u + c * v) * t1_law.density(v),
            0.0,
            t,
            &breaks,
            &cfg,
        )?,
        None => 0.0,
    };
    let rm_c = *rm;
    let conv = integrate_with_breaks(
        move |v| {
            let k = ig_kernel(&rm_c, u, c, t - v, 0.0).unwrap_or(0.0);
            k * t1_law.density(v)
        },
        0.0,
        t,
        &breaks,
        &cfg,
    )?;
    Ok((early + conv).clamp(0.0, 1.0))
}

/// Constants of the Teugels-type expansion; the amplitude diverges at c*.
pub fn teugels_constants(rm: &RenewalMoments, c: f64) -> Result<TeugelsConstants> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("teugels constants require c > 0, got {c}")));
    }
    if is_critical(rm, c) {
        return Err(Error::CriticalRate { c: rm.critical_rate() });
    }
    let one_minus = 1.0 - c * rm.big_m;
    let d = rm.d2.sqrt();
    Ok(TeugelsConstants {
        b0: (2.0 / std::f64::consts::PI).sqrt() * d / (c.sqrt() * one_minus * one_minus),
        g1: one_minus / (c * c * rm.d2),
        g2: one_minus * one_minus / (2.0 * c * rm.d2),
        g3: 1.0 / (2.0 * c.powi(3) * rm.d2),
    })
}

/// Teugels-type approximation
/// A(u,c|∞) - B̂·u·e^{γ₁u}·t^{-3/2}·e^{-γ₂t}·e^{-γ₃u²/t}, clamped to [0,1]
/// (the expansion can go negative at small t). The correction is assembled
/// in the log domain: e^{γ₁u} alone overflows long before the product does.
pub fn teugels_type_cdf(rm: &RenewalMoments, u: f64, c: f64, t: f64) -> Result<f64> {
    if !(u > 0.0) || !(t > 0.0) {
        return Err(Error::domain("teugels_type_cdf requires u > 0 and t > 0"));
    }
    let k = teugels_constants(rm, c)?;
    let a_inf = ig_kernel_infty(rm, u, c)?;
    if !t.is_finite() {
        return Ok(a_inf);
    }
    let ln_deficit = k.b0.ln() + u.ln() + k.g1 * u - 1.5 * t.ln() - k.g2 * t - k.g3 * u * u / t;
    Ok((a_inf - ln_deficit.exp()).clamp(0.0, 1.0))
}

/// The large-t exponential-model form: the kernel's F-difference with
/// μ = (λ_T/λ_Y)/((λ_T/λ_Y) - c) and λ = λ_T²u/(2c²λ_Y), written directly in
/// the rate parameterization. Algebraically identical to
/// `ig_kernel(RenewalMoments::from_exponential(m), u, c, t, 0)`.
pub fn large_t_exp_form(m: &ExpModel, u: f64, t: f64) -> Result<f64> {
    if !(m.c > 0.0) {
        return Err(Error::domain("large_t_exp_form requires c > 0"));
    }
    if !(u > 0.0) {
        return Err(Error::domain(format!("large_t_exp_form requires u > 0, got {u}")));
    }
    let cs = m.critical_rate();
    if (m.c - cs).abs() <= CRITICAL_REL_EPS * cs {
        return Err(Error::CriticalRate { c: cs });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let lam = m.lam_t * m.lam_t * u / (2.0 * m.c * m.c * m.lam_y);
    let x_hi = if t.is_finite() { m.c * t / u + 1.0 } else { f64::INFINITY };
    if m.c < cs {
        let mu = cs / (cs - m.c);
        let p = IgParams::new(mu, lam)?;
        let hi = if x_hi.is_finite() { ig_cdf(x_hi, &p)? } else { 1.0 };
        Ok((hi - ig_cdf(1.0, &p)?).clamp(0.0, 1.0))
    } else {
        let mu_hat = cs / (m.c - cs);
        let p = DefectiveIgParams::new(mu_hat, lam)?;
        let hi = if x_hi.is_finite() { defective_ig_cdf(x_hi, &p)? } else { p.total_mass() };
        Ok((hi - defective_ig_cdf(1.0, &p)?).clamp(0.0, 1.0))
    }
}
