//! Random walk with random displacements: ±1 steps at Poisson epochs of
//! density 1/p, step to the right with probability p. Position law,
//! first-hitting-time density and c.d.f., the two-series Bessel identity,
//! and the Poisson-mixture decomposition that re-derives the Type II
//! formula.

use crate::bessel::{bessel_i_scaled, bessel_i_scaled_seq};
use crate::error::{Error, Result};
use crate::exact::{poisson_weights, ExpModel, FirstPassageQuery};
use crate::quad::{geometric_breaks, integrate_with_breaks, QuadConfig};

/// Right-step probability p ∈ (0,1); q = 1-p is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub p: f64,
}

impl WalkParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("step probability must be in (0,1), got {p}")));
        }
        Ok(WalkParams { p })
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }
}

/// P{ξ_p(y) = k} = e^{-y/p}(p/q)^{k/2} I_k(2y√(q/p)), k ∈ ℤ (I_{-k} = I_k).
/// The signed k drives the (p/q)^{k/2} factor; only |k| enters the Bessel
/// order. Assembled in the log domain.
pub fn walk_pmf(w: &WalkParams, y: f64, k: i64) -> f64 {
    debug_assert!(y >= 0.0);
    if y == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let (p, q) = (w.p, w.q());
    let arg = 2.0 * y * (q / p).sqrt();
    let ln = 0.5 * k as f64 * (p / q).ln() + arg - y / p;
    let ik = bessel_i_scaled(k.unsigned_abs() as u32, arg);
    if ik == 0.0 {
        return 0.0;
    }
    (ln + ik.ln()).exp()
}

/// First-hitting-time density h_k(y|p) = (p/q)^{k/2}(k/y)e^{-y/p}I_k(2y√(q/p))
/// of the point k ≥ 1; defective for p < 1/2.
pub fn hitting_density(w: &WalkParams, k: u32, y: f64) -> f64 {
    debug_assert!(k >= 1);
    if y == 0.0 {
        // h_1(0+) = 1 (one right-step at rate p·(1/p)); higher orders vanish
        return if k == 1 { 1.0 } else { 0.0 };
    }
    (k as f64 / y) * walk_pmf(w, y, k as i64)
}

/// P{ς_k(p) ≤ y} = ∫₀ʸ h_k(z|p) dz by adaptive quadrature.
pub fn hitting_cdf(w: &WalkParams, k: u32, y: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("hitting level k must be >= 1"));
    }
    if !(y >= 0.0) {
        return Err(Error::domain(format!("time bound must be >= 0, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let w = *w;
    let breaks = geometric_breaks((k as f64 / 8.0).min(y / 4.0).max(1e-3), y);
    let v = integrate_with_breaks(
        move |z| hitting_density(&w, k, z),
        0.0,
        y,
        &breaks,
        &QuadConfig::default(),
    )?;
    Ok(v.clamp(0.0, 1.0))
}

const MAX_IDENTITY_TERMS: usize = 100_000;

/// Residual of the two-series identity
/// k(p/q)^{k/2}∫₀ʸ e^{-z/p} I_k(2z√(q/p)) dz/z
///   = e^{-y/p}[ Σ_{i≥k}(p/q)^{i/2} I_i + Σ_{i≥k+1}(q/p)^{i/2-k} I_i ](2y√(q/p)),
/// with both sides computed independently (quadrature vs truncated sums).
pub fn bessel_identity_residual(w: &WalkParams, k: u32, y: f64) -> Result<f64> {
    if k == 0 || !(y > 0.0) {
        return Err(Error::domain("identity requires k >= 1 and y > 0"));
    }
    let lhs = hitting_cdf(w, k, y)?;

    let (p, q) = (w.p, w.q());
    let arg = 2.0 * y * (q / p).sqrt();
    let window = (arg + 14.0 * arg.sqrt() + 60.0).ceil() as usize;
    let k_max = k as usize + window;
    if k_max > MAX_IDENTITY_TERMS {
        return Err(Error::TruncationBound { needed: k_max, cap: MAX_IDENTITY_TERMS });
    }
    let seq = bessel_i_scaled_seq(k_max, arg);
    let base = arg - y / p;
    let ln_pq = (p / q).ln();
    let mut rhs = 0.0;
    for i in k as usize..=k_max {
        if seq[i] > 0.0 {
            rhs += (0.5 * i as f64 * ln_pq + base + seq[i].ln()).exp();
        }
    }
    let ln_qp = (q / p).ln();
    for i in (k as usize + 1)..=k_max {
        if seq[i] > 0.0 {
            rhs += ((0.5 * i as f64 - k as f64) * ln_qp + base + seq[i].ln()).exp();
        }
    }
    Ok(lhs - rhs)
}

/// Type II via the walk decomposition:
/// e^{-uλ_Y} Σ_n ((uλ_Y)ⁿ/n!)·P{ς_{n+1}(p) ≤ tλ_T}, p = λ_T/(cλ_Y + λ_T).
pub fn type2_via_walk(m: &ExpModel, query: &FirstPassageQuery) -> Result<f64> {
    if !(m.c > 0.0) {
        return Err(Error::domain("type2_via_walk requires c > 0"));
    }
    if query.t == 0.0 {
        return Ok(0.0);
    }
    if query.t == f64::INFINITY {
        return m.ruin_prob(query.u);
    }
    let p = m.lam_t / (m.c * m.lam_y + m.lam_t);
    let w = WalkParams::new(p)?;
    let weights = poisson_weights(query.u * m.lam_y, 1e-12)?;
    let y_max = query.t * m.lam_t;
    let mut total = 0.0;
    for (n, wt) in weights.iter().enumerate() {
        if *wt == 0.0 {
            continue;
        }
        total += wt * hitting_cdf(&w, n as u32 + 1, y_max)?;
    }
    Ok(total.clamp(0.0, 1.0))
}
