//! Exact distribution of the first-passage time when inter-renewal times
//! and jump sizes are both exponential: the three equivalent closed
//! formulas, the ruin probability, and the conditional law given the first
//! renewal epoch.
//!
//! Every Bessel-bearing integrand is rewritten as
//! `e^{-(√A-√B)²} · [scaled Bessel]` with `A + B` matching the plain
//! exponent, so nothing overflows for large `u` or `t`.

use crate::bessel::{bessel_i_scaled, bessel_i_scaled_seq};
use crate::error::{Error, Result};
use crate::quad::{geometric_breaks, integrate_with_breaks, QuadConfig};

/// Exponential renewal model: inter-renewal rate, jump-size rate, and the
/// premium (drift) rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpModel {
    pub lam_t: f64,
    pub lam_y: f64,
    pub c: f64,
}

/// A level/horizon pair (u, t). `t = f64::INFINITY` is the sentinel for the
/// infinite horizon and dispatches to the ruin probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPassageQuery {
    pub u: f64,
    pub t: f64,
}

impl FirstPassageQuery {
    pub fn new(u: f64, t: f64) -> Result<Self> {
        if !(u >= 0.0) || !u.is_finite() {
            return Err(Error::domain(format!("level u must be finite and >= 0, got {u}")));
        }
        if !(t >= 0.0) {
            return Err(Error::domain(format!("horizon t must be >= 0, got {t}")));
        }
        Ok(FirstPassageQuery { u, t })
    }
}

/// Poisson truncation cap shared by the series-type formulas.
const MAX_SERIES_TERMS: usize = 100_000;

/// Poisson(x) weights in log space up to tail mass `tail`; returns the
/// weights w_0..w_N. Errors if the cap would be exceeded.
pub(crate) fn poisson_weights(x: f64, tail: f64) -> Result<Vec<f64>> {
    if x == 0.0 {
        return Ok(vec![1.0]);
    }
    let n_est = (x + 12.0 * x.sqrt() + 25.0).ceil() as usize;
    if n_est > MAX_SERIES_TERMS {
        return Err(Error::TruncationBound { needed: n_est, cap: MAX_SERIES_TERMS });
    }
    let ln_x = x.ln();
    let mut weights = Vec::with_capacity(n_est + 1);
    let mut ln_fact = 0.0;
    let mut cum = 0.0;
    let mut n = 0usize;
    loop {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let w = (-x + n as f64 * ln_x - ln_fact).exp();
        weights.push(w);
        cum += w;
        if 1.0 - cum < tail && n as f64 > x {
            break;
        }
        n += 1;
        if n > MAX_SERIES_TERMS {
            return Err(Error::TruncationBound { needed: n, cap: MAX_SERIES_TERMS });
        }
    }
    Ok(weights)
}

impl ExpModel {
    pub fn new(lam_t: f64, lam_y: f64, c: f64) -> Result<Self> {
        if !(lam_t > 0.0) || !lam_t.is_finite() {
            return Err(Error::domain(format!("lam_t must be positive, got {lam_t}")));
        }
        if !(lam_y > 0.0) || !lam_y.is_finite() {
            return Err(Error::domain(format!("lam_y must be positive, got {lam_y}")));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("premium rate c must be >= 0, got {c}")));
        }
        Ok(ExpModel { lam_t, lam_y, c })
    }

    /// Critical premium rate c* = λ_T/λ_Y (= E Y/E T).
    pub fn critical_rate(&self) -> f64 {
        self.lam_t / self.lam_y
    }

    fn require_drift(&self) -> Result<()> {
        if self.c <= 0.0 {
            return Err(Error::domain("the exact formulas require c > 0"));
        }
        Ok(())
    }

    /// P{τ(u,c) < ∞}: 1 below the critical rate, else
    /// (λ_T/(cλ_Y))·exp{-uλ_Y(1-λ_T/(cλ_Y))}.
    pub fn ruin_prob(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::domain(format!("level u must be >= 0, got {u}")));
        }
        if self.c == 0.0 {
            return Ok(1.0);
        }
        let rho = self.lam_t / (self.c * self.lam_y);
        if rho >= 1.0 {
            Ok(1.0)
        } else {
            Ok(rho * (-u * self.lam_y * (1.0 - rho)).exp())
        }
    }

    /// Type I formula: a single integral of a Bessel I_0/I_2 combination.
    pub fn type1_cdf(&self, q: &FirstPassageQuery) -> Result<f64> {
        self.require_drift()?;
        if q.t == 0.0 {
            return Ok(0.0);
        }
        if q.t == f64::INFINITY {
            return self.ruin_prob(q.u);
        }
        let (lt, ly, c, u) = (self.lam_t, self.lam_y, self.c, q.u);
        let f = move |x: f64| {
            let a = lt * x;
            let b = ly * (c * x + u);
            let arg = 2.0 * (a * b).sqrt();
            let gap = a.sqrt() - b.sqrt();
            let w = (-gap * gap).exp();
            let ratio = if c * x + u > 0.0 { c * x / (c * x + u) } else { 1.0 };
            lt * w * (bessel_i_scaled(0, arg) - ratio * bessel_i_scaled(2, arg))
        };
        let mut breaks = geometric_breaks((u / (8.0 * (1.0 + c))).max(1e-3), q.t);
        // the exponent gap vanishes at x* = λ_Y u/(λ_T - cλ_Y) below the
        // critical rate; seed panels around that peak
        let denom = lt - c * ly;
        if denom > 0.0 {
            let x_star = ly * u / denom;
            for m in [0.25, 0.5, 1.0, 2.0, 4.0] {
                breaks.push(x_star * m);
            }
        }
        let v = integrate_with_breaks(f, 0.0, q.t, &breaks, &QuadConfig::default())?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// Type II formula, integrated in the hitting-density variables: the
    /// Poisson(uλ_Y) mixture of first-hitting densities h_{n+1}(y|p) with
    /// p = λ_T/(cλ_Y + λ_T), integrated over y ∈ [0, tλ_T].
    pub fn type2_cdf(&self, q: &FirstPassageQuery) -> Result<f64> {
        self.require_drift()?;
        if q.t == 0.0 {
            return Ok(0.0);
        }
        if q.t == f64::INFINITY {
            return self.ruin_prob(q.u);
        }
        let (lt, ly, c, u) = (self.lam_t, self.lam_y, self.c, q.u);
        let p = lt / (c * ly + lt);
        let qq = 1.0 - p;
        let weights = poisson_weights(u * ly, 1e-12)?;
        let n_orders = weights.len(); // orders 1..=n_orders needed
        let ln_pq = (p / qq).ln();
        let two_sqrt_qp = 2.0 * (qq / p).sqrt();
        let drift_rate = two_sqrt_qp - 1.0 / p; // <= 0 always

        let g = move |y: f64| {
            if y < 1e-300 {
                // only h_1(0) = 1 survives
                return weights[0];
            }
            let arg = two_sqrt_qp * y;
            let seq = bessel_i_scaled_seq(n_orders, arg);
            let base = drift_rate * y - y.ln();
            let mut total = 0.0;
            for (n, w) in weights.iter().enumerate() {
                let k = n + 1;
                let ik = seq[k];
                if ik == 0.0 || *w == 0.0 {
                    continue;
                }
                let ln_term = w.ln() + 0.5 * k as f64 * ln_pq + (k as f64).ln() + base + ik.ln();
                total += ln_term.exp();
            }
            total
        };
        let y_max = q.t * lt;
        let breaks = geometric_breaks((u.max(1.0) / 16.0).min(y_max / 4.0).max(1e-3), y_max);
        let v = integrate_with_breaks(g, 0.0, y_max, &breaks, &QuadConfig::default())?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// Type III formula: ruin probability minus an oscillatory integral
    /// over [0, π]. The panel seed scales with the oscillation count
    /// ∝ uλ_Y√(λ_T/(cλ_Y)).
    pub fn type3_cdf(&self, q: &FirstPassageQuery) -> Result<f64> {
        self.require_drift()?;
        if q.t == 0.0 {
            return Ok(0.0);
        }
        if q.t == f64::INFINITY {
            return self.ruin_prob(q.u);
        }
        let (lt, ly, c, u, t) = (self.lam_t, self.lam_y, self.c, q.u, q.t);
        let rho = lt / (c * ly);
        let sr = rho.sqrt();
        let p_inf = self.ruin_prob(u)?;
        let f = move |x: f64| {
            let cos_x = x.cos();
            let den = 1.0 + rho - 2.0 * sr * cos_x;
            // t λ_T (cλ_Y/λ_T) = t c λ_Y
            let expo = u * ly * (sr * cos_x - 1.0) - t * c * ly * den;
            let phase = u * ly * sr * x.sin();
            // cos(A) - cos(A + 2x) = 2 sin(A + x) sin(x)
            let trig = 2.0 * (phase + x).sin() * x.sin();
            rho / den * expo.exp() * trig
        };
        let oscillations = (u * ly * sr).ceil().max(1.0) as usize;
        let n0 = (2 * oscillations).clamp(8, 512);
        let breaks: Vec<f64> =
            (1..n0).map(|k| k as f64 * std::f64::consts::PI / n0 as f64).collect();
        let integral =
            integrate_with_breaks(f, 0.0, std::f64::consts::PI, &breaks, &QuadConfig::default())?;
        Ok((p_inf - integral / std::f64::consts::PI).clamp(0.0, 1.0))
    }

    /// Conditional law P{v < τ ≤ t | T₁ = v}. The Poisson×gamma double sum
    /// collapses to a single Bessel I₁ integrand:
    /// Σ_{n≥1} aⁿ bⁿ⁻¹/(n!(n-1)!) = √(a/b)·I₁(2√(ab)).
    pub fn conditional_cdf(&self, q: &FirstPassageQuery, v: f64) -> Result<f64> {
        if !(v >= 0.0) {
            return Err(Error::domain(format!("conditioning time v must be >= 0, got {v}")));
        }
        if v >= q.t {
            return Ok(0.0);
        }
        let (lt, ly, c, u) = (self.lam_t, self.lam_y, self.c, q.u);
        let w0 = u + c * v;
        if !(w0 > 0.0) {
            return Err(Error::domain("conditional_cdf requires u + c·v > 0"));
        }
        let f = move |z: f64| {
            let a = ly * (u + c * z);
            let b = lt * (z - v);
            let front = w0 / (u + c * z) * lt;
            if a * b < 1e-28 {
                return front * a * (-(a + b)).exp();
            }
            let gap = a.sqrt() - b.sqrt();
            let arg = 2.0 * (a * b).sqrt();
            front * (-gap * gap).exp() * (a / b).sqrt() * bessel_i_scaled(1, arg)
        };
        let t_end = if q.t.is_finite() {
            q.t
        } else {
            // integrand decays at least like the Type I tail; 1e7 covers the
            // mass at any admissible rate, and adaptivity prunes the rest
            1e7
        };
        let mut breaks = geometric_breaks(((t_end - v) / 1e6).max(1e-3), t_end - v)
            .into_iter()
            .map(|d| v + d)
            .collect::<Vec<_>>();
        let denom = lt - c * ly;
        if denom > 0.0 {
            let x_star = ly * w0 / denom;
            for m in [0.5, 1.0, 2.0] {
                breaks.push(v + x_star * m);
            }
        }
        let val = integrate_with_breaks(f, v, t_end, &breaks, &QuadConfig::default())?;
        Ok(val.clamp(0.0, 1.0))
    }
}
