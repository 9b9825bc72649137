//! Non-ruin capital: invert P{τ(u,c) ≤ t} = α for the level u against the
//! exact exponential c.d.f. or the inverse-Gaussian kernel.
//!
//! The kernel backend is not monotone near u = 0 (its value rises from 0 to
//! a peak before decaying; the approximation lives in the large-u regime),
//! so the solver locates the peak first and inverts the decreasing branch
//! to its right. For the exact backend the peak sits at the bracket's lower
//! end and the behavior is plain monotone inversion.

use crate::error::{Error, Result};
use crate::exact::{ExpModel, FirstPassageQuery};
use crate::ig::{ig_kernel, RenewalMoments};

/// What to invert: α and the (t, c) slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapitalQuery {
    pub alpha: f64,
    pub t: f64,
    pub c: f64,
}

/// The backend c.d.f. the capital equation is solved against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapitalModel {
    /// Exact Type I c.d.f. with exponential T and Y.
    Exact { lam_t: f64, lam_y: f64 },
    /// Inverse-Gaussian kernel A(u,c|t) with renewal moments (M, D²).
    Kernel(RenewalMoments),
}

impl CapitalModel {
    fn eval(&self, u: f64, c: f64, t: f64) -> Result<f64> {
        match *self {
            CapitalModel::Exact { lam_t, lam_y } => {
                let m = ExpModel::new(lam_t, lam_y, c)?;
                m.type1_cdf(&FirstPassageQuery::new(u, t)?)
            }
            CapitalModel::Kernel(rm) => ig_kernel(&rm, u, c, t, 0.0),
        }
    }
}

const FORWARD_TOL: f64 = 1e-6;
const MAX_ITER: usize = 200;
const SCAN_POINTS: usize = 64;

/// Solve P{τ(u,c) ≤ t} = α for u on the decreasing branch of the backend.
pub fn solve_u(q: &CapitalQuery, model: &CapitalModel) -> Result<f64> {
    if !(q.alpha > 0.0 && q.alpha < 1.0) {
        return Err(Error::domain(format!("alpha must be in (0,1), got {}", q.alpha)));
    }
    if !(q.t > 0.0) || !q.t.is_finite() {
        return Err(Error::domain(format!("horizon t must be positive and finite, got {}", q.t)));
    }
    if !(q.c > 0.0) {
        return Err(Error::domain(format!("premium rate c must be positive, got {}", q.c)));
    }

    let lo = 1e-6;
    let mut hi = 10.0 * (q.c * q.t + 1.0);
    for widen in 0..2 {
        // coarse geometric scan for the peak of the backend over [lo, hi]
        let ratio = (hi / lo).powf(1.0 / (SCAN_POINTS - 1) as f64);
        let mut peak_u = lo;
        let mut peak_p = f64::NEG_INFINITY;
        let mut x = lo;
        for _ in 0..SCAN_POINTS {
            let p = model.eval(x, q.c, q.t)?;
            if p > peak_p {
                peak_p = p;
                peak_u = x;
            }
            x *= ratio;
        }
        let p_hi = model.eval(hi, q.c, q.t)?;

        if q.alpha > peak_p || q.alpha < p_hi {
            if q.alpha < p_hi && widen == 0 {
                hi *= 10.0; // the root lies beyond: widen once and rescan
                continue;
            }
            return Err(Error::NoBracket {
                alpha: q.alpha,
                attainable_max: peak_p,
                attainable_min: p_hi,
            });
        }

        // monotonicity guard on the solving branch
        let step = (hi - peak_u) / 19.0;
        let mut prev = peak_p;
        for i in 1..20 {
            let p = model.eval(peak_u + step * i as f64, q.c, q.t)?;
            if p > prev + 1e-7 {
                return Err(Error::domain(format!(
                    "backend is not nonincreasing in u on [{peak_u}, {hi}]"
                )));
            }
            prev = p;
        }

        return bisect_secant(model, q, peak_u, hi, peak_p - q.alpha, p_hi - q.alpha);
    }
    unreachable!("the widening loop always returns");
}

/// Bracketed bisection with a secant-acceleration step; f(a) ≥ 0 ≥ f(b).
fn bisect_secant(
    model: &CapitalModel,
    q: &CapitalQuery,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
) -> Result<f64> {
    if fa.abs() < FORWARD_TOL {
        return Ok(a);
    }
    if fb.abs() < FORWARD_TOL {
        return Ok(b);
    }
    for it in 0..MAX_ITER {
        // secant proposal, guarded to the interior; fall back to bisection
        let secant = b - fb * (b - a) / (fb - fa);
        let width = b - a;
        let x = if it % 3 != 2 && secant.is_finite() && secant > a + 0.01 * width && secant < b - 0.01 * width
        {
            secant
        } else {
            0.5 * (a + b)
        };
        let fx = model.eval(x, q.c, q.t)? - q.alpha;
        if fx.abs() < FORWARD_TOL {
            return Ok(x);
        }
        if fx >= 0.0 {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Err(Error::QuadratureNonConvergence { achieved: fa.abs().min(fb.abs()), requested: FORWARD_TOL })
}

/// Least-squares slope of ln u*(t) against ln t over a horizon grid:
/// the growth exponent of the non-ruin capital (about 1/2 at the critical
/// rate).
pub fn capital_growth_exponent(
    model: &CapitalModel,
    c: f64,
    alpha: f64,
    t_grid: &[f64],
) -> Result<f64> {
    if t_grid.len() < 4 {
        return Err(Error::domain(format!(
            "growth exponent needs at least 4 horizon points, got {}",
            t_grid.len()
        )));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("horizon grid must be strictly increasing"));
    }
    let mut xs = Vec::with_capacity(t_grid.len());
    let mut ys = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let u = solve_u(&CapitalQuery { alpha, t, c }, model)?;
        xs.push(t.ln());
        ys.push(u.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_reference_anchor_exact_backend() {
        // α = 0.1348 at (t=100, c=2) inverts to u* ≈ 30
        let model = CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 };
        let q = CapitalQuery { alpha: 0.1348, t: 100.0, c: 2.0 };
        let u = solve_u(&q, &model).unwrap();
        assert!((u - 30.0).abs() < 0.2, "u* = {u}");
        let back = model.eval(u, q.c, q.t).unwrap();
        assert!((back - q.alpha).abs() < 1e-6);
    }

    #[test]
    fn inverts_reference_anchor_kernel_backend() {
        let model = CapitalModel::Kernel(RenewalMoments::new(1.0, 6.0).unwrap());
        let q = CapitalQuery { alpha: 0.454, t: 100.0, c: 1.0 };
        let u = solve_u(&q, &model).unwrap();
        assert!((u - 15.0).abs() < 0.2, "u* = {u}");
        let back = model.eval(u, q.c, q.t).unwrap();
        assert!((back - q.alpha).abs() < 1e-6);
    }

    #[test]
    fn boundary_alpha_returns_small_u() {
        let model = CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 };
        let p_small = model.eval(0.01, 2.0, 50.0).unwrap();
        let q = CapitalQuery { alpha: p_small * (1.0 - 1e-7), t: 50.0, c: 2.0 };
        let u = solve_u(&q, &model).unwrap();
        assert!(u < 0.05, "u* = {u}");
    }

    #[test]
    fn unattainable_alpha_is_no_bracket() {
        let model = CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 };
        let q = CapitalQuery { alpha: 0.9999, t: 50.0, c: 4.0 };
        match solve_u(&q, &model) {
            Err(Error::NoBracket { attainable_max, .. }) => {
                assert!(attainable_max < 0.9999);
            }
            other => panic!("expected NoBracket, got {other:?}"),
        }
    }

    #[test]
    fn kernel_backend_low_u_artifact_is_handled() {
        // at c = c* the kernel rises from 0 to ~0.51 before decaying; the
        // solver must still find the decreasing-branch root
        let model = CapitalModel::Kernel(RenewalMoments::new(1.0, 6.0).unwrap());
        let q = CapitalQuery { alpha: 0.45, t: 100.0, c: 1.0 };
        let u = solve_u(&q, &model).unwrap();
        assert!(u > 10.0, "picked the spurious low-u root: {u}");
    }

    #[test]
    fn degenerate_grid_is_an_error() {
        let model = CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 };
        assert!(capital_growth_exponent(&model, 2.0, 0.5, &[100.0]).is_err());
        assert!(capital_growth_exponent(&model, 2.0, 0.5, &[1.0, 2.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn growth_exponent_square_root_law() {
        // three-decade slice keeps the unit test quick; the acceptance
        // suite runs the full 10²..10⁵ grid
        let model = CapitalModel::Kernel(RenewalMoments::new(1.0, 6.0).unwrap());
        let slope =
            capital_growth_exponent(&model, 1.0, 0.4, &[100.0, 400.0, 1600.0, 6400.0]).unwrap();
        assert!((0.4..=0.6).contains(&slope), "slope = {slope}");
    }

    #[test]
    fn rejects_bad_queries() {
        let model = CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 };
        assert!(solve_u(&CapitalQuery { alpha: 0.0, t: 10.0, c: 1.0 }, &model).is_err());
        assert!(solve_u(&CapitalQuery { alpha: 0.5, t: 0.0, c: 1.0 }, &model).is_err());
        assert!(solve_u(&CapitalQuery { alpha: 0.5, t: 10.0, c: 0.0 }, &model).is_err());
    }
}
