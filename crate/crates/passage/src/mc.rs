//! Event-driven Monte Carlo oracle for arbitrary inter-renewal and jump
//! laws.
//!
//! Crossings are checked only at jump epochs: between jumps the surplus
//! u + c·s - V_s grows, so the first passage can only happen at a jump;
//! the simulation is exact, not a discretization.
//!
//! Reproducibility: path i draws from a ChaCha8 stream keyed by
//! (seed, path index), and the aggregate is an integer count, so results
//! are bit-identical regardless of worker count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::law::{LawSampler, LawSpec};

/// Monte Carlo point estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateCi {
    pub p_hat: f64,
    pub std_err: f64,
    pub n_paths: u64,
    pub seed: u64,
}

impl EstimateCi {
    fn from_count(count: u64, n_paths: u64, seed: u64) -> Self {
        let p_hat = count as f64 / n_paths as f64;
        EstimateCi {
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / n_paths as f64).sqrt(),
            n_paths,
            seed,
        }
    }

    pub const CSV_HEADER: &'static str = "p_hat,std_err,n_paths,seed";

    pub fn csv_row(&self) -> String {
        format!("{:.10},{:.10},{},{}", self.p_hat, self.std_err, self.n_paths, self.seed)
    }
}

const BATCH: u64 = 4096;

fn require_positive(law: &LawSpec, role: &str) -> Result<()> {
    if let Some(v) = law.point_mass() {
        if v <= 0.0 {
            return Err(Error::InvalidLaw(format!("{role} law must be a.s. positive, got {law}")));
        }
    }
    Ok(())
}

fn validate_query(c: f64, u: f64, t: f64, n_paths: u64) -> Result<()> {
    if n_paths == 0 {
        return Err(Error::domain("n_paths must be >= 1"));
    }
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("premium rate c must be finite and >= 0, got {c}")));
    }
    if !(u >= 0.0) || !u.is_finite() {
        return Err(Error::domain(format!("level u must be finite and >= 0, got {u}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("horizon t must be finite and >= 0, got {t}")));
    }
    Ok(())
}

#[inline]
fn path_crosses(
    rng: &mut ChaCha8Rng,
    t1: &LawSampler,
    t_law: &LawSampler,
    y_law: &LawSampler,
    c: f64,
    u: f64,
    t: f64,
) -> bool {
    let mut s = t1.sample(rng);
    let mut jumps = 0.0;
    while s <= t {
        jumps += y_law.sample(rng);
        if jumps > u + c * s {
            return true;
        }
        s += t_law.sample(rng);
    }
    false
}

fn run_paths<F>(n_paths: u64, seed: u64, body: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let base = ChaCha8Rng::seed_from_u64(seed);
    let n_batches = n_paths.div_ceil(BATCH);
    (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH;
            let hi = ((b + 1) * BATCH).min(n_paths);
            let mut count = 0u64;
            for i in lo..hi {
                let mut rng = base.clone();
                rng.set_stream(i);
                if body(&mut rng) {
                    count += 1;
                }
            }
            count
        })
        .sum()
}

/// Estimate P{τ(u,c) ≤ t} for first interval T₁, inter-renewal T, and jump
/// Y laws. Draw order along each path is T₁, Y₁, T₂, Y₂, …
pub fn simulate_first_passage(
    t1: &LawSpec,
    t_law: &LawSpec,
    y_law: &LawSpec,
    c: f64,
    u: f64,
    t: f64,
    n_paths: u64,
    seed: u64,
) -> Result<EstimateCi> {
    validate_query(c, u, t, n_paths)?;
    require_positive(t_law, "inter-renewal")?;
    require_positive(y_law, "jump-size")?;
    let (s1, st, sy) = (t1.sampler(), t_law.sampler(), y_law.sampler());
    let count = run_paths(n_paths, seed, move |rng| path_crosses(rng, &s1, &st, &sy, c, u, t));
    Ok(EstimateCi::from_count(count, n_paths, seed))
}

/// Estimate the conditional probability P{v < τ ≤ t | T₁ = v}: the first
/// jump is forced at time v, and an immediate crossing at v itself is
/// excluded from the event.
pub fn simulate_conditional(
    v: f64,
    t_law: &LawSpec,
    y_law: &LawSpec,
    c: f64,
    u: f64,
    t: f64,
    n_paths: u64,
    seed: u64,
) -> Result<EstimateCi> {
    validate_query(c, u, t, n_paths)?;
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::domain(format!("conditioning time v must be >= 0, got {v}")));
    }
    require_positive(t_law, "inter-renewal")?;
    require_positive(y_law, "jump-size")?;
    if v >= t {
        return Ok(EstimateCi { p_hat: 0.0, std_err: 0.0, n_paths, seed });
    }
    let (st, sy) = (t_law.sampler(), y_law.sampler());
    let count = run_paths(n_paths, seed, move |rng| {
        let mut s = v;
        let mut jumps = sy.sample(rng);
        if jumps > u + c * s {
            return false; // crossing exactly at v is outside (v, t]
        }
        loop {
            s += st.sample(rng);
            if s > t {
                return false;
            }
            jumps += sy.sample(rng);
            if jumps > u + c * s {
                return true;
            }
        }
    });
    Ok(EstimateCi::from_count(count, n_paths, seed))
}

/// (mean, variance, raw third moment if it exists) of a law.
pub fn moments_of_law(spec: &LawSpec) -> (f64, f64, Option<f64>) {
    (spec.mean(), spec.variance(), spec.third_moment())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ExpModel, FirstPassageQuery};
    use crate::ig::{ig_kernel, RenewalMoments};

    fn exp_laws() -> (LawSpec, LawSpec, LawSpec) {
        let t = LawSpec::exponential(2.0).unwrap();
        let y = LawSpec::exponential(1.0).unwrap();
        (t, t, y)
    }

    #[test]
    fn matches_exact_exponential() {
        let (t1, t_law, y_law) = exp_laws();
        let est = simulate_first_passage(&t1, &t_law, &y_law, 2.0, 10.0, 100.0, 200_000, 99)
            .unwrap();
        let m = ExpModel::new(2.0, 1.0, 2.0).unwrap();
        let exact = m.type1_cdf(&FirstPassageQuery::new(10.0, 100.0).unwrap()).unwrap();
        assert!(
            (est.p_hat - exact).abs() <= 4.0 * est.std_err,
            "p_hat {} exact {exact} se {}",
            est.p_hat,
            est.std_err
        );
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let (t1, t_law, y_law) = exp_laws();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                simulate_first_passage(&t1, &t_law, &y_law, 2.0, 10.0, 50.0, 40_000, 7).unwrap()
            })
        };
        let a = run(1);
        let b = run(3);
        let c = run(8);
        assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
        assert_eq!(a.p_hat.to_bits(), c.p_hat.to_bits());
    }

    #[test]
    fn monotone_coupling_in_u() {
        // identical streams: crossing at level 20 implies crossing at 10
        let (t1, t_law, y_law) = exp_laws();
        let lo = simulate_first_passage(&t1, &t_law, &y_law, 2.0, 10.0, 50.0, 50_000, 5).unwrap();
        let hi = simulate_first_passage(&t1, &t_law, &y_law, 2.0, 20.0, 50.0, 50_000, 5).unwrap();
        assert!(hi.p_hat <= lo.p_hat);
    }

    #[test]
    fn zero_level_contains_first_jump_crossings() {
        // with u=0, crossing at the first jump means Y1 > c·T1; the full
        // estimator dominates the first-jump-only estimator on the same
        // streams (identical draw order T1, Y1, ...)
        let (t1, t_law, y_law) = exp_laws();
        let (c, t, n, seed) = (2.0, 50.0, 50_000, 31);
        let full = simulate_first_passage(&t1, &t_law, &y_law, c, 0.0, t, n, seed).unwrap();
        let (s1, sy) = (t1.sampler(), y_law.sampler());
        let first_only = run_paths(n, seed, move |rng| {
            let s = s1.sample(rng);
            let y = sy.sample(rng);
            s <= t && y > c * s
        });
        let p_first = first_only as f64 / n as f64;
        assert!(full.p_hat >= p_first, "full {} < first-jump {p_first}", full.p_hat);
    }

    #[test]
    fn zero_drift_matches_compound_poisson_series() {
        // c = 0: crossing by t iff the compound Poisson sum exceeds u;
        // series oracle: sum_n pois(n; λ_T t)·P{Gamma(n, λ_Y) > u}
        let (t1, t_law, y_law) = exp_laws();
        let (u, t) = (10.0, 6.0);
        let est = simulate_first_passage(&t1, &t_law, &y_law, 0.0, u, t, 150_000, 11).unwrap();
        let x = 2.0 * t; // Poisson mean
        let mut series = 0.0;
        let mut pois = (-x).exp();
        for n in 1..400usize {
            pois *= x / n as f64;
            // Erlang survival: e^-u sum_{k<n} u^k/k!
            let mut erl = 0.0;
            let mut term = 1.0;
            for k in 0..n {
                if k > 0 {
                    term *= u / k as f64;
                }
                erl += term;
            }
            series += pois * (-u).exp() * erl;
        }
        assert!(
            (est.p_hat - series).abs() <= 4.0 * est.std_err,
            "p_hat {} series {series} se {}",
            est.p_hat,
            est.std_err
        );
    }

    #[test]
    fn conditional_matches_exact() {
        let (_, t_law, y_law) = exp_laws();
        let (v, u, c, t) = (1.0, 10.0, 2.0, 200.0);
        let est = simulate_conditional(v, &t_law, &y_law, c, u, t, 200_000, 17).unwrap();
        let m = ExpModel::new(2.0, 1.0, c).unwrap();
        let exact = m.conditional_cdf(&FirstPassageQuery::new(u, t).unwrap(), v).unwrap();
        assert!(
            (est.p_hat - exact).abs() <= 4.0 * est.std_err,
            "p_hat {} exact {exact} se {}",
            est.p_hat,
            est.std_err
        );
    }

    #[test]
    fn conditional_past_horizon_is_zero() {
        let (_, t_law, y_law) = exp_laws();
        let est = simulate_conditional(5.0, &t_law, &y_law, 2.0, 10.0, 5.0, 100, 1).unwrap();
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn conditional_heavy_tail_tracks_kernel() {
        // Pareto(2.5) jumps, gamma inter-renewals, u+cv = 100: the kernel
        // with matched (M, D²) sits within its error band
        let t_law = LawSpec::gamma(2.0, 2.0).unwrap();
        let y_law = LawSpec::pareto(2.5, 1.0).unwrap();
        let rm = RenewalMoments::from_laws(&t_law, &y_law).unwrap();
        let (v, u, c, t) = (5.0, 95.0, 1.0, 300.0);
        let est = simulate_conditional(v, &t_law, &y_law, c, u, t, 100_000, 23).unwrap();
        let k = ig_kernel(&rm, u, c, t, v).unwrap();
        let band = (4.0 * est.std_err).max(0.05);
        assert!((est.p_hat - k).abs() <= band, "mc {} kernel {k} band {band}", est.p_hat);
    }

    #[test]
    fn moment_helpers() {
        let (m, v, t3) = moments_of_law(&LawSpec::exponential(2.0).unwrap());
        assert!((m - 0.5).abs() < 1e-15 && (v - 0.25).abs() < 1e-15);
        assert!((t3.unwrap() - 0.75).abs() < 1e-15);
        let (_, _, t3) = moments_of_law(&LawSpec::pareto(2.5, 1.0).unwrap());
        assert!(t3.is_none());
    }

    #[test]
    fn rejects_bad_inputs() {
        let (t1, t_law, y_law) = exp_laws();
        assert!(simulate_first_passage(&t1, &t_law, &y_law, 2.0, 10.0, 100.0, 0, 1).is_err());
        assert!(
            simulate_first_passage(&t1, &t_law, &y_law, 2.0, 10.0, f64::INFINITY, 10, 1).is_err()
        );
        let bad = LawSpec::deterministic(0.0).unwrap();
        assert!(simulate_first_passage(&t1, &bad, &y_law, 2.0, 10.0, 10.0, 10, 1).is_err());
    }
}
