//! Parametric law specifications shared by the Monte Carlo oracle and the
//! unconditional inverse-Gaussian convolution.
//!
//! Text form: `family(p1[,p2])`, e.g. `exponential(2)`, `gamma(2,0.5)`,
//! `pareto(2.5,1)`, `deterministic(0.5)`. Pareto uses the survival
//! convention P{X > x} = (x/scale)^{-index} for x ≥ scale.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngExt};
use rand_distr::{Distribution, Exp, Gamma};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawSpec {
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
    Pareto { index: f64, scale: f64 },
    Deterministic { value: f64 },
}

impl LawSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::InvalidLaw(format!("exponential rate must be positive, got {rate}")));
        }
        Ok(LawSpec::Exponential { rate })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return Err(Error::InvalidLaw(format!(
                "gamma parameters must be positive, got shape {shape}, rate {rate}"
            )));
        }
        Ok(LawSpec::Gamma { shape, rate })
    }

    pub fn pareto(index: f64, scale: f64) -> Result<Self> {
        if !(index > 0.0 && scale > 0.0) || !index.is_finite() || !scale.is_finite() {
            return Err(Error::InvalidLaw(format!(
                "pareto parameters must be positive, got index {index}, scale {scale}"
            )));
        }
        Ok(LawSpec::Pareto { index, scale })
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::InvalidLaw(format!(
                "deterministic value must be nonnegative, got {value}"
            )));
        }
        Ok(LawSpec::Deterministic { value })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LawSpec::Exponential { rate } => 1.0 / rate,
            LawSpec::Gamma { shape, rate } => shape / rate,
            LawSpec::Pareto { index, scale } => {
                if index > 1.0 {
                    index * scale / (index - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            LawSpec::Deterministic { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            LawSpec::Exponential { rate } => 1.0 / (rate * rate),
            LawSpec::Gamma { shape, rate } => shape / (rate * rate),
            LawSpec::Pareto { index, scale } => {
                if index > 2.0 {
                    scale * scale * index / ((index - 1.0) * (index - 1.0) * (index - 2.0))
                } else {
                    f64::INFINITY
                }
            }
            LawSpec::Deterministic { .. } => 0.0,
        }
    }

    /// Raw third moment E X³, or None where it does not exist
    /// (Pareto with index ≤ 3).
    pub fn third_moment(&self) -> Option<f64> {
        match *self {
            LawSpec::Exponential { rate } => Some(6.0 / rate.powi(3)),
            LawSpec::Gamma { shape, rate } => {
                Some(shape * (shape + 1.0) * (shape + 2.0) / rate.powi(3))
            }
            LawSpec::Pareto { index, scale } => {
                if index > 3.0 {
                    Some(index * scale.powi(3) / (index - 3.0))
                } else {
                    None
                }
            }
            LawSpec::Deterministic { value } => Some(value.powi(3)),
        }
    }

    /// Probability density (deterministic laws carry a point mass and have
    /// no density; callers must branch on [`LawSpec::point_mass`]).
    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            LawSpec::Exponential { rate } => rate * (-rate * x).exp(),
            LawSpec::Gamma { shape, rate } => {
                if x == 0.0 {
                    return if shape < 1.0 { f64::INFINITY } else if shape == 1.0 { rate } else { 0.0 };
                }
                let ln = shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape);
                ln.exp()
            }
            LawSpec::Pareto { index, scale } => {
                if x < scale {
                    0.0
                } else {
                    index * (scale / x).powf(index) / x
                }
            }
            LawSpec::Deterministic { .. } => f64::NAN,
        }
    }

    /// Survival function P{X > x}.
    pub fn tail(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        match *self {
            LawSpec::Exponential { rate } => (-rate * x).exp(),
            LawSpec::Gamma { shape, rate } => gamma_survival(shape, rate * x),
            LawSpec::Pareto { index, scale } => {
                if x < scale {
                    1.0
                } else {
                    (x / scale).powf(-index)
                }
            }
            LawSpec::Deterministic { value } => {
                if x < value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// The point-mass location for deterministic laws.
    pub fn point_mass(&self) -> Option<f64> {
        match *self {
            LawSpec::Deterministic { value } => Some(value),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            LawSpec::Exponential { rate } => {
                Exp::new(rate).expect("validated at construction").sample(rng)
            }
            LawSpec::Gamma { shape, rate } => {
                Gamma::new(shape, 1.0 / rate).expect("validated at construction").sample(rng)
            }
            LawSpec::Pareto { index, scale } => {
                let u: f64 = rng.random();
                scale * (1.0 - u).powf(-1.0 / index)
            }
            LawSpec::Deterministic { value } => value,
        }
    }

    /// A sampler with the per-law setup hoisted out of the path loop.
    pub fn sampler(&self) -> LawSampler {
        match *self {
            LawSpec::Exponential { rate } => {
                LawSampler::Exponential(Exp::new(rate).expect("validated"))
            }
            LawSpec::Gamma { shape, rate } => {
                LawSampler::Gamma(Gamma::new(shape, 1.0 / rate).expect("validated"))
            }
            LawSpec::Pareto { index, scale } => LawSampler::Pareto { inv_index: -1.0 / index, scale },
            LawSpec::Deterministic { value } => LawSampler::Deterministic(value),
        }
    }
}

/// Resolved sampler for hot loops.
#[derive(Clone, Copy)]
pub enum LawSampler {
    Exponential(Exp<f64>),
    Gamma(Gamma<f64>),
    Pareto { inv_index: f64, scale: f64 },
    Deterministic(f64),
}

impl LawSampler {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            LawSampler::Exponential(d) => d.sample(rng),
            LawSampler::Gamma(d) => d.sample(rng),
            LawSampler::Pareto { inv_index, scale } => {
                let u: f64 = rng.random();
                scale * (1.0 - u).powf(*inv_index)
            }
            LawSampler::Deterministic(v) => *v,
        }
    }
}

impl fmt::Display for LawSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LawSpec::Exponential { rate } => write!(f, "exponential({rate})"),
            LawSpec::Gamma { shape, rate } => write!(f, "gamma({shape},{rate})"),
            LawSpec::Pareto { index, scale } => write!(f, "pareto({index},{scale})"),
            LawSpec::Deterministic { value } => write!(f, "deterministic({value})"),
        }
    }
}

impl FromStr for LawSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::InvalidLaw(format!("expected family(params), got '{s}'")))?;
        if !s.ends_with(')') {
            return Err(Error::InvalidLaw(format!("missing closing parenthesis in '{s}'")));
        }
        let family = s[..open].trim().to_ascii_lowercase();
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidLaw(format!("bad numeric parameter '{a}' in '{s}'")))
            })
            .collect::<Result<_>>()?;
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                Err(Error::InvalidLaw(format!(
                    "{family} takes {n} parameter(s), got {} in '{s}'",
                    args.len()
                )))
            } else {
                Ok(())
            }
        };
        match family.as_str() {
            "exponential" | "exp" => {
                arity(1)?;
                LawSpec::exponential(args[0])
            }
            "gamma" => {
                arity(2)?;
                LawSpec::gamma(args[0], args[1])
            }
            "pareto" => {
                arity(2)?;
                LawSpec::pareto(args[0], args[1])
            }
            "deterministic" | "det" => {
                arity(1)?;
                LawSpec::deterministic(args[0])
            }
            other => Err(Error::InvalidLaw(format!("unknown family '{other}'"))),
        }
    }
}

/// Lanczos log-gamma, |relative error| < 1e-13 for positive arguments.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized upper incomplete gamma Q(shape, z) = P{Gamma(shape,1) > z}
/// by series/continued fraction (Numerical-Recipes style split).
fn gamma_survival(shape: f64, z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    if z < shape + 1.0 {
        // 1 - P(a,z) via the series for the lower function
        let mut ap = shape;
        let mut sum = 1.0 / shape;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= z / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        let p = (sum.ln() + shape * z.ln() - z - ln_gamma(shape)).exp();
        (1.0 - p).clamp(0.0, 1.0)
    } else {
        // continued fraction for Q(a,z), modified Lentz
        let tiny = 1e-300;
        let mut b = z + 1.0 - shape;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - shape);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        ((shape * z.ln() - z - ln_gamma(shape)).exp() * h).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["exponential(2)", "gamma(2,0.5)", "pareto(2.5,1)", "deterministic(0.5)"] {
            let law: LawSpec = s.parse().unwrap();
            let back: LawSpec = law.to_string().parse().unwrap();
            assert_eq!(law, back);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("exponential".parse::<LawSpec>().is_err());
        assert!("exponential(0)".parse::<LawSpec>().is_err());
        assert!("gamma(2)".parse::<LawSpec>().is_err());
        assert!("cauchy(1)".parse::<LawSpec>().is_err());
        assert!("pareto(2.5,x)".parse::<LawSpec>().is_err());
    }

    #[test]
    fn exponential_moments() {
        let law = LawSpec::exponential(2.0).unwrap();
        assert!((law.mean() - 0.5).abs() < 1e-15);
        assert!((law.variance() - 0.25).abs() < 1e-15);
        assert!((law.third_moment().unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn deterministic_moments() {
        let law = LawSpec::deterministic(3.0).unwrap();
        assert_eq!(law.mean(), 3.0);
        assert_eq!(law.variance(), 0.0);
        assert_eq!(law.third_moment(), Some(27.0));
    }

    #[test]
    fn gamma_moments_match_mgf_oracle() {
        // E X^3 of Gamma(k, rate θ) = k(k+1)(k+2)/θ³
        let law = LawSpec::gamma(2.0, 0.5).unwrap();
        assert!((law.mean() - 4.0).abs() < 1e-15);
        assert!((law.variance() - 8.0).abs() < 1e-15);
        assert!((law.third_moment().unwrap() - 2.0 * 3.0 * 4.0 / 0.125).abs() < 1e-9);
    }

    #[test]
    fn pareto_heavy_tail_flags() {
        let law = LawSpec::pareto(2.5, 1.0).unwrap();
        assert!(law.third_moment().is_none());
        assert!(law.variance().is_finite());
        let light = LawSpec::pareto(3.5, 1.0).unwrap();
        assert!(light.third_moment().is_some());
    }

    #[test]
    fn tails_and_densities_are_consistent() {
        // numeric derivative of the tail matches -density
        for law in [
            LawSpec::exponential(1.3).unwrap(),
            LawSpec::gamma(2.0, 0.7).unwrap(),
            LawSpec::pareto(2.5, 1.0).unwrap(),
        ] {
            for &x in &[1.2, 2.0, 5.0] {
                let h = 1e-5;
                let d_num = -(law.tail(x + h) - law.tail(x - h)) / (2.0 * h);
                assert!(
                    (d_num - law.density(x)).abs() < 1e-6 * d_num.abs().max(1.0),
                    "{law} at x={x}: {d_num} vs {}",
                    law.density(x)
                );
            }
        }
    }

    #[test]
    fn gamma_survival_integer_shape_matches_erlang_sum() {
        // Q(n, z) = e^-z sum_{k<n} z^k/k!
        for &(n, z) in &[(1u32, 0.7), (3, 2.5), (5, 9.0)] {
            let mut sum = 0.0;
            let mut term = 1.0;
            for k in 0..n {
                if k > 0 {
                    term *= z / k as f64;
                }
                sum += term;
            }
            let want = (-z).exp() * sum;
            let got = gamma_survival(n as f64, z);
            assert!((got - want).abs() < 1e-13, "n={n} z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn sampling_matches_moments() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for law in [
            LawSpec::exponential(2.0).unwrap(),
            LawSpec::gamma(2.0, 2.0).unwrap(),
            LawSpec::pareto(3.5, 1.0).unwrap(),
        ] {
            let n = 200_000;
            let mean: f64 = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
            let se = (law.variance() / n as f64).sqrt();
            assert!(
                (mean - law.mean()).abs() < 5.0 * se,
                "{law}: sample mean {mean} vs {}",
                law.mean()
            );
        }
    }
}
