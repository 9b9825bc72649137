//! Command-line surface: single evaluations, c-sweeps to CSV, Monte Carlo
//! runs, capital inversion, and a quick self-test battery.
//!
//! Exit codes: 0 success, 2 invalid parameters (the message names the
//! violated precondition), 3 no bracket for the capital equation,
//! 1 self-test failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use passage::capital::{capital_growth_exponent, solve_u, CapitalModel, CapitalQuery};
use passage::classic::{diffusion_approx_exp, normal_above, normal_below};
use passage::exact::{ExpModel, FirstPassageQuery};
use passage::ig::{ig_kernel, ig_kernel_integral_form, teugels_type_cdf, RenewalMoments};
use passage::law::LawSpec;
use passage::mc::{simulate_first_passage, EstimateCi};
use passage::walk::type2_via_walk;
use passage::{Error, Result};

/// Worker-count override honored when --workers is absent.
const WORKERS_ENV: &str = "PASSAGE_WORKERS";

#[derive(Parser)]
#[command(
    name = "passage",
    about = "First level-crossing probabilities of a compound renewal process net of drift",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one method at a single (c, u, t) point.
    Eval(EvalArgs),
    /// Sweep methods over a premium-rate grid and write CSV.
    Sweep(SweepArgs),
    /// Monte Carlo estimate for arbitrary laws; prints a CSV row.
    Mc(McArgs),
    /// Solve P{tau(u,c) <= t} = alpha for the level u.
    Capital(CapitalArgs),
    /// Run a quick internal cross-validation battery.
    Selftest,
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Method {
    Type1,
    Type2,
    Type3,
    Normal,
    Diffusion,
    Ig,
    Teugels,
    Mc,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Type1 => "type1",
            Method::Type2 => "type2",
            Method::Type3 => "type3",
            Method::Normal => "normal",
            Method::Diffusion => "diffusion",
            Method::Ig => "ig",
            Method::Teugels => "teugels",
            Method::Mc => "mc",
        }
    }
}

/// Model parameters: exactly one of the exponential-rate pair
/// (--lam-t, --lam-y) or the renewal-moment pair (--big-m, --d2).
#[derive(Args, Clone)]
struct ModelArgs {
    /// Inter-renewal rate of the exponential model.
    #[arg(long)]
    lam_t: Option<f64>,
    /// Jump-size rate of the exponential model.
    #[arg(long)]
    lam_y: Option<f64>,
    /// Renewal moment M = E T/E Y.
    #[arg(long)]
    big_m: Option<f64>,
    /// Renewal moment D^2.
    #[arg(long)]
    d2: Option<f64>,
}

enum Model {
    Rates { lam_t: f64, lam_y: f64 },
    Moments(RenewalMoments),
}

impl Model {
    fn parse(a: &ModelArgs) -> Result<Model> {
        match (a.lam_t, a.lam_y, a.big_m, a.d2) {
            (Some(lt), Some(ly), None, None) => {
                ExpModel::new(lt, ly, 1.0)?; // validates the rates
                Ok(Model::Rates { lam_t: lt, lam_y: ly })
            }
            (None, None, Some(m), Some(d2)) => Ok(Model::Moments(RenewalMoments::new(m, d2)?)),
            _ => Err(Error::domain(
                "give the model as exactly one of (--lam-t, --lam-y) or (--big-m, --d2)",
            )),
        }
    }

    fn rates(&self) -> Result<(f64, f64)> {
        match self {
            Model::Rates { lam_t, lam_y } => Ok((*lam_t, *lam_y)),
            Model::Moments(_) => Err(Error::domain(
                "this method needs the exponential model; give --lam-t and --lam-y",
            )),
        }
    }

    fn moments(&self) -> RenewalMoments {
        match self {
            Model::Rates { lam_t, lam_y } => {
                RenewalMoments::from_exponential(&ExpModel { lam_t: *lam_t, lam_y: *lam_y, c: 1.0 })
            }
            Model::Moments(rm) => *rm,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    u: f64,
    /// Horizon; `inf` is accepted.
    #[arg(long)]
    t: f64,
    /// Conditioning time of the first renewal (ig kernel only).
    #[arg(long, default_value_t = 0.0)]
    v: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    n_paths: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    c_min: f64,
    #[arg(long)]
    c_max: f64,
    #[arg(long)]
    n_points: usize,
    /// Comma-separated subset of type1,type2,type3,normal,diffusion,ig,teugels,mc.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    u: f64,
    #[arg(long)]
    t: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    n_paths: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct McArgs {
    /// Law of the first interval, e.g. exponential(2) or deterministic(0.5).
    #[arg(long)]
    law_t1: String,
    /// Law of the inter-renewal times.
    #[arg(long)]
    law_t: String,
    /// Law of the jump sizes.
    #[arg(long)]
    law_y: String,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    u: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 1_000_000)]
    n_paths: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct CapitalArgs {
    /// Backend c.d.f.: exact (exponential Type I) or ig (kernel).
    #[arg(long, value_enum)]
    backend: Backend,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    c: f64,
    /// Instead of a single solve, print the log-log growth slope of u*(t)
    /// over a horizon grid t, 10t, 100t, 1000t.
    #[arg(long, default_value_t = false)]
    growth: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Backend {
    Exact,
    Ig,
}

fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", sig, x);
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn worker_pool(workers: Option<usize>) -> std::result::Result<rayon::ThreadPool, String> {
    let n = workers
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|s| s.parse().ok()))
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        });
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .map_err(|e| format!("failed to build worker pool: {e}"))
}

/// One method at one point. Ok(None) marks a method-invalid point
/// (critical-rate exclusions) that a sweep renders as an empty cell.
fn eval_point(
    method: Method,
    model: &Model,
    c: f64,
    u: f64,
    t: f64,
    v: f64,
    seed: u64,
    n_paths: u64,
) -> Result<Option<(f64, Option<f64>)>> {
    let out = match method {
        Method::Type1 | Method::Type2 | Method::Type3 => {
            let (lt, ly) = model.rates()?;
            let m = ExpModel::new(lt, ly, c)?;
            let q = FirstPassageQuery::new(u, t)?;
            let p = match method {
                Method::Type1 => m.type1_cdf(&q)?,
                Method::Type2 => m.type2_cdf(&q)?,
                _ => m.type3_cdf(&q)?,
            };
            Some((p, None))
        }
        Method::Normal => {
            let (lt, ly) = model.rates()?;
            let m = ExpModel::new(lt, ly, c)?;
            let q = FirstPassageQuery::new(u, t)?;
            let cs = m.critical_rate();
            match if c < cs { normal_below(&m, &q) } else { normal_above(&m, &q) } {
                Ok(p) => Some((p, None)),
                Err(Error::CriticalRate { .. }) => None,
                Err(e) => return Err(e),
            }
        }
        Method::Diffusion => {
            let (lt, ly) = model.rates()?;
            let m = ExpModel::new(lt, ly, c)?;
            Some((diffusion_approx_exp(&m, &FirstPassageQuery::new(u, t)?)?, None))
        }
        Method::Ig => {
            let rm = model.moments();
            Some((ig_kernel(&rm, u, c, t, v)?, None))
        }
        Method::Teugels => {
            let rm = model.moments();
            match teugels_type_cdf(&rm, u, c, t) {
                Ok(p) => Some((p, None)),
                Err(Error::CriticalRate { .. }) => None,
                Err(e) => return Err(e),
            }
        }
        Method::Mc => {
            let (lt, ly) = model.rates()?;
            let law_t = LawSpec::exponential(lt)?;
            let law_y = LawSpec::exponential(ly)?;
            let est = simulate_first_passage(&law_t, &law_t, &law_y, c, u, t, n_paths, seed)?;
            Some((est.p_hat, Some(est.std_err)))
        }
    };
    Ok(out.filter(|(p, _)| p.is_finite()))
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let model = Model::parse(&a.model)?;
    let pool = worker_pool(a.workers).map_err(Error::Domain)?;
    let out = pool.install(|| {
        eval_point(a.method, &model, a.c, a.u, a.t, a.v, a.seed, a.n_paths)
    })?;
    match out {
        Some((p, Some(se))) => println!("{} {}", fmt_sig(p, 6), fmt_sig(se, 6)),
        Some((p, None)) => println!("{}", fmt_sig(p, 6)),
        None => {
            return Err(Error::CriticalRate {
                c: a.c,
            })
        }
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    if !(a.c_min < a.c_max) {
        return Err(Error::domain(format!("need c_min < c_max, got {} >= {}", a.c_min, a.c_max)));
    }
    if a.n_points < 2 {
        return Err(Error::domain(format!("need n_points >= 2, got {}", a.n_points)));
    }
    if a.methods.is_empty() {
        return Err(Error::domain("give at least one method"));
    }
    let model = Model::parse(&a.model)?;
    let pool = worker_pool(a.workers).map_err(Error::Domain)?;

    let mut methods = a.methods.clone();
    methods.sort();
    methods.dedup();

    let step = (a.c_max - a.c_min) / (a.n_points - 1) as f64;
    let jobs: Vec<(f64, Method)> = (0..a.n_points)
        .map(|i| a.c_min + step * i as f64)
        .flat_map(|c| methods.iter().map(move |&m| (c, m)))
        .collect();

    let rows: Result<Vec<(f64, Method, Option<(f64, Option<f64>)>)>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, m)| {
                eval_point(m, &model, c, a.u, a.t, 0.0, a.seed, a.n_paths).map(|v| (c, m, v))
            })
            .collect()
    });
    let mut rows = rows?;
    rows.sort_by(|x, y| {
        x.0.partial_cmp(&y.0).unwrap().then_with(|| x.1.name().cmp(y.1.name()))
    });

    let mut csv = String::from("c,method,value,std_err\n");
    for (c, m, cell) in rows {
        match cell {
            Some((p, Some(se))) => {
                let _ = writeln!(csv, "{c:.10},{},{p:.10},{se:.10}", m.name());
            }
            Some((p, None)) => {
                let _ = writeln!(csv, "{c:.10},{},{p:.10},", m.name());
            }
            None => {
                let _ = writeln!(csv, "{c:.10},{},,", m.name());
            }
        }
    }
    std::fs::write(&a.out, csv)
        .map_err(|e| Error::domain(format!("cannot write {}: {e}", a.out.display())))?;
    println!("wrote {}", a.out.display());
    Ok(())
}

fn cmd_mc(a: &McArgs) -> Result<()> {
    let t1 = LawSpec::from_str(&a.law_t1)?;
    let t_law = LawSpec::from_str(&a.law_t)?;
    let y_law = LawSpec::from_str(&a.law_y)?;
    let pool = worker_pool(a.workers).map_err(Error::Domain)?;
    let est = pool.install(|| {
        simulate_first_passage(&t1, &t_law, &y_law, a.c, a.u, a.t, a.n_paths, a.seed)
    })?;
    println!("{}", EstimateCi::CSV_HEADER);
    println!("{}", est.csv_row());
    Ok(())
}

fn cmd_capital(a: &CapitalArgs) -> Result<()> {
    let model = Model::parse(&a.model)?;
    let backend = match a.backend {
        Backend::Exact => {
            let (lt, ly) = model.rates()?;
            CapitalModel::Exact { lam_t: lt, lam_y: ly }
        }
        Backend::Ig => CapitalModel::Kernel(model.moments()),
    };
    if a.growth {
        let grid = [a.t, 10.0 * a.t, 100.0 * a.t, 1000.0 * a.t];
        let slope = capital_growth_exponent(&backend, a.c, a.alpha, &grid)?;
        println!("{}", fmt_sig(slope, 4));
    } else {
        let u = solve_u(&CapitalQuery { alpha: a.alpha, t: a.t, c: a.c }, &backend)?;
        println!("{}", fmt_sig(u, 4));
    }
    Ok(())
}

fn cmd_selftest() -> ExitCode {
    let mut failures = 0usize;
    let mut check = |name: &str, pass: bool, detail: String| {
        if pass {
            println!("ok   {name}: {detail}");
        } else {
            println!("FAIL {name}: {detail}");
            failures += 1;
        }
    };

    // three-way formula agreement at the reference point
    let m = ExpModel::new(2.0, 1.0, 2.0).unwrap();
    let q = FirstPassageQuery::new(10.0, 200.0).unwrap();
    let t1 = m.type1_cdf(&q).unwrap();
    let t2 = m.type2_cdf(&q).unwrap();
    let t3 = m.type3_cdf(&q).unwrap();
    let tw = type2_via_walk(&m, &q).unwrap();
    let spread =
        (t1 - t2).abs().max((t1 - t3).abs()).max((t1 - tw).abs());
    check("formula-agreement", spread < 1e-6, format!("spread {spread:.2e} at the reference point"));
    check("reference-value", (t1 - 0.699).abs() < 2e-3, format!("type1 = {t1:.6}"));

    // kernel closed form vs integral form
    let rm = RenewalMoments::new(0.5, 0.5).unwrap();
    let k1 = ig_kernel(&rm, 30.0, 1.5, 100.0, 0.0).unwrap();
    let k2 = ig_kernel_integral_form(&rm, 30.0, 1.5, 100.0, 0.0).unwrap();
    check("kernel-forms", (k1 - k2).abs() < 1e-8, format!("|closed - integral| = {:.2e}", (k1 - k2).abs()));

    // MC vs exact, quick run
    let law_t = LawSpec::exponential(2.0).unwrap();
    let law_y = LawSpec::exponential(1.0).unwrap();
    let est =
        simulate_first_passage(&law_t, &law_t, &law_y, 2.0, 10.0, 100.0, 100_000, 42).unwrap();
    let exact = m.type1_cdf(&FirstPassageQuery::new(10.0, 100.0).unwrap()).unwrap();
    check(
        "mc-vs-exact",
        (est.p_hat - exact).abs() <= 4.0 * est.std_err,
        format!("p_hat {:.5} vs exact {:.5} (4se = {:.5})", est.p_hat, exact, 4.0 * est.std_err),
    );

    // capital inversion round trip
    let cap = solve_u(
        &CapitalQuery { alpha: exact, t: 100.0, c: 2.0 },
        &CapitalModel::Exact { lam_t: 2.0, lam_y: 1.0 },
    )
    .unwrap();
    check("capital-roundtrip", (cap - 10.0).abs() < 0.05, format!("u* = {cap:.4}"));

    if failures == 0 {
        println!("selftest passed");
        ExitCode::SUCCESS
    } else {
        println!("selftest failed: {failures} check(s)");
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Mc(a) => cmd_mc(a),
        Command::Capital(a) => cmd_capital(a),
        Command::Selftest => return cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::NoBracket { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
