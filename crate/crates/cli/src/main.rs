//! `fkburger`: simulations, estimators, FK map samples, exact tables and the
//! acceptance suite from the command line.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fkburger::fk_sampler::{
    enumeration_csv, exact_enumerate, p_from_q, q_from_p, rejection_sample_balanced,
};
use fkburger::planar_map::{word_to_map, MapJson};
use fkburger::stack_sim::{gnuplot_script, simulate_trajectory, InitialStackPolicy, Trajectory};
use fkburger::statistics::{
    bottleneck_k, estimate_chi, estimate_variance_ratio, excursion_stats, f_fraction, records_csv,
    stack_balance, tail_exceedance, EstimateRecord,
};
use fkburger::verify::{run_criterion, CRITERIA, DEFAULT_SEED};
use fkburger::Error;

#[derive(Parser, Debug)]
#[command(name = "fkburger", version, about = "Hamburger-cheeseburger walks and FK planar maps")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trajectory (D_n, C_n) of one walk.
    Simulate {
        #[command(flatten)]
        param: Param,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Policy::Alternating)]
        policy: Policy,
    },
    /// Monte Carlo estimators.
    Estimate {
        #[arg(value_enum)]
        estimator: Estimator,
        #[command(flatten)]
        param: Param,
        /// Walk length, stack depth or number of orders, by estimator.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Truncation length for estimators that stop on an event.
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: u64,
        /// Thresholds `a` for the tail estimator, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0])]
        a: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Policy::Alternating)]
        policy: Policy,
        #[command(flatten)]
        common: Common,
    },
    /// One conditioned FK sample and its map.
    SampleMap {
        #[command(flatten)]
        param: Param,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000_000)]
        max_attempts: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact law of balanced words of length 2n.
    Enumerate {
        #[command(flatten)]
        param: OptionalParam,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the acceptance checks; exits 1 if any fails.
    Verify {
        /// Criteria to run, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Param {
    /// Flexible-order fraction.
    #[arg(long)]
    p: Option<f64>,
    /// Loop weight of the FK model; converted to p.
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct OptionalParam {
    /// Flexible-order fraction (default: q = 1).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, env = "FKBURGER_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (default: stdout). `simulate` treats it as a stem and
    /// also writes `.json` and `.gp` companions.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Policy {
    Alternating,
    IidFair,
}

impl Policy {
    fn policy(self) -> InitialStackPolicy {
        match self {
            Policy::Alternating => InitialStackPolicy::Alternating,
            Policy::IidFair => InitialStackPolicy::IidFair,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Estimator {
    Variance,
    Chi,
    Excursion,
    Balance,
    Ffraction,
    Bottleneck,
    Tail,
}

/// Everything that determines an artifact; embedded in each one.
#[derive(Serialize, Debug)]
struct RunConfig {
    subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimator: Option<Estimator>,
    p: Option<f64>,
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    policy: Option<Policy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<Value>,
    out: Option<String>,
    format: Format,
    rng: &'static str,
    version: &'static str,
}

enum Failure {
    Usage(String),
    Verification(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidProbability(_) | Error::OutOfRange(_) | Error::EnumerationLimit { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn resolve(p: Option<f64>, q: Option<f64>) -> Result<(f64, Option<f64>), Failure> {
    match (p, q) {
        (Some(p), None) => {
            fkburger::stack_sim::MuParams::new(p)?;
            Ok((p, q_from_p(p).ok()))
        }
        (None, Some(q)) => Ok((p_from_q(q)?, Some(q))),
        _ => Err(Failure::Usage("exactly one of --p and --q is required".into())),
    }
}

fn config(subcommand: &'static str, common: &Common, format: Format) -> RunConfig {
    RunConfig {
        subcommand,
        estimator: None,
        p: None,
        q: None,
        n: None,
        trials: None,
        seed: common.seed,
        policy: None,
        extra: None,
        out: common.out.as_ref().map(|p| p.display().to_string()),
        format,
        rng: fkburger::rng::RNG_NAME,
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn config_line(cfg: &RunConfig) -> String {
    serde_json::to_string(cfg).expect("config serializes")
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes") + "\n"
}

fn pick(common: &Common, allowed: &[Format], default: Format) -> Result<Format, Failure> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("format {f:?} is not available here")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { param, n, common, policy } => {
            let (p, q) = resolve(param.p, param.q)?;
            let format = pick(&common, &[Format::Csv, Format::Json], Format::Csv)?;
            let mut cfg = config("simulate", &common, format);
            (cfg.p, cfg.q, cfg.n, cfg.policy) = (Some(p), q, Some(n), Some(policy));
            let t = simulate_trajectory(p, n, &policy.policy(), common.seed)?;
            let body = match format {
                Format::Csv => format!("# {}\n{}", config_line(&cfg), t.to_csv()),
                _ => pretty(&json!({
                    "config": cfg,
                    "meta": t.meta(),
                    "d": t.d,
                    "c": t.c,
                    "x": t.x.to_string(),
                    "y": t.y.to_string(),
                })),
            };
            emit(&common.out, &body)?;
            if let Some(path) = &common.out {
                if format == Format::Csv {
                    write_companions(path, &cfg, &t)?;
                }
            }
        }
        Command::Estimate { estimator, param, n, trials, cutoff, a, policy, common } => {
            let (p, q) = resolve(param.p, param.q)?;
            let format = pick(&common, &[Format::Csv, Format::Json], Format::Json)?;
            let mut cfg = config("estimate", &common, format);
            (cfg.estimator, cfg.p, cfg.q, cfg.trials) = (Some(estimator), Some(p), q, Some(trials));
            let seed = common.seed;
            let need_n = |default: usize| n.unwrap_or(default);
            let params = |extra: Value| {
                let mut m = json!({ "p": p, "q": q });
                if let (Value::Object(m), Value::Object(e)) = (&mut m, extra) {
                    m.extend(e);
                }
                m
            };
            let (records, report): (Vec<EstimateRecord>, Value) = match estimator {
                Estimator::Variance => {
                    let n = need_n(4096);
                    cfg.n = Some(n);
                    cfg.policy = Some(policy);
                    let r = estimate_variance_ratio(p, n, trials, &policy.policy(), seed)?;
                    let ps = params(json!({ "n": n, "policy": policy }));
                    (
                        vec![
                            EstimateRecord::new("var_d_over_n", ps.clone(), &r.var_d_over_n, seed),
                            EstimateRecord::new("var_c_over_n", ps.clone(), &r.var_c_over_n, seed),
                            EstimateRecord::new("corr_dc", ps, &r.corr_dc, seed),
                        ],
                        serde_json::to_value(r).expect("report serializes"),
                    )
                }
                Estimator::Chi => {
                    cfg.extra = Some(json!({ "cutoff": cutoff }));
                    let r = estimate_chi(p, trials, cutoff, seed)?;
                    let ps = params(json!({ "cutoff": cutoff, "identity_violations": r.identity_violations }));
                    (vec![EstimateRecord::new("chi", ps, &r.chi, seed)], serde_json::to_value(r).expect("report serializes"))
                }
                Estimator::Excursion => {
                    cfg.extra = Some(json!({ "cutoff": cutoff }));
                    let r = excursion_stats(p, trials, cutoff, seed)?;
                    let ps = params(json!({
                        "cutoff": cutoff,
                        "median_k": r.median_k,
                        "flex_violations": r.flex_violations,
                        "balance_violations": r.balance_violations,
                    }));
                    (
                        vec![EstimateRecord::new("excursion_length", ps, &r.truncated_mean_len, seed)],
                        serde_json::to_value(r).expect("report serializes"),
                    )
                }
                Estimator::Balance => {
                    let depth = need_n(10_000);
                    cfg.n = Some(depth);
                    cfg.extra = Some(json!({ "max_steps": cutoff }));
                    let e = stack_balance(p, depth, trials, cutoff, seed)?;
                    let ps = params(json!({ "depth": depth, "max_steps": cutoff }));
                    (vec![EstimateRecord::new("ham_fraction", ps, &e, seed)], serde_json::to_value(e).expect("estimate serializes"))
                }
                Estimator::Ffraction => {
                    let orders = need_n(1000);
                    cfg.n = Some(orders);
                    cfg.extra = Some(json!({ "max_steps": cutoff }));
                    let e = f_fraction(p, orders, trials, cutoff, seed)?;
                    let ps = params(json!({ "n": orders, "max_steps": cutoff }));
                    (vec![EstimateRecord::new("flex_fraction", ps, &e, seed)], serde_json::to_value(e).expect("estimate serializes"))
                }
                Estimator::Bottleneck => {
                    cfg.extra = Some(json!({ "cutoff": cutoff }));
                    let r = bottleneck_k(p, trials, cutoff, seed)?;
                    let ps = params(json!({ "cutoff": cutoff, "reduce_violations": r.reduce_violations }));
                    (vec![EstimateRecord::new("bottleneck_k", ps, &r.k, seed)], serde_json::to_value(r).expect("report serializes"))
                }
                Estimator::Tail => {
                    let len = need_n(4096);
                    cfg.n = Some(len);
                    cfg.extra = Some(json!({ "a": a }));
                    let r = tail_exceedance(p, len, &a, trials, seed)?;
                    let records = r
                        .exceedance
                        .iter()
                        .map(|&(a, prob)| {
                            let e = fkburger::statistics::Estimate {
                                value: prob,
                                std_error: (prob * (1.0 - prob) / trials as f64).sqrt(),
                                trials,
                                truncated_fraction: None,
                            };
                            EstimateRecord::new("tail_exceedance", params(json!({ "n": len, "a": a })), &e, seed)
                        })
                        .collect();
                    (records, serde_json::to_value(r).expect("report serializes"))
                }
            };
            let body = match format {
                Format::Csv => format!("# {}\n{}", config_line(&cfg), records_csv(&records)),
                _ => pretty(&json!({ "config": cfg, "records": records, "report": report })),
            };
            emit(&common.out, &body)?;
        }
        Command::SampleMap { param, n, max_attempts, common } => {
            let (p, q) = resolve(param.p, param.q)?;
            let format = pick(&common, &[Format::Json, Format::Dot], Format::Json)?;
            let mut cfg = config("sample-map", &common, format);
            (cfg.p, cfg.q, cfg.n) = (Some(p), q, Some(n));
            cfg.extra = Some(json!({ "max_attempts": max_attempts }));
            let sample = rejection_sample_balanced(p, n, common.seed, max_attempts)?;
            let (m, t) = word_to_map(&sample.word)?;
            let body = match format {
                Format::Dot => format!(
                    "// {}\n// word {} loops {} attempts {}\n{}",
                    config_line(&cfg),
                    sample.word,
                    sample.loop_count,
                    sample.attempts,
                    m.to_dot(&t)
                ),
                _ => pretty(&json!({
                    "config": cfg,
                    "sample": sample,
                    "map": MapJson::from_map(&m, &t),
                })),
            };
            emit(&common.out, &body)?;
        }
        Command::Enumerate { param, n, common } => {
            let q = match (param.p, param.q) {
                (None, None) => 1.0,
                (p, q) => resolve(p, q)?.1.ok_or_else(|| Failure::Usage("p must be below 1".into()))?,
            };
            let format = pick(&common, &[Format::Csv, Format::Json], Format::Csv)?;
            let mut cfg = config("enumerate", &common, format);
            (cfg.p, cfg.q, cfg.n) = (Some(p_from_q(q)?), Some(q), Some(n));
            let rows = exact_enumerate(n, q)?;
            let body = match format {
                Format::Csv => format!("# {}\n{}", config_line(&cfg), enumeration_csv(&rows)),
                _ => pretty(&json!({ "config": cfg, "rows": rows })),
            };
            emit(&common.out, &body)?;
        }
        Command::Verify { only, common } => {
            let format = pick(&common, &[Format::Json], Format::Json)?;
            let mut cfg = config("verify", &common, format);
            cfg.extra = Some(json!({ "only": only }));
            let ids: Vec<u32> = CRITERIA
                .iter()
                .map(|c| c.0)
                .filter(|id| only.is_empty() || only.contains(id))
                .collect();
            if let Some(bad) = only.iter().find(|id| !ids.contains(id)) {
                return Err(Failure::Usage(format!("unknown criterion {bad}")));
            }
            let mut results = Vec::new();
            for id in ids {
                let r = run_criterion(id, common.seed).expect("known criterion");
                println!("{}", r.line());
                results.push(json!({
                    "id": r.id,
                    "title": r.title,
                    "passed": r.passed,
                    "detail": r.detail,
                }));
            }
            let failed: Vec<u64> = results
                .iter()
                .filter(|r| r["passed"] == false)
                .filter_map(|r| r["id"].as_u64())
                .collect();
            if let Some(path) = &common.out {
                std::fs::write(path, pretty(&json!({ "config": cfg, "results": results })))?;
            }
            if !failed.is_empty() {
                return Err(Failure::Verification(format!("criteria {failed:?} failed")));
            }
        }
    }
    Ok(())
}

fn write_companions(path: &Path, cfg: &RunConfig, t: &Trajectory) -> Result<(), Failure> {
    let stem = path.with_extension("");
    let meta = json!({ "config": cfg, "meta": t.meta() });
    std::fs::write(stem.with_extension("json"), pretty(&meta))?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    std::fs::write(stem.with_extension("gp"), gnuplot_script(t, &name))?;
    Ok(())
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("usage", e.render().to_string().trim(), 2);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            return fail("usage", &e.to_string(), 2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => fail("usage", &m, 2),
        Err(Failure::Verification(m)) => fail("verification", &m, 1),
        Err(Failure::Runtime(m)) => fail("runtime", &m, 1),
    }
}
