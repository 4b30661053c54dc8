//! Command-line front end.
//!
//! Parsing produces a flat [`RunConfig`]; [`validate`] lists every rule the
//! configuration breaks, and [`dispatch`] runs the study and writes its
//! artifacts. Exit status: 0 success, 2 invalid configuration, 3 runtime
//! failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::DistSpec;
use crate::error::{Error, Result};
use crate::gaussproc::{
    ksample_weights, sample_limit_changepoint, sample_limit_ksample,
    sample_limit_weighted_bridge_sup, two_sample_limit_shape, write_quantile_table,
    ChangePointWeight, QuantileRow,
};
use crate::localtime::growth_exponent;
use crate::montecarlo::{
    changepoint_test, gof_test, ksample_test, lil_diagnostic, limit_draw, power_study, rate_study,
    two_sample_test, Alternative, Calibration, IntegratorSpec, PowerStudyConfig,
};
use crate::output::{to_json_line, write_csv};
use crate::parallel::with_threads;
use crate::rng::RngStream;
use crate::sample::Sample;
use crate::stats::estimated::{
    estimated_gof, ExponentialFamily, NormalFamily, ParametricFamily, UniformScaleFamily,
};
use crate::stats::StatKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ipef",
    version,
    about = "Integrated empirical process tests and simulations"
)]
pub struct Cli {
    /// Random seed; falls back to IPEF_SEED, then 0.
    #[arg(long, global = true, env = "IPEF_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the main artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One-sample goodness-of-fit test.
    Gof(GofArgs),
    /// Goodness-of-fit to a parametric family with estimated parameters.
    GofEstimated(GofEstimatedArgs),
    /// Two-sample test.
    TwoSample(TwoSampleArgs),
    /// K-sample test.
    KSample(KSampleArgs),
    /// Change-point scan and test.
    Changepoint(ChangepointArgs),
    /// Power study over a set of alternatives.
    Power(PowerArgs),
    /// Distance between finite-sample and limiting laws as n grows.
    Rate(RateArgs),
    /// Iterated-logarithm trajectories.
    Lil(LilArgs),
    /// Self-intersection local time growth.
    Localtime(LocaltimeArgs),
    /// Quantile table of a limiting functional.
    Limits(LimitsArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Data file: one number per line, or CSV with --column.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV column holding the observations.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatArg {
    Ks,
    Cvm,
    Omega,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    NullMc,
    LimitingLaw,
}

#[derive(Args, Debug)]
pub struct GofArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// uniform, uniform(a,b), exponential(rate), normal(mu,sigma), table:PATH
    #[arg(long, default_value = "uniform")]
    pub dist: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = StatArg::Ks)]
    pub stat: StatArg,
    /// Exponent for --stat omega.
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::NullMc)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Grid size for the limiting-law method.
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct GofEstimatedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// exponential, normal or uniform-scale.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 999)]
    pub boot: usize,
}

#[derive(Args, Debug)]
pub struct TwoSampleArgs {
    /// Exactly two data files.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    /// `pooled`, or a distribution used as dF in the integral statistic.
    #[arg(long, default_value = "pooled")]
    pub integrator: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
}

#[derive(Args, Debug)]
pub struct KSampleArgs {
    /// Two or more data files.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// Hypothesized common distribution (integrator of T).
    #[arg(long, default_value = "uniform")]
    pub dist: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
}

#[derive(Args, Debug)]
pub struct ChangepointArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    /// Divide by the log-log weight w(k/n).
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2_000)]
    pub reps: usize,
    /// Also write the per-split profile (k,t,value) as CSV.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PowerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "A1.5,A2,B1.5,B2,B3,C1.5,C2,C3")]
    pub alts: String,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    pub p: Vec<u32>,
    /// Power replicates per cell (also the null replicates unless --null-reps).
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub null_reps: Option<usize>,
    #[arg(long, value_enum, default_value_t = StatArg::Ks)]
    pub stat: StatArg,
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    /// Also write the table with metadata as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RateArgs {
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub p: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "10,50,250,1250")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct LilArgs {
    #[arg(long, default_value_t = 0)]
    pub p: u32,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "16,64,256,1024,4096,16384"
    )]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub paths: usize,
}

#[derive(Args, Debug)]
pub struct LocaltimeArgs {
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "512,1024,2048,4096,8192,16384,32768,65536"
    )]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub paths: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalArg {
    Ks,
    Cvm,
    Omega,
    TwoSample,
    KSample,
    Changepoint,
    ChangepointWeighted,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    #[arg(long, value_enum, default_value_t = FunctionalArg::Ks)]
    pub functional: FunctionalArg,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub p: Vec<u32>,
    /// Power q of the two-sample functional.
    #[arg(long, default_value_t = 1)]
    pub q: u32,
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    /// Sample sizes fixing the K-sample weights sqrt(n_k/|n|).
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub sizes: Vec<usize>,
    /// Time steps of the tied-down Kiefer sheet.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
}

/// Which study a [`RunConfig`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Gof,
    GofEstimated,
    TwoSample,
    KSample,
    Changepoint,
    Power,
    Rate,
    Lil,
    Localtime,
    Limits,
}

/// Flat run configuration: every knob of every subcommand. Fields a
/// command does not use keep their defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub p: Vec<u32>,
    pub q: u32,
    pub r: f64,
    pub alpha: f64,
    /// Sample size(s): `n` for power, the size list for rate/lil/localtime.
    pub n: Vec<usize>,
    pub seed: u64,
    pub reps: usize,
    pub null_reps: Option<usize>,
    pub grid: usize,
    pub inputs: Vec<PathBuf>,
    pub column: Option<String>,
    pub output: Option<PathBuf>,
    /// Secondary artifact (power JSON, change-point profile CSV).
    pub extra_output: Option<PathBuf>,
    pub dist: String,
    pub family: String,
    pub stat: StatArg,
    pub method: MethodArg,
    pub functional: FunctionalArg,
    pub weighted: bool,
    pub alternatives: String,
    pub integrator: String,
    pub sizes: Vec<usize>,
    pub steps: usize,
    pub paths: usize,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Defaults shared by all commands.
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            p: vec![0],
            q: 1,
            r: 2.0,
            alpha: 0.05,
            n: Vec::new(),
            seed: 0,
            reps: 10_000,
            null_reps: None,
            grid: 2048,
            inputs: Vec::new(),
            column: None,
            output: None,
            extra_output: None,
            dist: "uniform".into(),
            family: String::new(),
            stat: StatArg::Ks,
            method: MethodArg::NullMc,
            functional: FunctionalArg::Ks,
            weighted: false,
            alternatives: String::new(),
            integrator: "pooled".into(),
            sizes: vec![1, 1],
            steps: 100,
            paths: 20,
            threads: None,
        }
    }

    fn stat_kind(&self) -> StatKind {
        match self.stat {
            StatArg::Ks => StatKind::Ks,
            StatArg::Cvm => StatKind::Cvm,
            StatArg::Omega => StatKind::Omega { r: self.r },
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        use CommandKind as K;
        let mut c;
        match cli.command {
            Command::Gof(a) => {
                c = RunConfig::new(K::Gof);
                c.inputs = vec![a.input.input];
                c.column = a.input.column;
                c.p = vec![a.p];
                c.dist = a.dist;
                c.alpha = a.alpha;
                c.stat = a.stat;
                c.r = a.r;
                c.method = a.method;
                c.reps = a.reps;
                c.grid = a.grid;
            }
            Command::GofEstimated(a) => {
                c = RunConfig::new(K::GofEstimated);
                c.inputs = vec![a.input.input];
                c.column = a.input.column;
                c.family = a.family;
                c.p = vec![a.p];
                c.alpha = a.alpha;
                c.reps = a.boot;
            }
            Command::TwoSample(a) => {
                c = RunConfig::new(K::TwoSample);
                c.inputs = a.inputs;
                c.column = a.column;
                c.p = vec![a.p];
                c.q = a.q;
                c.integrator = a.integrator;
                c.alpha = a.alpha;
                c.reps = a.reps;
            }
            Command::KSample(a) => {
                c = RunConfig::new(K::KSample);
                c.inputs = a.inputs;
                c.column = a.column;
                c.p = vec![a.p];
                c.dist = a.dist;
                c.alpha = a.alpha;
                c.reps = a.reps;
            }
            Command::Changepoint(a) => {
                c = RunConfig::new(K::Changepoint);
                c.inputs = vec![a.input.input];
                c.column = a.input.column;
                c.p = vec![a.p];
                c.weighted = a.weighted;
                c.alpha = a.alpha;
                c.reps = a.reps;
                c.extra_output = a.profile;
            }
            Command::Power(a) => {
                c = RunConfig::new(K::Power);
                c.n = vec![a.n];
                c.alpha = a.alpha;
                c.alternatives = a.alts;
                c.p = a.p;
                c.reps = a.reps;
                c.null_reps = a.null_reps;
                c.stat = a.stat;
                c.r = a.r;
                c.extra_output = a.json;
            }
            Command::Rate(a) => {
                c = RunConfig::new(K::Rate);
                c.p = a.p;
                c.n = a.n;
                c.reps = a.reps;
                c.grid = a.grid;
            }
            Command::Lil(a) => {
                c = RunConfig::new(K::Lil);
                c.p = vec![a.p];
                c.n = a.n;
                c.paths = a.paths;
            }
            Command::Localtime(a) => {
                c = RunConfig::new(K::Localtime);
                c.p = vec![a.p];
                c.n = a.n;
                c.paths = a.paths;
            }
            Command::Limits(a) => {
                c = RunConfig::new(K::Limits);
                c.functional = a.functional;
                c.p = a.p;
                c.q = a.q;
                c.r = a.r;
                c.sizes = a.sizes;
                c.steps = a.steps;
                c.grid = a.grid;
                c.reps = a.draws;
            }
        }
        c.seed = cli.seed.unwrap_or(0);
        c.threads = cli.threads;
        c.output = cli.output;
        c
    }
}

/// A broken rule: which field, and what it must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

/// Every precondition `config` breaks; empty when it is runnable.
pub fn validate(config: &RunConfig) -> Vec<Violation> {
    use CommandKind as K;
    let mut v = Vec::new();
    let mut bad = |field: &str, rule: &str| {
        v.push(Violation {
            field: field.into(),
            rule: rule.into(),
        })
    };
    let uses_alpha = matches!(
        config.command,
        K::Gof | K::GofEstimated | K::TwoSample | K::KSample | K::Changepoint | K::Power
    );
    if uses_alpha && !(config.alpha > 0.0 && config.alpha < 1.0) {
        bad("alpha", "alpha must lie in (0,1)");
    }
    let uses_r = (matches!(config.command, K::Gof | K::Power) && config.stat == StatArg::Omega)
        || (config.command == K::Limits && config.functional == FunctionalArg::Omega);
    if uses_r && !(config.r >= 1.0 && config.r.is_finite()) {
        bad("r", "r ≥ 1");
    }
    if config.threads == Some(0) {
        bad("threads", "threads ≥ 1");
    }
    if config.p.is_empty() {
        bad("p", "at least one order p");
    }
    let tail_ok = |m: usize| (m as f64) * config.alpha >= 5.0;
    match config.command {
        K::Gof => {
            if DistSpec::parse(&config.dist).is_err() && !config.dist.starts_with("table:") {
                bad("dist", "unknown distribution");
            }
            if uses_alpha && config.alpha > 0.0 && !tail_ok(config.reps) {
                bad("reps", "reps·alpha ≥ 5");
            }
            if config.method == MethodArg::LimitingLaw && config.grid < 2 {
                bad("grid", "grid ≥ 2");
            }
        }
        K::GofEstimated => {
            if family_by_name(&config.family).is_none() {
                bad(
                    "family",
                    "family must be exponential, normal or uniform-scale",
                );
            }
            if config.reps < 99 {
                bad("boot", "B ≥ 99");
            }
        }
        K::TwoSample => {
            if config.inputs.len() != 2 {
                bad("inputs", "exactly two samples");
            }
            if config.q < 1 {
                bad("q", "q ≥ 1");
            }
            if config.integrator != "pooled" && DistSpec::parse(&config.integrator).is_err() {
                bad("integrator", "`pooled` or a distribution");
            }
            if config.alpha > 0.0 && !tail_ok(config.reps) {
                bad("reps", "reps·alpha ≥ 5");
            }
        }
        K::KSample => {
            if config.inputs.len() < 2 {
                bad("inputs", "K ≥ 2");
            }
            if DistSpec::parse(&config.dist).is_err() && !config.dist.starts_with("table:") {
                bad("dist", "unknown distribution");
            }
            if config.alpha > 0.0 && !tail_ok(config.reps) {
                bad("reps", "reps·alpha ≥ 5");
            }
        }
        K::Changepoint => {
            if config.alpha > 0.0 && !tail_ok(config.reps) {
                bad("reps", "reps·alpha ≥ 5");
            }
        }
        K::Power => {
            if config.n.first().is_none_or(|&n| n < 1) {
                bad("n", "n ≥ 1");
            }
            if Alternative::parse_list(&config.alternatives).map_or(true, |a| a.is_empty()) {
                bad("alts", "comma-separated alternatives such as A1.5,B2,C3");
            }
            if config.reps < 1 {
                bad("reps", "reps ≥ 1");
            }
            if config.alpha > 0.0 && !tail_ok(config.null_reps.unwrap_or(config.reps)) {
                bad("null-reps", "null reps·alpha ≥ 5");
            }
        }
        K::Rate => {
            if config.n.is_empty() || config.n.windows(2).any(|w| w[0] >= w[1]) {
                bad("n", "ascending list of sample sizes");
            }
            if config.grid < 2 {
                bad("grid", "grid ≥ 2");
            }
        }
        K::Lil => {
            if config.n.is_empty() || config.n.iter().any(|&n| n < 16) {
                bad("n", "every n ≥ 16");
            }
        }
        K::Localtime => {
            if config.p.iter().any(|&p| p < 1) {
                bad("p", "p ≥ 1");
            }
            let ascending = config.n.len() >= 2 && config.n.windows(2).all(|w| w[0] < w[1]);
            if !ascending || config.n[0] < 2 || config.n[config.n.len() - 1] < 100 * config.n[0] {
                bad("n", "ascending sizes spanning at least two decades");
            }
        }
        K::Limits => {
            if config.grid < 2 {
                bad("grid", "grid ≥ 2");
            }
            if config.functional == FunctionalArg::TwoSample && config.q < 1 {
                bad("q", "q ≥ 1");
            }
            if config.functional == FunctionalArg::KSample
                && (config.sizes.len() < 2 || config.sizes.contains(&0))
            {
                bad("sizes", "K ≥ 2 positive sizes");
            }
            if matches!(
                config.functional,
                FunctionalArg::Changepoint | FunctionalArg::ChangepointWeighted
            ) && config.steps < 2
            {
                bad("steps", "steps ≥ 2");
            }
        }
    }
    if matches!(config.command, K::Gof | K::GofEstimated | K::Changepoint)
        && config.inputs.len() != 1
    {
        bad("input", "exactly one input file");
    }
    v
}

fn family_by_name(name: &str) -> Option<Box<dyn ParametricFamily>> {
    match name {
        "exponential" | "exp" => Some(Box::new(ExponentialFamily)),
        "normal" => Some(Box::new(NormalFamily)),
        "uniform-scale" | "uniform" => Some(Box::new(UniformScaleFamily)),
        _ => None,
    }
}

fn read_sample(path: &Path, column: Option<&str>) -> Result<Sample> {
    Sample::from_path(path, column)
}

fn emit(target: Option<&Path>, content: &str) -> Result<()> {
    match target {
        Some(path) => fs::write(path, content).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct LocaltimeRow {
    p: u32,
    n: usize,
    mean_l: f64,
    slope: f64,
}

#[derive(Serialize)]
struct LilCsvRow {
    path: usize,
    n: usize,
    value: f64,
    constant: f64,
}

/// Runs a validated configuration, writing its artifacts.
pub fn dispatch(config: &RunConfig) -> Result<()> {
    with_threads(config.threads, || run(config))?
}

fn run(config: &RunConfig) -> Result<()> {
    use CommandKind as K;
    let out = config.output.as_deref();
    let p = config.p[0];
    let seed = config.seed;
    match config.command {
        K::Gof => {
            let sample = read_sample(&config.inputs[0], config.column.as_deref())?;
            let f0 = DistSpec::parse(&config.dist)?;
            let calibration = match config.method {
                MethodArg::NullMc => Calibration::NullMc { reps: config.reps },
                MethodArg::LimitingLaw => Calibration::LimitingLaw {
                    reps: config.reps,
                    grid: config.grid,
                },
            };
            let report = gof_test(
                &sample,
                &f0,
                config.stat_kind(),
                p,
                config.alpha,
                calibration,
                seed,
            )?;
            emit(out, &to_json_line(&report)?)
        }
        K::GofEstimated => {
            let sample = read_sample(&config.inputs[0], config.column.as_deref())?;
            let family = family_by_name(&config.family)
                .ok_or_else(|| crate::error::invalid("family", "unknown family"))?;
            let report = estimated_gof(
                &sample,
                family.as_ref(),
                p,
                config.alpha,
                config.reps,
                RngStream::new(seed).labeled("bootstrap"),
            )?;
            emit(out, &to_json_line(&report)?)
        }
        K::TwoSample => {
            let x = read_sample(&config.inputs[0], config.column.as_deref())?;
            let y = read_sample(&config.inputs[1], config.column.as_deref())?;
            let integrator = if config.integrator == "pooled" {
                IntegratorSpec::Pooled
            } else {
                IntegratorSpec::Hypothesized {
                    dist: DistSpec::parse(&config.integrator)?,
                }
            };
            let rep = two_sample_test(
                &x,
                &y,
                p,
                config.q,
                &integrator,
                config.alpha,
                config.reps,
                seed,
            )?;
            emit(out, &to_json_line(&rep)?)
        }
        K::KSample => {
            let samples = config
                .inputs
                .iter()
                .map(|path| read_sample(path, config.column.as_deref()))
                .collect::<Result<Vec<_>>>()?;
            let f0 = DistSpec::parse(&config.dist)?;
            let rep = ksample_test(&samples, &f0, p, config.alpha, config.reps, seed)?;
            emit(out, &to_json_line(&rep)?)
        }
        K::Changepoint => {
            let sample = read_sample(&config.inputs[0], config.column.as_deref())?;
            let res =
                changepoint_test(&sample, p, config.weighted, config.alpha, config.reps, seed)?;
            if let Some(path) = &config.extra_output {
                emit(Some(path), &csv_string(&res.profile)?)?;
            }
            #[derive(Serialize)]
            struct Out<'a> {
                report: &'a crate::stats::TestReport,
                argmax_k: usize,
                argmax_t: f64,
                weighted: bool,
            }
            emit(
                out,
                &to_json_line(&Out {
                    report: &res.report,
                    argmax_k: res.argmax_k,
                    argmax_t: res.argmax_t,
                    weighted: config.weighted,
                })?,
            )
        }
        K::Power => {
            let study = PowerStudyConfig {
                n: config.n[0],
                p_list: config.p.clone(),
                alternatives: Alternative::parse_list(&config.alternatives)?,
                alpha: config.alpha,
                m_null: config.null_reps.unwrap_or(config.reps),
                m_power: config.reps,
                seed,
                statistic: config.stat_kind(),
            };
            let table = power_study(&study)?;
            if let Some(path) = &config.extra_output {
                emit(Some(path), &to_json_line(&table)?)?;
            }
            emit(out, &table.to_csv_string()?)
        }
        K::Rate => {
            let stream = RngStream::new(seed).labeled("rate");
            let mut rows = Vec::new();
            for &p in &config.p {
                rows.extend(rate_study(
                    p,
                    &config.n,
                    config.reps,
                    config.grid,
                    stream.substream(p as u64),
                )?);
            }
            emit(out, &csv_string(&rows)?)
        }
        K::Lil => {
            let diag = lil_diagnostic(
                p,
                &config.n,
                config.paths,
                RngStream::new(seed).labeled("lil"),
            )?;
            let rows: Vec<LilCsvRow> = diag
                .rows
                .iter()
                .map(|r| LilCsvRow {
                    path: r.path,
                    n: r.n,
                    value: r.value,
                    constant: diag.constant,
                })
                .collect();
            emit(out, &csv_string(&rows)?)
        }
        K::Localtime => {
            let est = growth_exponent(
                p,
                &config.n,
                config.paths,
                RngStream::new(seed).labeled("localtime"),
            )?;
            let rows: Vec<LocaltimeRow> = est
                .profile
                .iter()
                .map(|&(n, mean_l)| LocaltimeRow {
                    p,
                    n,
                    mean_l,
                    slope: est.slope,
                })
                .collect();
            emit(out, &csv_string(&rows)?)
        }
        K::Limits => {
            let rows = config
                .p
                .iter()
                .map(|&p| limits_row(config, p))
                .collect::<Result<Vec<_>>>()?;
            let mut buf = Vec::new();
            write_quantile_table(&rows, &mut buf)?;
            emit(out, &String::from_utf8(buf).expect("csv output is utf-8"))
        }
    }
}

fn limits_row(config: &RunConfig, p: u32) -> Result<QuantileRow> {
    let stream = RngStream::new(config.seed)
        .labeled("limits")
        .substream(p as u64);
    let m = config.grid;
    let weights = ksample_weights(&config.sizes);
    let (a, c) = two_sample_limit_shape(p, config.q);
    let draws = (0..config.reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.substream(i as u64).rng();
            match config.functional {
                FunctionalArg::Ks => limit_draw(StatKind::Ks, p, m, &mut rng),
                FunctionalArg::Cvm => limit_draw(StatKind::Cvm, p, m, &mut rng),
                FunctionalArg::Omega => limit_draw(StatKind::Omega { r: config.r }, p, m, &mut rng),
                FunctionalArg::TwoSample => sample_limit_weighted_bridge_sup(a, c, m, &mut rng),
                FunctionalArg::KSample => {
                    sample_limit_ksample(p, &weights, m, &mut rng).map(|d| d.0)
                }
                FunctionalArg::Changepoint => {
                    sample_limit_changepoint(p, config.steps, m, ChangePointWeight::None, &mut rng)
                }
                FunctionalArg::ChangepointWeighted => sample_limit_changepoint(
                    p,
                    config.steps,
                    m,
                    ChangePointWeight::LogLog,
                    &mut rng,
                ),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let name = serde_json::to_value(config.functional)?
        .as_str()
        .unwrap_or("unknown")
        .to_string();
    Ok(QuantileRow::from_draws(&name, p, m, config.seed, draws))
}

/// Exit status for an error raised by [`dispatch`].
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter { .. } => EXIT_INVALID,
        _ => EXIT_RUNTIME,
    }
}

/// Full CLI entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let config = RunConfig::from(cli);
    let violations = validate(&config);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("invalid configuration: {v}");
        }
        return EXIT_INVALID;
    }
    match dispatch(&config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
