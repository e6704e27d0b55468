//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when an
//! enumeration budget was exceeded (reports are still written, with the
//! affected rows marked skipped).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::Value;

use crate::codec::budget_from_env;
use crate::error::{Error, Result};
use crate::harness::chernoff::{chernoff_lemma_check, LemmaCheck, Source};
use crate::harness::experiment::{run_dist, run_ptp, ExperimentReport, ExperimentSpec, Metric};
use crate::harness::problem::{read_json, DistProblem, PtpProblem};
use crate::harness::validity::{checks_to_csv, validity_rate};
use crate::polyhedra::json::{projection_to_string, system_from_str};
use crate::polyhedra::{fm_eliminate_all, systems, LinIneqSystem};
use crate::region::dist::dist_rates_for;
use crate::region::frontier::ptp_frontier;
use crate::region::ptp::{ptp_rates_for, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "corrsynth",
    version,
    about = "Rate regions and finite-blocklength simulation for correlation synthesis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inner-bound frontier of a point-to-point problem (CSV) plus certificates (JSON).
    RegionPtp(RegionArgs),
    /// Distributed rate bounds certified by the problem's auxiliary channel (JSON).
    RegionDist(RegionArgs),
    /// Fourier–Motzkin elimination of a rational system.
    Fm(FmArgs),
    /// Total-variation deficit of sampled point-to-point codes.
    SimulatePtp(SimArgs),
    /// Total-variation deficit of sampled distributed codes.
    SimulateDist(SimArgs),
    /// Encoder-validity rate against the union bound.
    Validity(SimArgs),
    /// Concentration-lemma check for sample means.
    Chernoff(ChernoffArgs),
    /// Soft-covering deficit of sampled point-to-point codebooks.
    Softcover(SimArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Overrides the search seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FmArgs {
    /// System JSON file, or `builtin:ptp`, `builtin:dist`, `builtin:dist-split`.
    #[arg(long)]
    pub system: String,
    /// Variables to eliminate, in order (repeat the flag or separate with commas).
    #[arg(long, value_delimiter = ',', required = true)]
    pub eliminate: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Experiment spec JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Enumeration budget; overrides the environment variable.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Grid `param=start:stop:step`; replaces the spec's sweeps when given.
    #[arg(long)]
    pub sweep: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ChernoffArgs {
    /// Grid JSON `{"n": [..], "theta": [..], "eta": [..], "trials", "seed", "source"}`;
    /// defaults to N ∈ {100, 1000}, θ ∈ {0.3, 0.5}, η ∈ {0.2, 0.4}, 10⁴ trials.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ChernoffGrid {
    pub n: Vec<usize>,
    pub theta: Vec<f64>,
    pub eta: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub source: Source,
}

impl Default for ChernoffGrid {
    fn default() -> Self {
        ChernoffGrid {
            n: vec![100, 1000],
            theta: vec![0.3, 0.5],
            eta: vec![0.2, 0.4],
            trials: 10_000,
            seed: 0,
            source: Source::Bernoulli,
        }
    }
}

/// Checks over the grid, θ slowest and N fastest; each cell gets its own seed.
pub fn chernoff_grid(g: &ChernoffGrid) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    let mut cell = 0u64;
    for &theta in &g.theta {
        for &eta in &g.eta {
            for &n in &g.n {
                out.push(chernoff_lemma_check(
                    n,
                    theta,
                    eta,
                    g.trials,
                    crate::rng::derive_seed(g.seed, &[cell]),
                    g.source,
                )?);
                cell += 1;
            }
        }
    }
    Ok(out)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::BudgetSkips(k)) => {
            eprintln!("warning: {k} trial(s) skipped for exceeding the enumeration budget");
            2
        }
        Err(e) if e.is_budget() => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub enum Outcome {
    Done,
    BudgetSkips(usize),
}

fn threads(common: &Common) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Error::InvalidParameter(
                "--threads must be at least 1".into(),
            ));
        }
        b = b.num_threads(t);
    }
    b.build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `<out>` with `suffix` appended to the file name.
fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::RegionPtp(a) => {
            let mut problem = PtpProblem::from_value(&read_json(&a.spec)?)?;
            if let Some(s) = a.seed {
                problem.search.seed = s;
            }
            let frontier =
                threads(&a.common)?.install(|| ptp_frontier(&problem.target, &problem.search))?;
            let mut certs = serde_json::json!({ "certificates": frontier.certificates_json() });
            if let Some(aux) = &problem.aux {
                certs["given_aux"] =
                    serde_json::to_value(ptp_rates_for(&problem.target, aux, problem.search.tol)?)?;
            }
            emit(a.common.out.as_deref(), &frontier.to_csv()?)?;
            if let Some(out) = &a.common.out {
                std::fs::write(sidecar_path(out, ".aux.json"), pretty(&certs))?;
            }
            Ok(Outcome::Done)
        }
        Command::RegionDist(a) => {
            let problem = DistProblem::from_value(&read_json(&a.spec)?)?;
            let rates = dist_rates_for(&problem.target, problem.require_aux()?, DEFAULT_TOL)?;
            emit(
                a.common.out.as_deref(),
                &pretty(&serde_json::json!({ "rates": rates })),
            )?;
            Ok(Outcome::Done)
        }
        Command::Fm(a) => {
            let sys: LinIneqSystem<BigRational> = match a.system.as_str() {
                "builtin:ptp" => systems::ptp_system()?,
                "builtin:dist" => systems::dist_system(false)?,
                "builtin:dist-split" => systems::dist_system(true)?,
                path => system_from_str(&std::fs::read_to_string(path)?)?,
            };
            let vars: Vec<&str> = a.eliminate.iter().map(|s| s.trim()).collect();
            let proj = fm_eliminate_all(&sys, &vars)?;
            let mut text = projection_to_string(&proj);
            text.push('\n');
            emit(a.common.out.as_deref(), &text)?;
            Ok(Outcome::Done)
        }
        Command::SimulatePtp(a) => simulate(a, Kind::Ptp(Metric::TvDeficit)),
        Command::Softcover(a) => simulate(a, Kind::Ptp(Metric::SoftCovering)),
        Command::SimulateDist(a) => simulate(a, Kind::Dist),
        Command::Validity(a) => simulate(a, Kind::Validity),
        Command::Chernoff(a) => {
            let mut grid: ChernoffGrid = match &a.spec {
                Some(p) => serde_json::from_value(read_json(p)?)?,
                None => ChernoffGrid::default(),
            };
            if let Some(t) = a.trials {
                grid.trials = t;
            }
            if let Some(s) = a.seed {
                grid.seed = s;
            }
            let checks = chernoff_grid(&grid)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &checks {
                w.serialize(c)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            emit(
                a.common.out.as_deref(),
                &String::from_utf8(bytes).expect("csv output is utf-8"),
            )?;
            Ok(Outcome::Done)
        }
    }
}

enum Kind {
    Ptp(Metric),
    Dist,
    Validity,
}

fn simulate(a: SimArgs, kind: Kind) -> Result<Outcome> {
    let mut spec = ExperimentSpec::from_value(&read_json(&a.spec)?)?;
    if let Some(t) = a.trials {
        spec.trials = t;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if !a.sweep.is_empty() {
        spec.sweep = a.sweep.clone();
    }
    let spec = ExperimentSpec::from_value(&serde_json::to_value(&spec)?)?;
    let budget = a.budget.unwrap_or_else(budget_from_env);
    let base = a.spec.parent();
    let problem_value = spec.problem_value(base)?;
    let out: Option<PathBuf> = a.common.out.clone().or_else(|| {
        spec.out
            .as_ref()
            .map(|o| base.map_or_else(|| PathBuf::from(o), |b| b.join(o)))
    });
    let pool = threads(&a.common)?;
    let report: ExperimentReport = match kind {
        Kind::Ptp(metric) => {
            let problem = PtpProblem::from_value(&problem_value)?;
            pool.install(|| run_ptp(&problem, &spec, metric, budget))?
        }
        Kind::Dist => {
            let problem = DistProblem::from_value(&problem_value)?;
            pool.install(|| run_dist(&problem, &spec, budget))?
        }
        Kind::Validity => {
            let problem = PtpProblem::from_value(&problem_value)?;
            let checks = pool.install(|| validity_rate(&problem, &spec, budget))?;
            emit(out.as_deref(), &checks_to_csv(&checks)?)?;
            if let Some(o) = &out {
                let side =
                    serde_json::json!({ "spec": spec, "problem": problem_value, "checks": checks });
                std::fs::write(sidecar_path(o, ".json"), pretty(&side))?;
            }
            return Ok(Outcome::Done);
        }
    };
    emit(out.as_deref(), &report.to_csv()?)?;
    if let Some(o) = &out {
        std::fs::write(
            sidecar_path(o, ".json"),
            pretty(&report.sidecar(&spec, &problem_value)),
        )?;
    }
    let skipped = report
        .rows
        .iter()
        .filter(|r| r.status == "skipped: budget")
        .count();
    Ok(if skipped > 0 {
        Outcome::BudgetSkips(skipped)
    } else {
        Outcome::Done
    })
}
