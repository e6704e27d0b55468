//! Seeded Monte Carlo experiments over codebook draws.
//!
//! Trial `t` uses seed `derive_seed(spec.seed, [t])` at every grid point, so
//! codebook randomness is paired across the sweep. Rows are ordered by
//! `(point, trial)` regardless of scheduling.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codec::{DistCodec, DistParams, PtpCodec, PtpParams};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

use super::problem::{read_json, DistProblem, PtpProblem};
use super::sweep::{expand, Sweep};

/// Experiment description file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Path to a problem file (relative to the spec file) or an inline problem.
    pub problem: Value,
    /// Codec parameters without the seed.
    pub params: Value,
    #[serde(default)]
    pub sweep: Vec<String>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

fn one() -> usize {
    1
}

impl ExperimentSpec {
    pub fn from_value(v: &Value) -> Result<Self> {
        let s: ExperimentSpec = serde_json::from_value(v.clone())?;
        if s.trials == 0 {
            return Err(Error::InvalidParameter(
                "trial count must be at least 1".into(),
            ));
        }
        Ok(s)
    }

    /// Problem JSON, reading the file if `problem` is a path.
    pub fn problem_value(&self, base: Option<&Path>) -> Result<Value> {
        match &self.problem {
            Value::String(p) => {
                let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
                read_json(&path)
            }
            Value::Object(_) => Ok(self.problem.clone()),
            _ => Err(Error::Parse("`problem` must be a path or an object".into())),
        }
    }

    pub fn sweeps(&self) -> Result<Vec<Sweep>> {
        self.sweep.iter().map(|s| s.parse()).collect()
    }

    /// Parameter objects of every grid point.
    pub fn points(&self) -> Result<Vec<Value>> {
        expand(&self.params, &self.sweeps()?)
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        derive_seed(self.seed, &[trial as u64])
    }
}

/// Quantity measured per codebook draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TvDeficit,
    #[serde(rename = "soft_covering_deficit")]
    SoftCovering,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::TvDeficit => "tv_deficit",
            Metric::SoftCovering => "soft_covering_deficit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub point: usize,
    pub trial: usize,
    pub seed: u64,
    /// Requested and effective rates in a fixed column order.
    pub rates: Vec<(String, f64)>,
    pub value: Option<f64>,
    /// Every encoder is a PMF on every typical input and randomness index.
    pub all_valid: Option<bool>,
    /// Fraction of typical (input, randomness) pairs with a valid encoder.
    pub valid_fraction: Option<f64>,
    /// `ok` or `skipped: <reason>`.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub point: usize,
    pub params: Value,
    pub count: usize,
    pub skipped: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation (divisor `count − 1`).
    pub std: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Aggregate {
    /// Statistics over the rows of one point, in row order.
    pub fn from_rows(point: usize, params: Value, rows: &[&TrialRow]) -> Self {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
        let count = vals.len();
        let skipped = rows.len() - count;
        if count == 0 {
            return Aggregate {
                point,
                params,
                count,
                skipped,
                mean: None,
                std: None,
                min: None,
                max: None,
            };
        }
        let mean = vals.iter().sum::<f64>() / count as f64;
        let std = if count > 1 {
            (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Aggregate {
            point,
            params,
            count,
            skipped,
            mean: Some(mean),
            std: Some(std),
            min: vals.iter().copied().reduce(f64::min),
            max: vals.iter().copied().reduce(f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metric: Metric,
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<Aggregate>,
}

fn fmt_opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, ToString::to_string)
}

impl ExperimentReport {
    /// One CSV row per trial.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["point".to_string(), "trial".into(), "seed".into()];
        if let Some(r) = self.rows.first() {
            header.extend(r.rates.iter().map(|(k, _)| k.clone()));
        }
        header.extend([
            self.metric.name().to_string(),
            "all_valid".into(),
            "valid_fraction".into(),
            "status".into(),
        ]);
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.point.to_string(), r.trial.to_string(), r.seed.to_string()];
            rec.extend(r.rates.iter().map(|(_, v)| v.to_string()));
            rec.extend([
                fmt_opt(&r.value),
                fmt_opt(&r.all_valid),
                fmt_opt(&r.valid_fraction),
                r.status.clone(),
            ]);
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Sidecar with the full spec and aggregates.
    pub fn sidecar(&self, spec: &ExperimentSpec, problem: &Value) -> Value {
        serde_json::json!({
            "spec": spec,
            "problem": problem,
            "metric": self.metric,
            "aggregates": self.aggregates,
        })
    }

    pub fn aggregate(&self, point: usize) -> &Aggregate {
        &self.aggregates[point]
    }
}

fn skipped(e: &Error) -> Option<String> {
    match e {
        Error::BudgetExceeded { .. } => Some("skipped: budget".into()),
        Error::EmptyTypicalSet(_) => Some("skipped: empty typical set".into()),
        _ => None,
    }
}

struct Measured {
    value: f64,
    all_valid: bool,
    valid_fraction: f64,
}

fn collect_rows<P, F>(
    spec: &ExperimentSpec,
    points: &[Value],
    rates: impl Fn(&P) -> Result<Vec<(String, f64)>>,
    run: F,
) -> Result<Vec<TrialRow>>
where
    P: for<'de> Deserialize<'de> + Send + Sync,
    F: Fn(&P, u64) -> Result<Measured> + Send + Sync,
{
    let parsed: Vec<P> = points
        .iter()
        .map(|v| Ok(serde_json::from_value(v.clone())?))
        .collect::<Result<_>>()?;
    let rate_cols: Vec<Vec<(String, f64)>> = parsed.iter().map(&rates).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..spec.trials).map(move |t| (p, t)))
        .collect();
    jobs.par_iter()
        .map(|&(p, t)| {
            let seed = spec.trial_seed(t);
            let mut row = TrialRow {
                point: p,
                trial: t,
                seed,
                rates: rate_cols[p].clone(),
                value: None,
                all_valid: None,
                valid_fraction: None,
                status: "ok".into(),
            };
            match run(&parsed[p], seed) {
                Ok(m) => {
                    row.value = Some(m.value);
                    row.all_valid = Some(m.all_valid);
                    row.valid_fraction = Some(m.valid_fraction);
                }
                Err(e) => match skipped(&e) {
                    Some(s) => row.status = s,
                    None => return Err(e),
                },
            }
            Ok(row)
        })
        .collect()
}

fn finish(metric: Metric, points: Vec<Value>, rows: Vec<TrialRow>) -> ExperimentReport {
    let aggregates = points
        .into_iter()
        .enumerate()
        .map(|(p, v)| {
            let rs: Vec<&TrialRow> = rows.iter().filter(|r| r.point == p).collect();
            Aggregate::from_rows(p, v, &rs)
        })
        .collect();
    ExperimentReport {
        metric,
        rows,
        aggregates,
    }
}

fn validity_ptp(codec: &PtpCodec) -> Result<(bool, f64)> {
    let n = codec.params().n;
    let nx = codec.target().axes()[0].size();
    let (mut total, mut ok) = (0usize, 0usize);
    for x in crate::codec::all_sequences(nx, n)? {
        for mu in 0..codec.sizes().k {
            let e = codec.encoder_subpmf(&x, mu)?;
            if e.typical_input {
                total += 1;
                ok += e.valid as usize;
            }
        }
    }
    Ok((
        ok == total,
        if total == 0 {
            1.0
        } else {
            ok as f64 / total as f64
        },
    ))
}

fn validity_dist(codec: &DistCodec) -> Result<(bool, f64)> {
    let n = codec.params().n;
    let (mut total, mut ok) = (0usize, 0usize);
    for j in 1..=2 {
        let nx = codec.target().axes()[j - 1].size();
        for x in crate::codec::all_sequences(nx, n)? {
            for mu in 0..codec.sizes().k[j - 1] {
                let e = codec.encoder_subpmf(j, &x, mu)?;
                if e.typical_input {
                    total += 1;
                    ok += e.valid as usize;
                }
            }
        }
    }
    Ok((
        ok == total,
        if total == 0 {
            1.0
        } else {
            ok as f64 / total as f64
        },
    ))
}

/// Point-to-point experiment measuring `metric` for every trial.
pub fn run_ptp(
    problem: &PtpProblem,
    spec: &ExperimentSpec,
    metric: Metric,
    budget: u64,
) -> Result<ExperimentReport> {
    let aux = problem.require_aux()?;
    let points = spec.points()?;
    let rates = |p: &PtpParams| {
        let s = p.sizes()?;
        Ok(vec![
            ("n".into(), p.n as f64),
            ("rt".into(), p.rt),
            ("r".into(), p.r),
            ("c".into(), p.c),
            ("delta".into(), p.delta),
            ("eta".into(), p.eta),
            ("eff_rt".into(), s.eff_rt),
            ("eff_r".into(), s.eff_r),
            ("eff_c".into(), s.eff_c),
        ])
    };
    let rows = collect_rows(spec, &points, rates, |p: &PtpParams, seed| {
        let codec = PtpCodec::sample(&problem.target, aux, PtpParams { seed, ..*p }, budget)?;
        let value = match metric {
            Metric::TvDeficit => codec.tv_deficit(budget)?,
            Metric::SoftCovering => codec.soft_covering_deficit(budget)?,
        };
        let (all_valid, valid_fraction) = validity_ptp(&codec)?;
        Ok(Measured {
            value,
            all_valid,
            valid_fraction,
        })
    })?;
    Ok(finish(metric, points, rows))
}

/// Distributed experiment measuring the total-variation deficit.
pub fn run_dist(
    problem: &DistProblem,
    spec: &ExperimentSpec,
    budget: u64,
) -> Result<ExperimentReport> {
    let aux = problem.require_aux()?;
    let points = spec.points()?;
    let rates = |p: &DistParams| {
        let s = p.sizes()?;
        Ok(vec![
            ("n".into(), p.n as f64),
            ("rt1".into(), p.rt1),
            ("rt2".into(), p.rt2),
            ("r1".into(), p.r1),
            ("r2".into(), p.r2),
            ("c1".into(), p.c1),
            ("c2".into(), p.c2),
            ("delta".into(), p.delta),
            ("eta".into(), p.eta),
            ("eff_rt1".into(), s.eff_rt[0]),
            ("eff_rt2".into(), s.eff_rt[1]),
            ("eff_r1".into(), s.eff_r[0]),
            ("eff_r2".into(), s.eff_r[1]),
            ("eff_c1".into(), s.eff_c[0]),
            ("eff_c2".into(), s.eff_c[1]),
        ])
    };
    let rows = collect_rows(spec, &points, rates, |p: &DistParams, seed| {
        let codec = DistCodec::sample(&problem.target, aux, DistParams { seed, ..*p }, budget)?;
        let value = codec.tv_deficit(budget)?;
        let (all_valid, valid_fraction) = validity_dist(&codec)?;
        Ok(Measured {
            value,
            all_valid,
            valid_fraction,
        })
    })?;
    Ok(finish(Metric::TvDeficit, points, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::DEFAULT_BUDGET;
    use crate::harness::reference;

    fn spec(trials: usize) -> ExperimentSpec {
        ExperimentSpec {
            problem: reference::ptp_problem().to_value(),
            params: serde_json::json!({"n": 2, "rt": 1.0, "r": 0.5, "c": 0.5, "delta": 0.5, "eta": 0.25}),
            sweep: vec!["n=1:3:1".into()],
            trials,
            seed: 5,
            out: None,
        }
    }

    #[test]
    fn report_shape_and_determinism() {
        let s = spec(3);
        let p = reference::ptp_problem();
        let a = run_ptp(&p, &s, Metric::TvDeficit, DEFAULT_BUDGET).unwrap();
        let b = run_ptp(&p, &s, Metric::TvDeficit, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(a.rows.len(), 9);
        // n = 1 has no typical codewords for a fair W
        assert!(a
            .rows
            .iter()
            .filter(|r| r.point == 0)
            .all(|r| r.status.starts_with("skipped")));
        assert_eq!(a.aggregate(0).skipped, 3);
        assert_eq!(a.aggregate(1).count, 3);
        // paired seeds across points
        assert_eq!(a.rows[0].seed, a.rows[3].seed);
    }

    #[test]
    fn budget_skips_rows() {
        let p = reference::ptp_problem();
        let r = run_ptp(&p, &spec(1), Metric::SoftCovering, 10).unwrap();
        assert!(r.rows.iter().all(|r| r.status.starts_with("skipped")));
    }
}
