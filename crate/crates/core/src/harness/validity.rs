//! Encoder-validity rates against the union bound.
//!
//! A codebook draw is valid when, for every randomness index `μ` and every
//! `x^n ∈ T_δ(X)`, the encoder weights over `l ≥ 1` sum to at most one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{all_sequences, PtpCodec, PtpParams};
use crate::error::Result;
use crate::prob::typical::TypicalityTest;
use crate::prob::JointPmf;
use crate::region::ptp::AuxChannelPtp;

use super::experiment::ExperimentSpec;
use super::problem::PtpProblem;

/// Validity rate at one parameter point, with the union bound beside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChernoffCheck {
    pub n: usize,
    pub rt: f64,
    pub c: f64,
    pub delta: f64,
    pub eta: f64,
    pub trials: usize,
    /// Draws where the codebook was sampled; the rest were skipped.
    pub sampled: usize,
    pub valid: usize,
    pub empirical: f64,
    /// Binomial standard error of `empirical`.
    pub sigma: f64,
    pub delta1: f64,
    /// `rt − I(X;W) − 4δ₁`.
    pub margin: f64,
    pub typical_x: usize,
    pub bound: f64,
    /// Mean and max of `Σ_{l≥1} weight` over all typical `(x^n, μ)` pairs.
    pub mean_mass: f64,
    pub max_mass: f64,
}

/// Information quantities of the reference decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub i_xw: f64,
    pub h_xw: f64,
    pub h_x: f64,
    pub h_w: f64,
}

impl Constants {
    pub fn of(target: &JointPmf<f64>, aux: &AuxChannelPtp<f64>) -> Result<Self> {
        let j = aux.induced_joint(target)?;
        Ok(Constants {
            i_xw: j.mutual_information(&["X"], &["W"])?,
            h_xw: j.entropy_of(&["X", "W"])?,
            h_x: j.entropy_of(&["X"])?,
            h_w: j.entropy_of(&["W"])?,
        })
    }

    /// `δ₁ = δ·max(H(X,W), H(X), H(W))`.
    pub fn delta1(&self, delta: f64) -> f64 {
        delta1(delta, self.h_xw, self.h_x, self.h_w)
    }
}

/// Per-term exponent slack: a robustly typical sequence has
/// `−(1/n) log p^n ∈ H·(1 ± δ)`, and each entropy involved is at most `H(X,W)`.
pub fn delta1(delta: f64, h_xw: f64, h_x: f64, h_w: f64) -> f64 {
    delta * h_xw.max(h_x).max(h_w)
}

/// `1 − 2·K·|T_δ(X)|·exp(−η²·2^{n(rt−I(X;W)−4δ₁)}/(4 ln 2))`.
pub fn union_bound(
    n: usize,
    k: usize,
    typical_x: usize,
    eta: f64,
    rt: f64,
    i_xw: f64,
    delta1: f64,
) -> f64 {
    let exponent =
        eta * eta * (n as f64 * (rt - i_xw - 4.0 * delta1)).exp2() / (4.0 * std::f64::consts::LN_2);
    1.0 - 2.0 * k as f64 * typical_x as f64 * (-exponent).exp()
}

struct Draw {
    valid: bool,
    masses: Vec<f64>,
}

fn draw(
    problem: &PtpProblem,
    aux: &AuxChannelPtp<f64>,
    params: PtpParams,
    typical: &[Vec<usize>],
    budget: u64,
) -> Result<Option<Draw>> {
    let codec = match PtpCodec::sample(&problem.target, aux, params, budget) {
        Ok(c) => c,
        Err(e) if e.is_budget() || matches!(e, crate::Error::EmptyTypicalSet(_)) => {
            return Ok(None)
        }
        Err(e) => return Err(e),
    };
    let mut masses = Vec::with_capacity(typical.len() * codec.sizes().k);
    let mut valid = true;
    for x in typical {
        for mu in 0..codec.sizes().k {
            let e = codec.encoder_subpmf(x, mu)?;
            valid &= e.valid;
            masses.push(e.mass());
        }
    }
    Ok(Some(Draw { valid, masses }))
}

/// Validity rate at every grid point of `spec`, using paired trial seeds.
pub fn validity_rate(
    problem: &PtpProblem,
    spec: &ExperimentSpec,
    budget: u64,
) -> Result<Vec<ChernoffCheck>> {
    let aux = problem.require_aux()?;
    let consts = Constants::of(&problem.target, aux)?;
    let p_x = problem.target.marginalize(&["X"])?;
    let mut out = Vec::new();
    for v in spec.points()? {
        let params: PtpParams = serde_json::from_value(v)?;
        let sizes = params.sizes()?;
        let test = TypicalityTest::new(&p_x, params.n, params.delta)?;
        let nx = p_x.axes()[0].size();
        let typical: Vec<Vec<usize>> = all_sequences(nx, params.n)?
            .into_iter()
            .filter(|x| test.contains(&[x]).unwrap_or(false))
            .collect();
        let draws: Vec<Option<Draw>> = (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                draw(
                    problem,
                    aux,
                    PtpParams {
                        seed: spec.trial_seed(t),
                        ..params
                    },
                    &typical,
                    budget,
                )
            })
            .collect::<Result<_>>()?;
        let sampled: Vec<&Draw> = draws.iter().flatten().collect();
        let valid = sampled.iter().filter(|d| d.valid).count();
        let empirical = if sampled.is_empty() {
            0.0
        } else {
            valid as f64 / sampled.len() as f64
        };
        let sigma = if sampled.is_empty() {
            0.0
        } else {
            (empirical * (1.0 - empirical) / sampled.len() as f64).sqrt()
        };
        let masses: Vec<f64> = sampled
            .iter()
            .flat_map(|d| d.masses.iter().copied())
            .collect();
        let mean_mass = if masses.is_empty() {
            0.0
        } else {
            masses.iter().sum::<f64>() / masses.len() as f64
        };
        let max_mass = masses.iter().copied().fold(0.0, f64::max);
        let d1 = consts.delta1(params.delta);
        out.push(ChernoffCheck {
            n: params.n,
            rt: params.rt,
            c: params.c,
            delta: params.delta,
            eta: params.eta,
            trials: spec.trials,
            sampled: sampled.len(),
            valid,
            empirical,
            sigma,
            delta1: d1,
            margin: params.rt - consts.i_xw - 4.0 * d1,
            typical_x: typical.len(),
            bound: union_bound(
                params.n,
                sizes.k,
                typical.len(),
                params.eta,
                params.rt,
                consts.i_xw,
                d1,
            ),
            mean_mass,
            max_mass,
        });
    }
    Ok(out)
}

/// CSV with one row per check.
pub fn checks_to_csv(checks: &[ChernoffCheck]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in checks {
        w.serialize(c)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::DEFAULT_BUDGET;
    use crate::harness::reference;

    #[test]
    fn bound_formula_spot_values() {
        // exponent = 0.25 * 2^0 / (4 ln 2); bound = 1 - 2*1*3*exp(-exponent)
        let e = 0.25 / (4.0 * std::f64::consts::LN_2);
        assert!(
            (union_bound(2, 1, 3, 0.5, 1.0, 1.0, 0.0) - (1.0 - 6.0 * (-e).exp())).abs() < 1e-15
        );
        // bound grows with n once the margin is positive
        let b: Vec<f64> = (1..8)
            .map(|n| union_bound(n, 2, 4, 0.3, 2.0, 0.5, 0.1))
            .collect();
        assert!(b.windows(2).all(|w| w[1] > w[0]));
        assert!(b.iter().all(|&x| x <= 1.0));
    }

    #[test]
    fn huge_rate_is_always_valid() {
        let p = reference::ptp_problem();
        let spec = ExperimentSpec {
            problem: serde_json::Value::Null,
            params: serde_json::json!({"n": 4, "rt": 3.0, "r": 0.0, "c": 0.0, "delta": 0.5, "eta": 0.25}),
            sweep: vec![],
            trials: 20,
            seed: 3,
            out: None,
        };
        let c = validity_rate(&p, &spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].sampled, 20);
        assert_eq!(c[0].empirical, 1.0);
        assert!(!checks_to_csv(&c).unwrap().is_empty());
    }
}
