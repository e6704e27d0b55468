//! Monte Carlo check of the concentration bound for means of `[0,1]` variables:
//! `P((1−η)θ ≤ mean ≤ (1+η)θ) ≥ 1 − 2·exp(−N·η²·θ/(4 ln 2))`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// IID Bernoulli(θ).
    Bernoulli,
    /// Every variable equals θ.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub n: usize,
    pub theta: f64,
    pub eta: f64,
    pub trials: usize,
    pub source: Source,
    pub hits: usize,
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard error at the bound value.
    pub sigma: f64,
    /// `empirical ≥ bound − 3σ`.
    pub pass: bool,
}

pub fn lemma_bound(n: usize, theta: f64, eta: f64) -> f64 {
    1.0 - 2.0 * (-(n as f64) * eta * eta * theta / (4.0 * std::f64::consts::LN_2)).exp()
}

fn check_domain(n: usize, theta: f64, eta: f64, trials: usize) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidParameter(m));
    if n == 0 || trials == 0 {
        return bad("N and the trial count must be at least 1".into());
    }
    if !(theta > 0.0 && theta < 1.0) {
        return bad(format!("θ must lie in (0,1), got {theta}"));
    }
    if !(eta > 0.0 && eta < 0.5) {
        return bad(format!("η must lie in (0,1/2), got {eta}"));
    }
    if (1.0 + eta) * theta >= 1.0 {
        return bad(format!("need (1+η)θ < 1, got {}", (1.0 + eta) * theta));
    }
    Ok(())
}

/// Fraction of `trials` sample means of `n` variables inside `[(1−η)θ, (1+η)θ]`.
pub fn chernoff_lemma_check(
    n: usize,
    theta: f64,
    eta: f64,
    trials: usize,
    seed: u64,
    source: Source,
) -> Result<LemmaCheck> {
    check_domain(n, theta, eta, trials)?;
    let (lo, hi) = (
        (1.0 - eta) * theta * n as f64,
        (1.0 + eta) * theta * n as f64,
    );
    let slack = 1e-9 * n as f64;
    let mut rng = stream(seed, 0);
    let mut hits = 0;
    for _ in 0..trials {
        let sum = match source {
            Source::Bernoulli => (0..n).filter(|_| rng.gen_bool(theta)).count() as f64,
            Source::Constant => theta * n as f64,
        };
        if sum >= lo - slack && sum <= hi + slack {
            hits += 1;
        }
    }
    let empirical = hits as f64 / trials as f64;
    let bound = lemma_bound(n, theta, eta);
    let b = bound.clamp(0.0, 1.0);
    let sigma = (b * (1.0 - b) / trials as f64).sqrt();
    Ok(LemmaCheck {
        n,
        theta,
        eta,
        trials,
        source,
        hits,
        empirical,
        bound,
        sigma,
        pass: empirical >= bound - 3.0 * sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_source_always_hits() {
        let c = chernoff_lemma_check(10, 0.3, 0.2, 100, 0, Source::Constant).unwrap();
        assert_eq!(c.empirical, 1.0);
        assert!(c.pass);
    }

    #[test]
    fn bound_monotone_in_n() {
        let b: Vec<f64> = [1, 10, 100, 1000]
            .iter()
            .map(|&n| lemma_bound(n, 0.5, 0.4))
            .collect();
        assert!(b.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn domain_errors() {
        for (n, t, e) in [
            (0, 0.3, 0.2),
            (10, 0.0, 0.2),
            (10, 1.0, 0.2),
            (10, 0.3, 0.5),
            (10, 0.9, 0.2),
        ] {
            assert!(
                chernoff_lemma_check(n, t, e, 10, 0, Source::Bernoulli).is_err(),
                "{n} {t} {e}"
            );
        }
    }

    #[test]
    fn large_n_concentrates() {
        let c = chernoff_lemma_check(1000, 0.5, 0.4, 2000, 7, Source::Bernoulli).unwrap();
        assert_eq!(c.empirical, 1.0);
        assert!(c.pass);
    }
}
