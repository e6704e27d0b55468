//! Finite-blocklength random-binning codes and exact measurement of the
//! distributions they induce.
//!
//! Codebooks are drawn IID from the pruned law (the n-fold product restricted
//! to the typical set and renormalized). Encoders are sub-PMFs over codeword
//! indices; index 0 absorbs the deficit. Everything here is over `f64`.

pub mod dist;
pub mod ptp;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::prob::{seq, JointPmf, TypicalityTest};

pub use dist::{DistCodec, DistParams};
pub use ptp::{EncoderSubPmf, PtpCodec, PtpParams};

/// Cap on evaluated terms per exact computation.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "CORRSYNTH_BUDGET";

/// Largest block size (codebook, bins, randomness) accepted.
pub const MAX_BLOCK: usize = 1 << 24;

/// Budget from the environment, else the default.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// `round(2^{n·rate})`, at least 1.
pub fn block_size(n: usize, rate: f64) -> Result<usize> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rate must be finite and nonnegative, got {rate}"
        )));
    }
    let v = (n as f64 * rate).exp2().round();
    if v > MAX_BLOCK as f64 {
        return Err(Error::InvalidParameter(format!(
            "2^(n·{rate}) with n = {n} exceeds {MAX_BLOCK}"
        )));
    }
    Ok((v as usize).max(1))
}

/// `log₂(size)/n`.
pub fn effective_rate(size: usize, n: usize) -> f64 {
    (size as f64).log2() / n as f64
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in (0,1), got {v}"
        )))
    }
}

/// `Π_i p(s_i)` for a single-axis table.
pub(crate) fn seq_prob(p: &[f64], s: &[usize]) -> f64 {
    s.iter().map(|&a| p[a]).product()
}

/// All sequences of length `n` over `k` letters, lexicographic.
pub(crate) fn all_sequences(k: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    let total = seq::count(k, n)?;
    Ok((0..total).map(|i| seq::decode(i, k, n)).collect())
}

/// `p^n` restricted to `T_δ` and renormalized by its mass `1 − ε`.
#[derive(Debug, Clone)]
pub struct PrunedLaw {
    n: usize,
    seqs: Vec<Vec<usize>>,
    probs: Vec<f64>,
    mass: f64,
}

impl PrunedLaw {
    /// `p_w` must have a single axis.
    pub fn new(p_w: &JointPmf<f64>, n: usize, delta: f64, budget: u64) -> Result<Self> {
        if p_w.axes().len() != 1 {
            return Err(Error::AxisMismatch(
                "pruned law needs a single-axis table".into(),
            ));
        }
        let t = TypicalityTest::new(p_w, n, delta)?;
        let seqs = t.enumerate(budget)?;
        if seqs.is_empty() {
            return Err(Error::EmptyTypicalSet(format!(
                "no sequence of length {n} is {delta}-typical for `{}`",
                p_w.axes()[0].name
            )));
        }
        let probs: Vec<f64> = seqs.iter().map(|s| seq_prob(p_w.table(), s)).collect();
        let mass = probs.iter().sum();
        Ok(PrunedLaw {
            n,
            seqs,
            probs,
            mass,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Typical sequences in lexicographic order.
    pub fn support(&self) -> &[Vec<usize>] {
        &self.seqs
    }

    /// `P(T_δ) = 1 − ε`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn epsilon(&self) -> f64 {
        1.0 - self.mass
    }

    /// Pruned probability of a typical sequence by support index.
    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i] / self.mass
    }

    /// `count` IID draws.
    pub fn draw<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<Vec<usize>> {
        let d = WeightedIndex::new(&self.probs).expect("typical set has positive mass");
        (0..count)
            .map(|_| self.seqs[d.sample(rng)].clone())
            .collect()
    }
}

/// Draw from an explicit finite PMF.
pub(crate) fn draw_index<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    WeightedIndex::new(weights)
        .expect("nonnegative weights with positive sum")
        .sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Alphabet, Axis};

    fn coin(p: f64) -> JointPmf<f64> {
        JointPmf::new(
            vec![Axis::new("W", Alphabet::range(2).unwrap())],
            vec![1.0 - p, p],
        )
        .unwrap()
    }

    #[test]
    fn sizes_round_and_floor_at_one() {
        assert_eq!(block_size(4, 0.5).unwrap(), 4);
        assert_eq!(block_size(3, 0.5).unwrap(), 3); // 2^1.5 = 2.83
        assert_eq!(block_size(3, 0.0).unwrap(), 1);
        assert_eq!(block_size(1, 0.1).unwrap(), 1);
        assert!(block_size(2, -1.0).is_err());
        assert!((effective_rate(4, 4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn point_mass_law_has_zero_epsilon() {
        let p = coin(0.0);
        let law = PrunedLaw::new(&p, 5, 0.2, DEFAULT_BUDGET).unwrap();
        assert_eq!(law.support(), &[vec![0; 5]]);
        assert_eq!(law.epsilon(), 0.0);
        let mut rng = crate::rng::stream(1, 1);
        assert!(law.draw(10, &mut rng).iter().all(|s| s == &vec![0; 5]));
    }

    #[test]
    fn epsilon_matches_brute_force() {
        for n in 1..=6 {
            for &(p, d) in &[(0.3, 0.5), (0.5, 0.3), (0.2, 0.9)] {
                let pw = coin(p);
                let Ok(law) = PrunedLaw::new(&pw, n, d, DEFAULT_BUDGET) else {
                    continue;
                };
                let mut outside = 0.0;
                for s in all_sequences(2, n).unwrap() {
                    let ones = s.iter().sum::<usize>() as f64 / n as f64;
                    let ok = (ones - p).abs() <= d * p
                        && ((1.0 - ones) - (1.0 - p)).abs() <= d * (1.0 - p);
                    if !ok {
                        outside += seq_prob(pw.table(), &s);
                    }
                }
                assert!((law.epsilon() - outside).abs() < 1e-12, "n={n} p={p} d={d}");
            }
        }
    }

    #[test]
    fn empty_typical_set_is_an_error() {
        assert!(matches!(
            PrunedLaw::new(&coin(0.5), 1, 0.3, DEFAULT_BUDGET),
            Err(Error::EmptyTypicalSet(_))
        ));
    }
}
