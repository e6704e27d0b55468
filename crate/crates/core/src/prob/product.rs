use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{seq, Axis, JointPmf};

/// Lazy evaluator for the n-fold product `p^n` of a joint table.
#[derive(Debug, Clone, Copy)]
pub struct ProductPmf<'a, S> {
    base: &'a JointPmf<S>,
    n: usize,
}

impl<'a, S: Real> ProductPmf<'a, S> {
    pub fn new(base: &'a JointPmf<S>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "blocklength must be at least 1".into(),
            ));
        }
        Ok(ProductPmf { base, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &JointPmf<S> {
        self.base
    }

    /// `p^n` of parallel sequences, one per axis of the base table.
    pub fn prob(&self, seqs: &[&[usize]]) -> Result<S> {
        if seqs.iter().any(|s| s.len() != self.n) {
            return Err(Error::LengthMismatch(format!("expected length {}", self.n)));
        }
        let cells = seq::joint_cells(seqs, &self.base.shape())?;
        Ok(self.prob_cells(&cells))
    }

    /// `p^n` of a sequence of flat joint cells.
    pub fn prob_cells(&self, cells: &[usize]) -> S {
        let t = self.base.table();
        cells.iter().fold(S::one(), |acc, &c| acc * t[c])
    }

    /// Materialize as a table over the power alphabets (same axis names).
    pub fn to_joint(&self, budget: u64) -> Result<JointPmf<S>> {
        let total = self.base.len() as u128;
        let needed = (0..self.n)
            .try_fold(1u128, |acc, _| acc.checked_mul(total))
            .unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let axes: Vec<Axis> = self
            .base
            .axes()
            .iter()
            .map(|a| Ok(Axis::new(a.name.clone(), a.alphabet.power(self.n)?)))
            .collect::<Result<_>>()?;
        let sizes = self.base.shape();
        let n = self.n;
        JointPmf::from_fn(axes, |idx| {
            let seqs: Vec<Vec<usize>> = idx
                .iter()
                .zip(&sizes)
                .map(|(&i, &k)| seq::decode(i, k, n))
                .collect();
            let refs: Vec<&[usize]> = seqs.iter().map(Vec::as_slice).collect();
            let cells = seq::joint_cells(&refs, &sizes).expect("consistent lengths");
            self.prob_cells(&cells)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Alphabet;

    #[test]
    fn n_one_equals_base() {
        let ax = vec![Axis::new("X", Alphabet::range(3).unwrap())];
        let p = JointPmf::<f64>::new(ax, vec![0.2, 0.3, 0.5]).unwrap();
        let q = p.product_extension(1).unwrap().to_joint(1000).unwrap();
        assert_eq!(p.table(), q.table());
    }

    #[test]
    fn fair_coin_cubed() {
        let ax = vec![Axis::new("X", Alphabet::range(2).unwrap())];
        let p = JointPmf::<f64>::uniform(ax).unwrap();
        let e = p.product_extension(3).unwrap();
        for idx in 0..8 {
            assert_eq!(e.prob(&[&seq::decode(idx, 2, 3)]).unwrap(), 0.125);
        }
    }

    #[test]
    fn pair_matches_kronecker() {
        let ax = vec![
            Axis::new("X", Alphabet::range(2).unwrap()),
            Axis::new("Y", Alphabet::range(3).unwrap()),
        ];
        let t = [0.05, 0.1, 0.15, 0.2, 0.3, 0.2];
        let p = JointPmf::<f64>::new(ax, t.to_vec()).unwrap();
        let q = p.product_extension(2).unwrap().to_joint(1_000).unwrap();
        // explicit Kronecker product, reindexed to (x1 x2, y1 y2)
        for x1 in 0..2 {
            for x2 in 0..2 {
                for y1 in 0..3 {
                    for y2 in 0..3 {
                        let want = t[x1 * 3 + y1] * t[x2 * 3 + y2];
                        let got = q.prob(&[x1 * 2 + x2, y1 * 3 + y2]);
                        assert!((want - got).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn ragged_rejected() {
        let ax = vec![
            Axis::new("X", Alphabet::range(2).unwrap()),
            Axis::new("Y", Alphabet::range(2).unwrap()),
        ];
        let p = JointPmf::<f64>::uniform(ax).unwrap();
        let e = p.product_extension(2).unwrap();
        assert!(matches!(
            e.prob(&[&[0, 1], &[0]]),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn budget_guard() {
        let ax = vec![Axis::new("X", Alphabet::range(2).unwrap())];
        let p = JointPmf::<f64>::uniform(ax).unwrap();
        assert!(p
            .product_extension(20)
            .unwrap()
            .to_joint(1000)
            .unwrap_err()
            .is_budget());
    }
}
