//! Robust letter typicality.
//!
//! A tuple of parallel sequences is δ-typical for `p` when every joint cell
//! `a` satisfies `|N(a)/n - p(a)| <= δ p(a)`. Cells of zero probability can
//! therefore never occur. The test is precomputed as integer count bounds.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{seq, JointPmf};

/// User-facing typicality parameter with the derived decoder slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams {
    delta: f64,
}

impl TypicalityParams {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0,1), got {delta}"
            )));
        }
        Ok(TypicalityParams { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Inflated slack `δ·(|X||Y| + |Z|)` for the side-information decoder.
    pub fn decoder_delta(&self, x: usize, y: usize, z: usize) -> f64 {
        self.delta * (x * y + z) as f64
    }
}

/// Precomputed per-cell count bounds for one table, blocklength and slack.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityTest {
    n: usize,
    delta: f64,
    shape: Vec<usize>,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl TypicalityTest {
    /// Any `delta > 0` is accepted here since the inflated decoder slack may
    /// exceed one, in which case only the upper bound binds.
    pub fn new<S: Real>(p: &JointPmf<S>, n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "blocklength must be at least 1".into(),
            ));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            )));
        }
        let nf = n as f64;
        let mut lo = Vec::with_capacity(p.len());
        let mut hi = Vec::with_capacity(p.len());
        for &v in p.table() {
            let v = v.as_f64();
            if v <= 0.0 {
                lo.push(0);
                hi.push(0);
                continue;
            }
            // absorb representation error of the decimal inputs at the boundary
            let slack = 1e-9 * nf * v;
            let l = (nf * v * (1.0 - delta) - slack).ceil().max(0.0);
            let h = (nf * v * (1.0 + delta) + slack).floor().min(nf);
            lo.push(l as usize);
            hi.push(h as usize);
        }
        Ok(TypicalityTest {
            n,
            delta,
            shape: p.shape(),
            lo,
            hi,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bounds(&self, cell: usize) -> (usize, usize) {
        (self.lo[cell], self.hi[cell])
    }

    /// True when no sequence at all can be typical (lower bounds exceed n or
    /// upper bounds cannot reach n).
    pub fn is_trivially_empty(&self) -> bool {
        let lo: usize = self.lo.iter().sum();
        let hi: usize = self.hi.iter().sum();
        lo > self.n || hi < self.n || self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    /// Typicality of a sequence of flat joint cells.
    pub fn contains_cells(&self, cells: &[usize]) -> bool {
        if cells.len() != self.n {
            return false;
        }
        let mut counts = vec![0usize; self.lo.len()];
        for &c in cells {
            counts[c] += 1;
        }
        self.counts_ok(&counts)
    }

    pub fn counts_ok(&self, counts: &[usize]) -> bool {
        counts
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&c, (&l, &h))| l <= c && c <= h)
    }

    /// Typicality of parallel sequences, one per axis of the table.
    pub fn contains(&self, seqs: &[&[usize]]) -> Result<bool> {
        if seqs.iter().any(|s| s.len() != self.n) {
            return Err(Error::LengthMismatch(format!("expected length {}", self.n)));
        }
        let cells = seq::joint_cells(seqs, &self.shape)?;
        Ok(self.contains_cells(&cells))
    }

    /// All typical sequences of flat cells in lexicographic order. For a
    /// single-axis table these are letter sequences.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        let mut counts = vec![0usize; self.lo.len()];
        let mut visited = 0u64;
        self.dfs(&mut cur, &mut counts, &mut out, &mut visited, budget)?;
        Ok(out)
    }

    fn dfs(
        &self,
        cur: &mut Vec<usize>,
        counts: &mut [usize],
        out: &mut Vec<Vec<usize>>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *visited += 1;
        if *visited > budget {
            return Err(Error::BudgetExceeded {
                needed: *visited as u128,
                budget,
            });
        }
        let remaining = self.n - cur.len();
        let deficit: usize = counts
            .iter()
            .zip(&self.lo)
            .map(|(&c, &l)| l.saturating_sub(c))
            .sum();
        if deficit > remaining {
            return Ok(());
        }
        if remaining == 0 {
            out.push(cur.clone());
            return Ok(());
        }
        for a in 0..counts.len() {
            if counts[a] < self.hi[a] {
                counts[a] += 1;
                cur.push(a);
                self.dfs(cur, counts, out, visited, budget)?;
                cur.pop();
                counts[a] -= 1;
            }
        }
        Ok(())
    }

    /// Conditional typical set `{v : (u, v) typical}` where the table's flat
    /// cell is `u_cell * n_out + v_cell` (conditioning axes first).
    pub fn conditional(&self, given: &[usize], n_out: usize) -> Vec<Vec<usize>> {
        assert_eq!(given.len(), self.n, "conditioning sequence length");
        assert_eq!(
            self.lo.len() % n_out,
            0,
            "output size must divide the table"
        );
        let n_given = self.lo.len() / n_out;
        let mut remaining_u = vec![0usize; n_given];
        for &u in given {
            remaining_u[u] += 1;
        }
        // cells of u-values absent from `given` must have zero lower bound
        for u in 0..n_given {
            if remaining_u[u] == 0 && (0..n_out).any(|v| self.lo[u * n_out + v] > 0) {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        let mut counts = vec![0usize; self.lo.len()];
        self.cond_dfs(
            given,
            n_out,
            &mut remaining_u,
            &mut cur,
            &mut counts,
            &mut out,
        );
        out
    }

    fn cond_dfs(
        &self,
        given: &[usize],
        n_out: usize,
        remaining_u: &mut [usize],
        cur: &mut Vec<usize>,
        counts: &mut [usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == self.n {
            if self.counts_ok(counts) {
                out.push(cur.clone());
            }
            return;
        }
        let u = given[i];
        remaining_u[u] -= 1;
        for v in 0..n_out {
            let cell = u * n_out + v;
            if counts[cell] >= self.hi[cell] {
                continue;
            }
            counts[cell] += 1;
            let need: usize = (0..n_out)
                .map(|w| self.lo[u * n_out + w].saturating_sub(counts[u * n_out + w]))
                .sum();
            if need <= remaining_u[u] {
                cur.push(v);
                self.cond_dfs(given, n_out, remaining_u, cur, counts, out);
                cur.pop();
            }
            counts[cell] -= 1;
        }
        remaining_u[u] += 1;
    }
}

/// Typicality of parallel sequences (one per axis of `p`).
pub fn is_typical<S: Real>(seqs: &[&[usize]], p: &JointPmf<S>, delta: f64) -> Result<bool> {
    let n = seqs.first().map_or(0, |s| s.len());
    TypicalityTest::new(p, n, delta)?.contains(seqs)
}

/// `T_δ(W|x^n)` for a two-axis table `p_xw` with the conditioning axis first.
pub fn cond_typical_set<S: Real>(
    p_xw: &JointPmf<S>,
    x: &[usize],
    delta: f64,
) -> Result<Vec<Vec<usize>>> {
    if p_xw.axes().len() != 2 {
        return Err(Error::AxisMismatch(
            "conditional typical set needs a two-axis table".into(),
        ));
    }
    let t = TypicalityTest::new(p_xw, x.len(), delta)?;
    Ok(t.conditional(x, p_xw.axes()[1].size()))
}

/// Total `p^n` mass of the typical set, by enumeration.
pub fn typical_mass<S: Real>(p: &JointPmf<S>, n: usize, delta: f64, budget: u64) -> Result<f64> {
    let t = TypicalityTest::new(p, n, delta)?;
    let tab = p.table();
    Ok(t.enumerate(budget)?
        .iter()
        .map(|s| s.iter().map(|&c| tab[c].as_f64()).product::<f64>())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Alphabet, Axis};
    use proptest::prelude::*;

    fn one_axis(t: &[f64]) -> JointPmf<f64> {
        JointPmf::new(
            vec![Axis::new("X", Alphabet::range(t.len()).unwrap())],
            t.to_vec(),
        )
        .unwrap()
    }

    /// Literal definition, no precomputed bounds.
    fn typical_direct(cells: &[usize], p: &[f64], delta: f64) -> bool {
        let n = cells.len() as f64;
        (0..p.len()).all(|a| {
            let f = cells.iter().filter(|&&c| c == a).count() as f64 / n;
            (f - p[a]).abs() <= delta * p[a] + 1e-12
        })
    }

    #[test]
    fn fair_coin_n4() {
        let p = one_axis(&[0.5, 0.5]);
        let t = TypicalityTest::new(&p, 4, 0.3).unwrap();
        let set = t.enumerate(1 << 20).unwrap();
        assert_eq!(set.len(), 6);
        for idx in 0..16 {
            let s = seq::decode(idx, 2, 4);
            let ones = s.iter().sum::<usize>();
            assert_eq!(t.contains_cells(&s), ones == 2, "{s:?}");
        }
    }

    #[test]
    fn zero_probability_letter_never_typical() {
        let p = one_axis(&[0.5, 0.5, 0.0]);
        for delta in [0.1, 0.9, 5.0] {
            assert!(!is_typical(&[&[0, 1, 2, 0]], &p, delta).unwrap());
        }
    }

    #[test]
    fn single_letter_by_formula() {
        let p = one_axis(&[0.7, 0.3]);
        // letter 0 at n=1: |1-0.7| = 0.3 <= δ·0.7 and |0-0.3| = 0.3 <= δ·0.3 needs δ >= 1
        assert!(!is_typical(&[&[0]], &p, 0.9).unwrap());
        assert!(is_typical(&[&[0]], &p, 1.0).unwrap());
    }

    #[test]
    fn conditional_matches_filter() {
        let p = JointPmf::<f64>::new(
            vec![
                Axis::new("X", Alphabet::range(2).unwrap()),
                Axis::new("W", Alphabet::range(3).unwrap()),
            ],
            vec![0.2, 0.15, 0.1, 0.05, 0.3, 0.2],
        )
        .unwrap();
        let n = 5;
        for xi in 0..32 {
            let x = seq::decode(xi, 2, n);
            let got = cond_typical_set(&p, &x, 0.8).unwrap();
            let mut want = Vec::new();
            for wi in 0..243 {
                let w = seq::decode(wi, 3, n);
                let cells: Vec<usize> = x.iter().zip(&w).map(|(a, b)| a * 3 + b).collect();
                if typical_direct(&cells, p.table(), 0.8) {
                    want.push(w);
                }
            }
            assert_eq!(got, want);
        }
    }

    #[test]
    fn delta_params_validated() {
        assert!(TypicalityParams::new(0.0).is_err());
        assert!(TypicalityParams::new(1.0).is_err());
        let t = TypicalityParams::new(0.1).unwrap();
        assert!((t.decoder_delta(2, 2, 2) - 0.6).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn enumeration_matches_definition(raw in proptest::collection::vec(0.05f64..1.0, 2..4), n in 1usize..6, delta in 0.05f64..0.95) {
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let pmf = one_axis(&p);
            let t = TypicalityTest::new(&pmf, n, delta).unwrap();
            let set = t.enumerate(1 << 20).unwrap();
            let k = p.len();
            let mut want = Vec::new();
            for idx in 0..k.pow(n as u32) {
                let s = seq::decode(idx, k, n);
                if typical_direct(&s, &p, delta) {
                    want.push(s);
                }
            }
            prop_assert_eq!(set, want);
        }

        #[test]
        fn mass_nondecreasing_in_delta(raw in proptest::collection::vec(0.05f64..1.0, 2..4), n in 1usize..7, d1 in 0.01f64..0.98, d2 in 0.01f64..0.98) {
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let pmf = one_axis(&p);
            let (a, b) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let ma = typical_mass(&pmf, n, a, 1 << 22).unwrap();
            let mb = typical_mass(&pmf, n, b, 1 << 22).unwrap();
            prop_assert!(ma <= mb + 1e-12);
        }
    }
}
