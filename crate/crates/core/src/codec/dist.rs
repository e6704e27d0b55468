//! Two-encoder distributed code with a joint-typicality pair decoder.
//!
//! Codeword `l_j` of block `μ_j` for encoder `j` is stored at `μ_j·L_j + l_j`
//! and binned directly by its index. The shared randomness index splits as
//! `μ = μ₁·K₂ + μ₂`. Only instances with a constant time-sharing variable are
//! supported.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{seq, Axis, JointPmf, TypicalityTest};
use crate::region::dist::AuxChannelDist;
use crate::region::ptp::DEFAULT_TOL;
use crate::rng;

use super::ptp::EncoderSubPmf;
use super::{
    all_sequences, block_size, check_budget, check_unit, draw_index, effective_rate, PrunedLaw,
};

/// Streams for codebook 1, binning 1, codebook 2, binning 2.
pub const STREAMS: [u64; 4] = [1, 2, 3, 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistParams {
    pub n: usize,
    pub rt1: f64,
    pub rt2: f64,
    pub r1: f64,
    pub r2: f64,
    pub c1: f64,
    pub c2: f64,
    pub delta: f64,
    pub eta: f64,
    #[serde(default)]
    pub seed: u64,
    /// Total randomness budget `C` checked against `c1 + c2` when present.
    #[serde(default)]
    pub c_total: Option<f64>,
}

impl DistParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter(
                "blocklength must be at least 1".into(),
            ));
        }
        check_unit("delta", self.delta)?;
        check_unit("eta", self.eta)?;
        for (r, rt, j) in [(self.r1, self.rt1, 1), (self.r2, self.rt2, 2)] {
            if !(r >= 0.0 && r <= rt) {
                return Err(Error::InvalidParameter(format!(
                    "need 0 ≤ r{j} ≤ rt{j}, got {r} and {rt}"
                )));
            }
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(Error::InvalidParameter(
                "randomness rates must be nonnegative".into(),
            ));
        }
        if let Some(c) = self.c_total {
            if self.c1 + self.c2 > c {
                return Err(Error::InvalidParameter(format!(
                    "c1 + c2 = {} exceeds the total {c}",
                    self.c1 + self.c2
                )));
            }
        }
        Ok(())
    }

    pub fn sizes(&self) -> Result<DistSizes> {
        self.validate()?;
        let n = self.n;
        let l = [block_size(n, self.rt1)?, block_size(n, self.rt2)?];
        let m = [block_size(n, self.r1)?, block_size(n, self.r2)?];
        let k = [block_size(n, self.c1)?, block_size(n, self.c2)?];
        let eff = |v: [usize; 2]| [effective_rate(v[0], n), effective_rate(v[1], n)];
        Ok(DistSizes {
            l,
            m,
            k,
            eff_rt: eff(l),
            eff_r: eff(m),
            eff_c: eff(k),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistSizes {
    pub l: [usize; 2],
    pub m: [usize; 2],
    pub k: [usize; 2],
    pub eff_rt: [f64; 2],
    pub eff_r: [f64; 2],
    pub eff_c: [f64; 2],
}

#[derive(Debug, Clone)]
struct Side {
    nx: usize,
    nw: usize,
    /// `p(x,w) / (p(x) p(w))` at `x * nw + w`
    ratio: Vec<f64>,
    tx: TypicalityTest,
    txw: TypicalityTest,
    /// at `μ·L + l`
    words: Vec<Vec<usize>>,
    /// bin in `[1, M]` at `μ·L + l`
    bins: Vec<usize>,
    eps: f64,
}

#[derive(Debug, Clone)]
pub struct DistCodec {
    params: DistParams,
    sizes: DistSizes,
    target: JointPmf<f64>,
    aux: AuxChannelDist<f64>,
    ny: usize,
    /// `p(x1,x2)` at `x1 * |X2| + x2`
    px1x2: Vec<f64>,
    /// `p(y|w1,w2)` at `(w1 * |W2| + w2) * ny + y`
    py_w: Vec<f64>,
    sides: [Side; 2],
    tw1w2: TypicalityTest,
    epsilon: f64,
}

impl DistCodec {
    /// Draw both codebooks and binnings from `params.seed`.
    pub fn sample(
        p_x1x2y: &JointPmf<f64>,
        aux: &AuxChannelDist<f64>,
        params: DistParams,
        budget: u64,
    ) -> Result<Self> {
        let sizes = params.sizes()?;
        let (laws, joint) = laws(p_x1x2y, aux, &params, budget)?;
        let mut parts = Vec::new();
        for j in 0..2 {
            let count = sizes.k[j] * sizes.l[j];
            let words = laws[j].draw(count, &mut rng::stream(params.seed, STREAMS[2 * j]));
            let mut g = rng::stream(params.seed, STREAMS[2 * j + 1]);
            let bins = (0..count).map(|_| g.gen_range(1..=sizes.m[j])).collect();
            parts.push((words, bins));
        }
        let p2 = parts.pop().expect("two parts");
        let p1 = parts.pop().expect("two parts");
        Self::assemble(p_x1x2y, aux, params, sizes, &joint, &laws, [p1, p2])
    }

    /// Build from explicit codewords and per-index bins, `μ_j·L_j + l_j` order.
    pub fn from_parts(
        p_x1x2y: &JointPmf<f64>,
        aux: &AuxChannelDist<f64>,
        params: DistParams,
        parts: [(Vec<Vec<usize>>, Vec<usize>); 2],
        budget: u64,
    ) -> Result<Self> {
        let sizes = params.sizes()?;
        let (laws, joint) = laws(p_x1x2y, aux, &params, budget)?;
        for (j, (words, bins)) in parts.iter().enumerate() {
            let count = sizes.k[j] * sizes.l[j];
            if words.len() != count || bins.len() != count {
                return Err(Error::ShapeMismatch {
                    expected: count,
                    got: words.len().min(bins.len()),
                });
            }
            if bins.iter().any(|&m| m == 0 || m > sizes.m[j]) {
                return Err(Error::InvalidParameter(format!(
                    "bins of encoder {} must lie in [1, M]",
                    j + 1
                )));
            }
            let support: BTreeSet<&Vec<usize>> = laws[j].support().iter().collect();
            if let Some(w) = words.iter().find(|w| !support.contains(w)) {
                return Err(Error::InvalidParameter(format!(
                    "codeword {w:?} of encoder {} is not typical",
                    j + 1
                )));
            }
        }
        Self::assemble(p_x1x2y, aux, params, sizes, &joint, &laws, parts)
    }

    fn assemble(
        p_x1x2y: &JointPmf<f64>,
        aux: &AuxChannelDist<f64>,
        params: DistParams,
        sizes: DistSizes,
        joint: &JointPmf<f64>,
        laws: &[PrunedLaw; 2],
        parts: [(Vec<Vec<usize>>, Vec<usize>); 2],
    ) -> Result<Self> {
        let target = p_x1x2y.reorder(&["X1", "X2", "Y"])?;
        let (n, d) = (params.n, params.delta);
        let [(w1, b1), (w2, b2)] = parts;
        let mut sides = Vec::new();
        for (j, (words, bins)) in [(w1, b1), (w2, b2)].into_iter().enumerate() {
            let (xn, wn) = if j == 0 { ("X1", "W1") } else { ("X2", "W2") };
            let p_x = joint.marginalize(&[xn])?;
            let p_w = joint.marginalize(&[wn])?;
            let p_xw = joint.marginalize(&[xn, wn])?;
            let (nx, nw) = (p_x.len(), p_w.len());
            let mut ratio = vec![0.0; nx * nw];
            for x in 0..nx {
                for w in 0..nw {
                    let v = p_xw.prob(&[x, w]);
                    if v > 0.0 {
                        ratio[x * nw + w] = v / (p_x.prob(&[x]) * p_w.prob(&[w]));
                    }
                }
            }
            sides.push(Side {
                nx,
                nw,
                ratio,
                tx: TypicalityTest::new(&p_x, n, d)?,
                txw: TypicalityTest::new(&p_xw, n, d)?,
                words,
                bins,
                eps: laws[j].epsilon(),
            });
        }
        let s2 = sides.pop().expect("two sides");
        let s1 = sides.pop().expect("two sides");
        let ny = target.axes()[2].size();
        let (n1, n2) = (s1.nw, s2.nw);
        let mut py_w = vec![0.0; n1 * n2 * ny];
        for w1 in 0..n1 {
            for w2 in 0..n2 {
                for y in 0..ny {
                    py_w[(w1 * n2 + w2) * ny + y] = aux.y_given(0, w1, w2, y);
                }
            }
        }
        let px1x2 = target.marginalize(&["X1", "X2"])?.table().to_vec();
        let epsilon = s1.eps.min(s2.eps);
        Ok(DistCodec {
            tw1w2: TypicalityTest::new(&joint.marginalize(&["W1", "W2"])?, n, d)?,
            params,
            sizes,
            target,
            aux: aux.clone(),
            ny,
            px1x2,
            py_w,
            sides: [s1, s2],
            epsilon,
        })
    }

    pub fn params(&self) -> &DistParams {
        &self.params
    }

    pub fn sizes(&self) -> &DistSizes {
        &self.sizes
    }

    /// `ε = min(ε₁, ε₂)`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `ε_j` of encoder `j ∈ {1, 2}`.
    pub fn epsilon_of(&self, j: usize) -> f64 {
        self.sides[j - 1].eps
    }

    pub fn target(&self) -> &JointPmf<f64> {
        &self.target
    }

    pub fn aux(&self) -> &AuxChannelDist<f64> {
        &self.aux
    }

    /// Randomness blocks `K₁·K₂`.
    pub fn randomness(&self) -> usize {
        self.sizes.k[0] * self.sizes.k[1]
    }

    /// `(μ₁, μ₂)` from `μ`.
    pub fn split(&self, mu: usize) -> (usize, usize) {
        (mu / self.sizes.k[1], mu % self.sizes.k[1])
    }

    pub fn codeword(&self, j: usize, mu_j: usize, l: usize) -> &[usize] {
        &self.sides[j - 1].words[mu_j * self.sizes.l[j - 1] + l]
    }

    pub fn bin(&self, j: usize, mu_j: usize, l: usize) -> usize {
        self.sides[j - 1].bins[mu_j * self.sizes.l[j - 1] + l]
    }

    /// `(w̃₁, w̃₂)`, constant sequences of the first symbols.
    pub fn fallback(&self) -> (Vec<usize>, Vec<usize>) {
        (vec![0; self.params.n], vec![0; self.params.n])
    }

    /// Encoder `j` weights over `{0} ∪ [L_j]`.
    pub fn encoder_subpmf(&self, j: usize, x: &[usize], mu_j: usize) -> Result<EncoderSubPmf> {
        let side = &self.sides[j - 1];
        let l_size = self.sizes.l[j - 1];
        if x.len() != self.params.n || x.iter().any(|&a| a >= side.nx) {
            return Err(Error::InvalidParameter(format!(
                "X{j} sequence {x:?} is not a length-{} word",
                self.params.n
            )));
        }
        let mut weights = vec![0.0; l_size + 1];
        if !side.tx.contains(&[x])? {
            weights[0] = 1.0;
            return Ok(EncoderSubPmf {
                weights,
                valid: true,
                typical_input: false,
            });
        }
        let scale = (1.0 - self.epsilon) / ((1.0 + self.params.eta) * l_size as f64);
        for l in 0..l_size {
            if side.txw.is_trivially_empty() {
                break;
            }
            let w = &side.words[mu_j * l_size + l];
            if side.txw.contains(&[x, w])? {
                let r: f64 = x
                    .iter()
                    .zip(w)
                    .map(|(&a, &b)| side.ratio[a * side.nw + b])
                    .product();
                weights[l + 1] = scale * r;
            }
        }
        let s: f64 = weights[1..].iter().sum();
        weights[0] = 1.0 - s;
        Ok(EncoderSubPmf {
            weights,
            valid: s <= 1.0,
            typical_input: true,
        })
    }

    /// `p^(μ_j)(m_j|x_j^n)` over `{0} ∪ [M_j]`.
    pub fn message_pmf(&self, j: usize, x: &[usize], mu_j: usize) -> Result<Vec<f64>> {
        let e = self.encoder_subpmf(j, x, mu_j)?;
        let mut p = vec![0.0; self.sizes.m[j - 1] + 1];
        if !e.valid {
            p[0] = 1.0;
            return Ok(p);
        }
        for l in 0..self.sizes.l[j - 1] {
            let v = e.weights[l + 1];
            if v > 0.0 {
                p[self.bin(j, mu_j, l)] += v;
            }
        }
        p[0] = 1.0 - p[1..].iter().sum::<f64>();
        Ok(p)
    }

    /// Distinct jointly typical codeword pairs in bins `(m₁, m₂)`, as
    /// `(l₁, l₂)` of their first occurrence.
    fn candidates(&self, m1: usize, m2: usize, mu: usize) -> Result<Vec<(usize, usize)>> {
        let (mu1, mu2) = self.split(mu);
        let mut seen: BTreeSet<(&[usize], &[usize])> = BTreeSet::new();
        let mut out = Vec::new();
        if m1 == 0 || m2 == 0 {
            return Ok(out);
        }
        for l1 in (0..self.sizes.l[0]).filter(|&l| self.bin(1, mu1, l) == m1) {
            for l2 in (0..self.sizes.l[1]).filter(|&l| self.bin(2, mu2, l) == m2) {
                let (a, b) = (self.codeword(1, mu1, l1), self.codeword(2, mu2, l2));
                if self.tw1w2.contains(&[a, b])? && seen.insert((a, b)) {
                    out.push((l1, l2));
                }
            }
        }
        Ok(out)
    }

    /// Unique member of `D^(μ₁,μ₂)(m₁, m₂)`, else the fallback pair.
    pub fn decode(&self, m1: usize, m2: usize, mu: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let (mu1, mu2) = self.split(mu);
        Ok(match self.candidates(m1, m2, mu)?.as_slice() {
            [(l1, l2)] => (
                self.codeword(1, mu1, *l1).to_vec(),
                self.codeword(2, mu2, *l2).to_vec(),
            ),
            _ => self.fallback(),
        })
    }

    fn output_law(&self, w1: &[usize], w2: &[usize]) -> Vec<f64> {
        let (ny, n2) = (self.ny, self.sides[1].nw);
        let mut out = vec![1.0];
        for (&a, &b) in w1.iter().zip(w2) {
            let row = &self.py_w[(a * n2 + b) * ny..(a * n2 + b + 1) * ny];
            out = out
                .iter()
                .flat_map(|&u| row.iter().map(move |&v| u * v))
                .collect();
        }
        out
    }

    fn power_axes(&self) -> Result<Vec<Axis>> {
        self.target
            .axes()
            .iter()
            .map(|a| Ok(Axis::new(a.name.clone(), a.alphabet.power(self.params.n)?)))
            .collect()
    }

    /// Exact n-letter joint over `(X1^n, X2^n, Y^n)`.
    pub fn induced_joint_exact(&self, budget: u64) -> Result<JointPmf<f64>> {
        let n = self.params.n;
        let (n1, n2) = (self.sides[0].nx, self.sides[1].nx);
        let (c1, c2, cy) = (
            seq::count(n1, n)?,
            seq::count(n2, n)?,
            seq::count(self.ny, n)?,
        );
        let k = self.randomness();
        check_budget(c1 as u128 * c2 as u128 * cy as u128 * k as u128, budget)?;
        let x1s = all_sequences(n1, n)?;
        let x2s = all_sequences(n2, n)?;
        let [m1s, m2s] = [self.sizes.m[0] + 1, self.sizes.m[1] + 1];
        let msg = |j: usize, xs: &[Vec<usize>]| -> Result<Vec<Vec<Vec<f64>>>> {
            xs.iter()
                .map(|x| {
                    (0..self.sizes.k[j - 1])
                        .map(|mu| self.message_pmf(j, x, mu))
                        .collect()
                })
                .collect()
        };
        let msg1 = msg(1, &x1s)?;
        let msg2 = msg(2, &x2s)?;
        // decoded pair per (μ, m1, m2) as first-occurrence indices; None is the fallback
        let decoded: Vec<Vec<Option<(usize, usize)>>> = (0..k)
            .into_par_iter()
            .map(|mu| -> Result<Vec<Option<(usize, usize)>>> {
                let mut t = Vec::with_capacity(m1s * m2s);
                for m1 in 0..m1s {
                    for m2 in 0..m2s {
                        let c = self.candidates(m1, m2, mu)?;
                        t.push(if c.len() == 1 { Some(c[0]) } else { None });
                    }
                }
                Ok(t)
            })
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<f64>> = (0..c1 * c2)
            .into_par_iter()
            .map(|cell| {
                let (i1, i2) = (cell / c2, cell % c2);
                let mut row = vec![0.0; cy];
                let px: f64 = x1s[i1]
                    .iter()
                    .zip(&x2s[i2])
                    .map(|(&a, &b)| self.px1x2[a * n2 + b])
                    .product();
                if px == 0.0 {
                    return row;
                }
                let mut acc: BTreeMap<(usize, Option<(usize, usize)>), f64> = BTreeMap::new();
                for mu in 0..k {
                    let (mu1, mu2) = self.split(mu);
                    let (p1, p2) = (&msg1[i1][mu1], &msg2[i2][mu2]);
                    for (m1, &a) in p1.iter().enumerate().filter(|(_, &a)| a != 0.0) {
                        for (m2, &b) in p2.iter().enumerate().filter(|(_, &b)| b != 0.0) {
                            let key = (mu, decoded[mu][m1 * m2s + m2]);
                            // fallback output does not depend on μ
                            let key = if key.1.is_none() { (0, None) } else { key };
                            *acc.entry(key).or_insert(0.0) += px * a * b / k as f64;
                        }
                    }
                }
                let (f1, f2) = self.fallback();
                for ((mu, pair), wt) in acc {
                    let (mu1, mu2) = self.split(mu);
                    let (w1, w2) = match pair {
                        Some((l1, l2)) => (self.codeword(1, mu1, l1), self.codeword(2, mu2, l2)),
                        None => (&f1[..], &f2[..]),
                    };
                    for (y, py) in self.output_law(w1, w2).into_iter().enumerate() {
                        row[y] += wt * py;
                    }
                }
                row
            })
            .collect();
        JointPmf::new(self.power_axes()?, rows.concat())
    }

    pub fn target_power(&self, budget: u64) -> Result<JointPmf<f64>> {
        self.target
            .product_extension(self.params.n)?
            .to_joint(budget)
    }

    pub fn tv_deficit(&self, budget: u64) -> Result<f64> {
        let induced = self.induced_joint_exact(budget)?;
        Ok(self
            .target_power(budget)?
            .total_variation(&induced)?
            .clamp(0.0, 1.0))
    }

    /// One end-to-end run `(x1, x2, y)`.
    pub fn sample_run<R: Rng>(&self, rng: &mut R) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        let n2 = self.sides[1].nx;
        let (mut x1, mut x2) = (Vec::new(), Vec::new());
        for _ in 0..self.params.n {
            let c = draw_index(&self.px1x2, rng);
            x1.push(c / n2);
            x2.push(c % n2);
        }
        let mu = rng.gen_range(0..self.randomness());
        let (mu1, mu2) = self.split(mu);
        let clip = |p: Vec<f64>| p.into_iter().map(|v| v.max(0.0)).collect::<Vec<_>>();
        let m1 = draw_index(&clip(self.message_pmf(1, &x1, mu1)?), rng);
        let m2 = draw_index(&clip(self.message_pmf(2, &x2, mu2)?), rng);
        let (w1, w2) = self.decode(m1, m2, mu)?;
        let nw2 = self.sides[1].nw;
        let y = w1
            .iter()
            .zip(&w2)
            .map(|(&a, &b)| {
                draw_index(
                    &self.py_w[(a * nw2 + b) * self.ny..(a * nw2 + b + 1) * self.ny],
                    rng,
                )
            })
            .collect();
        Ok((x1, x2, y))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let block = |j: usize| {
            let s = &self.sides[j];
            serde_json::json!({
                "epsilon": s.eps,
                "codewords": s.words.chunks(self.sizes.l[j]).collect::<Vec<_>>(),
                "bins": s.bins.chunks(self.sizes.l[j]).collect::<Vec<_>>(),
            })
        };
        serde_json::json!({
            "params": self.params,
            "sizes": self.sizes,
            "epsilon": self.epsilon,
            "encoder1": block(0),
            "encoder2": block(1),
        })
    }

    pub fn from_json(
        p_x1x2y: &JointPmf<f64>,
        aux: &AuxChannelDist<f64>,
        v: &serde_json::Value,
        budget: u64,
    ) -> Result<Self> {
        #[derive(Deserialize)]
        struct Block {
            codewords: Vec<Vec<Vec<usize>>>,
            bins: Vec<Vec<usize>>,
        }
        #[derive(Deserialize)]
        struct Raw {
            params: DistParams,
            encoder1: Block,
            encoder2: Block,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        let part = |b: Block| (b.codewords.concat(), b.bins.concat());
        Self::from_parts(
            p_x1x2y,
            aux,
            raw.params,
            [part(raw.encoder1), part(raw.encoder2)],
            budget,
        )
    }
}

/// Pruned codebook laws of both encoders and the induced single-letter joint.
fn laws(
    p_x1x2y: &JointPmf<f64>,
    aux: &AuxChannelDist<f64>,
    params: &DistParams,
    budget: u64,
) -> Result<([PrunedLaw; 2], JointPmf<f64>)> {
    if aux.q_size() != 1 {
        return Err(Error::InvalidParameter(format!(
            "the codec needs a constant time-sharing variable, got |Q| = {}",
            aux.q_size()
        )));
    }
    let residual = aux.residual(p_x1x2y)?;
    if residual > DEFAULT_TOL {
        return Err(Error::InconsistentAux {
            residual,
            tol: DEFAULT_TOL,
        });
    }
    let joint = aux.induced_joint(p_x1x2y)?;
    let l1 = PrunedLaw::new(&joint.marginalize(&["W1"])?, params.n, params.delta, budget)?;
    let l2 = PrunedLaw::new(&joint.marginalize(&["W2"])?, params.n, params.delta, budget)?;
    Ok(([l1, l2], joint))
}
