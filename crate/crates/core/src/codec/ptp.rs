//! Point-to-point code with decoder side information.
//!
//! Index conventions: codeword `l ∈ [0, L)` of randomness block `μ ∈ [0, K)`
//! is stored at `μ·L + l`. Encoder weight vectors have length `L + 1` with
//! slot 0 the deficit and slot `l + 1` the weight of codeword `l`. Messages are
//! `m ∈ {0} ∪ [1, M]` with 0 the "no codeword" message.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{seq, Axis, JointPmf, TypicalityParams, TypicalityTest};
use crate::region::ptp::{canonical_target, AuxChannelPtp, DEFAULT_TOL};
use crate::rng;

use super::{
    all_sequences, block_size, check_budget, check_unit, draw_index, effective_rate, PrunedLaw,
};

/// RNG stream of the codebook draw.
pub const CODEBOOK_STREAM: u64 = 1;
/// RNG stream of the binning draw.
pub const BINNING_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtpParams {
    pub n: usize,
    /// Codebook rate `R̃`.
    pub rt: f64,
    /// Message rate.
    pub r: f64,
    /// Common-randomness rate.
    pub c: f64,
    pub delta: f64,
    pub eta: f64,
    #[serde(default)]
    pub seed: u64,
}

impl PtpParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter(
                "blocklength must be at least 1".into(),
            ));
        }
        check_unit("delta", self.delta)?;
        check_unit("eta", self.eta)?;
        if !(self.r >= 0.0 && self.r <= self.rt) {
            return Err(Error::InvalidParameter(format!(
                "need 0 ≤ r ≤ rt, got r = {}, rt = {}",
                self.r, self.rt
            )));
        }
        if !(self.c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "c must be nonnegative, got {}",
                self.c
            )));
        }
        Ok(())
    }

    pub fn sizes(&self) -> Result<PtpSizes> {
        self.validate()?;
        let (l, m, k) = (
            block_size(self.n, self.rt)?,
            block_size(self.n, self.r)?,
            block_size(self.n, self.c)?,
        );
        Ok(PtpSizes {
            l,
            m,
            k,
            eff_rt: effective_rate(l, self.n),
            eff_r: effective_rate(m, self.n),
            eff_c: effective_rate(k, self.n),
        })
    }
}

/// Integer block sizes and the rates they realize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtpSizes {
    pub l: usize,
    pub m: usize,
    pub k: usize,
    pub eff_rt: f64,
    pub eff_r: f64,
    pub eff_c: f64,
}

/// Encoder weights over `{0} ∪ [L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderSubPmf {
    /// Slot 0 is `1 − Σ_{l≥1}`, negative when invalid.
    pub weights: Vec<f64>,
    /// `Σ_{l≥1} weight ≤ 1`.
    pub valid: bool,
    /// Whether the input was in `T_δ(X)`.
    pub typical_input: bool,
}

impl EncoderSubPmf {
    /// `Σ_{l≥1} weight(l)`.
    pub fn mass(&self) -> f64 {
        self.weights[1..].iter().sum()
    }
}

/// Per-letter quantities of the induced single-letter joint.
#[derive(Debug, Clone)]
struct Model {
    nx: usize,
    ny: usize,
    nz: usize,
    nw: usize,
    target: JointPmf<f64>,
    aux: AuxChannelPtp<f64>,
    p_w: JointPmf<f64>,
    /// `p(x,z)` at `x * nz + z`
    pxz: Vec<f64>,
    /// `p(x,w) / (p(x) p(w))` at `x * nw + w`
    ratio: Vec<f64>,
    /// `p(y|z,w)` at `(z * nw + w) * ny + y`
    py_zw: Vec<f64>,
    /// `p(x,y,z|w)` at `((w * nx + x) * ny + y) * nz + z`
    pxyz_w: Vec<f64>,
}

impl Model {
    fn new(p_xyz: &JointPmf<f64>, aux: &AuxChannelPtp<f64>) -> Result<Self> {
        let target = canonical_target(p_xyz)?;
        let residual = aux.residual(&target)?;
        if residual > DEFAULT_TOL {
            return Err(Error::InconsistentAux {
                residual,
                tol: DEFAULT_TOL,
            });
        }
        let joint = aux.induced_joint(&target)?;
        let (nw, nx, ny, nz) = (
            aux.w_size(),
            target.axes()[0].size(),
            target.axes()[1].size(),
            target.axes()[2].size(),
        );
        let p_w = joint.marginalize(&["W"])?;
        let p_x = joint.marginalize(&["X"])?;
        let p_xw = joint.marginalize(&["X", "W"])?;
        let pxz_t = target.marginalize(&["X", "Z"])?;
        let pxz = pxz_t.table().to_vec();
        let mut ratio = vec![0.0; nx * nw];
        for x in 0..nx {
            for w in 0..nw {
                let j = p_xw.prob(&[x, w]);
                if j > 0.0 {
                    ratio[x * nw + w] = j / (p_x.prob(&[x]) * p_w.prob(&[w]));
                }
            }
        }
        let mut py_zw = vec![0.0; nz * nw * ny];
        for z in 0..nz {
            for w in 0..nw {
                for y in 0..ny {
                    py_zw[(z * nw + w) * ny + y] = aux.y_given_zw(z, w, y);
                }
            }
        }
        let mut pxyz_w = vec![0.0; nw * nx * ny * nz];
        for (i, v) in pxyz_w.iter_mut().enumerate() {
            let w = i / (nx * ny * nz);
            let pw = p_w.prob(&[w]);
            if pw > 0.0 {
                *v = joint.table()[i] / pw;
            }
        }
        Ok(Model {
            nx,
            ny,
            nz,
            nw,
            target,
            aux: aux.clone(),
            p_w,
            pxz,
            ratio,
            py_zw,
            pxyz_w,
        })
    }
}

/// A sampled (or replayed) code together with its source model.
#[derive(Debug, Clone)]
pub struct PtpCodec {
    params: PtpParams,
    sizes: PtpSizes,
    model: Model,
    epsilon: f64,
    /// at `μ * L + l`
    words: Vec<Vec<usize>>,
    /// `I_C(l)` at `μ * L + l`
    dedup: Vec<usize>,
    /// per μ: first `l` of each distinct codeword
    distinct: Vec<Vec<usize>>,
    /// per μ: bin in `[1, M]` of each distinct codeword
    bins: Vec<Vec<usize>>,
    tx: TypicalityTest,
    txw: TypicalityTest,
    twz: TypicalityTest,
}

impl PtpCodec {
    /// Draw codebook and binning from `params.seed`.
    pub fn sample(
        p_xyz: &JointPmf<f64>,
        aux: &AuxChannelPtp<f64>,
        params: PtpParams,
        budget: u64,
    ) -> Result<Self> {
        let sizes = params.sizes()?;
        let model = Model::new(p_xyz, aux)?;
        let law = PrunedLaw::new(&model.p_w, params.n, params.delta, budget)?;
        let mut g = rng::stream(params.seed, CODEBOOK_STREAM);
        let words = law.draw(sizes.k * sizes.l, &mut g);
        let (dedup, distinct) = dedup_blocks(&words, sizes.l, sizes.k);
        let mut g = rng::stream(params.seed, BINNING_STREAM);
        let bins = distinct
            .iter()
            .map(|d| (0..d.len()).map(|_| g.gen_range(1..=sizes.m)).collect())
            .collect();
        Self::assemble(
            model,
            params,
            sizes,
            law.epsilon(),
            words,
            dedup,
            distinct,
            bins,
        )
    }

    /// Build from explicit codewords (`μ·L + l` order) and per-μ bins of the
    /// distinct codewords in order of first appearance.
    pub fn from_parts(
        p_xyz: &JointPmf<f64>,
        aux: &AuxChannelPtp<f64>,
        params: PtpParams,
        words: Vec<Vec<usize>>,
        bins: Vec<Vec<usize>>,
        budget: u64,
    ) -> Result<Self> {
        let sizes = params.sizes()?;
        let model = Model::new(p_xyz, aux)?;
        let law = PrunedLaw::new(&model.p_w, params.n, params.delta, budget)?;
        if words.len() != sizes.k * sizes.l {
            return Err(Error::ShapeMismatch {
                expected: sizes.k * sizes.l,
                got: words.len(),
            });
        }
        let tw = TypicalityTest::new(&model.p_w, params.n, params.delta)?;
        for w in &words {
            if !tw.contains(&[w])? {
                return Err(Error::InvalidParameter(format!(
                    "codeword {w:?} is not typical"
                )));
            }
        }
        let (dedup, distinct) = dedup_blocks(&words, sizes.l, sizes.k);
        if bins.len() != sizes.k
            || bins
                .iter()
                .zip(&distinct)
                .any(|(b, d)| b.len() != d.len() || b.iter().any(|&m| m == 0 || m > sizes.m))
        {
            return Err(Error::InvalidParameter(
                "bins must assign a value in [1, M] to every distinct codeword".into(),
            ));
        }
        Self::assemble(
            model,
            params,
            sizes,
            law.epsilon(),
            words,
            dedup,
            distinct,
            bins,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        model: Model,
        params: PtpParams,
        sizes: PtpSizes,
        epsilon: f64,
        words: Vec<Vec<usize>>,
        dedup: Vec<usize>,
        distinct: Vec<Vec<usize>>,
        bins: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = params.n;
        let p_x = model.target.marginalize(&["X"])?;
        let joint = model.aux.induced_joint(&model.target)?;
        let p_xw = joint.marginalize(&["X", "W"])?;
        let p_wz = joint.marginalize(&["W", "Z"])?;
        let d2 = TypicalityParams::new(params.delta)?.decoder_delta(model.nx, model.ny, model.nz);
        Ok(PtpCodec {
            tx: TypicalityTest::new(&p_x, n, params.delta)?,
            txw: TypicalityTest::new(&p_xw, n, params.delta)?,
            twz: TypicalityTest::new(&p_wz, n, d2)?,
            params,
            sizes,
            model,
            epsilon,
            words,
            dedup,
            distinct,
            bins,
        })
    }

    pub fn params(&self) -> &PtpParams {
        &self.params
    }

    pub fn sizes(&self) -> &PtpSizes {
        &self.sizes
    }

    /// Pruning constant `ε = 1 − P(T_δ(W))`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Target in `(X, Y, Z)` order.
    pub fn target(&self) -> &JointPmf<f64> {
        &self.model.target
    }

    pub fn aux(&self) -> &AuxChannelPtp<f64> {
        &self.model.aux
    }

    pub fn codeword(&self, mu: usize, l: usize) -> &[usize] {
        &self.words[mu * self.sizes.l + l]
    }

    /// `Θ^(μ)`, the number of distinct codewords in block `μ`.
    pub fn theta(&self, mu: usize) -> usize {
        self.distinct[mu].len()
    }

    /// `I_C^(μ)(l)`.
    pub fn dedup_index(&self, mu: usize, l: usize) -> usize {
        self.dedup[mu * self.sizes.l + l]
    }

    /// `b^(μ)(θ) ∈ [1, M]`.
    pub fn bin(&self, mu: usize, theta: usize) -> usize {
        self.bins[mu][theta]
    }

    /// Bin of codeword `l`: `b^(μ)(I_C^(μ)(l))`.
    pub fn message_of(&self, mu: usize, l: usize) -> usize {
        self.bins[mu][self.dedup_index(mu, l)]
    }

    /// Decoder fallback `w₀`, the constant sequence of the first `W` symbol.
    pub fn fallback(&self) -> Vec<usize> {
        vec![0; self.params.n]
    }

    fn check_len(&self, s: &[usize], k: usize, what: &str) -> Result<()> {
        if s.len() != self.params.n || s.iter().any(|&a| a >= k) {
            return Err(Error::InvalidParameter(format!(
                "{what} sequence {s:?} is not a length-{} word",
                self.params.n
            )));
        }
        Ok(())
    }

    pub fn encoder_subpmf(&self, x: &[usize], mu: usize) -> Result<EncoderSubPmf> {
        self.check_len(x, self.model.nx, "X")?;
        let l_size = self.sizes.l;
        let mut weights = vec![0.0; l_size + 1];
        if !self.tx.contains(&[x])? {
            weights[0] = 1.0;
            return Ok(EncoderSubPmf {
                weights,
                valid: true,
                typical_input: false,
            });
        }
        let scale = (1.0 - self.epsilon) / ((1.0 + self.params.eta) * l_size as f64);
        let nw = self.model.nw;
        for l in 0..l_size {
            if self.txw.is_trivially_empty() {
                break;
            }
            let w = self.codeword(mu, l);
            if self.txw.contains(&[x, w])? {
                let r: f64 = x
                    .iter()
                    .zip(w)
                    .map(|(&a, &b)| self.model.ratio[a * nw + b])
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

    /// `p^(μ)(m|x^n)` for `m ∈ {0} ∪ [M]`. An invalid encoder sends 0.
    pub fn message_pmf(&self, x: &[usize], mu: usize) -> Result<Vec<f64>> {
        let e = self.encoder_subpmf(x, mu)?;
        Ok(self.message_pmf_from(&e, mu))
    }

    fn message_pmf_from(&self, e: &EncoderSubPmf, mu: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.sizes.m + 1];
        if !e.valid {
            p[0] = 1.0;
            return p;
        }
        for l in 0..self.sizes.l {
            let v = e.weights[l + 1];
            if v > 0.0 {
                p[self.message_of(mu, l)] += v;
            }
        }
        p[0] = 1.0 - p[1..].iter().sum::<f64>();
        p
    }

    /// Distinct codewords `θ` in bin `m` jointly typical with `z^n`.
    fn candidates(&self, z: &[usize], m: usize, mu: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        if m == 0 {
            return Ok(out);
        }
        for (theta, &l) in self.distinct[mu].iter().enumerate() {
            if self.bins[mu][theta] == m && self.twz.contains(&[self.codeword(mu, l), z])? {
                out.push(theta);
            }
        }
        Ok(out)
    }

    /// Unique member of `D^(μ)(z^n, m)`, else `w₀`.
    pub fn decode(&self, z: &[usize], m: usize, mu: usize) -> Result<Vec<usize>> {
        self.check_len(z, self.model.nz, "Z")?;
        let c = self.candidates(z, m, mu)?;
        Ok(match c.as_slice() {
            [theta] => self.codeword(mu, self.distinct[mu][*theta]).to_vec(),
            _ => self.fallback(),
        })
    }

    /// `p^n(y^n | z^n, w^n)` over all `y^n` in index order.
    fn output_law(&self, z: &[usize], w: &[usize]) -> Vec<f64> {
        let (ny, nw) = (self.model.ny, self.model.nw);
        let mut out = vec![1.0];
        for (&zi, &wi) in z.iter().zip(w) {
            let row = &self.model.py_zw[(zi * nw + wi) * ny..(zi * nw + wi + 1) * ny];
            out = out
                .iter()
                .flat_map(|&a| row.iter().map(move |&b| a * b))
                .collect();
        }
        out
    }

    fn power_axes(&self) -> Result<Vec<Axis>> {
        self.model
            .target
            .axes()
            .iter()
            .map(|a| Ok(Axis::new(a.name.clone(), a.alphabet.power(self.params.n)?)))
            .collect()
    }

    /// Exact n-letter joint over `(X^n, Y^n, Z^n)` induced by the code.
    pub fn induced_joint_exact(&self, budget: u64) -> Result<JointPmf<f64>> {
        let n = self.params.n;
        let (nx, ny, nz) = (self.model.nx, self.model.ny, self.model.nz);
        let (cx, cy, cz) = (seq::count(nx, n)?, seq::count(ny, n)?, seq::count(nz, n)?);
        check_budget(
            cx as u128 * cy as u128 * cz as u128 * self.sizes.k as u128,
            budget,
        )?;
        let xs = all_sequences(nx, n)?;
        let zs = all_sequences(nz, n)?;
        let k = self.sizes.k;
        let m_size = self.sizes.m;
        // decoded word per (μ, z, m); None is the fallback
        let decoded: Vec<Vec<Option<usize>>> = (0..k)
            .into_par_iter()
            .map(|mu| -> Result<Vec<Option<usize>>> {
                let mut t = Vec::with_capacity(cz * (m_size + 1));
                for z in &zs {
                    for m in 0..=m_size {
                        let c = self.candidates(z, m, mu)?;
                        t.push(if c.len() == 1 {
                            Some(mu * self.sizes.l + self.distinct[mu][c[0]])
                        } else {
                            None
                        });
                    }
                }
                Ok(t)
            })
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<f64>> = xs
            .par_iter()
            .map(|x| -> Result<Vec<f64>> {
                let mut row = vec![0.0; cy * cz];
                let pzx: Vec<f64> = zs
                    .iter()
                    .map(|z| {
                        x.iter()
                            .zip(z)
                            .map(|(&a, &b)| self.model.pxz[a * nz + b])
                            .product()
                    })
                    .collect();
                if pzx.iter().all(|&v| v == 0.0) {
                    return Ok(row);
                }
                // weight per (z, decoded word)
                let mut acc: BTreeMap<(usize, Option<usize>), f64> = BTreeMap::new();
                for mu in 0..k {
                    let pm = self.message_pmf(x, mu)?;
                    for (zi, &pz) in pzx.iter().enumerate() {
                        if pz == 0.0 {
                            continue;
                        }
                        for (m, &v) in pm.iter().enumerate() {
                            if v != 0.0 {
                                *acc.entry((zi, decoded[mu][zi * (m_size + 1) + m]))
                                    .or_insert(0.0) += pz * v / k as f64;
                            }
                        }
                    }
                }
                let w0 = self.fallback();
                for ((zi, word), wt) in acc {
                    let w = word.map_or(&w0[..], |i| &self.words[i][..]);
                    for (yi, py) in self.output_law(&zs[zi], w).into_iter().enumerate() {
                        row[yi * cz + zi] += wt * py;
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        JointPmf::new(self.power_axes()?, rows.concat())
    }

    /// `p^n_{XYZ}` on the same axes as [`Self::induced_joint_exact`].
    pub fn target_power(&self, budget: u64) -> Result<JointPmf<f64>> {
        self.model
            .target
            .product_extension(self.params.n)?
            .to_joint(budget)
    }

    /// Total variation between `p^n_{XYZ}` and the induced joint.
    pub fn tv_deficit(&self, budget: u64) -> Result<f64> {
        let induced = self.induced_joint_exact(budget)?;
        let target = self.target_power(budget)?;
        Ok(target.total_variation(&induced)?.clamp(0.0, 1.0))
    }

    /// `½ Σ |p^n_{XYZ} − (LK)⁻¹ Σ_{μ,l} p^n_{XYZ|W}(·|w^n(l,μ))|`.
    pub fn soft_covering_deficit(&self, budget: u64) -> Result<f64> {
        let n = self.params.n;
        let (nx, ny, nz) = (self.model.nx, self.model.ny, self.model.nz);
        let cells = self.model.target.len();
        let mut mult: BTreeMap<&[usize], usize> = BTreeMap::new();
        for w in &self.words {
            *mult.entry(&w[..]).or_insert(0) += 1;
        }
        let total = seq::count(cells, n)?;
        check_budget(total as u128 * mult.len() as u128, budget)?;
        let lk = self.words.len() as f64;
        let tab = self.model.target.table();
        let per_w = nx * ny * nz;
        let dev: f64 = (0..total)
            .into_par_iter()
            .map(|i| {
                let c = seq::decode(i, cells, n);
                let p: f64 = c.iter().map(|&a| tab[a]).product();
                let q: f64 = mult
                    .iter()
                    .map(|(w, &cnt)| {
                        cnt as f64 / lk
                            * c.iter()
                                .zip(w.iter())
                                .map(|(&a, &b)| self.model.pxyz_w[b * per_w + a])
                                .product::<f64>()
                    })
                    .sum();
                (p - q).abs()
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum();
        Ok((0.5 * dev).clamp(0.0, 1.0))
    }

    /// One end-to-end run: sources, randomness, message, decoder output.
    pub fn sample_run<R: Rng>(&self, rng: &mut R) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        let (ny, nz) = (self.model.ny, self.model.nz);
        let mut x = Vec::with_capacity(self.params.n);
        let mut z = Vec::with_capacity(self.params.n);
        for _ in 0..self.params.n {
            let c = draw_index(&self.model.pxz, rng);
            x.push(c / nz);
            z.push(c % nz);
        }
        let mu = rng.gen_range(0..self.sizes.k);
        let pm = self.message_pmf(&x, mu)?;
        let m = draw_index(&pm.iter().map(|v| v.max(0.0)).collect::<Vec<_>>(), rng);
        let w = self.decode(&z, m, mu)?;
        let nw = self.model.nw;
        let y = z
            .iter()
            .zip(&w)
            .map(|(&zi, &wi)| {
                draw_index(
                    &self.model.py_zw[(zi * nw + wi) * ny..(zi * nw + wi + 1) * ny],
                    rng,
                )
            })
            .collect();
        Ok((x, y, z))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let l = self.sizes.l;
        serde_json::json!({
            "params": self.params,
            "sizes": self.sizes,
            "epsilon": self.epsilon,
            "codewords": self.words.chunks(l).collect::<Vec<_>>(),
            "bins": self.bins,
        })
    }

    /// Rebuild from [`Self::to_json`] output.
    pub fn from_json(
        p_xyz: &JointPmf<f64>,
        aux: &AuxChannelPtp<f64>,
        v: &serde_json::Value,
        budget: u64,
    ) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            params: PtpParams,
            codewords: Vec<Vec<Vec<usize>>>,
            bins: Vec<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_value(v.clone())?;
        Self::from_parts(
            p_xyz,
            aux,
            raw.params,
            raw.codewords.concat(),
            raw.bins,
            budget,
        )
    }
}

/// Per-block dedup map and the first index of each distinct codeword.
fn dedup_blocks(words: &[Vec<usize>], l: usize, k: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut dedup = vec![0; words.len()];
    let mut distinct = Vec::with_capacity(k);
    for mu in 0..k {
        let mut seen: BTreeMap<&[usize], usize> = BTreeMap::new();
        let mut first = Vec::new();
        for li in 0..l {
            let w = &words[mu * l + li][..];
            let next = seen.len();
            let t = *seen.entry(w).or_insert_with(|| {
                first.push(li);
                next
            });
            dedup[mu * l + li] = t;
        }
        distinct.push(first);
    }
    (dedup, distinct)
}
