//! Frontier tracing for the point-to-point region by scalarized multi-start
//! descent over auxiliary channels.
//!
//! For each weight `λ` the objective `(1−λ)·r_min + λ·r_plus_c_min` is
//! minimized over `(p_{W|X}, p_{Y|ZW})`. Both conditionals are softmax
//! parametrized; consistency with the target is a quadratic penalty with an
//! increasing weight, after which the iterate is projected back onto the
//! consistent set by alternating Dykstra projections (`p_{Y|ZW}` with
//! `p_{W|X}` fixed, then the reverse). Only candidates whose residual is
//! within tolerance are kept.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointPmf};
use crate::rng;

use super::ptp::{canonical_target, ptp_rates_for, AuxChannelPtp, PtpRatePair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Largest `|W|` tried; `None` means `min((|X||Y||Z|)², 8)`.
    pub w_cap: Option<usize>,
    /// Random starts per `(λ, |W|)`.
    pub restarts: usize,
    /// Number of equally spaced weights in `[0, 1]`.
    pub lambdas: usize,
    /// Descent iterations per penalty stage.
    pub iterations: usize,
    pub penalties: Vec<f64>,
    /// Accepted consistency residual.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            w_cap: None,
            restarts: 4,
            lambdas: 33,
            iterations: 300,
            penalties: vec![1e1, 1e2, 1e3, 1e4, 1e5],
            tol: super::ptp::DEFAULT_TOL,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn lambda_grid(&self) -> Vec<f64> {
        match self.lambdas {
            0 => Vec::new(),
            1 => vec![0.5],
            m => (0..m).map(|i| i as f64 / (m - 1) as f64).collect(),
        }
    }

    pub fn effective_w_cap(&self, nx: usize, ny: usize, nz: usize) -> usize {
        let bound = (nx * ny * nz).saturating_pow(2);
        self.w_cap.unwrap_or_else(|| bound.min(8)).max(1)
    }
}

/// Best certificate found for one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub objective: f64,
    pub rates: PtpRatePair,
    pub aux: AuxChannelPtp<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaResult {
    pub lambda: f64,
    /// `None` when no consistent auxiliary channel was found.
    pub best: Option<Candidate>,
}

/// One emitted frontier corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub lambda: f64,
    pub r: f64,
    pub c: f64,
    pub aux_id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub per_lambda: Vec<LambdaResult>,
    /// Pareto-pruned corners, sorted by `(R, C)`.
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    /// `lambda,R,C,aux_id` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["lambda", "R", "C", "aux_id"])?;
        for p in &self.points {
            w.write_record([
                p.lambda.to_string(),
                p.r.to_string(),
                p.c.to_string(),
                p.aux_id.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Certificates of the emitted points keyed by `aux_id` (index into
    /// `per_lambda`).
    pub fn certificates_json(&self) -> serde_json::Value {
        let certs: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| {
                let cand = self.per_lambda[p.aux_id]
                    .best
                    .as_ref()
                    .expect("emitted points have certificates");
                serde_json::json!({
                    "aux_id": p.aux_id,
                    "lambda": p.lambda,
                    "rates": cand.rates,
                    "aux": aux_to_json(&cand.aux),
                })
            })
            .collect();
        serde_json::Value::Array(certs)
    }
}

/// `{"w_symbols": [...], "p_w_given_x": [[..] per x], "p_y_given_zw": [[..] per (z, w)]}`
pub fn aux_to_json(aux: &AuxChannelPtp<f64>) -> serde_json::Value {
    let wx = aux.p_w_given_x();
    let yzw = aux.p_y_given_zw();
    serde_json::json!({
        "w_symbols": aux.w_alphabet().symbols(),
        "p_w_given_x": (0..wx.given_len()).map(|g| wx.row(g).map(|r| r.to_vec())).collect::<Vec<_>>(),
        "p_y_given_zw": (0..yzw.given_len()).map(|g| yzw.row(g).map(|r| r.to_vec())).collect::<Vec<_>>(),
    })
}

/// Inverse of [`aux_to_json`] for a given target.
pub fn aux_from_json(p_xyz: &JointPmf<f64>, v: &serde_json::Value) -> Result<AuxChannelPtp<f64>> {
    #[derive(Deserialize)]
    struct Raw {
        w_symbols: Vec<String>,
        p_w_given_x: Vec<Vec<f64>>,
        p_y_given_zw: Vec<Vec<f64>>,
    }
    let raw: Raw = serde_json::from_value(v.clone())?;
    AuxChannelPtp::for_target(
        p_xyz,
        Alphabet::new(raw.w_symbols)?,
        raw.p_w_given_x,
        raw.p_y_given_zw,
    )
}

/// Target data in flat arrays.
struct Problem {
    nx: usize,
    ny: usize,
    nz: usize,
    /// `p(x,z)` at `x * nz + z`
    pxz: Vec<f64>,
    /// `p(y|x,z)` at `(x * nz + z) * ny + y`, zero rows where `p(x,z) = 0`
    target: Vec<f64>,
}

impl Problem {
    fn new(t: &JointPmf<f64>) -> Result<Self> {
        let (nx, ny, nz) = (t.axes()[0].size(), t.axes()[1].size(), t.axes()[2].size());
        let mut pxz = vec![0.0; nx * nz];
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    pxz[x * nz + z] += t.prob(&[x, y, z]);
                }
            }
        }
        let mut target = vec![0.0; nx * nz * ny];
        for x in 0..nx {
            for z in 0..nz {
                let m = pxz[x * nz + z];
                if m > 0.0 {
                    for y in 0..ny {
                        target[(x * nz + z) * ny + y] = t.prob(&[x, y, z]) / m;
                    }
                }
            }
        }
        Ok(Problem {
            nx,
            ny,
            nz,
            pxz,
            target,
        })
    }

    fn supported(&self, x: usize, z: usize) -> bool {
        self.pxz[x * self.nz + z] > 0.0
    }

    fn residual(&self, k: usize, a: &[f64], b: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for x in 0..self.nx {
            for z in 0..self.nz {
                if !self.supported(x, z) {
                    continue;
                }
                for y in 0..self.ny {
                    let mix: f64 = (0..k)
                        .map(|w| a[x * k + w] * b[(z * k + w) * self.ny + y])
                        .sum();
                    worst = worst.max((mix - self.target[(x * self.nz + z) * self.ny + y]).abs());
                }
            }
        }
        worst
    }
}

fn log2_ratio(num: f64, den: f64) -> f64 {
    if num > 0.0 && den > 0.0 {
        (num / den).log2()
    } else {
        0.0
    }
}

/// Objective, penalty and gradients with respect to the probabilities.
struct Eval {
    value: f64,
    grad_a: Vec<f64>,
    grad_b: Vec<f64>,
}

fn evaluate(pb: &Problem, k: usize, lambda: f64, rho: f64, a: &[f64], b: &[f64]) -> Eval {
    let (nx, ny, nz) = (pb.nx, pb.ny, pb.nz);
    let idx = |w: usize, x: usize, y: usize, z: usize| ((w * nx + x) * ny + y) * nz + z;
    let mut p = vec![0.0; k * nx * ny * nz];
    let mut px = vec![0.0; nx];
    let mut pz = vec![0.0; nz];
    let mut pw = vec![0.0; k];
    let mut pxw = vec![0.0; nx * k];
    let mut pzw = vec![0.0; nz * k];
    let mut pxyz = vec![0.0; nx * ny * nz];
    for x in 0..nx {
        for z in 0..nz {
            let m = pb.pxz[x * nz + z];
            px[x] += m;
            pz[z] += m;
            if m == 0.0 {
                continue;
            }
            for w in 0..k {
                let mw = m * a[x * k + w];
                pxw[x * k + w] += mw;
                pzw[z * k + w] += mw;
                pw[w] += mw;
                for y in 0..ny {
                    let v = mw * b[(z * k + w) * ny + y];
                    p[idx(w, x, y, z)] = v;
                    pxyz[(x * ny + y) * nz + z] += v;
                }
            }
        }
    }
    let gxw: Vec<f64> = (0..nx * k)
        .map(|i| log2_ratio(pxw[i], px[i / k] * pw[i % k]))
        .collect();
    let gzw: Vec<f64> = (0..nz * k)
        .map(|i| log2_ratio(pzw[i], pz[i / k] * pw[i % k]))
        .collect();
    let i_xw: f64 = (0..nx * k).map(|i| pxw[i] * gxw[i]).sum();
    let i_wz: f64 = (0..nz * k).map(|i| pzw[i] * gzw[i]).sum();
    let mut i_xyzw = 0.0;
    let mut grad_a = vec![0.0; nx * k];
    let mut grad_b = vec![0.0; nz * k * ny];
    for w in 0..k {
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    let m = pb.pxz[x * nz + z];
                    if m == 0.0 {
                        continue;
                    }
                    let v = p[idx(w, x, y, z)];
                    let g_full = log2_ratio(v, pxyz[(x * ny + y) * nz + z] * pw[w]);
                    i_xyzw += v * g_full;
                    let g = (1.0 - lambda) * gxw[x * k + w] + lambda * g_full - gzw[z * k + w];
                    grad_a[x * k + w] += m * b[(z * k + w) * ny + y] * g;
                    grad_b[(z * k + w) * ny + y] += m * a[x * k + w] * g;
                }
            }
        }
    }
    let mut value = (1.0 - lambda) * i_xw + lambda * i_xyzw - i_wz;
    if rho > 0.0 {
        for x in 0..nx {
            for z in 0..nz {
                if !pb.supported(x, z) {
                    continue;
                }
                for y in 0..ny {
                    let mix: f64 = (0..k).map(|w| a[x * k + w] * b[(z * k + w) * ny + y]).sum();
                    let r = mix - pb.target[(x * nz + z) * ny + y];
                    value += rho * r * r;
                    for w in 0..k {
                        grad_a[x * k + w] += 2.0 * rho * r * b[(z * k + w) * ny + y];
                        grad_b[(z * k + w) * ny + y] += 2.0 * rho * r * a[x * k + w];
                    }
                }
            }
        }
    }
    Eval {
        value,
        grad_a,
        grad_b,
    }
}

fn softmax_rows(logits: &[f64], width: usize) -> Vec<f64> {
    let mut out = vec![0.0; logits.len()];
    for (src, dst) in logits.chunks(width).zip(out.chunks_mut(width)) {
        let mx = src.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut s = 0.0;
        for (d, &l) in dst.iter_mut().zip(src) {
            *d = (l - mx).exp();
            s += *d;
        }
        for d in dst.iter_mut() {
            *d /= s;
        }
    }
    out
}

/// Chain rule through a row-wise softmax.
fn softmax_backward(probs: &[f64], grad: &[f64], width: usize) -> Vec<f64> {
    let mut out = vec![0.0; probs.len()];
    for ((p, g), o) in probs
        .chunks(width)
        .zip(grad.chunks(width))
        .zip(out.chunks_mut(width))
    {
        let dot: f64 = p.iter().zip(g).map(|(a, b)| a * b).sum();
        for i in 0..width {
            o[i] = p[i] * (g[i] - dot);
        }
    }
    out
}

/// Objective and logit gradient. Falls back to central differences if the
/// analytic gradient is not finite.
fn objective_and_grad(
    pb: &Problem,
    k: usize,
    lambda: f64,
    rho: f64,
    theta: &[f64],
) -> (f64, Vec<f64>) {
    let na = pb.nx * k;
    let a = softmax_rows(&theta[..na], k);
    let b = softmax_rows(&theta[na..], pb.ny);
    let e = evaluate(pb, k, lambda, rho, &a, &b);
    let mut g = softmax_backward(&a, &e.grad_a, k);
    g.extend(softmax_backward(&b, &e.grad_b, pb.ny));
    if e.value.is_finite() && g.iter().all(|v| v.is_finite()) {
        return (e.value, g);
    }
    (e.value, numerical_grad(pb, k, lambda, rho, theta))
}

fn objective(pb: &Problem, k: usize, lambda: f64, rho: f64, theta: &[f64]) -> f64 {
    let na = pb.nx * k;
    let a = softmax_rows(&theta[..na], k);
    let b = softmax_rows(&theta[na..], pb.ny);
    evaluate(pb, k, lambda, rho, &a, &b).value
}

fn numerical_grad(pb: &Problem, k: usize, lambda: f64, rho: f64, theta: &[f64]) -> Vec<f64> {
    let h = 1e-6;
    let mut t = theta.to_vec();
    (0..theta.len())
        .map(|i| {
            t[i] = theta[i] + h;
            let up = objective(pb, k, lambda, rho, &t);
            t[i] = theta[i] - h;
            let dn = objective(pb, k, lambda, rho, &t);
            t[i] = theta[i];
            let d = (up - dn) / (2.0 * h);
            if d.is_finite() {
                d
            } else {
                0.0
            }
        })
        .collect()
}

/// Gradient descent with Armijo backtracking.
fn descend(pb: &Problem, k: usize, lambda: f64, rho: f64, theta: &mut [f64], iterations: usize) {
    let mut step = 1.0 / (1.0 + rho);
    for _ in 0..iterations {
        let (f, g) = objective_and_grad(pb, k, lambda, rho, theta);
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if gg < 1e-24 {
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = theta.iter().zip(&g).map(|(t, d)| t - step * d).collect();
            let ft = objective(pb, k, lambda, rho, &trial);
            if ft.is_finite() && ft <= f - 1e-4 * step * gg {
                theta.copy_from_slice(&trial);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (step * 2.0).min(1e3);
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let mut css = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
}

/// Dykstra's method for `{X : A X = C}` ∩ (rows of X in simplices), with X
/// a `rows × cols` matrix and `A` acting on the left.
fn dykstra_left(
    a: &DMatrix<f64>,
    c: &DMatrix<f64>,
    x0: &DMatrix<f64>,
    iters: usize,
) -> DMatrix<f64> {
    let pinv = a.clone().pseudo_inverse(1e-12).expect("pseudo-inverse");
    let mut x = x0.clone();
    let mut q = DMatrix::zeros(x.nrows(), x.ncols());
    for _ in 0..iters {
        let y = &x - &pinv * (a * &x - c);
        let mut z = &y + &q;
        for mut row in z.row_iter_mut() {
            let mut v: Vec<f64> = row.iter().copied().collect();
            project_simplex(&mut v);
            for (d, s) in row.iter_mut().zip(v) {
                *d = s;
            }
        }
        q = &y + &q - &z;
        let moved = (&z - &x).abs().max();
        x = z;
        if moved < 1e-15 {
            break;
        }
    }
    x
}

/// Alternating feasibility repair of `(a, b)`.
fn repair(pb: &Problem, k: usize, a: &mut [f64], b: &mut [f64], tol: f64) -> f64 {
    let (nx, ny, nz) = (pb.nx, pb.ny, pb.nz);
    let mut res = pb.residual(k, a, b);
    for _ in 0..12 {
        if res <= tol * 1e-2 {
            break;
        }
        // p(y|z,·) with p(w|x) fixed
        for z in 0..nz {
            let xs: Vec<usize> = (0..nx).filter(|&x| pb.supported(x, z)).collect();
            if xs.is_empty() {
                continue;
            }
            let am = DMatrix::from_fn(xs.len(), k, |i, w| a[xs[i] * k + w]);
            let cm = DMatrix::from_fn(xs.len(), ny, |i, y| pb.target[(xs[i] * nz + z) * ny + y]);
            let bm = DMatrix::from_fn(k, ny, |w, y| b[(z * k + w) * ny + y]);
            let out = dykstra_left(&am, &cm, &bm, 2000);
            for w in 0..k {
                for y in 0..ny {
                    b[(z * k + w) * ny + y] = out[(w, y)];
                }
            }
        }
        res = pb.residual(k, a, b);
        if res <= tol * 1e-2 {
            break;
        }
        // p(·|x) with p(y|z,w) fixed: a_x M = c  ⇔  Mᵀ a_xᵀ = cᵀ
        for x in 0..nx {
            let zs: Vec<usize> = (0..nz).filter(|&z| pb.supported(x, z)).collect();
            if zs.is_empty() {
                continue;
            }
            let mt = DMatrix::from_fn(zs.len() * ny, k, |r, w| {
                b[(zs[r / ny] * k + w) * ny + r % ny]
            });
            let ct = DMatrix::from_fn(zs.len() * ny, 1, |r, _| {
                pb.target[(x * nz + zs[r / ny]) * ny + r % ny]
            });
            let at = DMatrix::from_fn(k, 1, |w, _| a[x * k + w]);
            let out = dykstra_right_vector(&mt, &ct, &at, 2000);
            for w in 0..k {
                a[x * k + w] = out[w];
            }
        }
        res = pb.residual(k, a, b);
    }
    res
}

/// Dykstra for a single probability vector `v` with `M v = c`.
fn dykstra_right_vector(
    m: &DMatrix<f64>,
    c: &DMatrix<f64>,
    v0: &DMatrix<f64>,
    iters: usize,
) -> Vec<f64> {
    let pinv = m.clone().pseudo_inverse(1e-12).expect("pseudo-inverse");
    let mut x: Vec<f64> = v0.iter().copied().collect();
    let mut q = vec![0.0; x.len()];
    for _ in 0..iters {
        let xv = DMatrix::from_column_slice(x.len(), 1, &x);
        let y = &xv - &pinv * (m * &xv - c);
        let mut z: Vec<f64> = y.iter().zip(&q).map(|(a, b)| a + b).collect();
        project_simplex(&mut z);
        let moved = z
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        for i in 0..q.len() {
            q[i] = y[i] + q[i] - z[i];
        }
        x = z;
        if moved < 1e-15 {
            break;
        }
    }
    x
}

fn make_candidate(
    p_xyz: &JointPmf<f64>,
    pb: &Problem,
    k: usize,
    lambda: f64,
    a: &[f64],
    b: &[f64],
    tol: f64,
) -> Option<Candidate> {
    if pb.residual(k, a, b) > tol {
        return None;
    }
    let rows = |v: &[f64], w: usize| v.chunks(w).map(|c| c.to_vec()).collect::<Vec<_>>();
    let aux =
        AuxChannelPtp::for_target(p_xyz, Alphabet::range(k).ok()?, rows(a, k), rows(b, pb.ny))
            .ok()?;
    let rates = ptp_rates_for(p_xyz, &aux, tol).ok()?;
    let objective = (1.0 - lambda) * rates.r_min + lambda * rates.r_plus_c_min;
    Some(Candidate {
        objective,
        rates,
        aux,
    })
}

/// Closed-form candidates: `W = X`, constant `W`, and `W` carrying `Y`.
fn structured(pb: &Problem, cap: usize) -> Vec<(usize, Vec<f64>, Vec<f64>)> {
    let (nx, ny, nz) = (pb.nx, pb.ny, pb.nz);
    let mut out = Vec::new();
    if nx <= cap {
        let k = nx;
        let a: Vec<f64> = (0..nx * k)
            .map(|i| if i / k == i % k { 1.0 } else { 0.0 })
            .collect();
        let mut b = vec![0.0; nz * k * ny];
        for z in 0..nz {
            for w in 0..k {
                let row = &mut b[(z * k + w) * ny..(z * k + w + 1) * ny];
                if pb.supported(w, z) {
                    row.copy_from_slice(&pb.target[(w * nz + z) * ny..(w * nz + z + 1) * ny]);
                } else {
                    row.iter_mut().for_each(|v| *v = 1.0 / ny as f64);
                }
            }
        }
        out.push((k, a, b));
    }
    {
        let a = vec![1.0; nx];
        let mut b = vec![0.0; nz * ny];
        for z in 0..nz {
            let mass: f64 = (0..nx).map(|x| pb.pxz[x * nz + z]).sum();
            for y in 0..ny {
                b[z * ny + y] = if mass > 0.0 {
                    (0..nx)
                        .map(|x| pb.pxz[x * nz + z] * pb.target[(x * nz + z) * ny + y])
                        .sum::<f64>()
                        / mass
                } else {
                    1.0 / ny as f64
                };
            }
        }
        out.push((1, a, b));
    }
    if ny <= cap {
        let k = ny;
        let mut a = vec![0.0; nx * k];
        for x in 0..nx {
            let mass: f64 = (0..nz).map(|z| pb.pxz[x * nz + z]).sum();
            for w in 0..k {
                a[x * k + w] = if mass > 0.0 {
                    (0..nz)
                        .map(|z| pb.pxz[x * nz + z] * pb.target[(x * nz + z) * ny + w])
                        .sum::<f64>()
                        / mass
                } else {
                    1.0 / k as f64
                };
            }
        }
        let b: Vec<f64> = (0..nz * k * ny)
            .map(|i| if (i / ny) % k == i % ny { 1.0 } else { 0.0 })
            .collect();
        out.push((k, a, b));
    }
    out
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    let (ar, ac) = a.rates.corner();
    let (br, bc) = b.rates.corner();
    (a.objective, ar, ac) < (b.objective, br, bc)
}

fn solve_lambda(
    p_xyz: &JointPmf<f64>,
    pb: &Problem,
    cfg: &SearchConfig,
    li: usize,
    lambda: f64,
    cap: usize,
) -> LambdaResult {
    let mut best: Option<Candidate> = None;
    let mut offer = |c: Option<Candidate>| {
        if let Some(c) = c {
            if best.as_ref().map_or(true, |b| better(&c, b)) {
                best = Some(c);
            }
        }
    };
    for (k, a, b) in structured(pb, cap) {
        offer(make_candidate(p_xyz, pb, k, lambda, &a, &b, cfg.tol));
    }
    for k in 1..=cap {
        for r in 0..cfg.restarts {
            let seed = rng::derive_seed(cfg.seed, &[li as u64, k as u64, r as u64]);
            let mut g = rng::stream(seed, 0);
            let n = pb.nx * k + pb.nz * k * pb.ny;
            let mut theta: Vec<f64> = (0..n).map(|_| g.gen_range(-2.0..2.0)).collect();
            for &rho in &cfg.penalties {
                descend(pb, k, lambda, rho, &mut theta, cfg.iterations);
            }
            let na = pb.nx * k;
            let mut a = softmax_rows(&theta[..na], k);
            let mut b = softmax_rows(&theta[na..], pb.ny);
            repair(pb, k, &mut a, &mut b, cfg.tol);
            offer(make_candidate(p_xyz, pb, k, lambda, &a, &b, cfg.tol));
        }
    }
    LambdaResult { lambda, best }
}

/// Remove dominated points; among identical points keep the smallest λ.
pub fn pareto_prune(mut pts: Vec<FrontierPoint>) -> Vec<FrontierPoint> {
    pts.sort_by(|a, b| {
        (a.r, a.c, a.lambda)
            .partial_cmp(&(b.r, b.c, b.lambda))
            .expect("finite frontier coordinates")
    });
    let mut out: Vec<FrontierPoint> = Vec::new();
    for p in pts {
        // sorted by R ascending, so p is dominated iff some kept point has C ≤ p.C
        if out.iter().any(|q| q.c <= p.c) {
            continue;
        }
        out.push(p);
    }
    out
}

/// Trace the point-to-point frontier.
pub fn ptp_frontier(p_xyz: &JointPmf<f64>, cfg: &SearchConfig) -> Result<Frontier> {
    let t = canonical_target(p_xyz)?;
    let pb = Problem::new(&t)?;
    let cap = cfg.effective_w_cap(pb.nx, pb.ny, pb.nz);
    let lambdas = cfg.lambda_grid();
    let per_lambda: Vec<LambdaResult> = lambdas
        .par_iter()
        .enumerate()
        .map(|(li, &l)| solve_lambda(&t, &pb, cfg, li, l, cap))
        .collect();
    let pts = per_lambda
        .iter()
        .enumerate()
        .filter_map(|(i, lr)| {
            lr.best.as_ref().map(|c| {
                let (r, cc) = c.rates.corner();
                FrontierPoint {
                    lambda: lr.lambda,
                    r,
                    c: cc,
                    aux_id: i,
                }
            })
        })
        .collect();
    Ok(Frontier {
        per_lambda,
        points: pareto_prune(pts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Axis;

    fn ax(name: &str, k: usize) -> Axis {
        Axis::new(name, Alphabet::range(k).unwrap())
    }

    fn dsbs(p: f64) -> JointPmf<f64> {
        JointPmf::from_fn(vec![ax("X", 2), ax("Y", 2), ax("Z", 1)], |i| {
            0.5 * if i[0] == i[1] { 1.0 - p } else { p }
        })
        .unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let t = JointPmf::<f64>::from_fn(vec![ax("X", 2), ax("Y", 2), ax("Z", 2)], |i| {
            [0.1, 0.15, 0.2, 0.05, 0.12, 0.08, 0.18, 0.12][i[0] * 4 + i[1] * 2 + i[2]]
        })
        .unwrap();
        let pb = Problem::new(&t).unwrap();
        let k = 3;
        let mut g = rng::stream(11, 0);
        let n = pb.nx * k + pb.nz * k * pb.ny;
        let theta: Vec<f64> = (0..n).map(|_| g.gen_range(-1.0..1.0)).collect();
        for (lambda, rho) in [(0.0, 0.0), (0.3, 10.0), (1.0, 100.0)] {
            let (_, an) = objective_and_grad(&pb, k, lambda, rho, &theta);
            let num = numerical_grad(&pb, k, lambda, rho, &theta);
            for (x, y) in an.iter().zip(&num) {
                assert!((x - y).abs() < 1e-6 * (1.0 + y.abs()), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn simplex_projection() {
        let mut v = vec![0.5, 0.8, -0.2];
        project_simplex(&mut v);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((v[0] - 0.35).abs() < 1e-12 && (v[1] - 0.65).abs() < 1e-12 && v[2] == 0.0);
    }

    #[test]
    fn pareto_pruning() {
        let p = |lambda, r, c| FrontierPoint {
            lambda,
            r,
            c,
            aux_id: 0,
        };
        let out = pareto_prune(vec![
            p(0.0, 1.0, 0.0),
            p(0.5, 0.5, 0.5),
            p(0.7, 0.5, 0.5),
            p(1.0, 0.6, 0.6),
        ]);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].lambda, 0.5);
        assert_eq!(out[1].r, 1.0);
    }

    #[test]
    fn independent_y_given_z_has_origin_point() {
        let t = JointPmf::<f64>::from_fn(vec![ax("X", 2), ax("Y", 2), ax("Z", 2)], |i| {
            if i[1] == i[2] {
                0.25
            } else {
                0.0
            }
        })
        .unwrap();
        let cfg = SearchConfig {
            lambdas: 3,
            restarts: 1,
            iterations: 50,
            ..Default::default()
        };
        let f = ptp_frontier(&t, &cfg).unwrap();
        assert!(f.points.iter().any(|p| p.r == 0.0 && p.c == 0.0));
    }

    #[test]
    fn deterministic_and_monotone_in_cap() {
        let t = dsbs(0.1);
        let small = SearchConfig {
            w_cap: Some(1),
            lambdas: 5,
            restarts: 2,
            iterations: 100,
            seed: 4,
            ..Default::default()
        };
        let large = SearchConfig {
            w_cap: Some(2),
            ..small.clone()
        };
        let a = ptp_frontier(&t, &large).unwrap();
        let b = ptp_frontier(&t, &large).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        let s = ptp_frontier(&t, &small).unwrap();
        for (x, y) in a.per_lambda.iter().zip(&s.per_lambda) {
            if let (Some(x), Some(y)) = (&x.best, &y.best) {
                assert!(x.objective <= y.objective + 1e-12);
            }
        }
    }

    #[test]
    fn wyner_point_on_dsbs() {
        // λ = 1 minimizes I(XY;W): Wyner's common information
        // 1 + h(p) − 2 h(a) with a = (1 − sqrt(1 − 2p)) / 2
        let p = 0.1f64;
        let h = |q: f64| -q * q.log2() - (1.0 - q) * (1.0 - q).log2();
        let a0 = (1.0 - (1.0 - 2.0 * p).sqrt()) / 2.0;
        let wyner = 1.0 + h(p) - 2.0 * h(a0);
        let cfg = SearchConfig {
            w_cap: Some(2),
            lambdas: 2,
            restarts: 4,
            seed: 1,
            ..Default::default()
        };
        let f = ptp_frontier(&dsbs(p), &cfg).unwrap();
        let best = f.per_lambda[1].best.as_ref().unwrap();
        assert!(
            (best.objective - wyner).abs() < 5e-3,
            "{} vs {wyner}",
            best.objective
        );
    }
}
