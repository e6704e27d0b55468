//! Oracles shared by the integration tests. Nothing here calls the library's
//! information-measure or induced-distribution code; quantities are
//! recomputed from raw tables.

#![allow(dead_code)]

use corrsynth::codec::{DistCodec, PtpCodec};
use corrsynth::prob::{Alphabet, Axis, JointPmf};
use corrsynth::region::dist::{AuxChannelDist, DistLimits};
use corrsynth::region::ptp::AuxChannelPtp;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum()
}

/// Marginal of a dense table with the given shape onto `keep` (axis indices).
pub fn marginal(table: &[f64], shape: &[usize], keep: &[usize]) -> Vec<f64> {
    let out_shape: Vec<usize> = keep.iter().map(|&k| shape[k]).collect();
    let mut out = vec![0.0; out_shape.iter().product()];
    let mut idx = vec![0; shape.len()];
    for &v in table {
        let mut o = 0;
        for (j, &k) in keep.iter().enumerate() {
            o = o * out_shape[j] + idx[k];
        }
        out[o] += v;
        for d in (0..shape.len()).rev() {
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

/// `I(A;B)` with `a`, `b` disjoint axis sets of the dense table.
pub fn mutual_info(table: &[f64], shape: &[usize], a: &[usize], b: &[usize]) -> f64 {
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    entropy(&marginal(table, shape, a)) + entropy(&marginal(table, shape, b))
        - entropy(&marginal(table, shape, &ab))
}

pub fn bit(name: &str) -> Axis {
    Axis::new(name, Alphabet::range(2).unwrap())
}

pub fn unit(name: &str) -> Axis {
    Axis::new(name, Alphabet::range(1).unwrap())
}

pub fn random_row(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

/// Identity, swap, or a random row pair.
pub fn random_binary_channel(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    match rng.gen_range(0..3) {
        0 => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        1 => vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        _ => vec![random_row(rng, 2), random_row(rng, 2)],
    }
}

/// Dense `(W, X, Y, Z)` table of `p(x,z) p(w|x) p(y|z,w)`.
pub fn ptp_wxyz(
    pxz: &[Vec<f64>],
    wx: &[Vec<f64>],
    yzw: &[Vec<f64>],
    ny: usize,
) -> (Vec<f64>, [usize; 4]) {
    let (nx, nz, nw) = (pxz.len(), pxz[0].len(), wx[0].len());
    let mut t = Vec::with_capacity(nw * nx * ny * nz);
    for w in 0..nw {
        for x in 0..nx {
            for y in 0..ny {
                for z in 0..nz {
                    t.push(pxz[x][z] * wx[x][w] * yzw[z * nw + w][y]);
                }
            }
        }
    }
    (t, [nw, nx, ny, nz])
}

/// A consistent point-to-point instance with binary alphabets (`|Z|` 1 or 2).
pub struct PtpInstance {
    pub target: JointPmf<f64>,
    pub aux: AuxChannelPtp<f64>,
    pub pxz: Vec<Vec<f64>>,
}

pub fn random_ptp_instance(rng: &mut ChaCha8Rng, nz: usize) -> PtpInstance {
    let px0 = rng.gen_range(0.35..0.65);
    let pxz: Vec<Vec<f64>> = [px0, 1.0 - px0]
        .iter()
        .map(|&p| random_row(rng, nz).into_iter().map(|v| p * v).collect())
        .collect();
    let wx = random_binary_channel(rng);
    let yzw: Vec<Vec<f64>> = (0..nz * 2).map(|_| random_row(rng, 2)).collect();
    let (t, shape) = ptp_wxyz(&pxz, &wx, &yzw, 2);
    let xyz = marginal(&t, &shape, &[1, 2, 3]);
    let z_axis = if nz == 1 { unit("Z") } else { bit("Z") };
    let target = JointPmf::new(vec![bit("X"), bit("Y"), z_axis], xyz).unwrap();
    let aux = AuxChannelPtp::for_target(&target, Alphabet::range(2).unwrap(), wx, yzw).unwrap();
    PtpInstance { target, aux, pxz }
}

pub struct DistInstance {
    pub target: JointPmf<f64>,
    pub aux: AuxChannelDist<f64>,
}

/// Distributed instance over `(X1, X2, Y)` with `|Q| = 1`; `nx2`, `nw2` may be 1.
pub fn dist_instance(
    px: &[Vec<f64>],
    w1x1: Vec<Vec<f64>>,
    w2x2: Vec<Vec<f64>>,
    yw: Vec<Vec<f64>>,
) -> DistInstance {
    let (n1, n2) = (px.len(), px[0].len());
    let nw1 = w1x1[0].len();
    let nw2 = w2x2[0].len();
    let mut t = vec![0.0; n1 * n2 * 2];
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            for w1 in 0..nw1 {
                for w2 in 0..nw2 {
                    for y in 0..2 {
                        t[(x1 * n2 + x2) * 2 + y] +=
                            px[x1][x2] * w1x1[x1][w1] * w2x2[x2][w2] * yw[w1 * nw2 + w2][y];
                    }
                }
            }
        }
    }
    let axis = |name: &str, k: usize| Axis::new(name, Alphabet::range(k).unwrap());
    let target = JointPmf::new(vec![axis("X1", n1), axis("X2", n2), bit("Y")], t).unwrap();
    let aux = AuxChannelDist::new(
        &target,
        Alphabet::range(1).unwrap(),
        vec![1.0],
        Alphabet::range(nw1).unwrap(),
        Alphabet::range(nw2).unwrap(),
        w1x1,
        w2x2,
        yw,
        DistLimits {
            w_within_x: false,
            q_cap: 4,
        },
    )
    .unwrap();
    DistInstance { target, aux }
}

pub fn random_dist_instance(rng: &mut ChaCha8Rng) -> DistInstance {
    let px: Vec<Vec<f64>> = match rng.gen_range(0..2) {
        0 => {
            let a = rng.gen_range(0.35..0.65);
            vec![vec![a, 0.0], vec![0.0, 1.0 - a]]
        }
        _ => {
            let r = random_row(rng, 4);
            vec![r[..2].to_vec(), r[2..].to_vec()]
        }
    };
    let w1 = random_binary_channel(rng);
    let w2 = random_binary_channel(rng);
    let yw: Vec<Vec<f64>> = (0..4).map(|_| random_row(rng, 2)).collect();
    dist_instance(&px, w1, w2, yw)
}

/// Big-endian index of a sequence over an alphabet of size `k`.
pub fn seq_index(s: &[usize], k: usize) -> usize {
    s.iter().fold(0, |a, &v| a * k + v)
}

fn draw(p: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &v) in p.iter().enumerate() {
        acc += v.max(0.0);
        if u < acc {
            return i;
        }
    }
    p.iter().rposition(|&v| v > 0.0).unwrap_or(0)
}

/// Empirical frequencies of `(X^n, Y^n, Z^n)` from end-to-end simulation,
/// using only the encoder weights, bin map and decoder of the codec.
pub fn sampled_ptp(
    codec: &PtpCodec,
    pxz: &[Vec<f64>],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let n = codec.params().n;
    let (nx, nz, ny) = (pxz.len(), pxz[0].len(), 2usize);
    let flat: Vec<f64> = pxz.concat();
    let (cy, cz) = (ny.pow(n as u32), nz.pow(n as u32));
    let mut counts = vec![0usize; nx.pow(n as u32) * cy * cz];
    let k = codec.sizes().k;
    for _ in 0..samples {
        let (mut x, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let c = draw(&flat, rng);
            x.push(c / nz);
            z.push(c % nz);
        }
        let mu = rng.gen_range(0..k);
        let e = codec.encoder_subpmf(&x, mu).unwrap();
        let m = if e.valid {
            match draw(&e.weights, rng) {
                0 => 0,
                l => codec.message_of(mu, l - 1),
            }
        } else {
            0
        };
        let w = codec.decode(&z, m, mu).unwrap();
        let y: Vec<usize> = z
            .iter()
            .zip(&w)
            .map(|(&zi, &wi)| {
                let row: Vec<f64> = (0..ny)
                    .map(|yy| codec.aux().y_given_zw(zi, wi, yy))
                    .collect();
                draw(&row, rng)
            })
            .collect();
        counts[(seq_index(&x, nx) * cy + seq_index(&y, ny)) * cz + seq_index(&z, nz)] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / samples as f64)
        .collect()
}

/// Empirical frequencies of `(X1^n, X2^n, Y^n)`.
pub fn sampled_dist(
    codec: &DistCodec,
    px: &[Vec<f64>],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let n = codec.params().n;
    let (n1, n2, ny) = (px.len(), px[0].len(), 2usize);
    let flat: Vec<f64> = px.concat();
    let (c2, cy) = (n2.pow(n as u32), ny.pow(n as u32));
    let mut counts = vec![0usize; n1.pow(n as u32) * c2 * cy];
    let k = codec.randomness();
    for _ in 0..samples {
        let (mut x1, mut x2) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let c = draw(&flat, rng);
            x1.push(c / n2);
            x2.push(c % n2);
        }
        let mu = rng.gen_range(0..k);
        let (mu1, mu2) = codec.split(mu);
        let mut msg = [0usize; 2];
        for (j, (x, mu_j)) in [(&x1, mu1), (&x2, mu2)].into_iter().enumerate() {
            let e = codec.encoder_subpmf(j + 1, x, mu_j).unwrap();
            msg[j] = if e.valid {
                match draw(&e.weights, rng) {
                    0 => 0,
                    l => codec.bin(j + 1, mu_j, l - 1),
                }
            } else {
                0
            };
        }
        let (w1, w2) = codec.decode(msg[0], msg[1], mu).unwrap();
        let y: Vec<usize> = w1
            .iter()
            .zip(&w2)
            .map(|(&a, &b)| {
                let row: Vec<f64> = (0..ny).map(|yy| codec.aux().y_given(0, a, b, yy)).collect();
                draw(&row, rng)
            })
            .collect();
        counts[(seq_index(&x1, n1) * c2 + seq_index(&x2, n2)) * cy + seq_index(&y, ny)] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / samples as f64)
        .collect()
}

pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// `p^n` of a single-letter law over an alphabet of size `k`, in big-endian order.
pub fn power_law(p: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|&a| p.iter().map(move |&b| a * b))
            .collect();
    }
    out
}

/// Binary-X, binary-Y, `|Z| = 1` rate pairs over the `|W| = 2` grid with step
/// `1/steps` on `p(W=1|x)`; `p(y|w)` is solved exactly from consistency.
/// Returns `(I(X;W), I(XY;W))` of every consistent grid point.
pub fn wyner_grid(pxy: [[f64; 2]; 2], steps: usize) -> Vec<(f64, f64)> {
    let px = [pxy[0][0] + pxy[0][1], pxy[1][0] + pxy[1][1]];
    let t = [pxy[0][1] / px[0], pxy[1][1] / px[1]];
    let mut out = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let (a0, a1) = (i as f64 / steps as f64, j as f64 / steps as f64);
            // (1−a_x) b0 + a_x b1 = t_x
            let det = (1.0 - a0) * a1 - a0 * (1.0 - a1);
            if det.abs() < 1e-12 {
                continue;
            }
            let b0 = (t[0] * a1 - a0 * t[1]) / det;
            let b1 = ((1.0 - a0) * t[1] - (1.0 - a1) * t[0]) / det;
            if !(-1e-12..=1.0 + 1e-12).contains(&b0) || !(-1e-12..=1.0 + 1e-12).contains(&b1) {
                continue;
            }
            let (b0, b1) = (b0.clamp(0.0, 1.0), b1.clamp(0.0, 1.0));
            let a = [a0, a1];
            let b = [b0, b1];
            // (X, W, Y)
            let mut tab = Vec::with_capacity(8);
            for x in 0..2 {
                for w in 0..2 {
                    let pw = if w == 1 { a[x] } else { 1.0 - a[x] };
                    for y in 0..2 {
                        let py = if y == 1 { b[w] } else { 1.0 - b[w] };
                        tab.push(px[x] * pw * py);
                    }
                }
            }
            let shape = [2, 2, 2];
            out.push((
                mutual_info(&tab, &shape, &[0], &[1]),
                mutual_info(&tab, &shape, &[0, 2], &[1]),
            ));
        }
    }
    out
}

/// Reference instance information constants recomputed from raw tables:
/// `(I(X;W), I(W;Z), I(XYZ;W), H(X,W))`.
pub fn reference_constants() -> (f64, f64, f64, f64) {
    let bsc = |a: usize, b: usize, p: f64| if a == b { 1.0 - p } else { p };
    let mut tab = Vec::new();
    for w in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    tab.push(0.5 * bsc(w, x, 0.1) * bsc(x, z, 0.2) * bsc(w, y, 0.1));
                }
            }
        }
    }
    let s = [2, 2, 2, 2];
    (
        mutual_info(&tab, &s, &[1], &[0]),
        mutual_info(&tab, &s, &[0], &[3]),
        mutual_info(&tab, &s, &[1, 2, 3], &[0]),
        entropy(&marginal(&tab, &s, &[0, 1])),
    )
}
