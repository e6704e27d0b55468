//! Distributed synthesis with two encoders and a time-sharing variable.
//!
//! The target `p_{X1X2Y}` has axes `X1`, `X2`, `Y`. The auxiliary structure is
//! `p(q) p(w1|q,x1) p(w2|q,x2) p(y|q,w1,w2)` with `Q` independent of the
//! sources; the induced joint has axes `(Q, X1, X2, W1, W2, Y)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Alphabet, Axis, CondPmf, JointPmf};
use crate::scalar::Real;

/// Default cap on the time-sharing alphabet.
pub const DEFAULT_Q_CAP: usize = 4;

/// Cardinality limits enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistLimits {
    /// Require `|W_j| ≤ |X_j|`.
    pub w_within_x: bool,
    pub q_cap: usize,
}

impl Default for DistLimits {
    fn default() -> Self {
        DistLimits {
            w_within_x: true,
            q_cap: DEFAULT_Q_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxChannelDist<S> {
    q_alphabet: Alphabet,
    p_q: Vec<S>,
    p_w1_given_qx1: CondPmf<S>,
    p_w2_given_qx2: CondPmf<S>,
    p_y_given_qw1w2: CondPmf<S>,
}

impl<S: Real> AuxChannelDist<S> {
    /// Row layouts: `w1_given_qx1[q * |X1| + x1][w1]`,
    /// `w2_given_qx2[q * |X2| + x2][w2]`,
    /// `y_given_qw1w2[(q * |W1| + w1) * |W2| + w2][y]`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_x1x2y: &JointPmf<S>,
        q_alphabet: Alphabet,
        p_q: Vec<S>,
        w1_alphabet: Alphabet,
        w2_alphabet: Alphabet,
        w1_given_qx1: Vec<Vec<S>>,
        w2_given_qx2: Vec<Vec<S>>,
        y_given_qw1w2: Vec<Vec<S>>,
        limits: DistLimits,
    ) -> Result<Self> {
        let x1 = p_x1x2y.axis("X1")?.clone();
        let x2 = p_x1x2y.axis("X2")?.clone();
        let y = p_x1x2y.axis("Y")?.clone();
        if q_alphabet.size() > limits.q_cap {
            return Err(Error::InvalidParameter(format!(
                "|Q| = {} exceeds the cap {}",
                q_alphabet.size(),
                limits.q_cap
            )));
        }
        if limits.w_within_x && (w1_alphabet.size() > x1.size() || w2_alphabet.size() > x2.size()) {
            return Err(Error::InvalidParameter(format!(
                "|W1| = {}, |W2| = {} exceed |X1| = {}, |X2| = {}",
                w1_alphabet.size(),
                w2_alphabet.size(),
                x1.size(),
                x2.size()
            )));
        }
        let q = Axis::new("Q", q_alphabet.clone());
        let w1 = Axis::new("W1", w1_alphabet);
        let w2 = Axis::new("W2", w2_alphabet);
        let pq = JointPmf::new(vec![q.clone()], p_q)?;
        let some = |v: Vec<Vec<S>>| v.into_iter().map(Some).collect();
        Ok(AuxChannelDist {
            q_alphabet,
            p_q: pq.table().to_vec(),
            p_w1_given_qx1: CondPmf::new(
                vec![q.clone(), x1],
                vec![w1.clone()],
                some(w1_given_qx1),
            )?,
            p_w2_given_qx2: CondPmf::new(
                vec![q.clone(), x2],
                vec![w2.clone()],
                some(w2_given_qx2),
            )?,
            p_y_given_qw1w2: CondPmf::new(vec![q, w1, w2], vec![y], some(y_given_qw1w2))?,
        })
    }

    pub fn q_size(&self) -> usize {
        self.q_alphabet.size()
    }

    pub fn w1_axis(&self) -> &Axis {
        &self.p_w1_given_qx1.out_axes()[0]
    }

    pub fn w2_axis(&self) -> &Axis {
        &self.p_w2_given_qx2.out_axes()[0]
    }

    pub fn p_q(&self) -> &[S] {
        &self.p_q
    }

    pub fn q_alphabet(&self) -> &Alphabet {
        &self.q_alphabet
    }

    pub fn p_w1_given_qx1(&self) -> &CondPmf<S> {
        &self.p_w1_given_qx1
    }

    pub fn p_w2_given_qx2(&self) -> &CondPmf<S> {
        &self.p_w2_given_qx2
    }

    pub fn p_y_given_qw1w2(&self) -> &CondPmf<S> {
        &self.p_y_given_qw1w2
    }

    pub fn w1_given(&self, q: usize, x1: usize, w1: usize) -> S {
        let nx = self.p_w1_given_qx1.given_axes()[1].size();
        self.p_w1_given_qx1.get(q * nx + x1, w1)
    }

    pub fn w2_given(&self, q: usize, x2: usize, w2: usize) -> S {
        let nx = self.p_w2_given_qx2.given_axes()[1].size();
        self.p_w2_given_qx2.get(q * nx + x2, w2)
    }

    pub fn y_given(&self, q: usize, w1: usize, w2: usize, y: usize) -> S {
        let (n1, n2) = (self.w1_axis().size(), self.w2_axis().size());
        self.p_y_given_qw1w2.get((q * n1 + w1) * n2 + w2, y)
    }

    fn check_axes(&self, t: &JointPmf<S>) -> Result<()> {
        let ok = self.p_w1_given_qx1.given_axes()[1] == *t.axis("X1")?
            && self.p_w2_given_qx2.given_axes()[1] == *t.axis("X2")?
            && self.p_y_given_qw1w2.out_axes()[0] == *t.axis("Y")?;
        if ok {
            Ok(())
        } else {
            Err(Error::AxisMismatch(
                "auxiliary channel alphabets do not match the target".into(),
            ))
        }
    }

    /// Induced joint over `(Q, X1, X2, W1, W2, Y)`.
    pub fn induced_joint(&self, p_x1x2y: &JointPmf<S>) -> Result<JointPmf<S>> {
        self.check_axes(p_x1x2y)?;
        let px = p_x1x2y.marginalize(&["X1", "X2"])?;
        let axes = vec![
            Axis::new("Q", self.q_alphabet.clone()),
            p_x1x2y.axis("X1")?.clone(),
            p_x1x2y.axis("X2")?.clone(),
            self.w1_axis().clone(),
            self.w2_axis().clone(),
            p_x1x2y.axis("Y")?.clone(),
        ];
        JointPmf::from_fn(axes, |i| {
            let (q, x1, x2, w1, w2, y) = (i[0], i[1], i[2], i[3], i[4], i[5]);
            let m = px.prob(&[x1, x2]);
            if m == S::zero() {
                return S::zero();
            }
            self.p_q[q]
                * m
                * self.w1_given(q, x1, w1)
                * self.w2_given(q, x2, w2)
                * self.y_given(q, w1, w2, y)
        })
    }

    /// `max |Σ_{q,w1,w2} p(q)p(w1|q,x1)p(w2|q,x2)p(y|q,w1,w2) − p(y|x1,x2)|`.
    pub fn residual(&self, p_x1x2y: &JointPmf<S>) -> Result<f64> {
        self.check_axes(p_x1x2y)?;
        let t = p_x1x2y.reorder(&["X1", "X2", "Y"])?;
        let cond = t.condition(&["X1", "X2"])?;
        let (n1, n2, ny) = (t.axes()[0].size(), t.axes()[1].size(), t.axes()[2].size());
        let (k1, k2) = (self.w1_axis().size(), self.w2_axis().size());
        let mut worst = 0.0f64;
        for x1 in 0..n1 {
            for x2 in 0..n2 {
                let g = x1 * n2 + x2;
                if !cond.is_defined(g) {
                    continue;
                }
                for y in 0..ny {
                    let mut mix = S::zero();
                    for q in 0..self.q_size() {
                        for w1 in 0..k1 {
                            for w2 in 0..k2 {
                                mix = mix
                                    + self.p_q[q]
                                        * self.w1_given(q, x1, w1)
                                        * self.w2_given(q, x2, w2)
                                        * self.y_given(q, w1, w2, y);
                            }
                        }
                    }
                    worst = worst.max((mix - cond.get(g, y)).abs().as_f64());
                }
            }
        }
        Ok(worst)
    }
}

/// The four lower bounds together with the information terms they use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistRateTriple {
    pub r1: f64,
    pub r2: f64,
    pub r1_plus_r2: f64,
    pub r1_plus_r2_plus_c: f64,
    /// `I(X1;W1|Q)`
    pub a1: f64,
    /// `I(X2;W2|Q)`
    pub a2: f64,
    /// `I(W1;W2|Q)`
    pub b: f64,
    /// `I(X1X2W2Y;W1|Q)`
    pub d1: f64,
    /// `I(X1X2Y;W2|Q)`
    pub d2: f64,
    pub residual: f64,
}

pub fn dist_rates_for<S: Real>(
    p_x1x2y: &JointPmf<S>,
    aux: &AuxChannelDist<S>,
    tol: f64,
) -> Result<DistRateTriple> {
    let residual = aux.residual(p_x1x2y)?;
    if residual > tol {
        return Err(Error::InconsistentAux { residual, tol });
    }
    let j = aux.induced_joint(p_x1x2y)?;
    let cmi = |a: &[&str], b: &[&str]| -> Result<f64> {
        Ok(j.conditional_mutual_information(a, b, &["Q"])?.as_f64())
    };
    let a1 = cmi(&["X1"], &["W1"])?;
    let a2 = cmi(&["X2"], &["W2"])?;
    let b = cmi(&["W1"], &["W2"])?;
    let d1 = cmi(&["X1", "X2", "W2", "Y"], &["W1"])?;
    let d2 = cmi(&["X1", "X2", "Y"], &["W2"])?;
    Ok(DistRateTriple {
        r1: (a1 - b).max(0.0),
        r2: (a2 - b).max(0.0),
        r1_plus_r2: (a1 + a2 - b).max(0.0),
        r1_plus_r2_plus_c: (d1 + d2 - b).max(0.0),
        a1,
        a2,
        b,
        d1,
        d2,
        residual,
    })
}

pub fn dist_membership<S: Real>(
    p_x1x2y: &JointPmf<S>,
    r1: f64,
    r2: f64,
    c: f64,
    aux: &AuxChannelDist<S>,
    tol: f64,
) -> Result<bool> {
    let t = dist_rates_for(p_x1x2y, aux, tol)?;
    Ok(r1 >= t.r1 && r2 >= t.r2 && r1 + r2 >= t.r1_plus_r2 && r1 + r2 + c >= t.r1_plus_r2_plus_c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ax(name: &str, k: usize) -> Axis {
        Axis::new(name, Alphabet::range(k).unwrap())
    }

    #[test]
    fn common_source_copied() {
        // X1 = X2 = Y uniform, W1 = W2 = X1
        let t = JointPmf::<f64>::from_fn(vec![ax("X1", 2), ax("X2", 2), ax("Y", 2)], |i| {
            if i[0] == i[1] && i[1] == i[2] {
                0.5
            } else {
                0.0
            }
        })
        .unwrap();
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let y: Vec<Vec<f64>> = (0..4)
            .map(|k| {
                if k / 2 == 0 {
                    vec![1.0, 0.0]
                } else {
                    vec![0.0, 1.0]
                }
            })
            .collect();
        let aux = AuxChannelDist::new(
            &t,
            Alphabet::range(1).unwrap(),
            vec![1.0],
            Alphabet::range(2).unwrap(),
            Alphabet::range(2).unwrap(),
            id.clone(),
            id,
            y,
            DistLimits::default(),
        )
        .unwrap();
        let r = dist_rates_for(&t, &aux, 1e-9).unwrap();
        // every information term equals H(X1) = 1
        for v in [r.a1, r.a2, r.b, r.d1, r.d2] {
            assert!((v - 1.0).abs() < 1e-12, "{r:?}");
        }
        assert!(r.r1.abs() < 1e-12 && r.r2.abs() < 1e-12);
        assert!((r.r1_plus_r2 - 1.0).abs() < 1e-12);
        assert!((r.r1_plus_r2_plus_c - 1.0).abs() < 1e-12);
        assert!(dist_membership(&t, r.r1, r.r2 + 1.0, 0.0, &aux, 1e-9).unwrap());
        assert!(!dist_membership(&t, 0.5, 0.49, 0.0, &aux, 1e-9).unwrap());
    }

    #[test]
    fn cardinality_limits() {
        let t = JointPmf::<f64>::uniform(vec![ax("X1", 2), ax("X2", 2), ax("Y", 2)]).unwrap();
        let build = |limits| {
            AuxChannelDist::new(
                &t,
                Alphabet::range(1).unwrap(),
                vec![1.0],
                Alphabet::range(3).unwrap(),
                Alphabet::range(1).unwrap(),
                vec![vec![1.0 / 3.0; 3]; 2],
                vec![vec![1.0]; 2],
                vec![vec![0.5, 0.5]; 3],
                limits,
            )
        };
        assert!(build(DistLimits::default()).is_err());
        assert!(build(DistLimits {
            w_within_x: false,
            q_cap: 4
        })
        .is_ok());
    }
}
