//! Point-to-point synthesis with decoder side information.
//!
//! The target `p_XYZ` has axes named `X`, `Y`, `Z`. An auxiliary channel is
//! the pair `(p_{W|X}, p_{Y|ZW})`; the induced joint over `(W, X, Y, Z)` is
//! `p_XZ · p_{W|X} · p_{Y|ZW}`, so `Z − X − W` and `X − (Z,W) − Y` hold by
//! construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Alphabet, Axis, CondPmf, JointPmf};
use crate::scalar::Real;

/// Default bound on the consistency residual.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Target axes in canonical order.
pub fn canonical_target<S: Real>(p_xyz: &JointPmf<S>) -> Result<JointPmf<S>> {
    p_xyz.reorder(&["X", "Y", "Z"])
}

/// Auxiliary decomposition `(p_{W|X}, p_{Y|ZW})`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxChannelPtp<S> {
    w_alphabet: Alphabet,
    p_w_given_x: CondPmf<S>,
    p_y_given_zw: CondPmf<S>,
}

impl<S: Real> AuxChannelPtp<S> {
    /// `w_given_x[x][w]` and `y_given_zw[z * |W| + w][y]`.
    pub fn new(
        x: &Axis,
        y: &Axis,
        z: &Axis,
        w_alphabet: Alphabet,
        w_given_x: Vec<Vec<S>>,
        y_given_zw: Vec<Vec<S>>,
    ) -> Result<Self> {
        let w = Axis::new("W", w_alphabet.clone());
        let p_w_given_x = CondPmf::new(
            vec![x.clone()],
            vec![w.clone()],
            w_given_x.into_iter().map(Some).collect(),
        )?;
        let p_y_given_zw = CondPmf::new(
            vec![z.clone(), w],
            vec![y.clone()],
            y_given_zw.into_iter().map(Some).collect(),
        )?;
        Ok(AuxChannelPtp {
            w_alphabet,
            p_w_given_x,
            p_y_given_zw,
        })
    }

    /// Build directly from axes of a target table.
    pub fn for_target(
        p_xyz: &JointPmf<S>,
        w_alphabet: Alphabet,
        w_given_x: Vec<Vec<S>>,
        y_given_zw: Vec<Vec<S>>,
    ) -> Result<Self> {
        Self::new(
            p_xyz.axis("X")?,
            p_xyz.axis("Y")?,
            p_xyz.axis("Z")?,
            w_alphabet,
            w_given_x,
            y_given_zw,
        )
    }

    pub fn w_alphabet(&self) -> &Alphabet {
        &self.w_alphabet
    }

    pub fn w_size(&self) -> usize {
        self.w_alphabet.size()
    }

    pub fn p_w_given_x(&self) -> &CondPmf<S> {
        &self.p_w_given_x
    }

    pub fn p_y_given_zw(&self) -> &CondPmf<S> {
        &self.p_y_given_zw
    }

    /// `p(w|x)`.
    pub fn w_given_x(&self, x: usize, w: usize) -> S {
        self.p_w_given_x.get(x, w)
    }

    /// `p(y|z,w)`.
    pub fn y_given_zw(&self, z: usize, w: usize, y: usize) -> S {
        self.p_y_given_zw.get(z * self.w_size() + w, y)
    }

    fn check_axes(&self, t: &JointPmf<S>) -> Result<()> {
        let ok = self.p_w_given_x.given_axes()[0] == *t.axis("X")?
            && self.p_y_given_zw.given_axes()[0] == *t.axis("Z")?
            && self.p_y_given_zw.out_axes()[0] == *t.axis("Y")?;
        if ok {
            Ok(())
        } else {
            Err(Error::AxisMismatch(
                "auxiliary channel alphabets do not match the target".into(),
            ))
        }
    }

    /// Induced joint over axes `(W, X, Y, Z)`.
    pub fn induced_joint(&self, p_xyz: &JointPmf<S>) -> Result<JointPmf<S>> {
        self.check_axes(p_xyz)?;
        let pxz = p_xyz.marginalize(&["X", "Z"])?;
        let w = Axis::new("W", self.w_alphabet.clone());
        let axes = vec![
            w,
            p_xyz.axis("X")?.clone(),
            p_xyz.axis("Y")?.clone(),
            p_xyz.axis("Z")?.clone(),
        ];
        JointPmf::from_fn(axes, |i| {
            let (w, x, y, z) = (i[0], i[1], i[2], i[3]);
            let m = pxz.prob(&[x, z]);
            if m == S::zero() {
                S::zero()
            } else {
                m * self.w_given_x(x, w) * self.y_given_zw(z, w, y)
            }
        })
    }

    /// `max |Σ_w p(w|x) p(y|z,w) − p(y|x,z)|` over `(x, z)` with `p(x,z) > 0`.
    pub fn residual(&self, p_xyz: &JointPmf<S>) -> Result<f64> {
        self.check_axes(p_xyz)?;
        let t = canonical_target(p_xyz)?;
        let cond = t.condition(&["X", "Z"])?;
        let (nx, ny, nz) = (t.axes()[0].size(), t.axes()[1].size(), t.axes()[2].size());
        let mut worst = 0.0f64;
        for x in 0..nx {
            for z in 0..nz {
                let g = x * nz + z;
                if !cond.is_defined(g) {
                    continue;
                }
                for y in 0..ny {
                    let mix: S = (0..self.w_size())
                        .map(|w| self.w_given_x(x, w) * self.y_given_zw(z, w, y))
                        .sum();
                    worst = worst.max((mix - cond.get(g, y)).abs().as_f64());
                }
            }
        }
        Ok(worst)
    }
}

/// Lower bounds on `R` and `R + C` certified by one auxiliary channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtpRatePair {
    pub r_min: f64,
    pub r_plus_c_min: f64,
    pub i_xw: f64,
    pub i_wz: f64,
    pub i_xyzw: f64,
    pub residual: f64,
    /// Values before clamping at zero.
    pub raw_r_min: f64,
    pub raw_r_plus_c_min: f64,
}

impl PtpRatePair {
    /// Corner point `(R, C)` of the certified region.
    pub fn corner(&self) -> (f64, f64) {
        (self.r_min, (self.r_plus_c_min - self.r_min).max(0.0))
    }
}

/// Evaluate the two bounds on the induced joint.
pub fn ptp_rates_for<S: Real>(
    p_xyz: &JointPmf<S>,
    aux: &AuxChannelPtp<S>,
    tol: f64,
) -> Result<PtpRatePair> {
    let residual = aux.residual(p_xyz)?;
    if residual > tol {
        return Err(Error::InconsistentAux { residual, tol });
    }
    let joint = aux.induced_joint(p_xyz)?;
    let i_xw = joint.mutual_information(&["X"], &["W"])?.as_f64();
    let i_xyzw = joint.mutual_information(&["X", "Y", "Z"], &["W"])?.as_f64();
    let i_wz = if p_xyz.axis("Z")?.size() == 1 {
        0.0
    } else {
        joint.mutual_information(&["W"], &["Z"])?.as_f64()
    };
    let raw_r_min = i_xw - i_wz;
    let raw_r_plus_c_min = i_xyzw - i_wz;
    Ok(PtpRatePair {
        r_min: raw_r_min.max(0.0),
        r_plus_c_min: raw_r_plus_c_min.max(0.0),
        i_xw,
        i_wz,
        i_xyzw,
        residual,
        raw_r_min,
        raw_r_plus_c_min,
    })
}

/// `R ≥ r_min` and `R + C ≥ r_plus_c_min` for this auxiliary channel.
pub fn ptp_membership<S: Real>(
    p_xyz: &JointPmf<S>,
    r: f64,
    c: f64,
    aux: &AuxChannelPtp<S>,
    tol: f64,
) -> Result<bool> {
    let b = ptp_rates_for(p_xyz, aux, tol)?;
    Ok(r >= b.r_min && r + c >= b.r_plus_c_min)
}
