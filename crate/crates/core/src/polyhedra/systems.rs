//! Pre-elimination rate systems and their closed-form projections.
//!
//! Constant symbols (all mutual informations, in bits):
//! point-to-point `I_XW = I(X;W)`, `I_WZ = I(W;Z)`, `I_XYZW = I(XYZ;W)`;
//! distributed `I_X1W1 = I(X1;W1|Q)`, `I_X2W2 = I(X2;W2|Q)`,
//! `I_W1W2 = I(W1;W2|Q)`, `I_X1X2W2Y_W1 = I(X1X2W2Y;W1|Q)`,
//! `I_X1X2Y_W2 = I(X1X2Y;W2|Q)`. Symbols `s1..s5` are per-row slacks,
//! bound to zero by default.

use crate::error::Result;
use crate::scalar::Exact;

use super::lp::{Constraint, Sense};
use super::LinIneqSystem;

pub const PTP_CONSTANTS: [&str; 3] = ["I_XW", "I_WZ", "I_XYZW"];
pub const DIST_CONSTANTS: [&str; 5] = ["I_X1W1", "I_X2W2", "I_W1W2", "I_X1X2W2Y_W1", "I_X1X2Y_W2"];
const SLACKS: [&str; 5] = ["s1", "s2", "s3", "s4", "s5"];

/// Variables eliminated to obtain the point-to-point region.
pub const PTP_ELIMINATE: [&str; 1] = ["Rt"];
/// Variables eliminated to obtain the distributed region.
pub const DIST_ELIMINATE: [&str; 4] = ["Rt1", "Rt2", "C1", "C2"];

/// `{Rt ≥ I_XW, Rt − R ≤ I_WZ, Rt + C ≥ I_XYZW}` over `(R, C, Rt)`.
pub fn ptp_system<T: Exact>() -> Result<LinIneqSystem<T>> {
    let mut s = LinIneqSystem::new(["R", "C", "Rt"], PTP_CONSTANTS)?;
    s.add_ge(
        &[("Rt", 1)],
        &[("I_XW", 1)],
        T::zero(),
        "codebook covers the source",
    )?;
    s.add_le(
        &[("Rt", 1), ("R", -1)],
        &[("I_WZ", 1)],
        T::zero(),
        "binning resolvable with side information",
    )?;
    s.add_ge(
        &[("Rt", 1), ("C", 1)],
        &[("I_XYZW", 1)],
        T::zero(),
        "soft covering of the joint",
    )?;
    Ok(s)
}

/// The two closed-form point-to-point inequalities over `(R, C)`.
pub fn ptp_region<T: Exact>() -> Result<LinIneqSystem<T>> {
    let mut s = LinIneqSystem::new(["R", "C"], PTP_CONSTANTS)?;
    s.add_ge(&[("R", 1)], &[("I_XW", 1), ("I_WZ", -1)], T::zero(), "")?;
    s.add_ge(
        &[("R", 1), ("C", 1)],
        &[("I_XYZW", 1), ("I_WZ", -1)],
        T::zero(),
        "",
    )?;
    Ok(s)
}

/// Distributed system over `(R1, R2, C, Rt1, Rt2, C1, C2)`.
///
/// With `split_nonnegativity` the rows `C1 ≥ 0` and `C2 ≥ 0` are added; the
/// resulting projection is strictly smaller than the closed-form region
/// (see the `dist_region` tests).
pub fn dist_system<T: Exact>(split_nonnegativity: bool) -> Result<LinIneqSystem<T>> {
    let mut consts: Vec<&str> = DIST_CONSTANTS.to_vec();
    consts.extend(SLACKS);
    let mut s = LinIneqSystem::new(["R1", "R2", "C", "Rt1", "Rt2", "C1", "C2"], consts)?;
    s.add_ge(
        &[("Rt1", 1)],
        &[("I_X1W1", 1), ("s1", 1)],
        T::zero(),
        "encoder 1 sub-PMF validity",
    )?;
    s.add_ge(
        &[("Rt2", 1)],
        &[("I_X2W2", 1), ("s2", 1)],
        T::zero(),
        "encoder 2 sub-PMF validity",
    )?;
    s.add_ge(
        &[("Rt1", 1), ("C1", 1)],
        &[("I_X1X2W2Y_W1", 1), ("s3", 1)],
        T::zero(),
        "soft covering, codebook 1",
    )?;
    s.add_ge(
        &[("Rt2", 1), ("C2", 1)],
        &[("I_X1X2Y_W2", 1), ("s4", 1)],
        T::zero(),
        "soft covering, codebook 2",
    )?;
    s.add_le(
        &[("Rt1", 1), ("Rt2", 1), ("R1", -1), ("R2", -1)],
        &[("I_W1W2", 1), ("s5", 1)],
        T::zero(),
        "joint decoding of the bin pair",
    )?;
    s.add_ge(&[("R1", 1)], &[], T::zero(), "R1 nonnegative")?;
    s.add_ge(
        &[("Rt1", 1), ("R1", -1)],
        &[],
        T::zero(),
        "bins no more than indices, 1",
    )?;
    s.add_ge(&[("R2", 1)], &[], T::zero(), "R2 nonnegative")?;
    s.add_ge(
        &[("Rt2", 1), ("R2", -1)],
        &[],
        T::zero(),
        "bins no more than indices, 2",
    )?;
    s.add_le(
        &[("C1", 1), ("C2", 1), ("C", -1)],
        &[],
        T::zero(),
        "randomness split",
    )?;
    if split_nonnegativity {
        s.add_ge(
            &[("C1", 1)],
            &[],
            T::zero(),
            "C1 nonnegative (implied by the setup)",
        )?;
        s.add_ge(
            &[("C2", 1)],
            &[],
            T::zero(),
            "C2 nonnegative (implied by the setup)",
        )?;
    }
    for name in SLACKS {
        s.set_default(name, T::zero())?;
    }
    Ok(s)
}

/// The four closed-form distributed inequalities over `(R1, R2, C)`.
pub fn dist_region<T: Exact>() -> Result<LinIneqSystem<T>> {
    let [a1, a2, b, d1, d2] = DIST_CONSTANTS;
    let mut s = LinIneqSystem::new(["R1", "R2", "C"], DIST_CONSTANTS)?;
    s.add_ge(&[("R1", 1)], &[(a1, 1), (b, -1)], T::zero(), "")?;
    s.add_ge(&[("R2", 1)], &[(a2, 1), (b, -1)], T::zero(), "")?;
    s.add_ge(
        &[("R1", 1), ("R2", 1)],
        &[(a1, 1), (a2, 1), (b, -1)],
        T::zero(),
        "",
    )?;
    s.add_ge(
        &[("R1", 1), ("R2", 1), ("C", 1)],
        &[(d1, 1), (d2, 1), (b, -1)],
        T::zero(),
        "",
    )?;
    Ok(s)
}

/// Relations every admissible binding of the distributed constants obeys,
/// as joint-space constraints for a system with `n_vars` variables whose
/// constants are exactly [`DIST_CONSTANTS`]:
/// nonnegativity, `I_W1W2 ≤ I_Xj Wj`, `I_X1X2W2Y_W1 ≥ max(I_X1W1, I_W1W2)`,
/// `I_X1X2Y_W2 ≥ I_X2W2`.
pub fn dist_info_relations<T: Exact>(n_vars: usize) -> Vec<Constraint<T>> {
    let k = DIST_CONSTANTS.len();
    let row = |pairs: &[(usize, i64)]| {
        let mut c = vec![T::zero(); n_vars + k];
        for &(j, v) in pairs {
            c[n_vars + j] = T::from_i64(v);
        }
        Constraint::new(c, Sense::Ge, T::zero())
    };
    let (a1, a2, b, d1, d2) = (0, 1, 2, 3, 4);
    let mut out: Vec<Constraint<T>> = (0..k).map(|j| row(&[(j, 1)])).collect();
    out.push(row(&[(a1, 1), (b, -1)]));
    out.push(row(&[(a2, 1), (b, -1)]));
    out.push(row(&[(d1, 1), (a1, -1)]));
    out.push(row(&[(d1, 1), (b, -1)]));
    out.push(row(&[(d2, 1), (a2, -1)]));
    out
}

/// Nonnegativity of the point-to-point constants plus `I_WZ ≤ I_XW ≤ I_XYZW`
/// (data processing along `Z − X − W` and the chain rule).
pub fn ptp_info_relations<T: Exact>(n_vars: usize) -> Vec<Constraint<T>> {
    let k = PTP_CONSTANTS.len();
    let row = |pairs: &[(usize, i64)]| {
        let mut c = vec![T::zero(); n_vars + k];
        for &(j, v) in pairs {
            c[n_vars + j] = T::from_i64(v);
        }
        Constraint::new(c, Sense::Ge, T::zero())
    };
    let mut out: Vec<Constraint<T>> = (0..k).map(|j| row(&[(j, 1)])).collect();
    out.push(row(&[(0, 1), (1, -1)]));
    out.push(row(&[(2, 1), (0, -1)]));
    out
}
