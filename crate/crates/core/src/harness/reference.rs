//! Shipped reference instances.
//!
//! Point-to-point: `W ~ Ber(1/2)`, `X = W ⊕ Ber(0.1)`, `Z = X ⊕ Ber(0.2)`,
//! `Y = W ⊕ Ber(0.1)`, so `Z − X − W` and `X − (Z,W) − Y` hold by
//! construction and `(p_{W|X}, p_{Y|ZW})` is an exact decomposition.
//!
//! Distributed: `X1, X2` independent fair bits, `W_j = X_j ⊕ Ber(0.1)`,
//! `Y = W1 ⊕ W2 ⊕ Ber(0.1)`.

use crate::prob::{Alphabet, Axis, JointPmf};
use crate::region::dist::{AuxChannelDist, DistLimits};
use crate::region::frontier::SearchConfig;
use crate::region::ptp::AuxChannelPtp;

use super::problem::{DistProblem, PtpProblem};

pub const FLIP_XW: f64 = 0.1;
pub const FLIP_ZX: f64 = 0.2;
pub const FLIP_YW: f64 = 0.1;

fn bsc(a: usize, b: usize, p: f64) -> f64 {
    if a == b {
        1.0 - p
    } else {
        p
    }
}

fn bit(name: &str) -> Axis {
    Axis::new(name, Alphabet::range(2).expect("binary alphabet"))
}

pub fn ptp_target() -> JointPmf<f64> {
    JointPmf::from_fn(vec![bit("X"), bit("Y"), bit("Z")], |i| {
        let (x, y, z) = (i[0], i[1], i[2]);
        (0..2)
            .map(|w| 0.5 * bsc(w, x, FLIP_XW) * bsc(x, z, FLIP_ZX) * bsc(w, y, FLIP_YW))
            .sum()
    })
    .expect("reference target is a PMF")
}

pub fn ptp_aux() -> AuxChannelPtp<f64> {
    let t = ptp_target();
    let w_given_x = (0..2)
        .map(|x| (0..2).map(|w| bsc(x, w, FLIP_XW)).collect())
        .collect();
    let y_given_zw = (0..2)
        .flat_map(|_z| (0..2).map(|w| (0..2).map(|y| bsc(w, y, FLIP_YW)).collect()))
        .collect();
    AuxChannelPtp::for_target(
        &t,
        Alphabet::range(2).expect("binary"),
        w_given_x,
        y_given_zw,
    )
    .expect("reference decomposition is consistent")
}

pub fn ptp_problem() -> PtpProblem {
    PtpProblem {
        target: ptp_target(),
        aux: Some(ptp_aux()),
        search: SearchConfig::default(),
    }
}

pub fn dist_target() -> JointPmf<f64> {
    JointPmf::from_fn(vec![bit("X1"), bit("X2"), bit("Y")], |i| {
        let (x1, x2, y) = (i[0], i[1], i[2]);
        let mut s = 0.0;
        for w1 in 0..2 {
            for w2 in 0..2 {
                s += 0.25 * bsc(x1, w1, FLIP_XW) * bsc(x2, w2, FLIP_XW) * bsc(w1 ^ w2, y, FLIP_YW);
            }
        }
        s
    })
    .expect("reference target is a PMF")
}

pub fn dist_aux() -> AuxChannelDist<f64> {
    let t = dist_target();
    let chan: Vec<Vec<f64>> = (0..2)
        .map(|x| (0..2).map(|w| bsc(x, w, FLIP_XW)).collect())
        .collect();
    let y = (0..2)
        .flat_map(|w1| (0..2).map(move |w2| (0..2).map(|y| bsc(w1 ^ w2, y, FLIP_YW)).collect()))
        .collect();
    AuxChannelDist::new(
        &t,
        Alphabet::range(1).expect("unit"),
        vec![1.0],
        Alphabet::range(2).expect("binary"),
        Alphabet::range(2).expect("binary"),
        chan.clone(),
        chan,
        y,
        DistLimits::default(),
    )
    .expect("reference decomposition is consistent")
}

pub fn dist_problem() -> DistProblem {
    DistProblem {
        target: dist_target(),
        aux: Some(dist_aux()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::dist::dist_rates_for;
    use crate::region::ptp::{ptp_rates_for, DEFAULT_TOL};

    #[test]
    fn decompositions_are_exact() {
        assert!(ptp_aux().residual(&ptp_target()).unwrap() < 1e-15);
        assert!(dist_aux().residual(&dist_target()).unwrap() < 1e-15);
        assert!(ptp_rates_for(&ptp_target(), &ptp_aux(), DEFAULT_TOL).is_ok());
        assert!(dist_rates_for(&dist_target(), &dist_aux(), DEFAULT_TOL).is_ok());
    }
}
