//! Shannon information measures in bits.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::JointPmf;

/// Result of a Markov-chain test `A - B - C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovCheck {
    pub holds: bool,
    /// `I(A;C|B)` in bits.
    pub violation: f64,
}

fn check_disjoint(groups: &[&[&str]]) -> Result<()> {
    let mut seen = HashSet::new();
    for g in groups {
        for name in g.iter() {
            if !seen.insert(*name) {
                return Err(Error::OverlappingAxes(name.to_string()));
            }
        }
    }
    Ok(())
}

impl<S: Real> JointPmf<S> {
    /// Entropy of the marginal on `axes`; an empty group has zero entropy.
    pub fn entropy_of(&self, axes: &[&str]) -> Result<S> {
        if axes.is_empty() {
            return Ok(S::zero());
        }
        let m = self.marginalize(axes)?;
        Ok(shannon(m.table()))
    }

    /// Entropy of the full table.
    pub fn entropy(&self) -> S {
        shannon(self.table())
    }

    pub fn mutual_information(&self, a: &[&str], b: &[&str]) -> Result<S> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// `I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)`, clamped at zero.
    pub fn conditional_mutual_information(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<S> {
        check_disjoint(&[a, b, c])?;
        if a.is_empty() || b.is_empty() {
            // still validate names
            for n in a.iter().chain(b).chain(c) {
                self.axis_index(n)?;
            }
            return Ok(S::zero());
        }
        let cat = |x: &[&str], y: &[&str]| -> Vec<String> {
            x.iter().chain(y).map(|s| s.to_string()).collect()
        };
        let ac = cat(a, c);
        let bc = cat(b, c);
        let mut abc = cat(a, b);
        abc.extend(c.iter().map(|s| s.to_string()));
        let h = |v: &[String]| -> Result<S> {
            let refs: Vec<&str> = v.iter().map(String::as_str).collect();
            self.entropy_of(&refs)
        };
        let val = h(&ac)? + h(&bc)? - h(&abc)? - self.entropy_of(c)?;
        Ok(val.max(S::zero()))
    }

    /// Test `A - B - C` by `I(A;C|B) <= tol`.
    pub fn verify_markov_chain(
        &self,
        a: &[&str],
        b: &[&str],
        c: &[&str],
        tol: f64,
    ) -> Result<MarkovCheck> {
        let v = self.conditional_mutual_information(a, c, b)?.as_f64();
        Ok(MarkovCheck {
            holds: v <= tol,
            violation: v,
        })
    }
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn shannon<S: Real>(probs: &[S]) -> S {
    probs
        .iter()
        .filter(|&&p| p > S::zero())
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy function in bits.
pub fn h2<S: Real>(p: S) -> S {
    shannon(&[p, S::one() - p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Alphabet, Axis};
    use proptest::prelude::*;

    fn bits(name: &str) -> Axis {
        Axis::new(name, Alphabet::range(2).unwrap())
    }

    fn bsc(eps: f64) -> JointPmf<f64> {
        JointPmf::from_fn(vec![bits("X"), bits("Y")], |i| {
            0.5 * if i[0] == i[1] { 1.0 - eps } else { eps }
        })
        .unwrap()
    }

    #[test]
    fn independent_bits_have_zero_information() {
        let p = JointPmf::<f64>::uniform(vec![bits("A"), bits("B")]).unwrap();
        assert!(p.mutual_information(&["A"], &["B"]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn copy_has_one_bit() {
        let p = bsc(0.0);
        assert!((p.mutual_information(&["X"], &["Y"]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bsc_capacity_formula() {
        let e = 0.11f64;
        let h = -e * e.log2() - (1.0 - e) * (1.0 - e).log2();
        let mi = bsc(e).mutual_information(&["X"], &["Y"]).unwrap();
        assert!((mi - (1.0 - h)).abs() < 1e-12);
    }

    #[test]
    fn overlapping_groups_rejected() {
        let p = bsc(0.1);
        assert!(matches!(
            p.mutual_information(&["X"], &["X"]),
            Err(Error::OverlappingAxes(_))
        ));
    }

    #[test]
    fn markov_by_construction_and_violation() {
        // a -> b -> c
        let pa = [0.3, 0.7];
        let pba = [[0.9, 0.1], [0.2, 0.8]];
        let pcb = [[0.6, 0.4], [0.25, 0.75]];
        let p = JointPmf::<f64>::from_fn(vec![bits("A"), bits("B"), bits("C")], |i| {
            pa[i[0]] * pba[i[0]][i[1]] * pcb[i[1]][i[2]]
        })
        .unwrap();
        assert!(
            p.verify_markov_chain(&["A"], &["B"], &["C"], 1e-12)
                .unwrap()
                .holds
        );

        // a = c uniform, b independent
        let q = JointPmf::<f64>::from_fn(vec![bits("A"), bits("B"), bits("C")], |i| {
            if i[0] == i[2] {
                0.25
            } else {
                0.0
            }
        })
        .unwrap();
        let chk = q.verify_markov_chain(&["A"], &["B"], &["C"], 1e-9).unwrap();
        assert!(!chk.holds);
        assert!((chk.violation - 1.0).abs() < 1e-12);
    }

    /// Direct-formula CMI, sharing no code with the entropy path.
    fn cmi_direct(t: &[f64; 8]) -> f64 {
        let p = |a: usize, b: usize, c: usize| t[a * 4 + b * 2 + c];
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let pabc = p(a, b, c);
                    if pabc == 0.0 {
                        continue;
                    }
                    let pb: f64 = (0..2)
                        .flat_map(|x| (0..2).map(move |z| (x, z)))
                        .map(|(x, z)| p(x, b, z))
                        .sum();
                    let pab: f64 = (0..2).map(|z| p(a, b, z)).sum();
                    let pbc: f64 = (0..2).map(|x| p(x, b, c)).sum();
                    s += pabc * (pabc * pb / (pab * pbc)).log2();
                }
            }
        }
        s
    }

    proptest! {
        #[test]
        fn markov_matches_direct_cmi(raw in proptest::array::uniform8(0.01f64..1.0)) {
            let total: f64 = raw.iter().sum();
            let t: [f64; 8] = raw.map(|v| v / total);
            let p = JointPmf::<f64>::new(vec![bits("A"), bits("B"), bits("C")], t.to_vec()).unwrap();
            let chk = p.verify_markov_chain(&["A"], &["B"], &["C"], 1e-9).unwrap();
            prop_assert!((chk.violation - cmi_direct(&t).max(0.0)).abs() < 1e-12);
        }

        #[test]
        fn mi_bounded_by_entropies(raw in proptest::collection::vec(0.0f64..1.0, 6)) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-3);
            let t: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let ax = vec![Axis::new("A", Alphabet::range(2).unwrap()), Axis::new("B", Alphabet::range(3).unwrap())];
            let p = JointPmf::<f64>::new(ax, t).unwrap();
            let i = p.mutual_information(&["A"], &["B"]).unwrap();
            let ha = p.entropy_of(&["A"]).unwrap();
            let hb = p.entropy_of(&["B"]).unwrap();
            prop_assert!(i >= 0.0);
            prop_assert!(i <= ha.min(hb) + 1e-12);
        }
    }
}
