//! Exact finite-alphabet probability tables.
//!
//! A [`JointPmf`] is a dense row-major table over the product of its axes
//! (last axis varies fastest). All information measures are in bits.

mod info;
pub mod json;
mod product;
pub mod seq;
pub mod typical;

pub use info::{h2, shannon, MarkovCheck};
pub use product::ProductPmf;
pub use seq::Sequence;
pub use typical::{TypicalityParams, TypicalityTest};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ordered set of distinct symbol labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet `{"0", "1", ..., "k-1"}`.
    pub fn range(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// The n-fold product alphabet, labels concatenated in lexicographic
    /// order (first letter most significant). Multi-character labels are
    /// joined with `.`.
    pub fn power(&self, n: usize) -> Result<Self> {
        let k = self.size();
        let count = k
            .checked_pow(n as u32)
            .ok_or_else(|| Error::InvalidParameter(format!("{k}^{n} overflows")))?;
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            "."
        };
        let labels = (0..count).map(|idx| {
            seq::decode(idx, k, n)
                .into_iter()
                .map(|l| self.symbols[l].as_str())
                .collect::<Vec<_>>()
                .join(sep)
        });
        Self::new(labels)
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// A named alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub alphabet: Alphabet,
}

impl Axis {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Axis {
            name: name.into(),
            alphabet,
        }
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }
}

fn strides_for(axes: &[Axis]) -> Vec<usize> {
    let mut strides = vec![1; axes.len()];
    for k in (0..axes.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * axes[k + 1].size();
    }
    strides
}

fn check_unique(axes: &[Axis]) -> Result<()> {
    let mut seen = HashSet::new();
    for a in axes {
        if !seen.insert(a.name.as_str()) {
            return Err(Error::DuplicateAxis(a.name.clone()));
        }
    }
    Ok(())
}

/// Validate a block of probabilities that should sum to one, renormalizing
/// small textual rounding and rejecting anything larger.
fn normalize_block<S: Real>(block: &mut [S]) -> Result<()> {
    for &v in block.iter() {
        if !v.is_finite() || v < S::zero() {
            return Err(Error::InvalidProbability(v.as_f64()));
        }
    }
    let total: S = block.iter().copied().sum();
    let dev = (total - S::one()).abs();
    if dev <= S::norm_tol() {
        return Ok(());
    }
    if dev <= S::ingest_tol() {
        for v in block.iter_mut() {
            *v = *v / total;
        }
        return Ok(());
    }
    Err(Error::NotNormalized(total.as_f64()))
}

/// Joint probability table over a product of named finite alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<S> {
    axes: Vec<Axis>,
    strides: Vec<usize>,
    table: Vec<S>,
}

impl<S: Real> JointPmf<S> {
    pub fn new(axes: Vec<Axis>, mut table: Vec<S>) -> Result<Self> {
        check_unique(&axes)?;
        let expected: usize = axes.iter().map(Axis::size).product();
        if table.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                got: table.len(),
            });
        }
        normalize_block(&mut table)?;
        let strides = strides_for(&axes);
        Ok(JointPmf {
            axes,
            strides,
            table,
        })
    }

    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[usize]) -> S) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(Axis::size).collect();
        let len = shape.iter().product();
        let mut idx = vec![0; shape.len()];
        let mut table = Vec::with_capacity(len);
        for flat in 0..len {
            unravel_into(flat, &shape, &mut idx);
            table.push(f(&idx));
        }
        Self::new(axes, table)
    }

    /// Point mass on a single cell.
    pub fn point_mass(axes: Vec<Axis>, cell: &[usize]) -> Result<Self> {
        Self::from_fn(axes, |idx| if idx == cell { S::one() } else { S::zero() })
    }

    pub fn uniform(axes: Vec<Axis>) -> Result<Self> {
        let len: usize = axes.iter().map(Axis::size).product();
        let v = S::one() / S::from_usize_lossy(len);
        Self::new(axes, vec![v; len])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis_names(&self) -> Vec<&str> {
        self.axes.iter().map(|a| a.name.as_str()).collect()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    pub fn axis(&self, name: &str) -> Result<&Axis> {
        Ok(&self.axes[self.axis_index(name)?])
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::size).collect()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[S] {
        &self.table
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.axes.len());
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn unravel(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        unravel_into(flat, &self.shape(), &mut idx);
        idx
    }

    pub fn prob(&self, idx: &[usize]) -> S {
        self.table[self.flat_index(idx)]
    }

    fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        names
            .iter()
            .map(|n| {
                if !seen.insert(*n) {
                    return Err(Error::DuplicateAxis(n.to_string()));
                }
                self.axis_index(n)
            })
            .collect()
    }

    /// Sum out every axis not in `keep`; the result's axes follow `keep`'s order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf<S>> {
        let kept = self.indices_of(keep)?;
        let axes: Vec<Axis> = kept.iter().map(|&k| self.axes[k].clone()).collect();
        let out_strides = strides_for(&axes);
        let out_len: usize = axes.iter().map(Axis::size).product();
        let mut out = vec![S::zero(); out_len];
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        for (flat, &v) in self.table.iter().enumerate() {
            if v == S::zero() {
                continue;
            }
            unravel_into(flat, &shape, &mut idx);
            let t: usize = kept
                .iter()
                .zip(&out_strides)
                .map(|(&k, s)| idx[k] * s)
                .sum();
            out[t] = out[t] + v;
        }
        let total: S = out.iter().copied().sum();
        if total > S::zero() && (total - S::one()).abs() > S::norm_tol() {
            for v in out.iter_mut() {
                *v = *v / total;
            }
        }
        JointPmf::new(axes, out)
    }

    /// Reorder axes (all axes must be named).
    pub fn reorder(&self, order: &[&str]) -> Result<JointPmf<S>> {
        if order.len() != self.axes.len() {
            return Err(Error::AxisMismatch(format!(
                "reorder needs all {} axes, got {}",
                self.axes.len(),
                order.len()
            )));
        }
        self.marginalize(order)
    }

    /// Rename axes in place of position.
    pub fn renamed(&self, names: &[&str]) -> Result<JointPmf<S>> {
        if names.len() != self.axes.len() {
            return Err(Error::AxisMismatch("rename arity".into()));
        }
        let axes = self
            .axes
            .iter()
            .zip(names)
            .map(|(a, n)| Axis::new(*n, a.alphabet.clone()))
            .collect();
        JointPmf::new(axes, self.table.clone())
    }

    /// Conditional distribution of the remaining axes given `given`.
    ///
    /// Conditioning cells with zero marginal are marked undefined.
    pub fn condition(&self, given: &[&str]) -> Result<CondPmf<S>> {
        let g = self.indices_of(given)?;
        let out: Vec<usize> = (0..self.axes.len()).filter(|k| !g.contains(k)).collect();
        let given_axes: Vec<Axis> = g.iter().map(|&k| self.axes[k].clone()).collect();
        let out_axes: Vec<Axis> = out.iter().map(|&k| self.axes[k].clone()).collect();
        let gs = strides_for(&given_axes);
        let os = strides_for(&out_axes);
        let n_given: usize = given_axes.iter().map(Axis::size).product();
        let n_out: usize = out_axes.iter().map(Axis::size).product();
        let mut table = vec![S::zero(); n_given * n_out];
        let mut marg = vec![S::zero(); n_given];
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        for (flat, &v) in self.table.iter().enumerate() {
            unravel_into(flat, &shape, &mut idx);
            let gi: usize = g.iter().zip(&gs).map(|(&k, s)| idx[k] * s).sum();
            let oi: usize = out.iter().zip(&os).map(|(&k, s)| idx[k] * s).sum();
            table[gi * n_out + oi] = table[gi * n_out + oi] + v;
            marg[gi] = marg[gi] + v;
        }
        if marg.iter().all(|&m| m == S::zero()) {
            return Err(Error::ZeroMarginal);
        }
        let mut defined = vec![false; n_given];
        for gi in 0..n_given {
            let row = &mut table[gi * n_out..(gi + 1) * n_out];
            if marg[gi] > S::zero() {
                defined[gi] = true;
                for v in row.iter_mut() {
                    *v = *v / marg[gi];
                }
            } else {
                for v in row.iter_mut() {
                    *v = S::nan();
                }
            }
        }
        Ok(CondPmf {
            given_axes,
            out_axes,
            table,
            defined,
        })
    }

    /// Half the L1 distance between two tables over identical axes.
    pub fn total_variation(&self, other: &JointPmf<S>) -> Result<S> {
        if self.axes != other.axes {
            return Err(Error::AxisMismatch(format!(
                "{:?} vs {:?}",
                self.axis_names(),
                other.axis_names()
            )));
        }
        let sum: S = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&a, &b)| (a - b).abs())
            .sum();
        Ok((sum / S::lit(2.0)).min(S::one()))
    }

    /// Lazily evaluated n-fold product distribution.
    pub fn product_extension(&self, n: usize) -> Result<ProductPmf<'_, S>> {
        ProductPmf::new(self, n)
    }

    /// Cast to another scalar type.
    pub fn cast<T: Real>(&self) -> JointPmf<T> {
        JointPmf {
            axes: self.axes.clone(),
            strides: self.strides.clone(),
            table: self.table.iter().map(|v| T::lit(v.as_f64())).collect(),
        }
    }
}

/// Total variation distance between two tables with identical axes.
pub fn total_variation<S: Real>(p: &JointPmf<S>, q: &JointPmf<S>) -> Result<S> {
    p.total_variation(q)
}

pub(crate) fn unravel_into(mut flat: usize, shape: &[usize], idx: &mut [usize]) {
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
}

/// Conditional distribution `p(out | given)`, one simplex per given cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf<S> {
    given_axes: Vec<Axis>,
    out_axes: Vec<Axis>,
    table: Vec<S>,
    defined: Vec<bool>,
}

impl<S: Real> CondPmf<S> {
    /// Build from rows indexed by the flattened given cell; `None` marks
    /// an undefined (zero-marginal) row.
    pub fn new(
        given_axes: Vec<Axis>,
        out_axes: Vec<Axis>,
        rows: Vec<Option<Vec<S>>>,
    ) -> Result<Self> {
        let mut all = given_axes.clone();
        all.extend(out_axes.iter().cloned());
        check_unique(&all)?;
        let n_given: usize = given_axes.iter().map(Axis::size).product();
        let n_out: usize = out_axes.iter().map(Axis::size).product();
        if rows.len() != n_given {
            return Err(Error::ShapeMismatch {
                expected: n_given,
                got: rows.len(),
            });
        }
        let mut table = Vec::with_capacity(n_given * n_out);
        let mut defined = Vec::with_capacity(n_given);
        for row in rows {
            match row {
                Some(mut r) => {
                    if r.len() != n_out {
                        return Err(Error::ShapeMismatch {
                            expected: n_out,
                            got: r.len(),
                        });
                    }
                    normalize_block(&mut r)?;
                    table.extend(r);
                    defined.push(true);
                }
                None => {
                    table.extend(std::iter::repeat(S::nan()).take(n_out));
                    defined.push(false);
                }
            }
        }
        Ok(CondPmf {
            given_axes,
            out_axes,
            table,
            defined,
        })
    }

    /// Build a fully defined conditional from a function of (given cell, out cell).
    pub fn from_fn(
        given_axes: Vec<Axis>,
        out_axes: Vec<Axis>,
        f: impl Fn(&[usize], &[usize]) -> S,
    ) -> Result<Self> {
        let gshape: Vec<usize> = given_axes.iter().map(Axis::size).collect();
        let oshape: Vec<usize> = out_axes.iter().map(Axis::size).collect();
        let n_given: usize = gshape.iter().product();
        let n_out: usize = oshape.iter().product();
        let mut gi = vec![0; gshape.len()];
        let mut oi = vec![0; oshape.len()];
        let rows = (0..n_given)
            .map(|g| {
                unravel_into(g, &gshape, &mut gi);
                Some(
                    (0..n_out)
                        .map(|o| {
                            unravel_into(o, &oshape, &mut oi);
                            f(&gi, &oi)
                        })
                        .collect(),
                )
            })
            .collect();
        Self::new(given_axes, out_axes, rows)
    }

    pub fn given_axes(&self) -> &[Axis] {
        &self.given_axes
    }

    pub fn out_axes(&self) -> &[Axis] {
        &self.out_axes
    }

    pub fn given_len(&self) -> usize {
        self.defined.len()
    }

    pub fn out_len(&self) -> usize {
        self.out_axes.iter().map(Axis::size).product()
    }

    pub fn is_defined(&self, given_flat: usize) -> bool {
        self.defined[given_flat]
    }

    pub fn row(&self, given_flat: usize) -> Option<&[S]> {
        if self.defined[given_flat] {
            let n = self.out_len();
            Some(&self.table[given_flat * n..(given_flat + 1) * n])
        } else {
            None
        }
    }

    /// `p(out | given)`; reading an undefined row is a logic error.
    pub fn get(&self, given_flat: usize, out_flat: usize) -> S {
        assert!(
            self.defined[given_flat],
            "read of undefined conditional row {given_flat}"
        );
        self.table[given_flat * self.out_len() + out_flat]
    }

    /// Joint `p(given) p(out | given)` with axes `given ++ out`.
    pub fn compose(&self, marginal: &JointPmf<S>) -> Result<JointPmf<S>> {
        if marginal.axes() != self.given_axes.as_slice() {
            return Err(Error::AxisMismatch(
                "marginal axes must equal the conditioning axes".into(),
            ));
        }
        let n_out = self.out_len();
        let mut axes = self.given_axes.clone();
        axes.extend(self.out_axes.iter().cloned());
        let mut table = Vec::with_capacity(marginal.len() * n_out);
        for (g, &pg) in marginal.table().iter().enumerate() {
            if pg == S::zero() {
                table.extend(std::iter::repeat(S::zero()).take(n_out));
            } else {
                let row = self
                    .row(g)
                    .expect("positive marginal on an undefined conditional row");
                table.extend(row.iter().map(|&v| v * pg));
            }
        }
        JointPmf::new(axes, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ax(name: &str, k: usize) -> Axis {
        Axis::new(name, Alphabet::range(k).unwrap())
    }

    #[test]
    fn marginal_of_uniform_square() {
        let p = JointPmf::<f64>::uniform(vec![ax("A", 2), ax("B", 2)]).unwrap();
        assert_eq!(p.marginalize(&["A"]).unwrap().table(), &[0.5, 0.5]);
    }

    #[test]
    fn marginal_of_identity_coupling() {
        let p = JointPmf::<f64>::from_fn(vec![ax("X", 2), ax("W", 2)], |i| {
            if i[0] == i[1] {
                0.5
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(p.marginalize(&["X"]).unwrap().table(), &[0.5, 0.5]);
    }

    #[test]
    fn marginal_matches_brute_force() {
        let raw: Vec<f64> = (1..=12).map(|v| (v * 7 % 13) as f64).collect();
        let total: f64 = raw.iter().sum();
        let t: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let p = JointPmf::new(vec![ax("X", 3), ax("Y", 2), ax("Z", 2)], t.clone()).unwrap();
        let m = p.marginalize(&["X", "Z"]).unwrap();
        for x in 0..3 {
            for z in 0..2 {
                let want: f64 = (0..2).map(|y| t[x * 4 + y * 2 + z]).sum();
                assert!((m.prob(&[x, z]) - want).abs() < 1e-15);
            }
        }
        // axis order follows the request
        let r = p.marginalize(&["Z", "X"]).unwrap();
        assert_eq!(r.axis_names(), vec!["Z", "X"]);
        assert!((r.prob(&[1, 2]) - m.prob(&[2, 1])).abs() < 1e-15);
        assert!(matches!(p.marginalize(&["Q"]), Err(Error::UnknownAxis(_))));
    }

    #[test]
    fn condition_cases() {
        let p = JointPmf::<f64>::from_fn(vec![ax("A", 2), ax("B", 3)], |i| {
            [0.4, 0.6][i[0]] * [0.2, 0.3, 0.5][i[1]]
        })
        .unwrap();
        let c = p.condition(&["A"]).unwrap();
        for a in 0..2 {
            let row = c.row(a).unwrap();
            for (b, want) in [0.2, 0.3, 0.5].iter().enumerate() {
                assert!((row[b] - want).abs() < 1e-15);
            }
        }
        let d = JointPmf::<f64>::from_fn(vec![ax("X", 2), ax("Y", 2)], |i| {
            if i[0] == i[1] {
                0.5
            } else {
                0.0
            }
        })
        .unwrap();
        let c = d.condition(&["X"]).unwrap();
        assert_eq!(c.row(0).unwrap(), &[1.0, 0.0]);
        assert_eq!(c.row(1).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_marginal_flagged() {
        let p =
            JointPmf::<f64>::new(vec![ax("A", 2), ax("B", 2)], vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let c = p.condition(&["A"]).unwrap();
        assert!(c.is_defined(0));
        assert!(!c.is_defined(1));
        assert!(c.row(1).is_none());
    }

    #[test]
    #[should_panic(expected = "undefined conditional row")]
    fn reading_undefined_row_panics() {
        let p =
            JointPmf::<f64>::new(vec![ax("A", 2), ax("B", 2)], vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        p.condition(&["A"]).unwrap().get(1, 0);
    }

    #[test]
    fn tv_examples() {
        let a = JointPmf::<f64>::new(vec![ax("X", 2)], vec![0.5, 0.5]).unwrap();
        let b = JointPmf::<f64>::new(vec![ax("X", 2)], vec![0.75, 0.25]).unwrap();
        assert_eq!(total_variation(&a, &b).unwrap(), 0.25);
        assert_eq!(total_variation(&a, &a).unwrap(), 0.0);
        let p0 = JointPmf::<f64>::point_mass(vec![ax("X", 3)], &[0]).unwrap();
        let p2 = JointPmf::<f64>::point_mass(vec![ax("X", 3)], &[2]).unwrap();
        assert_eq!(total_variation(&p0, &p2).unwrap(), 1.0);
        let c = JointPmf::<f64>::new(vec![ax("Y", 2)], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            total_variation(&a, &c),
            Err(Error::AxisMismatch(_))
        ));
    }

    #[test]
    fn ingestion_rules() {
        assert!(matches!(
            JointPmf::<f64>::new(vec![ax("X", 2)], vec![0.5, 0.6]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            JointPmf::<f64>::new(vec![ax("X", 2)], vec![1.5, -0.5]),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            JointPmf::<f64>::new(vec![ax("X", 2), ax("X", 2)], vec![0.25; 4]),
            Err(Error::DuplicateAxis(_))
        ));
        let p = JointPmf::<f64>::new(vec![ax("X", 2)], vec![0.5 + 5e-10, 0.5]).unwrap();
        assert!((p.table().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn f32_tables_work() {
        let p =
            JointPmf::<f32>::new(vec![ax("X", 2), ax("Y", 2)], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let i = p.mutual_information(&["X"], &["Y"]).unwrap();
        let want = 1.0 - (-(0.8f64 * 0.8f64.log2()) - 0.2 * 0.2f64.log2());
        assert!((i as f64 - want).abs() < 1e-5);
    }

    fn normalized(raw: &[f64]) -> Vec<f64> {
        let total: f64 = raw.iter().sum();
        raw.iter().map(|v| v / total).collect()
    }

    proptest! {
        #[test]
        fn recomposition(raw in proptest::collection::vec(0.01f64..1.0, 6)) {
            let p = JointPmf::new(vec![ax("X", 2), ax("Y", 3)], normalized(&raw)).unwrap();
            let back = p.condition(&["X"]).unwrap().compose(&p.marginalize(&["X"]).unwrap()).unwrap();
            for (a, b) in p.table().iter().zip(back.table()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn marginalize_idempotent(raw in proptest::collection::vec(0.0f64..1.0, 12)) {
            prop_assume!(raw.iter().sum::<f64>() > 1e-3);
            let p = JointPmf::new(vec![ax("X", 2), ax("Y", 3), ax("Z", 2)], normalized(&raw)).unwrap();
            let m = p.marginalize(&["Y", "Z"]).unwrap();
            prop_assert_eq!(m.marginalize(&["Y", "Z"]).unwrap(), m);
        }

        #[test]
        fn tv_is_a_metric(a in proptest::collection::vec(0.01f64..1.0, 4), b in proptest::collection::vec(0.01f64..1.0, 4), c in proptest::collection::vec(0.01f64..1.0, 4)) {
            let mk = |v: &[f64]| JointPmf::new(vec![ax("X", 4)], normalized(v)).unwrap();
            let (p, q, r) = (mk(&a), mk(&b), mk(&c));
            let pq = total_variation(&p, &q).unwrap();
            prop_assert_eq!(pq, total_variation(&q, &p).unwrap());
            prop_assert!(pq <= total_variation(&p, &r).unwrap() + total_variation(&r, &q).unwrap() + 1e-12);
            prop_assert!((0.0..=1.0).contains(&pq));
            prop_assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        }
    }
}
