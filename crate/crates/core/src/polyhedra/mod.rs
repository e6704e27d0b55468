//! Exact Fourier–Motzkin elimination over rational linear systems.
//!
//! A row reads `Σ coeffs[i]·var[i] ≥ Σ consts[j]·sym[j] + offset`, where the
//! `sym[j]` are named constants kept symbolic until evaluation.

pub mod json;
pub mod lp;
pub mod systems;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::scalar::Exact;

use lp::{Constraint, LpOutcome, Sense};

/// One inequality `coeffs·x ≥ consts·c + offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub consts: Vec<T>,
    pub offset: T,
}

impl<T: Exact> Row<T> {
    pub fn is_constant_only(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `0 ≥ offset` with `offset ≤ 0` and no symbolic part.
    pub fn is_trivially_true(&self) -> bool {
        self.is_constant_only()
            && self.consts.iter().all(|c| c.is_zero())
            && self.offset <= T::zero()
    }

    /// `0 ≥ offset` with `offset > 0` and no symbolic part.
    pub fn is_contradiction(&self) -> bool {
        self.is_constant_only()
            && self.consts.iter().all(|c| c.is_zero())
            && self.offset > T::zero()
    }

    /// Scale by a positive factor so the first nonzero entry (variables,
    /// then constants, then offset) has magnitude one.
    pub fn normalized(&self) -> Row<T> {
        let lead = self
            .coeffs
            .iter()
            .chain(&self.consts)
            .chain(std::iter::once(&self.offset))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        match lead {
            None => self.clone(),
            Some(s) => Row {
                coeffs: self.coeffs.iter().map(|c| c.clone() / s.clone()).collect(),
                consts: self.consts.iter().map(|c| c.clone() / s.clone()).collect(),
                offset: self.offset.clone() / s,
            },
        }
    }

    fn scaled(&self, f: &T) -> Row<T> {
        Row {
            coeffs: self.coeffs.iter().map(|c| c.clone() * f.clone()).collect(),
            consts: self.consts.iter().map(|c| c.clone() * f.clone()).collect(),
            offset: self.offset.clone() * f.clone(),
        }
    }

    fn add(&self, other: &Row<T>) -> Row<T> {
        let zip = |a: &[T], b: &[T]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.clone() + y.clone())
                .collect()
        };
        Row {
            coeffs: zip(&self.coeffs, &other.coeffs),
            consts: zip(&self.consts, &other.consts),
            offset: self.offset.clone() + other.offset.clone(),
        }
    }

    /// Value of `lhs - rhs` at a point with all constants resolved.
    pub fn slack(&self, point: &[T], constants: &[T]) -> T {
        let lhs = self
            .coeffs
            .iter()
            .zip(point)
            .fold(T::zero(), |a, (c, x)| a + c.clone() * x.clone());
        let rhs = self
            .consts
            .iter()
            .zip(constants)
            .fold(self.offset.clone(), |a, (c, x)| a + c.clone() * x.clone());
        lhs - rhs
    }
}

/// Linear inequality system over named variables and symbolic constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LinIneqSystem<T> {
    variables: Vec<String>,
    constants: Vec<String>,
    /// Values used for constants absent from caller bindings (slack symbols).
    defaults: BTreeMap<String, T>,
    rows: Vec<Row<T>>,
    /// Free-form provenance note per row (may be empty).
    labels: Vec<String>,
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateAxis(n.clone()));
        }
    }
    Ok(())
}

impl<T: Exact> LinIneqSystem<T> {
    pub fn new<V: Into<String>, C: Into<String>>(
        variables: impl IntoIterator<Item = V>,
        constants: impl IntoIterator<Item = C>,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        let mut all = variables.clone();
        all.extend(constants.iter().cloned());
        check_names(&all)?;
        Ok(LinIneqSystem {
            variables,
            constants,
            defaults: BTreeMap::new(),
            rows: Vec::new(),
            labels: Vec::new(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn defaults(&self) -> &BTreeMap<String, T> {
        &self.defaults
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn const_index(&self, name: &str) -> Result<usize> {
        self.constants
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnboundConstant(name.to_string()))
    }

    pub fn set_default(&mut self, name: &str, value: T) -> Result<()> {
        self.const_index(name)?;
        self.defaults.insert(name.to_string(), value);
        Ok(())
    }

    /// Append a validated raw row.
    pub fn push_row(&mut self, row: Row<T>, label: impl Into<String>) -> Result<()> {
        if row.coeffs.len() != self.variables.len() {
            return Err(Error::ShapeMismatch {
                expected: self.variables.len(),
                got: row.coeffs.len(),
            });
        }
        if row.consts.len() != self.constants.len() {
            return Err(Error::ShapeMismatch {
                expected: self.constants.len(),
                got: row.consts.len(),
            });
        }
        self.rows.push(row);
        self.labels.push(label.into());
        Ok(())
    }

    /// Add `Σ lhs ≥ Σ rhs + offset` from named terms.
    pub fn add_ge(
        &mut self,
        lhs: &[(&str, i64)],
        rhs: &[(&str, i64)],
        offset: T,
        label: &str,
    ) -> Result<()> {
        let mut coeffs = vec![T::zero(); self.variables.len()];
        for (name, c) in lhs {
            let k = self.var_index(name)?;
            coeffs[k] = coeffs[k].clone() + T::from_i64(*c);
        }
        let mut consts = vec![T::zero(); self.constants.len()];
        for (name, c) in rhs {
            let k = self.const_index(name)?;
            consts[k] = consts[k].clone() + T::from_i64(*c);
        }
        self.push_row(
            Row {
                coeffs,
                consts,
                offset,
            },
            label,
        )
    }

    /// Add `Σ lhs ≤ Σ rhs + offset`.
    pub fn add_le(
        &mut self,
        lhs: &[(&str, i64)],
        rhs: &[(&str, i64)],
        offset: T,
        label: &str,
    ) -> Result<()> {
        fn neg<'a>(t: &[(&'a str, i64)]) -> Vec<(&'a str, i64)> {
            t.iter().map(|&(n, c)| (n, -c)).collect()
        }
        self.add_ge(&neg(lhs), &neg(rhs), -offset, label)
    }

    /// Indices of rows reading `0 ≥ positive`.
    pub fn contradictions(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].is_contradiction())
            .collect()
    }

    /// Normalized, trivially-true-free, deduplicated and sorted copy. When
    /// duplicates carry different labels the first in sorted order wins.
    pub fn canonical(&self) -> LinIneqSystem<T> {
        let mut map: BTreeMap<Row<T>, String> = BTreeMap::new();
        for (r, l) in self.rows.iter().zip(&self.labels) {
            let n = r.normalized();
            if n.is_trivially_true() {
                continue;
            }
            map.entry(n).or_insert_with(|| l.clone());
        }
        let (rows, labels) = map.into_iter().unzip();
        LinIneqSystem {
            rows,
            labels,
            ..self.clone_header()
        }
    }

    fn clone_header(&self) -> LinIneqSystem<T> {
        LinIneqSystem {
            variables: self.variables.clone(),
            constants: self.constants.clone(),
            defaults: self.defaults.clone(),
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Set of normalized nontrivial rows.
    pub fn row_set(&self) -> BTreeSet<Row<T>> {
        self.canonical().rows.into_iter().collect()
    }

    /// Equal up to positive row scaling, duplicates and trivially-true rows.
    pub fn row_equivalent(&self, other: &LinIneqSystem<T>) -> bool {
        self.variables == other.variables
            && self.constants == other.constants
            && self.row_set() == other.row_set()
    }

    /// Substitute the given constants, dropping them from the symbol list.
    pub fn bind(&self, bindings: &BTreeMap<String, T>) -> LinIneqSystem<T> {
        let keep: Vec<usize> = (0..self.constants.len())
            .filter(|&j| !bindings.contains_key(&self.constants[j]))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut offset = r.offset.clone();
                for (j, name) in self.constants.iter().enumerate() {
                    if let Some(v) = bindings.get(name) {
                        offset = offset + r.consts[j].clone() * v.clone();
                    }
                }
                Row {
                    coeffs: r.coeffs.clone(),
                    consts: keep.iter().map(|&j| r.consts[j].clone()).collect(),
                    offset,
                }
            })
            .collect();
        let constants = keep.iter().map(|&j| self.constants[j].clone()).collect();
        let defaults = self
            .defaults
            .iter()
            .filter(|(k, _)| !bindings.contains_key(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        LinIneqSystem {
            variables: self.variables.clone(),
            constants,
            defaults,
            rows,
            labels: self.labels.clone(),
        }
        .canonical()
    }

    /// Substitute every constant that has a default (slack symbols).
    pub fn bind_defaults(&self) -> LinIneqSystem<T> {
        self.bind(&self.defaults.clone())
    }

    /// Resolve all constants from `bindings`, falling back to defaults.
    pub fn resolve_constants(&self, bindings: &BTreeMap<String, T>) -> Result<Vec<T>> {
        self.constants
            .iter()
            .map(|c| {
                bindings
                    .get(c)
                    .or_else(|| self.defaults.get(c))
                    .cloned()
                    .ok_or_else(|| Error::UnboundConstant(c.clone()))
            })
            .collect()
    }

    /// Exact check of every row at `point` (one value per variable).
    pub fn lp_membership(&self, point: &[T], bindings: &BTreeMap<String, T>) -> Result<bool> {
        if point.len() != self.variables.len() {
            return Err(Error::ShapeMismatch {
                expected: self.variables.len(),
                got: point.len(),
            });
        }
        let c = self.resolve_constants(bindings)?;
        Ok(self.rows.iter().all(|r| r.slack(point, &c) >= T::zero()))
    }

    /// Rows as LP constraints in the joint space `(variables, constants)`.
    pub fn joint_constraints(&self) -> Vec<Constraint<T>> {
        self.rows.iter().map(|r| joint_constraint(r)).collect()
    }

    /// Rows as LP constraints over the variables with constants resolved.
    pub fn bound_constraints(&self, bindings: &BTreeMap<String, T>) -> Result<Vec<Constraint<T>>> {
        let c = self.resolve_constants(bindings)?;
        Ok(self
            .rows
            .iter()
            .map(|r| {
                let rhs = r
                    .consts
                    .iter()
                    .zip(&c)
                    .fold(r.offset.clone(), |a, (k, v)| a + k.clone() * v.clone());
                Constraint::new(r.coeffs.clone(), Sense::Ge, rhs)
            })
            .collect())
    }

    /// Find values of `free` variables making the system hold with the other
    /// variables fixed by `fixed` and constants by `bindings`.
    pub fn witness(
        &self,
        fixed: &BTreeMap<String, T>,
        free: &[&str],
        bindings: &BTreeMap<String, T>,
    ) -> Result<Option<Vec<T>>> {
        let free_idx: Vec<usize> = free
            .iter()
            .map(|f| self.var_index(f))
            .collect::<Result<_>>()?;
        for (k, v) in self.variables.iter().enumerate() {
            if !free_idx.contains(&k) && !fixed.contains_key(v) {
                return Err(Error::InvalidParameter(format!(
                    "variable `{v}` neither fixed nor free"
                )));
            }
        }
        let cons: Vec<Constraint<T>> = self
            .bound_constraints(bindings)?
            .into_iter()
            .map(|c| {
                let mut rhs = c.rhs;
                for (k, v) in self.variables.iter().enumerate() {
                    if let Some(x) = fixed.get(v) {
                        if !free_idx.contains(&k) {
                            rhs = rhs - c.coeffs[k].clone() * x.clone();
                        }
                    }
                }
                Constraint::new(
                    free_idx.iter().map(|&k| c.coeffs[k].clone()).collect(),
                    Sense::Ge,
                    rhs,
                )
            })
            .collect();
        Ok(lp::feasible_point(free_idx.len(), &cons))
    }

    /// True if `row` holds on every point of `self ∩ extra` in the joint
    /// (variables, constants) space; `extra` constraints live in that space.
    pub fn implies(&self, row: &Row<T>, extra: &[Constraint<T>]) -> bool {
        let mut cons = self.joint_constraints();
        cons.extend(extra.iter().cloned());
        let target = joint_constraint(row);
        match lp::minimize(&target.coeffs, &cons) {
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal { value, .. } => value >= target.rhs,
        }
    }

    /// Drop rows implied by the remaining rows (plus `extra`), scanning in
    /// order so that of two equivalent rows the later one is dropped.
    pub fn prune_redundant(&self, extra: &[Constraint<T>]) -> LinIneqSystem<T> {
        let mut kept = self.canonical();
        let mut i = kept.rows.len();
        while i > 0 {
            i -= 1;
            let mut rest = kept.clone();
            let row = rest.rows.remove(i);
            rest.labels.remove(i);
            if rest.implies(&row, extra) {
                kept = rest;
            }
        }
        kept
    }

    fn drop_variable(&self, k: usize) -> LinIneqSystem<T> {
        let mut variables = self.variables.clone();
        variables.remove(k);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.coeffs.remove(k);
                r
            })
            .collect();
        LinIneqSystem {
            variables,
            rows,
            ..self.clone_with_rows(Vec::new())
        }
    }

    fn clone_with_rows(&self, rows: Vec<Row<T>>) -> LinIneqSystem<T> {
        LinIneqSystem {
            rows,
            labels: self.labels.clone(),
            ..self.clone_header()
        }
    }
}

fn joint_constraint<T: Exact>(r: &Row<T>) -> Constraint<T> {
    let mut coeffs = r.coeffs.clone();
    coeffs.extend(r.consts.iter().map(|c| -c.clone()));
    Constraint::new(coeffs, Sense::Ge, r.offset.clone())
}

/// Where an output row of one elimination step came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// Row with zero coefficient on the eliminated variable.
    Passed(usize),
    /// Combination of a positive-coefficient and a negative-coefficient row.
    Combined(usize, usize),
}

/// Bookkeeping for one elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub variable: String,
    pub rows_in: usize,
    pub positive: usize,
    pub negative: usize,
    pub passed: usize,
    pub rows_out: usize,
    /// Aligned with the step's output rows (indices into its input rows).
    pub origins: Vec<Origin>,
}

/// Result of eliminating several variables in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub eliminated: Vec<String>,
    pub system: LinIneqSystem<T>,
    pub steps: Vec<Step>,
}

/// Eliminate one variable. Output rows are normalized, deduplicated and
/// sorted; trivially-true rows are removed and contradictions kept.
pub fn fm_eliminate<T: Exact>(
    sys: &LinIneqSystem<T>,
    var: &str,
) -> Result<(LinIneqSystem<T>, Step)> {
    let k = sys.var_index(var)?;
    let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
    for (i, r) in sys.rows.iter().enumerate() {
        match r.coeffs[k].cmp(&T::zero()) {
            std::cmp::Ordering::Greater => pos.push(i),
            std::cmp::Ordering::Less => neg.push(i),
            std::cmp::Ordering::Equal => zero.push(i),
        }
    }
    let mut out: BTreeMap<Row<T>, (Origin, String)> = BTreeMap::new();
    let mut insert = |row: Row<T>, origin: Origin, label: String| {
        let n = row.normalized();
        if !n.is_trivially_true() {
            out.entry(n).or_insert((origin, label));
        }
    };
    for &i in &zero {
        let mut r = sys.rows[i].clone();
        r.coeffs.remove(k);
        insert(r, Origin::Passed(i), sys.labels[i].clone());
    }
    for &p in &pos {
        for &q in &neg {
            let rp = &sys.rows[p];
            let rq = &sys.rows[q];
            let a = rp.coeffs[k].clone();
            let b = -rq.coeffs[k].clone();
            let mut r = rp.scaled(&b).add(&rq.scaled(&a));
            debug_assert!(r.coeffs[k].is_zero());
            r.coeffs.remove(k);
            insert(r, Origin::Combined(p, q), String::new());
        }
    }
    let header = sys.drop_variable(k);
    let mut rows = Vec::with_capacity(out.len());
    let mut labels = Vec::with_capacity(out.len());
    let mut origins = Vec::with_capacity(out.len());
    for (r, (o, l)) in out {
        rows.push(r);
        labels.push(l);
        origins.push(o);
    }
    let step = Step {
        variable: var.to_string(),
        rows_in: sys.rows.len(),
        positive: pos.len(),
        negative: neg.len(),
        passed: zero.len(),
        rows_out: rows.len(),
        origins,
    };
    Ok((
        LinIneqSystem {
            rows,
            labels,
            ..header
        },
        step,
    ))
}

/// Eliminate `vars` in the given order.
pub fn fm_eliminate_all<T: Exact>(sys: &LinIneqSystem<T>, vars: &[&str]) -> Result<Projection<T>> {
    let mut seen = HashSet::new();
    for v in vars {
        if !seen.insert(*v) {
            return Err(Error::InvalidParameter(format!(
                "variable `{v}` listed twice"
            )));
        }
        sys.var_index(v)?;
    }
    let mut cur = sys.clone();
    let mut steps = Vec::with_capacity(vars.len());
    for v in vars {
        let (next, step) = fm_eliminate(&cur, v)?;
        cur = next;
        steps.push(step);
    }
    Ok(Projection {
        eliminated: vars.iter().map(|s| s.to_string()).collect(),
        system: cur,
        steps,
    })
}
