//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Used as an independent oracle for the Fourier–Motzkin projections:
//! witness search for eliminated variables and redundancy certificates.

use crate::scalar::Exact;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

/// `coeffs · x (sense) rhs` over free variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

impl<T> Constraint<T> {
    pub fn new(coeffs: Vec<T>, sense: Sense, rhs: T) -> Self {
        Constraint { coeffs, sense, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Infeasible,
    Unbounded,
    Optimal { value: T, point: Vec<T> },
}

impl<T> LpOutcome<T> {
    pub fn point(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

struct Tableau<T> {
    // rows of [coeffs | rhs]
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    // reduced costs with the negated objective value in the last slot
    obj: Vec<T>,
}

impl<T: Exact> Tableau<T> {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland-rule simplex over columns `< limit`. Returns false if unbounded.
    fn run(&mut self, limit: usize) -> bool {
        let last = self.width();
        loop {
            let entering = (0..limit).find(|&j| self.obj[j] < T::zero());
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                if self.a[i][j] > T::zero() {
                    let ratio = self.a[i][last].clone() / self.a[i][j].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => {
                            ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// Minimize `objective · x` subject to `constraints`, all variables free.
pub fn minimize<T: Exact>(objective: &[T], constraints: &[Constraint<T>]) -> LpOutcome<T> {
    let nv = objective.len();
    // columns: u (nv), v (nv), one slack per inequality, then artificials
    let n_slack = constraints.iter().filter(|c| c.sense != Sense::Eq).count();
    let n = 2 * nv + n_slack;
    let m = constraints.len();
    let width = n + m;
    let mut a = Vec::with_capacity(m);
    let mut slack = 2 * nv;
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), nv, "constraint arity");
        let mut row = vec![T::zero(); width + 1];
        for (k, v) in c.coeffs.iter().enumerate() {
            row[k] = v.clone();
            row[nv + k] = -v.clone();
        }
        match c.sense {
            Sense::Ge => {
                row[slack] = -T::one();
                slack += 1;
            }
            Sense::Le => {
                row[slack] = T::one();
                slack += 1;
            }
            Sense::Eq => {}
        }
        row[width] = c.rhs.clone();
        if row[width] < T::zero() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[n + i] = T::one();
        a.push(row);
    }
    // phase 1: minimize the sum of artificials
    let mut obj = vec![T::zero(); width + 1];
    for row in &a {
        for j in 0..n {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[width] = obj[width].clone() - row[width].clone();
    }
    let mut t = Tableau {
        a,
        basis: (n..n + m).collect(),
        obj,
    };
    t.run(n);
    if t.obj[width] != T::zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.a.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.a[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.a.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    // phase 2
    let mut cost = vec![T::zero(); n];
    for k in 0..nv {
        cost[k] = objective[k].clone();
        cost[nv + k] = -objective[k].clone();
    }
    let mut obj = vec![T::zero(); width + 1];
    obj[..n].clone_from_slice(&cost);
    for (row, &b) in t.a.iter().zip(&t.basis) {
        let cb = cost[b].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..n {
            obj[j] = obj[j].clone() - cb.clone() * row[j].clone();
        }
        obj[width] = obj[width].clone() - cb.clone() * row[width].clone();
    }
    for j in n..width {
        obj[j] = T::zero();
    }
    t.obj = obj;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (row, &b) in t.a.iter().zip(&t.basis) {
        if b < n {
            x[b] = row[width].clone();
        }
    }
    let point: Vec<T> = (0..nv).map(|k| x[k].clone() - x[nv + k].clone()).collect();
    LpOutcome::Optimal {
        value: -t.obj[width].clone(),
        point,
    }
}

/// Any point satisfying the constraints.
pub fn feasible_point<T: Exact>(nv: usize, constraints: &[Constraint<T>]) -> Option<Vec<T>> {
    match minimize(&vec![T::zero(); nv], constraints) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn z(n: i64) -> BigRational {
        q(n, 1)
    }

    #[test]
    fn small_lp() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0  → optimum at (8/5, 6/5)
        let cons = vec![
            Constraint::new(vec![z(1), z(2)], Sense::Le, z(4)),
            Constraint::new(vec![z(3), z(1)], Sense::Le, z(6)),
            Constraint::new(vec![z(1), z(0)], Sense::Ge, z(0)),
            Constraint::new(vec![z(0), z(1)], Sense::Ge, z(0)),
        ];
        match minimize(&[z(-1), z(-1)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(-14, 5));
                assert_eq!(point, vec![q(8, 5), q(6, 5)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = vec![
            Constraint::new(vec![z(1)], Sense::Ge, z(2)),
            Constraint::new(vec![z(1)], Sense::Le, z(1)),
        ];
        assert_eq!(minimize(&[z(1)], &cons), LpOutcome::Infeasible);
        let cons = vec![Constraint::new(vec![z(1)], Sense::Ge, z(2))];
        assert_eq!(minimize(&[z(-1)], &cons), LpOutcome::Unbounded);
        match minimize(&[z(1)], &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, z(2)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn equality_and_redundant_rows() {
        let cons = vec![
            Constraint::new(vec![z(1), z(1)], Sense::Eq, z(3)),
            Constraint::new(vec![z(2), z(2)], Sense::Eq, z(6)),
            Constraint::new(vec![z(1), z(-1)], Sense::Eq, z(1)),
        ];
        let p = feasible_point(2, &cons).unwrap();
        assert_eq!(p, vec![z(2), z(1)]);
    }

    proptest! {
        // box-constrained linear objective: optimum is at a corner, computable by hand
        #[test]
        fn box_optimum(c in proptest::collection::vec(-5i64..5, 3), lo in proptest::collection::vec(-5i64..0, 3), hi in proptest::collection::vec(0i64..5, 3)) {
            let mut cons = Vec::new();
            for k in 0..3 {
                let mut e = vec![z(0); 3];
                e[k] = z(1);
                cons.push(Constraint::new(e.clone(), Sense::Ge, z(lo[k])));
                cons.push(Constraint::new(e, Sense::Le, z(hi[k])));
            }
            let obj: Vec<BigRational> = c.iter().map(|&v| z(v)).collect();
            let want: i64 = (0..3).map(|k| if c[k] >= 0 { c[k] * lo[k] } else { c[k] * hi[k] }).sum();
            match minimize(&obj, &cons) {
                LpOutcome::Optimal { value, .. } => prop_assert_eq!(value, z(want)),
                o => prop_assert!(false, "{:?}", o),
            }
        }
    }
}
