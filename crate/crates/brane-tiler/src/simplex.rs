//! Exact linear programming over the rationals.
//!
//! A small dense two-phase simplex solver on `BigRational` numbers. Bland's
//! rule (always pick the lowest-index candidate) guarantees termination on
//! degenerate problems, and exact arithmetic means an "optimal" answer is
//! optimal, not optimal-up-to-rounding. Problem sizes here are tiny (tens of
//! variables), so a dense tableau is the right tool.

use num::rational::BigRational;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Outcome of an LP solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// No point satisfies the constraints.
    Infeasible,
    /// The objective is unbounded above on the feasible region.
    Unbounded,
    /// An optimal solution.
    Optimal {
        /// An optimal assignment of the variables.
        x: Vec<BigRational>,
        /// The optimal objective value.
        value: BigRational,
    },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    obj: Vec<BigRational>,
    val: BigRational,
}

impl Tableau {
    /// Rewrite the objective row in terms of the nonbasic variables.
    fn price_out(&mut self) {
        for i in 0..self.rows.len() {
            let coef = self.obj[self.basis[i]].clone();
            if coef.is_zero() {
                continue;
            }
            for j in 0..self.obj.len() {
                let d = &coef * &self.rows[i][j];
                self.obj[j] -= d;
            }
            self.val += &coef * &self.rhs[i];
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..pivot_row.len() {
                let d = &f * &pivot_row[j];
                self.rows[i][j] -= d;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for j in 0..pivot_row.len() {
                let d = &f * &pivot_row[j];
                self.obj[j] -= d;
            }
            self.val += &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Simplex iterations with Bland's rule over columns `0..allowed`.
    /// Returns false if the objective is unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ratio_i = &self.rhs[i] / &self.rows[i][c];
                        let ratio_l = &self.rhs[l] / &self.rows[l][c];
                        ratio_i < ratio_l
                            || (ratio_i == ratio_l && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            match leave {
                Some(r) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximize `c·x` subject to `a x = b`, `x ≥ 0`, exactly.
pub fn maximize(
    c: &[BigRational],
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Invariant("LP dimensions disagree".into()));
    }

    // Standard form with b ≥ 0, plus one artificial variable per row.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        if bi.is_negative() {
            rows.push(row.iter().map(|v| -v).collect());
            rhs.push(-bi);
        } else {
            rows.push(row.clone());
            rhs.push(bi.clone());
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for k in 0..m {
            row.push(if k == i { BigRational::from_integer(1.into()) } else { BigRational::zero() });
        }
    }

    // Phase 1: drive the artificial variables to zero.
    let mut phase1_obj = vec![BigRational::zero(); n + m];
    for j in n..n + m {
        phase1_obj[j] = BigRational::from_integer((-1).into());
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        obj: phase1_obj,
        val: BigRational::zero(),
    };
    tab.price_out();
    if !tab.run(n + m) {
        return Err(Error::Invariant("phase-1 objective cannot be unbounded".into()));
    }
    if tab.val.is_negative() {
        return Ok(LpOutcome::Infeasible);
    }

    // Remove artificials from the basis; a row where that is impossible is
    // a redundant constraint and is dropped.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
            } else {
                tab.rows.remove(r);
                tab.rhs.remove(r);
                tab.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    for row in tab.rows.iter_mut() {
        row.truncate(n);
    }

    // Phase 2: the real objective.
    tab.obj = c.to_vec();
    tab.obj.resize(n, BigRational::zero());
    tab.val = BigRational::zero();
    tab.price_out();
    if !tab.run(n) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        x[bi] = tab.rhs[i].clone();
    }
    // The solution must satisfy the original system exactly.
    for (row, bi) in a.iter().zip(b) {
        let lhs: BigRational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
        if lhs != *bi {
            return Err(Error::Invariant("simplex solution fails a constraint".into()));
        }
    }
    Ok(LpOutcome::Optimal { x, value: tab.val })
}
