//! Dense tableau simplex for `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`, `b ≥ 0`.
//!
//! The slack basis is feasible, so no phase one is needed. Pivoting follows
//! Bland's rule (lowest entering index, lowest leaving basic index on ratio
//! ties), which terminates on degenerate problems. Works over any
//! [`LpScalar`]; with an exact type every comparison is exact.

use crate::error::{Error, Result};
use crate::scalar::LpScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<F> {
    pub objective: Vec<F>,
    /// Dense rows of `A`.
    pub rows: Vec<Vec<F>>,
    pub rhs: Vec<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { value: F, x: Vec<F>, pivots: usize },
    Unbounded,
}

impl<F: LpScalar> LinearProgram<F> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![F::zero(); num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `Σ coeffs ≤ rhs` from sparse `(var, coeff)` pairs.
    pub fn add_row(&mut self, coeffs: &[(usize, F)], rhs: F) {
        let mut row = vec![F::zero(); self.num_vars()];
        for (j, a) in coeffs {
            row[*j] = row[*j].clone() + a.clone();
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn solve(&self) -> Result<LpOutcome<F>> {
        let n = self.num_vars();
        let m = self.rows.len();
        let tol = F::tolerance();
        if self.rhs.iter().any(|b| *b < F::zero()) {
            return Err(Error::InvalidArgument("right-hand sides must be non-negative".into()));
        }
        let width = n + m + 1;
        // row m is the objective row holding −c; the last column is the rhs
        let mut t: Vec<Vec<F>> = Vec::with_capacity(m + 1);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!("row {i} has {} coefficients", row.len())));
            }
            let mut r = row.clone();
            r.resize(width, F::zero());
            r[n + i] = F::one();
            r[width - 1] = self.rhs[i].clone();
            t.push(r);
        }
        let mut z: Vec<F> = self.objective.iter().map(|c| -c.clone()).collect();
        z.resize(width, F::zero());
        t.push(z);
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut pivots = 0usize;

        while let Some(col) = (0..n + m).find(|&j| t[m][j] < -tol.clone()) {
            let mut leave: Option<(usize, F)> = None;
            for i in 0..m {
                if t[i][col] > tol {
                    let ratio = t[i][width - 1].clone() / t[i][col].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(LpOutcome::Unbounded);
            };
            pivot(&mut t, row, col);
            basis[row] = col;
            pivots += 1;
        }

        let mut x = vec![F::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i][width - 1].clone();
            }
        }
        Ok(LpOutcome::Optimal {
            value: t[m][width - 1].clone(),
            x,
            pivots,
        })
    }
}

fn pivot<F: LpScalar>(t: &mut [Vec<F>], row: usize, col: usize) {
    let width = t[row].len();
    let p = t[row][col].clone();
    for j in 0..width {
        t[row][j] = t[row][j].clone() / p.clone();
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col] == F::zero() {
            continue;
        }
        let f = r[col].clone();
        for j in 0..width {
            if pivot_row[j] != F::zero() {
                r[j] = r[j].clone() - f.clone() * pivot_row[j].clone();
            }
        }
    }
}
