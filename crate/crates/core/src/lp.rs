//! Feasibility of `A x ≥ b` over exact rationals with free `x`.
//!
//! Phase-1 simplex on a dense tableau. Each free variable is split into
//! `x = p - q`, every row gets a surplus and an artificial column, and the
//! sum of artificials is minimized with Bland's rule, so the method
//! terminates without cycling.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, Default)]
pub struct FeasibilityProblem {
    pub num_vars: usize,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize) -> Self {
        FeasibilityProblem { num_vars, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Add `row · x ≥ rhs`.
    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.num_vars);
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, b)| {
            let lhs = row.iter().zip(x).fold(Rational::zero(), |acc, (a, v)| acc + a * v);
            lhs >= *b
        })
    }

    /// A feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Rational>> {
        let nv = self.num_vars;
        let m = self.rows.len();
        if nv == 0 {
            return self.rhs.iter().all(|b| !b.is_positive()).then(Vec::new);
        }
        if m == 0 {
            return Some(vec![Rational::zero(); nv]);
        }
        // columns: p (nv) | q (nv) | surplus (m) | artificial (m) | rhs
        let cols = 2 * nv + 2 * m;
        let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
        for (i, (row, b)) in self.rows.iter().zip(&self.rhs).enumerate() {
            let flip = b.is_negative();
            let s = |v: &Rational| if flip { -v.clone() } else { v.clone() };
            let mut r = vec![Rational::zero(); cols + 1];
            for j in 0..nv {
                r[j] = s(&row[j]);
                r[nv + j] = -s(&row[j]);
            }
            r[2 * nv + i] = s(&-Rational::from_integer(1.into()));
            r[2 * nv + m + i] = Rational::from_integer(1.into());
            r[cols] = s(b);
            t.push(r);
        }
        // objective row: reduced costs of minimizing the artificial sum
        let mut obj = vec![Rational::zero(); cols + 1];
        for r in &t {
            for j in 0..cols + 1 {
                if j < 2 * nv + m || j == cols {
                    obj[j] -= &r[j];
                }
            }
        }
        t.push(obj);
        let mut basis: Vec<usize> = (0..m).map(|i| 2 * nv + m + i).collect();

        loop {
            let entering = (0..cols).find(|&j| t[m][j].is_negative());
            let Some(e) = entering else { break };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                if t[i][e].is_positive() {
                    let ratio = &t[i][cols] / &t[i][e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // phase 1 is bounded below by zero, so a pivot row always exists
            let (l, _) = leave.expect("phase-1 objective is bounded");
            pivot(&mut t, l, e);
            basis[l] = e;
        }
        if !t[m][cols].is_zero() {
            return None;
        }
        let mut x = vec![Rational::zero(); nv];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < nv {
                x[bv] += &t[i][cols];
            } else if bv < 2 * nv {
                x[bv - nv] -= &t[i][cols];
            }
        }
        debug_assert!(self.is_satisfied_by(&x));
        Some(x)
    }
}

fn pivot(t: &mut [Vec<Rational>], l: usize, e: usize) {
    let p = t[l][e].clone();
    for v in t[l].iter_mut() {
        *v /= &p;
    }
    let prow = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == l || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
