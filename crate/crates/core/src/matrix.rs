//! Dense rectangular matrices over a [`Semiring`].

use crate::semiring::{Ring, Semiring};
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Semiring> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<R, F: Fn(&S) -> R>(&self, f: F) -> Matrix<R> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Submatrix on 0-based row set `rows` and column set `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Semiring permanent; for the tropical semiring this is the optimal
    /// assignment value.
    pub fn permanent(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut best = S::zero();
        for_each_permutation(self.rows, |perm, _| {
            let term = perm
                .iter()
                .enumerate()
                .fold(S::one(), |acc, (i, &j)| acc.mul(&self[(i, j)]));
            best = best.add(&term);
        });
        best
    }
}

impl<S: Ring> Matrix<S> {
    /// Leibniz expansion. Exact for exact rings; intended for k ≤ 8.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut total = S::zero();
        for_each_permutation(self.rows, |perm, odd| {
            let term = perm
                .iter()
                .enumerate()
                .fold(S::one(), |acc, (i, &j)| acc.mul(&self[(i, j)]));
            total = if odd { total.sub(&term) } else { total.add(&term) };
        });
        total
    }
}

impl Matrix<BigRational> {
    /// Gauss-Jordan inverse over ℚ; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        assert_eq!(n, self.cols, "inverse of a non-square matrix");
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            inv.swap(c, p);
            let pv = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &pv;
                inv[c][j] /= &pv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let (x, y) = (&f * &a[c][j], &f * &inv[c][j]);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
        Some(Self::from_rows(inv))
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(BigRational::zero(), |acc, (a, x)| if a.is_zero() { acc } else { acc + a * x }))
            .collect()
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Heap's algorithm; the callback receives each permutation and its parity.
fn for_each_permutation<F: FnMut(&[usize], bool)>(n: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut odd = false;
    f(&perm, odd);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            f(&perm, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, Rational};

    #[test]
    fn determinant_small() {
        let m: Matrix<Rational> = Matrix::from_rows(vec![
            vec![from_i64(2), from_i64(1), from_i64(0)],
            vec![from_i64(1), from_i64(3), from_i64(1)],
            vec![from_i64(0), from_i64(1), from_i64(4)],
        ]);
        assert_eq!(m.det(), from_i64(18));
        assert_eq!(Matrix::<Rational>::identity(4).det(), from_i64(1));
        assert_eq!(Matrix::<Rational>::zeros(0, 0).det(), from_i64(1));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
