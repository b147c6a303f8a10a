//! Small dense complex matrices: a cyclic Jacobi eigensolver for Hermitian
//! input, the cumulative spectrum maps `l` and `l^B`, Gelfand-Zeitlin
//! tableaux of nested submatrices, and reconstruction from such tableaux.

mod reconstruct;

pub use reconstruct::{
    haar_unitary, reconstruct_b_pattern, reconstruct_h, sample_b_r, sample_h_r, GzAngles, MAX_LOG_SPREAD,
};

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{HornError, Result};
use crate::tableau::{Role, Tableau};

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(HornError::InvalidArgument("matrix must be square".into()));
        }
        Ok(CMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    pub fn from_matrix(m: &crate::matrix::Matrix<Complex64>) -> Self {
        assert_eq!(m.rows(), m.cols());
        CMatrix { n: m.rows(), data: m.to_rows().into_iter().flatten().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        CMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        CMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|K_ij - conj(K_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(K + K*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale(0.5)
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    pub fn leading(&self, k: usize) -> Self {
        self.submatrix(&(0..k).collect::<Vec<_>>())
    }

    pub fn trailing(&self, k: usize) -> Self {
        self.submatrix(&(self.n - k..self.n).collect::<Vec<_>>())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Rectangular submatrix by row and column index sets.
    pub fn minor_matrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len());
        let mut out = Self::zeros(rows.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| a[x * n + c].norm().total_cmp(&a[y * n + c].norm())).unwrap();
            if a[p * n + c].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for r in c + 1..n {
                let f = a[r * n + c] / piv;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in c..n {
                    let v = a[c * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    /// `[[ [re, im], ... ], ...]`.
    pub fn to_json_value(&self) -> Value {
        Value::Array(
            (0..self.n)
                .map(|i| Value::Array((0..self.n).map(|j| serde_json::json!([self[(i, j)].re, self[(i, j)].im])).collect()))
                .collect(),
        )
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| HornError::Parse("matrix must be an array of rows".into()))?;
        let parse_entry = |e: &Value| -> Result<Complex64> {
            match e {
                Value::Array(p) if p.len() == 2 => {
                    let re = p[0].as_f64().ok_or_else(|| HornError::Parse("bad real part".into()))?;
                    let im = p[1].as_f64().ok_or_else(|| HornError::Parse("bad imaginary part".into()))?;
                    Ok(Complex64::new(re, im))
                }
                Value::Number(x) => Ok(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
                other => Err(HornError::Parse(format!("bad matrix entry {other}"))),
            }
        };
        let data = rows
            .iter()
            .map(|r| r.as_array().ok_or_else(|| HornError::Parse("row must be an array".into()))?.iter().map(parse_entry).collect())
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        let m = Self::from_rows(data)?;
        if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HornError::Parse("matrix has non-finite entries".into()));
        }
        Ok(m)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// An upper-triangular matrix with strictly positive real diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperTriangular(CMatrix);

impl UpperTriangular {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_upper_triangular() {
            return Err(HornError::InvalidArgument("matrix has nonzero entries below the diagonal".into()));
        }
        for i in 0..m.n() {
            let d = m[(i, i)];
            if !(d.re > 0.0) || d.im != 0.0 {
                return Err(HornError::InvalidArgument(format!("diagonal entry {i} is not positive real")));
            }
        }
        Ok(UpperTriangular(m))
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}

fn check_hermitian(k: &CMatrix) -> Result<()> {
    let defect = k.hermitian_defect();
    if !(defect <= 1e-10 * (1.0 + k.frobenius())) {
        return Err(HornError::NonHermitian { asymmetry: defect });
    }
    Ok(())
}

/// Eigenvalues (descending) and unitary eigenvectors (columns) of a
/// Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eigh(k: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(k)?;
    let n = k.n();
    let mut a = k.hermitian_part();
    let mut v = CMatrix::identity(n);
    let norm = a.frobenius();
    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut converged = norm == 0.0 || off(&a) <= JACOBI_TOL * norm;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(HornError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off(&a) <= JACOBI_TOL * norm;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, new)] = v[(r, old)];
        }
    }
    Ok((values, vecs))
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let c = a[(p, q)];
    let mag = c.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.n();
    let phase = c / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    // U = diag(1, conj(phase)) * [[cs, sn], [-sn, cs]]
    let upp = Complex64::new(cs, 0.0);
    let upq = Complex64::new(sn, 0.0);
    let uqp = -phase.conj() * sn;
    let uqq = phase.conj() * cs;
    for r in 0..n {
        let x = a[(r, p)];
        let y = a[(r, q)];
        a[(r, p)] = x * upp + y * uqp;
        a[(r, q)] = x * upq + y * uqq;
    }
    for col in 0..n {
        let x = a[(p, col)];
        let y = a[(q, col)];
        a[(p, col)] = upp.conj() * x + uqp.conj() * y;
        a[(q, col)] = upq.conj() * x + uqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    for r in 0..n {
        let x = v[(r, p)];
        let y = v[(r, q)];
        v[(r, p)] = x * upp + y * uqp;
        v[(r, q)] = x * upq + y * uqq;
    }
}

pub fn eigvalsh(k: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(k)?.0)
}

fn cumulative(xs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    xs.into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// `l_i(K) = λ_1 + ... + λ_i`.
pub fn l_map(k: &CMatrix) -> Result<Vec<f64>> {
    Ok(cumulative(eigvalsh(k)?))
}

/// `l^B_i(A) = log σ_1 + ... + log σ_i`, read off as the log of the top
/// singular value of the `i`-th compound matrix of `A`.
pub fn singular_l(a: &CMatrix) -> Result<Vec<f64>> {
    let n = a.n();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let sets = crate::matrix::subsets(n, k);
        let mut c = CMatrix::zeros(sets.len());
        for (p, rows) in sets.iter().enumerate() {
            for (q, cols) in sets.iter().enumerate() {
                c[(p, q)] = a.minor_matrix(rows, cols).det();
            }
        }
        let top = eigvalsh(&c.mul(&c.adjoint()))?[0];
        if !(top > 0.0) {
            return Err(HornError::Singular);
        }
        out.push(0.5 * top.ln());
    }
    Ok(out)
}

fn gz_tableau<F: Fn(usize) -> Result<Vec<f64>>>(n: usize, row: F) -> Result<Tableau<f64>> {
    let mut short = Vec::with_capacity(n);
    for k in 1..=n {
        short.push(row(k)?);
    }
    Tableau::gz_from_short(Role::Gz, short)
}

/// Row `k` is `l` of the leading `k × k` block.
pub fn gz_h(k: &CMatrix) -> Result<Tableau<f64>> {
    check_hermitian(k)?;
    gz_tableau(k.n(), |j| l_map(&k.leading(j)))
}

/// Row `k` is `l^B` of the trailing `k × k` block, or of the leading block
/// when `leading` is set.
pub fn gz_b(a: &CMatrix, leading: bool) -> Result<Tableau<f64>> {
    gz_tableau(a.n(), |j| singular_l(&if leading { a.leading(j) } else { a.trailing(j) }))
}

/// Upper-triangular `A` with positive diagonal and `AA* = P`, from the
/// Cholesky factor of the index-reversed matrix.
pub fn upper_cholesky(p: &CMatrix) -> Result<UpperTriangular> {
    cholesky_reversed(p, None)
}

/// [`upper_cholesky`] with the squared diagonal of `A`, bottom entry first,
/// supplied rather than recomputed.
pub(crate) fn cholesky_reversed(p: &CMatrix, pivots: Option<&[f64]>) -> Result<UpperTriangular> {
    check_hermitian(p)?;
    let n = p.n();
    let rev = |i: usize| n - 1 - i;
    let mut jpj = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            jpj[(i, j)] = p[(rev(i), rev(j))];
        }
    }
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let d = match pivots {
            Some(pv) => pv[j],
            None => jpj[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>(),
        };
        if !(d > 0.0) {
            return Err(HornError::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = jpj[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = l[(rev(i), rev(j))];
        }
    }
    UpperTriangular::new(a)
}

/// `σ_k(A) = Σ |det A_{I,J}|²` over `k`-subsets, which equals the `k`-th
/// elementary symmetric function of `spec(AA*)`.
pub fn sigma_values(a: &CMatrix) -> Vec<f64> {
    let n = a.n();
    (1..=n)
        .map(|k| {
            let subsets = crate::matrix::subsets(n, k);
            let mut total = 0.0;
            for i_set in &subsets {
                for j_set in &subsets {
                    total += a.minor_matrix(i_set, j_set).det().norm_sqr();
                }
            }
            total
        })
        .collect()
}

/// Elementary symmetric polynomials `e_1..e_n`.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (m, &x) in xs.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    e[1..].to_vec()
}
