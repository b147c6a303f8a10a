//! Haar unitaries, isospectral samplers, and matrices rebuilt from
//! Gelfand-Zeitlin data by successive arrowhead bordering.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{cholesky_reversed, CMatrix, UpperTriangular};
use crate::error::{HornError, Result};
use crate::polytope::PolytopeSampler;
use crate::tableau::Tableau;

/// Torus coordinates: `rows[k - 1]` holds the `k` angles used when passing
/// from the `k × k` stage to the `(k + 1) × (k + 1)` stage.
#[derive(Clone, Debug, PartialEq)]
pub struct GzAngles {
    pub rows: Vec<Vec<f64>>,
}

impl GzAngles {
    pub fn zeros(n: usize) -> Self {
        GzAngles { rows: (1..n).map(|k| vec![0.0; k]).collect() }
    }

    pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        GzAngles {
            rows: (1..n)
                .map(|k| (0..k).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect())
                .collect(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = self.rows.len() + 1 == n.max(1) && self.rows.iter().enumerate().all(|(k, r)| r.len() == k + 1);
        if !ok {
            return Err(HornError::InvalidArgument(format!("angles do not match rank {n}")));
        }
        Ok(())
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar unitary: Gram-Schmidt (with one reorthogonalization pass) on the
/// columns of a complex Gaussian matrix, so the triangular factor has a
/// positive diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| complex_normal(rng)).collect()).collect();
    for j in 0..n {
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                for r in 0..n {
                    let q = cols[i][r];
                    cols[j][r] -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = CMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

pub(crate) fn eigenvalues_from_cumulative(r: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    r.iter()
        .map(|&x| {
            let d = x - prev;
            prev = x;
            d
        })
        .collect()
}

/// `U diag(λ) U*` with Haar `U`, where `λ` are the increments of `r`.
pub fn sample_h_r<R: Rng + ?Sized>(r: &[f64], rng: &mut R) -> Result<CMatrix> {
    if r.is_empty() {
        return Err(HornError::ZeroRank);
    }
    let lam = eigenvalues_from_cumulative(r);
    if lam.windows(2).any(|w| w[0] < w[1]) {
        return Err(HornError::InvalidArgument("spectrum increments must be weakly decreasing".into()));
    }
    if r.len() == 1 {
        return Ok(CMatrix::from_real_diag(&lam));
    }
    let u = haar_unitary(r.len(), rng);
    Ok(u.mul(&CMatrix::from_real_diag(&lam)).mul(&u.adjoint()).hermitian_part())
}

/// Bordering data for passing from eigenvalues `mu` (k of them) to `lam`
/// (k + 1 of them): the new diagonal entry and the squared border moduli.
fn border_weights(mu: &[f64], lam: &[f64]) -> Result<(f64, Vec<f64>)> {
    let k = mu.len();
    for j in 0..k {
        if !(lam[j] > mu[j] && mu[j] > lam[j + 1]) {
            return Err(HornError::NonStrictInterlacing(format!(
                "need {} > {} > {} at stage {}",
                lam[j],
                mu[j],
                lam[j + 1],
                k
            )));
        }
    }
    let a = lam.iter().sum::<f64>() - mu.iter().sum::<f64>();
    let weights = (0..k)
        .map(|j| {
            let num: f64 = lam.iter().map(|l| mu[j] - l).product();
            let den: f64 = (0..k).filter(|&i| i != j).map(|i| mu[j] - mu[i]).product();
            -num / den
        })
        .collect::<Vec<_>>();
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(HornError::NonStrictInterlacing(format!("border weight {w} is not positive")));
    }
    Ok((a, weights))
}

/// Shared bordering recursion. `spectra[k - 1]` are the eigenvalues (descending)
/// of the `k × k` stage. With `at_end` the new index is appended (leading
/// blocks are nested), otherwise prepended (trailing blocks are nested).
fn border_chain(spectra: &[Vec<f64>], angles: &GzAngles, at_end: bool) -> Result<CMatrix> {
    let n = spectra.len();
    angles.check(n)?;
    let mut m = CMatrix::from_real_diag(&spectra[0]);
    let mut vecs = CMatrix::identity(1);
    for k in 1..n {
        let mu = &spectra[k - 1];
        let lam = &spectra[k];
        let (a, weights) = border_weights(mu, lam)?;
        let b: Vec<Complex64> = weights
            .iter()
            .zip(&angles.rows[k - 1])
            .map(|(w, &th)| Complex64::from_polar(w.sqrt(), th))
            .collect();
        // border column in the original basis
        let vb: Vec<Complex64> = (0..k).map(|r| (0..k).map(|j| vecs[(r, j)] * b[j]).sum()).collect();
        let mut next = CMatrix::zeros(k + 1);
        let (off, new) = if at_end { (0, k) } else { (1, 0) };
        for r in 0..k {
            for c in 0..k {
                next[(r + off, c + off)] = m[(r, c)];
            }
            next[(r + off, new)] = vb[r];
            next[(new, r + off)] = vb[r].conj();
        }
        next[(new, new)] = Complex64::new(a, 0.0);
        // eigenvectors of the arrowhead, mapped back
        let mut next_vecs = CMatrix::zeros(k + 1);
        for (i, &l) in lam.iter().enumerate() {
            let x: Vec<Complex64> = (0..k).map(|j| b[j] / (l - mu[j])).collect();
            let norm = (1.0 + x.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
            for r in 0..k {
                let val: Complex64 = (0..k).map(|j| vecs[(r, j)] * x[j]).sum();
                next_vecs[(r + off, i)] = val / norm;
            }
            next_vecs[(new, i)] = Complex64::new(1.0 / norm, 0.0);
        }
        m = next;
        vecs = next_vecs;
    }
    Ok(m)
}

fn spectra_of(xi: &Tableau<f64>) -> Vec<Vec<f64>> {
    (1..=xi.n()).map(|k| eigenvalues_from_cumulative(&xi.row(k)[1..])).collect()
}

/// Hermitian `K` whose leading-block tableau is `xi`, with torus
/// coordinates `angles` placed on the border entries.
pub fn reconstruct_h(xi: &Tableau<f64>, angles: &GzAngles) -> Result<CMatrix> {
    if xi.n() == 0 {
        return Err(HornError::ZeroRank);
    }
    border_chain(&spectra_of(xi), angles, true)
}

/// Largest `λ_1 - λ_n` accepted by [`reconstruct_b_pattern`]; the
/// intermediate positive matrix has condition number `exp(2 (λ_1 - λ_n))`.
pub const MAX_LOG_SPREAD: f64 = 12.0;

/// Upper-triangular `A` whose trailing-block `l^B` tableau is `u`: build the
/// positive matrix with trailing spectra `exp(2 λ)` and take its reversed
/// Cholesky factor.
pub fn reconstruct_b_pattern(u: &Tableau<f64>, angles: &GzAngles) -> Result<UpperTriangular> {
    if u.n() == 0 {
        return Err(HornError::ZeroRank);
    }
    let top = eigenvalues_from_cumulative(&u.top()[1..]);
    let spread = top[0] - top[top.len() - 1];
    if spread > MAX_LOG_SPREAD {
        return Err(HornError::DegenerateSpectrum(format!(
            "log singular value spread {spread} exceeds {MAX_LOG_SPREAD}, beyond double precision for this construction"
        )));
    }
    let spectra: Vec<Vec<f64>> = spectra_of(u).into_iter().map(|s| s.into_iter().map(|x| (2.0 * x).exp()).collect()).collect();
    let p = border_chain(&spectra, angles, false)?;
    let pivots: Vec<f64> = (1..=u.n()).map(|k| (2.0 * (u.get(k, k) - u.get(k - 1, k - 1))).exp()).collect();
    cholesky_reversed(&p, Some(&pivots))
}

/// One Liouville-distributed element of `B_r`: a uniform point of `P_r`
/// (fresh hit-and-run chain) and uniform angles.
pub fn sample_b_r<R: Rng + ?Sized>(r: &[f64], rng: &mut R) -> Result<UpperTriangular> {
    if r.len() == 1 {
        return UpperTriangular::new(CMatrix::from_real_diag(&[r[0].exp()]));
    }
    let mut chain = PolytopeSampler::new(r, rng)?;
    let u = chain.next_tableau(rng);
    let angles = GzAngles::uniform(r.len(), rng);
    reconstruct_b_pattern(&u, &angles)
}
