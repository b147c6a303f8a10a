use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::EmpiricalSample;
use crate::error::{HornError, Result};

/// The scalar statistic a vector sample is reduced to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    Coordinate(usize),
    Direction(Vec<f64>),
}

impl Projection {
    pub fn apply(&self, v: &[f64]) -> f64 {
        match self {
            Projection::Coordinate(i) => v[*i],
            Projection::Direction(d) => d.iter().zip(v).map(|(a, b)| a * b).sum(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KsKind {
    SampleVsSample,
    SampleVsCdf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub sizes: Vec<usize>,
    pub kind: KsKind,
    pub projection: Projection,
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Sup distance between the two empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sup distance between the empirical CDF and `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(a: &[f64], cdf: F) -> f64 {
    let a = sorted(a);
    let n = a.len() as f64;
    a.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs())
    })
}

/// Projected values are compared on this grid, so rounding jitter on a
/// constant projection (such as the trace) does not count as distance.
pub const RESOLUTION: f64 = 1e-9;

fn quantized(xs: Vec<f64>) -> Vec<f64> {
    xs.into_iter().map(|x| (x / RESOLUTION).round() * RESOLUTION).collect()
}

fn nonempty(s: &EmpiricalSample) -> Result<()> {
    if s.values.is_empty() {
        Err(HornError::EmptySample)
    } else {
        Ok(())
    }
}

pub fn ks_distance(a: &EmpiricalSample, b: &EmpiricalSample, projection: &Projection) -> Result<KsResult> {
    nonempty(a)?;
    nonempty(b)?;
    Ok(KsResult {
        statistic: ks_two_sample(&quantized(a.project(projection)), &quantized(b.project(projection))),
        sizes: vec![a.count, b.count],
        kind: KsKind::SampleVsSample,
        projection: projection.clone(),
    })
}

pub fn ks_distance_cdf<F: Fn(f64) -> f64>(a: &EmpiricalSample, cdf: F, projection: &Projection) -> Result<KsResult> {
    nonempty(a)?;
    Ok(KsResult {
        statistic: ks_one_sample(&quantized(a.project(projection)), cdf),
        sizes: vec![a.count],
        kind: KsKind::SampleVsCdf,
        projection: projection.clone(),
    })
}

/// `count` unit vectors in `ℝ^n`, fixed by `seed`.
pub fn random_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect()
}

/// CDF of the first coordinate of `μ_{r,s}` for `n = 2`. With half-widths
/// `ρ`, `σ` of the two spectra, the top eigenvalue of the sum minus the
/// centre has density `t / (2ρσ)` on `[|ρ - σ|, ρ + σ]`.
pub fn dh_cdf_n2(r: &[f64], s: &[f64]) -> Result<impl Fn(f64) -> f64> {
    if r.len() != 2 || s.len() != 2 {
        return Err(HornError::InvalidArgument("closed form needs n = 2".into()));
    }
    let half = |v: &[f64]| {
        let (a, b) = (v[0], v[1] - v[0]);
        ((a + b) / 2.0, (a - b) / 2.0)
    };
    let (cr, rho) = half(r);
    let (cs, sigma) = half(s);
    if rho <= 0.0 || sigma <= 0.0 {
        return Err(HornError::DegenerateSpectrum("closed form needs distinct eigenvalues".into()));
    }
    let (lo, hi) = ((rho - sigma).abs(), rho + sigma);
    let centre = cr + cs;
    Ok(move |x: f64| {
        let t = x - centre;
        if t <= lo {
            0.0
        } else if t >= hi {
            1.0
        } else {
            (t * t - lo * lo) / (4.0 * rho * sigma)
        }
    })
}
