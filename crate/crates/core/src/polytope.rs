//! Hit-and-run sampling of the Gelfand-Zeitlin polytope `P_r`: tableaux with
//! top row `r`, `l^k_0 = 0`, and the interlacing inequalities.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{HornError, Result};
use crate::hive::gz_rhombi;
use crate::linalg::GzAngles;
use crate::tableau::{Role, Tableau};

pub const BURN_IN: usize = 1000;
pub const THINNING: usize = 50;

/// One hit-and-run chain on `P_r`. Coordinates are `l^k_i` for
/// `1 ≤ i ≤ k ≤ n - 1`, row by row.
#[derive(Clone, Debug)]
pub struct PolytopeSampler {
    r: Vec<f64>,
    index: Vec<Vec<Option<usize>>>,
    constraints: Vec<(Vec<(usize, f64)>, f64)>,
    point: Vec<f64>,
    thinning: usize,
}

fn strict_eigenvalues(r: &[f64]) -> Result<Vec<f64>> {
    let lam: Vec<f64> = (0..r.len()).map(|i| if i == 0 { r[0] } else { r[i] - r[i - 1] }).collect();
    if lam.iter().any(|x| !x.is_finite()) {
        return Err(HornError::InvalidArgument("non-finite spectrum".into()));
    }
    if let Some(w) = lam.windows(2).find(|w| !(w[0] > w[1])) {
        return Err(HornError::DegenerateSpectrum(format!("eigenvalues {} and {} are not strictly decreasing", w[0], w[1])));
    }
    Ok(lam)
}

impl PolytopeSampler {
    /// Chain started at the midpoint-interlacing pattern, after burn-in.
    pub fn new<R: Rng + ?Sized>(r: &[f64], rng: &mut R) -> Result<Self> {
        Self::with_params(r, BURN_IN, THINNING, rng)
    }

    pub fn with_params<R: Rng + ?Sized>(r: &[f64], burn_in: usize, thinning: usize, rng: &mut R) -> Result<Self> {
        let n = r.len();
        if n == 0 {
            return Err(HornError::ZeroRank);
        }
        let lam_top = strict_eigenvalues(r)?;
        let mut index = vec![Vec::new(); n + 1];
        let mut dim = 0;
        for (k, row) in index.iter_mut().enumerate() {
            *row = (0..=k).map(|i| (i > 0 && k < n).then(|| { dim += 1; dim - 1 })).collect();
        }
        let mut constraints = Vec::new();
        for rh in gz_rhombi(n) {
            let mut terms: Vec<(usize, f64)> = Vec::new();
            let mut constant = 0.0;
            for (node, s) in rh.plus.iter().map(|p| (p, 1.0)).chain(rh.minus.iter().map(|m| (m, -1.0))) {
                let (k, i) = *node;
                match index[k][i] {
                    Some(j) => match terms.iter_mut().find(|t| t.0 == j) {
                        Some(t) => t.1 += s,
                        None => terms.push((j, s)),
                    },
                    None if k == n => constant += s * if i == 0 { 0.0 } else { r[i - 1] },
                    None => {}
                }
            }
            terms.retain(|t| t.1 != 0.0);
            constraints.push((terms, constant));
        }
        let mut point = vec![0.0; dim];
        let mut lam = lam_top;
        for k in (1..n).rev() {
            let mid: Vec<f64> = (0..k).map(|i| 0.5 * (lam[i] + lam[i + 1])).collect();
            let mut acc = 0.0;
            for (i, x) in mid.iter().enumerate() {
                acc += x;
                point[index[k][i + 1].expect("interior coordinate")] = acc;
            }
            lam = mid;
        }
        let mut s = PolytopeSampler { r: r.to_vec(), index, constraints, point, thinning };
        for _ in 0..burn_in {
            s.step(rng);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let d = self.dim();
        if d == 0 {
            return;
        }
        let mut dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in dir.iter_mut() {
            *x /= norm;
        }
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (terms, constant) in &self.constraints {
            let val: f64 = constant + terms.iter().map(|&(j, a)| a * self.point[j]).sum::<f64>();
            let rate: f64 = terms.iter().map(|&(j, a)| a * dir[j]).sum();
            if rate > 0.0 {
                lo = lo.max(-val / rate);
            } else if rate < 0.0 {
                hi = hi.min(-val / rate);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return;
        }
        let t = lo + (hi - lo) * rng.random::<f64>();
        for (x, dx) in self.point.iter_mut().zip(&dir) {
            *x += t * dx;
        }
    }

    /// Advance by the thinning interval and return the current pattern.
    pub fn next_tableau<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Tableau<f64> {
        for _ in 0..self.thinning {
            self.step(rng);
        }
        self.current()
    }

    pub fn current(&self) -> Tableau<f64> {
        let n = self.r.len();
        let rows = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| match self.index[k][i] {
                        Some(j) => self.point[j],
                        None if k == n && i > 0 => self.r[i - 1],
                        None => 0.0,
                    })
                    .collect()
            })
            .collect();
        Tableau::from_rows(Role::Gz, rows).expect("tableau shape")
    }
}

/// `count` approximately uniform points of `P_r` from one chain.
pub fn sample_p_r<R: Rng + ?Sized>(r: &[f64], count: usize, rng: &mut R) -> Result<Vec<Tableau<f64>>> {
    let mut chain = PolytopeSampler::new(r, rng)?;
    Ok((0..count).map(|_| chain.next_tableau(rng)).collect())
}

/// Uniform torus angles paired with a uniform pattern; the pair is a
/// Liouville sample in action-angle form.
pub fn sample_action_angle<R: Rng + ?Sized>(chain: &mut PolytopeSampler, rng: &mut R) -> (Tableau<f64>, GzAngles) {
    let u = chain.next_tableau(rng);
    let angles = GzAngles::uniform(u.n(), rng);
    (u, angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hive::gz_check_slack;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn n2_is_uniform_on_interval() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let samples = sample_p_r(&[2.0, 0.0], 10_000, &mut rng).unwrap();
        let xs: Vec<f64> = samples.iter().map(|t| *t.get(1, 1)).collect();
        assert!(xs.iter().all(|&x| (-2.0..=2.0).contains(&x)));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sigma = (16.0f64 / 12.0).sqrt() / (xs.len() as f64).sqrt();
        assert!(mean.abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn samples_stay_in_cone() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for t in sample_p_r(&[3.0, 4.0, 3.5, 2.0], 500, &mut rng).unwrap() {
            assert!(gz_check_slack(&t, 1e-12));
            assert_eq!(t.top(), &[0.0, 3.0, 4.0, 3.5, 2.0]);
        }
    }

    #[test]
    fn rejects_degenerate() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        assert!(matches!(PolytopeSampler::new(&[1.0, 2.0], &mut rng), Err(HornError::DegenerateSpectrum(_))));
    }
}
