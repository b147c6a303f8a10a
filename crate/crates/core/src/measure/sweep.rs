use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::network::{build_gamma0, compound_log_singular, m_all};
use crate::rational::{self, ratio, Rational};
use crate::tropical_horn::{genericity_check, WbarWeighting};

/// Errors below this are rounding noise and excluded from slope fits.
pub const FLOOR: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub tau: Vec<f64>,
    /// `max_i |l^B_i / τ - m^T_i|`.
    pub error: Vec<f64>,
    /// The `i = n` term alone.
    pub top_error: Vec<f64>,
    /// Least-squares slope of `log e(τ)` over points above [`FLOOR`].
    pub slope: Option<f64>,
    pub weighting: WbarWeighting,
    pub phases: Vec<[f64; 2]>,
    #[serde(with = "crate::rational::serde_rational")]
    pub delta: Rational,
    pub tropical: Vec<f64>,
}

impl SweepResult {
    /// `e(τ)` nonincreasing over grid points with `τ ≥ from` until the floor.
    pub fn monotone_from(&self, from: f64) -> bool {
        let pts: Vec<f64> = self.tau.iter().zip(&self.error).filter(|(t, _)| **t >= from).map(|(_, e)| *e).collect();
        pts.windows(2).all(|w| w[1] <= w[0] || w[0] <= FLOOR || w[1] <= FLOOR)
    }
}

pub fn default_tau_grid() -> Vec<f64> {
    (1..=30).map(f64::from).collect()
}

/// The rank-two example with `x = 1`, `y = 3`, `z = 0`: diagonal `y - z`,
/// sink horizontals `z` (bottom line) and `x` (top line), and `δ = 9/10`.
pub fn rank_two_example() -> (WbarWeighting, Rational) {
    let w = WbarWeighting::new(2, vec![rational::from_i64(3)], vec![rational::from_i64(0), rational::from_i64(1)]).expect("rank-two shape");
    (w, ratio(9, 10))
}

fn fit_slope(tau: &[f64], err: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = tau.iter().zip(err).filter(|(_, e)| **e > FLOOR).map(|(t, e)| (*t, e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `e(τ)` for the lift of `w` with unit-modulus `phases` (one per `Γ₀`
/// edge, all ones when `None`). Requires `w` to be `δ`-generic.
pub fn limit_sweep(w: &WbarWeighting, phases: Option<&[Complex64]>, tau_grid: &[f64], delta: &Rational) -> Result<SweepResult> {
    if tau_grid.is_empty() {
        return Err(HornError::InvalidArgument("empty τ grid".into()));
    }
    if let Some(t) = tau_grid.iter().find(|t| !(**t >= 1.0 && t.is_finite())) {
        return Err(HornError::InvalidArgument(format!("τ = {t} is below 1")));
    }
    if tau_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(HornError::InvalidArgument("τ grid must be strictly increasing".into()));
    }
    let report = genericity_check(std::slice::from_ref(w), delta)?;
    if !report.generic {
        return Err(HornError::NotGeneric(Box::new(report)));
    }
    let g0 = build_gamma0(w.n)?;
    let exact = w.embed(&g0)?;
    let tropical: Vec<f64> = m_all(&g0, &w.embed_tropical(&g0)?)?
        .into_iter()
        .map(|m| rational::to_f64(&m.into_value().expect("Γ₀ has every multipath size")))
        .collect();
    let u: Vec<f64> = exact.iter().map(rational::to_f64).collect();
    let phases: Vec<Complex64> = match phases {
        Some(p) => p.to_vec(),
        None => vec![Complex64::new(1.0, 0.0); g0.num_edges()],
    };
    let mut error = Vec::with_capacity(tau_grid.len());
    let mut top_error = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let lb = compound_log_singular(&g0, &u, &phases, tau)?;
        let diffs: Vec<f64> = lb.iter().zip(&tropical).map(|(l, m)| (l / tau - m).abs()).collect();
        error.push(diffs.iter().cloned().fold(0.0, f64::max));
        top_error.push(*diffs.last().expect("rank ≥ 1"));
    }
    Ok(SweepResult {
        slope: fit_slope(tau_grid, &error),
        tau: tau_grid.to_vec(),
        error,
        top_error,
        weighting: w.clone(),
        phases: phases.iter().map(|z| [z.re, z.im]).collect(),
        delta: delta.clone(),
        tropical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_example_converges_to_max() {
        let (w, delta) = rank_two_example();
        let res = limit_sweep(&w, None, &default_tau_grid(), &delta).unwrap();
        assert_eq!(res.tropical[0], 3.0);
        assert!(res.error[0] > res.error[10]);
        assert!(*res.error.last().unwrap() < 1e-6);
        assert!(res.top_error.iter().all(|e| *e <= 1e-12));
        assert!(res.slope.unwrap() < -0.75 * 0.9);
    }

    #[test]
    fn single_point_grid_has_no_slope() {
        let (w, delta) = rank_two_example();
        assert!(limit_sweep(&w, None, &[5.0], &delta).unwrap().slope.is_none());
        assert!(limit_sweep(&w, None, &[0.5], &delta).is_err());
    }

    #[test]
    fn non_generic_is_rejected() {
        let w = WbarWeighting::zeros(2);
        assert!(matches!(limit_sweep(&w, None, &[1.0, 2.0], &ratio(1, 10)), Err(HornError::NotGeneric(_))));
    }
}
