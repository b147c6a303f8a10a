use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{generate, Generator, Schedule};
use crate::error::{HornError, Result};
use crate::hive::{kt_member, HornTriple};
use crate::linalg::{l_map, singular_l, CMatrix};
use crate::rational::{self, ratio, Rational};
use crate::tropical_horn::{horn_triple_tropical, WbarWeighting};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForwardMode {
    Hermitian,
    Multiplicative,
    Tropical,
}

impl ForwardMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hermitian" => Ok(ForwardMode::Hermitian),
            "multiplicative" => Ok(ForwardMode::Multiplicative),
            "tropical" => Ok(ForwardMode::Tropical),
            other => Err(HornError::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForwardReport {
    pub mode: ForwardMode,
    pub n: usize,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub eps: Rational,
    pub passed: usize,
    pub pass_rate: f64,
    pub failures: Vec<HornTriple>,
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / std::f64::consts::SQRT_2
}

fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = complex_normal(rng);
        }
    }
    g.hermitian_part()
}

fn random_upper<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(rng.sample::<f64, _>(StandardNormal).exp(), 0.0);
        for j in i + 1..n {
            a[(i, j)] = complex_normal(rng);
        }
    }
    a
}

fn random_wbar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WbarWeighting {
    let mut draw = |k: usize| (0..k).map(|_| ratio(rng.random_range(-1000..=1000), 100)).collect::<Vec<_>>();
    let d = draw(n * (n - 1) / 2);
    let h = draw(n);
    WbarWeighting::new(n, d, h).expect("shape")
}

fn random_triple<R: Rng + ?Sized>(mode: ForwardMode, n: usize, rng: &mut R) -> Result<HornTriple> {
    match mode {
        ForwardMode::Tropical => horn_triple_tropical(&random_wbar(n, rng), &random_wbar(n, rng)),
        ForwardMode::Hermitian => {
            let (k1, k2) = (random_hermitian(n, rng), random_hermitian(n, rng));
            HornTriple::from_f64(&l_map(&k1)?, &l_map(&k2)?, &l_map(&k1.add(&k2))?)
        }
        ForwardMode::Multiplicative => {
            let (a, c) = (random_upper(n, rng), random_upper(n, rng));
            HornTriple::from_f64(&singular_l(&a)?, &singular_l(&c)?, &singular_l(&a.mul(&c))?)
        }
    }
}

/// Generate `count` triples with the chosen generator and test each for
/// Knutson-Tao membership at slack `eps`.
pub fn horn_forward_test<R: Rng + ?Sized>(mode: ForwardMode, n: usize, count: usize, eps: &Rational, rng: &mut R) -> Result<ForwardReport> {
    if n == 0 {
        return Err(HornError::ZeroRank);
    }
    let mut failures = Vec::new();
    for _ in 0..count {
        let t = random_triple(mode, n, rng)?;
        if !kt_member(&t, eps) {
            failures.push(t);
        }
    }
    let passed = count - failures.len();
    Ok(ForwardReport {
        mode,
        n,
        count,
        eps: eps.clone(),
        passed,
        pass_rate: if count == 0 { 1.0 } else { passed as f64 / count as f64 },
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub count: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub eps: Rational,
    pub seed: u64,
    pub failures: usize,
    pub fraction: f64,
}

/// Fraction of Hermitian-sum samples `t` whose triple `(r, s, t)` fails
/// Knutson-Tao membership at slack `eps`.
pub fn exceptional_mass_estimate(r: &[f64], s: &[f64], count: usize, eps: &Rational, schedule: &Schedule) -> Result<ExceptionalReport> {
    let sample = generate(Generator::HermitianSum, r, s, count, schedule)?;
    let rq = r.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
    let sq = s.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
    let mut failures = 0;
    for t in &sample.values {
        let tq = t.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
        if !kt_member(&HornTriple::new(rq.clone(), sq.clone(), tq)?, eps) {
            failures += 1;
        }
    }
    Ok(ExceptionalReport {
        r: r.to_vec(),
        s: s.to_vec(),
        count,
        eps: eps.clone(),
        seed: schedule.seed,
        failures,
        fraction: if count == 0 { 0.0 } else { failures as f64 / count as f64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn small_forward_runs_pass() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let eps = rational::parse("1e-8").unwrap();
        for mode in [ForwardMode::Tropical, ForwardMode::Hermitian, ForwardMode::Multiplicative] {
            let e = if mode == ForwardMode::Tropical { Rational::from_integer(0.into()) } else { eps.clone() };
            let rep = horn_forward_test(mode, 3, 30, &e, &mut rng).unwrap();
            assert_eq!(rep.pass_rate, 1.0, "{mode:?}: {:?}", rep.failures.first());
        }
    }

    #[test]
    fn over_strict_slack_finds_mass() {
        let eps = rational::parse("-0.1").unwrap();
        let rep = exceptional_mass_estimate(&[2.0, 0.0], &[1.0, 0.0], 200, &eps, &Schedule::seeded(3)).unwrap();
        assert!(rep.fraction > 0.0);
    }
}
