//! Monte Carlo experiments: samplers for the three pushforward measures on
//! `Π_{r,s}`, Kolmogorov-Smirnov comparisons, the `τ`-sweep of the
//! multiplicative-to-tropical limit, forward cone inclusion tests, and the
//! exceptional-mass estimate.
//!
//! Sampling is split into chunks of fixed size. Chunk `i` draws from a
//! ChaCha20 stream seeded with the experiment seed and stream id `i`, so the
//! aggregate sample does not depend on how chunks are scheduled on threads.

mod forward;
mod ks;
mod sweep;

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::linalg::{haar_unitary, l_map, reconstruct_b_pattern, singular_l, CMatrix, GzAngles};
use crate::polytope::PolytopeSampler;
use crate::tropical_horn::{find_delta0_chamber, kappa_f64, ChamberMap};

pub use forward::{exceptional_mass_estimate, horn_forward_test, ExceptionalReport, ForwardMode, ForwardReport};
pub use ks::{dh_cdf_n2, ks_distance, ks_distance_cdf, ks_one_sample, ks_two_sample, random_directions, RESOLUTION, KsKind, KsResult, Projection};
pub use sweep::{default_tau_grid, limit_sweep, rank_two_example, SweepResult, FLOOR};

pub const DEFAULT_CHUNK: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    HermitianSum,
    Multiplicative,
    TropicalKappa,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::HermitianSum, Generator::Multiplicative, Generator::TropicalKappa];

    pub fn tag(self) -> &'static str {
        match self {
            Generator::HermitianSum => "hermitian-sum",
            Generator::Multiplicative => "multiplicative",
            Generator::TropicalKappa => "tropical-kappa",
        }
    }

    pub fn from_mode(mode: &str) -> Result<Self> {
        match mode {
            "hermitian" | "hermitian-sum" => Ok(Generator::HermitianSum),
            "multiplicative" => Ok(Generator::Multiplicative),
            "tropical" | "tropical-kappa" => Ok(Generator::TropicalKappa),
            other => Err(HornError::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Seed, chunk size and worker count for a chunked run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub seed: u64,
    pub chunk_size: usize,
    pub threads: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { seed: 0, chunk_size: DEFAULT_CHUNK, threads: 1 }
    }
}

impl Schedule {
    pub fn seeded(seed: u64) -> Self {
        Schedule { seed, ..Default::default() }
    }

    pub fn chunk_rng(&self, chunk: usize) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk as u64);
        rng
    }

    /// Chunk lengths covering `count`.
    pub fn chunks(&self, count: usize) -> Vec<usize> {
        let size = self.chunk_size.max(1);
        (0..count.div_ceil(size)).map(|c| size.min(count - c * size)).collect()
    }

    /// Run `job(chunk_index, len, rng)` over all chunks and concatenate the
    /// results in chunk order.
    pub fn run<T, F>(&self, count: usize, job: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, usize, &mut ChaCha20Rng) -> Result<Vec<T>> + Sync,
    {
        let chunks = self.chunks(count);
        let threads = self.threads.max(1).min(chunks.len().max(1));
        let mut results: Vec<Option<Result<Vec<T>>>> = (0..chunks.len()).map(|_| None).collect();
        if threads == 1 {
            for (c, &len) in chunks.iter().enumerate() {
                results[c] = Some(job(c, len, &mut self.chunk_rng(c)));
            }
        } else {
            let job = &job;
            let chunks = &chunks;
            let per_worker: Vec<Vec<(usize, Result<Vec<T>>)>> = std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads)
                    .map(|t| {
                        scope.spawn(move || {
                            (t..chunks.len())
                                .step_by(threads)
                                .map(|c| (c, job(c, chunks[c], &mut self.chunk_rng(c))))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            for (c, r) in per_worker.into_iter().flatten() {
                results[c] = Some(r);
            }
        }
        let mut out = Vec::with_capacity(count);
        for r in results {
            out.extend(r.expect("every chunk ran")?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub generator: Generator,
    pub seed: u64,
    pub chunk_size: usize,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub count: usize,
    pub values: Vec<Vec<f64>>,
}

impl EmpiricalSample {
    pub fn new(generator: Generator, r: &[f64], s: &[f64], schedule: &Schedule, values: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(v) = values.iter().flatten().find(|x| !x.is_finite()) {
            return Err(HornError::InvalidArgument(format!("non-finite sample value {v}")));
        }
        Ok(EmpiricalSample {
            generator,
            seed: schedule.seed,
            chunk_size: schedule.chunk_size,
            r: r.to_vec(),
            s: s.to_vec(),
            count: values.len(),
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[i]).collect()
    }

    pub fn project(&self, p: &Projection) -> Vec<f64> {
        self.values.iter().map(|v| p.apply(v)).collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut().flatten() {
            *v *= c;
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        writeln!(out, "# generator: {}", self.generator)?;
        writeln!(out, "# n: {}", self.n())?;
        writeln!(out, "# r: {}", join(&self.r))?;
        writeln!(out, "# s: {}", join(&self.s))?;
        writeln!(out, "# seed: {}", self.seed)?;
        writeln!(out, "# count: {}", self.count)?;
        writeln!(out, "# chunk_size: {}", self.chunk_size)?;
        writeln!(out, "# chunks: {} (chunk i uses ChaCha20 seed {} on stream i)", self.count.div_ceil(self.chunk_size.max(1)), self.seed)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record((1..=self.n()).map(|i| format!("t{i}")))?;
        for v in &self.values {
            w.write_record(v.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Inverse of [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut meta = std::collections::BTreeMap::new();
        let mut body = String::new();
        for line in input.lines() {
            let line = line?;
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once(':') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
            } else {
                body.push_str(&line);
                body.push('\n');
            }
        }
        let get = |k: &str| meta.get(k).ok_or_else(|| HornError::Parse(format!("missing metadata {k:?}")));
        let floats = |s: &str| -> Result<Vec<f64>> {
            s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| HornError::Parse(e.to_string()))).collect()
        };
        let generator = Generator::from_mode(get("generator")?)?;
        let seed = get("seed")?.parse().map_err(|e: std::num::ParseIntError| HornError::Parse(e.to_string()))?;
        let chunk_size = get("chunk_size")?.parse().map_err(|e: std::num::ParseIntError| HornError::Parse(e.to_string()))?;
        let r = floats(get("r")?)?;
        let s = floats(get("s")?)?;
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let mut values = Vec::new();
        for rec in reader.records() {
            values.push(rec?.iter().map(|x| x.parse::<f64>().map_err(|e| HornError::Parse(e.to_string()))).collect::<Result<Vec<_>>>()?);
        }
        let schedule = Schedule { seed, chunk_size, threads: 1 };
        EmpiricalSample::new(generator, &r, &s, &schedule, values)
    }
}

pub(crate) fn increments(r: &[f64]) -> Vec<f64> {
    (0..r.len()).map(|i| if i == 0 { r[0] } else { r[i] - r[i - 1] }).collect()
}

fn check_spectra(r: &[f64], s: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(HornError::ZeroRank);
    }
    if r.len() != s.len() {
        return Err(HornError::SizeMismatch { expected: r.len(), found: s.len() });
    }
    for v in [r, s] {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(HornError::InvalidArgument("non-finite spectrum".into()));
        }
        let lam = increments(v);
        if lam.windows(2).any(|w| w[0] < w[1]) {
            return Err(HornError::InvalidArgument(format!("spectrum {v:?} is not a cumulative sum of decreasing eigenvalues")));
        }
    }
    Ok(())
}

fn hermitian_chunk<R: Rng + ?Sized>(r: &[f64], s: &[f64], len: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let n = r.len();
    if n == 1 {
        return Ok(vec![vec![r[0] + s[0]]; len]);
    }
    let dr = CMatrix::from_real_diag(&increments(r));
    let ds = CMatrix::from_real_diag(&increments(s));
    (0..len)
        .map(|_| {
            let u = haar_unitary(n, rng);
            l_map(&dr.add(&u.mul(&ds).mul(&u.adjoint())).hermitian_part())
        })
        .collect()
}

fn multiplicative_chunk<R: Rng + ?Sized>(r: &[f64], s: &[f64], len: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let n = r.len();
    if n == 1 {
        return Ok(vec![vec![r[0] + s[0]]; len]);
    }
    let mut chain_r = PolytopeSampler::new(r, rng)?;
    let mut chain_s = PolytopeSampler::new(s, rng)?;
    (0..len)
        .map(|_| {
            let u = chain_r.next_tableau(rng);
            let a = reconstruct_b_pattern(&u, &GzAngles::uniform(n, rng))?;
            let v = chain_s.next_tableau(rng);
            let c = reconstruct_b_pattern(&v, &GzAngles::uniform(n, rng))?;
            singular_l(&a.as_matrix().mul(c.as_matrix()))
        })
        .collect()
}

fn tropical_chunk<R: Rng + ?Sized>(r: &[f64], s: &[f64], len: usize, chamber: &ChamberMap, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let mut chain_r = PolytopeSampler::new(r, rng)?;
    let mut chain_s = PolytopeSampler::new(s, rng)?;
    (0..len)
        .map(|_| {
            let u = chain_r.next_tableau(rng);
            let v = chain_s.next_tableau(rng);
            kappa_f64(&u, &v, chamber)
        })
        .collect()
}

/// `count` draws of `l(K₁ + K₂)` with `K₁, K₂` Liouville-distributed on the
/// isospectral sets of `r` and `s`, realized as `D_r + U D_s U*` with Haar `U`.
pub fn sample_hermitian_sum<R: Rng + ?Sized>(r: &[f64], s: &[f64], count: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    check_spectra(r, s)?;
    hermitian_chunk(r, s, count, rng)
}

/// `count` draws of `l^B(AC)` with `A`, `C` Liouville-distributed on `B_r`, `B_s`.
pub fn sample_multiplicative<R: Rng + ?Sized>(r: &[f64], s: &[f64], count: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    check_spectra(r, s)?;
    multiplicative_chunk(r, s, count, rng)
}

/// `count` draws of `κ(u, v)` with `u`, `v` uniform on `P_r`, `P_s`.
pub fn sample_tropical_kappa<R: Rng + ?Sized>(r: &[f64], s: &[f64], count: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    check_spectra(r, s)?;
    let chamber = find_delta0_chamber(r.len())?;
    tropical_chunk(r, s, count, &chamber, rng)
}

/// Chunked, seeded run of one generator.
pub fn generate(generator: Generator, r: &[f64], s: &[f64], count: usize, schedule: &Schedule) -> Result<EmpiricalSample> {
    check_spectra(r, s)?;
    let values = match generator {
        Generator::HermitianSum => schedule.run(count, |_, len, rng| hermitian_chunk(r, s, len, rng))?,
        Generator::Multiplicative => schedule.run(count, |_, len, rng| multiplicative_chunk(r, s, len, rng))?,
        Generator::TropicalKappa => {
            let chamber = find_delta0_chamber(r.len())?;
            schedule.run(count, |_, len, rng| tropical_chunk(r, s, len, &chamber, rng))?
        }
    };
    EmpiricalSample::new(generator, r, s, schedule, values)
}

/// Cumulative spectra with eigenvalues `2(n + 1 - 2i)/(n - 1)`; `s` is
/// `r / 2`. For `n = 1` the eigenvalues are 1 and 1/2.
pub fn default_spectra(n: usize) -> (Vec<f64>, Vec<f64>) {
    let lam: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        (1..=n).map(|i| 2.0 * (n as f64 + 1.0 - 2.0 * i as f64) / (n as f64 - 1.0)).collect()
    };
    let cum = |scale: f64| {
        let mut acc = 0.0;
        lam.iter().map(|x| {
            acc += scale * x;
            acc
        }).collect::<Vec<f64>>()
    };
    (cum(1.0), cum(0.5))
}

/// Pairwise KS distances among generator outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareEntry {
    pub first: Generator,
    pub second: Generator,
    pub ks: KsResult,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub generators: Vec<Generator>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub seed: u64,
    pub count: usize,
    pub ks: Vec<CompareEntry>,
    pub pass_rate: f64,
    pub pass: bool,
}

/// Run all three generators and compare them pairwise along every
/// coordinate and `projections` fixed random directions. `alternate`
/// replaces `(r, s)` for the multiplicative and tropical generators.
pub fn measure_compare(
    r: &[f64],
    s: &[f64],
    count: usize,
    projections: usize,
    threshold: f64,
    schedule: &Schedule,
    alternate: Option<(&[f64], &[f64])>,
) -> Result<CompareReport> {
    let n = r.len();
    let samples = Generator::ALL
        .iter()
        .enumerate()
        .map(|(j, &g)| {
            let sub = Schedule { seed: schedule.seed.wrapping_add(j as u64), ..*schedule };
            let (rr, ss) = match (g, alternate) {
                (Generator::HermitianSum, _) | (_, None) => (r, s),
                (_, Some(alt)) => alt,
            };
            generate(g, rr, ss, count, &sub)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut projs: Vec<Projection> = (0..n).map(Projection::Coordinate).collect();
    projs.extend(random_directions(n, projections, schedule.seed).into_iter().map(Projection::Direction));
    let mut ks = Vec::new();
    for a in 0..samples.len() {
        for b in a + 1..samples.len() {
            for p in &projs {
                let res = ks_distance(&samples[a], &samples[b], p)?;
                let pass = res.statistic < threshold;
                ks.push(CompareEntry { first: samples[a].generator, second: samples[b].generator, ks: res, threshold, pass });
            }
        }
    }
    let passed = ks.iter().filter(|e| e.pass).count();
    let pass_rate = if ks.is_empty() { 1.0 } else { passed as f64 / ks.len() as f64 };
    Ok(CompareReport {
        generators: Generator::ALL.to_vec(),
        r: r.to_vec(),
        s: s.to_vec(),
        seed: schedule.seed,
        count,
        pass: passed == ks.len(),
        ks,
        pass_rate,
    })
}

/// Normalized histogram: `(bin center, density)` pairs on `[lo, hi]`.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let bins = bins.max(1);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in values {
        if x >= lo && x <= hi && width > 0.0 {
            let b = (((x - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let total = values.len().max(1) as f64;
    counts.iter().enumerate().map(|(b, &c)| (lo + (b as f64 + 0.5) * width, c as f64 / (total * width))).collect()
}

/// Two whitespace-separated columns, one bin per line.
pub fn write_histogram<W: Write>(mut out: W, hist: &[(f64, f64)]) -> Result<()> {
    writeln!(out, "# center density")?;
    for (c, d) in hist {
        writeln!(out, "{c} {d}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_generators_are_deterministic() {
        let sched = Schedule::seeded(5);
        for g in Generator::ALL {
            let s = generate(g, &[1.5], &[0.25], 10, &sched).unwrap();
            assert!(s.values.iter().all(|v| (v[0] - 1.75).abs() < 1e-12), "{g}");
        }
    }

    #[test]
    fn chunking_is_schedule_independent() {
        let (r, s) = default_spectra(2);
        let one = generate(Generator::TropicalKappa, &r, &s, 250, &Schedule { seed: 9, chunk_size: 100, threads: 1 }).unwrap();
        let many = generate(Generator::TropicalKappa, &r, &s, 250, &Schedule { seed: 9, chunk_size: 100, threads: 3 }).unwrap();
        assert_eq!(one, many);
        assert_eq!(Schedule::default().chunks(2500), vec![1000, 1000, 500]);
    }

    #[test]
    fn csv_round_trip() {
        let (r, s) = default_spectra(3);
        let sample = generate(Generator::HermitianSum, &r, &s, 20, &Schedule::seeded(1)).unwrap();
        let mut buf = Vec::new();
        sample.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# generator: hermitian-sum"));
        assert_eq!(EmpiricalSample::read_csv(&buf[..]).unwrap(), sample);
    }

    #[test]
    fn default_spectra_values() {
        assert_eq!(default_spectra(2), (vec![2.0, 0.0], vec![1.0, 0.0]));
        assert_eq!(default_spectra(3).0, vec![2.0, 2.0, 0.0]);
    }

    #[test]
    fn histogram_integrates_to_one() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let h = histogram(&xs, 10, 0.0, 1.0);
        let total: f64 = h.iter().map(|(_, d)| d * 0.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
