//! The `hornlab` command line: argument parsing, config resolution and
//! dispatch. Flags take precedence over a `--config` file, which takes
//! precedence over built-in defaults.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HornError, Result};
use crate::hive::{boundary, gz_check, gz_margin, hive_check_slack, hive_margin, kt_member, HornTriple};
use crate::measure::{
    default_spectra, default_tau_grid, exceptional_mass_estimate, generate, histogram, horn_forward_test, limit_sweep,
    measure_compare, rank_two_example, write_histogram, ForwardMode, Generator, Schedule,
};
use crate::network::{build_gamma0, tropical_gz, PlanarNetwork};
use crate::polytope::PolytopeSampler;
use crate::rational::{self, Rational};
use crate::semiring::Tropical;
use crate::tableau::{parse_full_rows, parse_gz_rows, Role, Tableau};
use crate::tropical_horn::{find_delta0_chamber, kappa, lt_inverse, random_generic_weighting, WbarWeighting};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hornlab", version, about = "Tropical, Hermitian and multiplicative Horn problem experiments")]
pub struct Cli {
    /// Random seed [default: 0]
    #[arg(long, global = true, help_heading = "Global Options", env = "HORNLAB_SEED", hide_env_values = true)]
    pub seed: Option<u64>,
    /// Worker threads for chunked sampling [default: 1]
    #[arg(long, global = true, help_heading = "Global Options")]
    pub threads: Option<usize>,
    /// Slack for cone membership, e.g. 0, 1e-8, -1/10
    #[arg(long, global = true, help_heading = "Global Options", allow_hyphen_values = true)]
    pub slack: Option<String>,
    /// JSON experiment config; flags override its fields
    #[arg(long, global = true, help_heading = "Global Options")]
    pub config: Option<PathBuf>,
    /// Write the resolved experiment config to this file
    #[arg(long, global = true, help_heading = "Global Options")]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Knutson-Tao cone membership of Horn triples
    KtMember(KtMemberArgs),
    /// Gelfand-Zeitlin interlacing check of a tableau
    GzCheck(GzCheckArgs),
    /// Hive inequality check of a full tableau
    HiveCheck(HiveCheckArgs),
    /// Emit the staircase network
    Gamma0(Gamma0Args),
    /// Tropical Gelfand-Zeitlin tableau of a weighting
    TropGz(TropGzArgs),
    /// Inverse tropical Gelfand-Zeitlin map on the linear chamber
    LtInverse(LtInverseArgs),
    /// Sample the tropical transport map as Horn triples
    KappaSample(SpectraArgs),
    /// Sample one of the three measures to CSV
    Sample(SampleArgs),
    /// Compare the three measures pairwise
    MeasureCompare(CompareArgs),
    /// Convergence of the multiplicative lift to the tropical limit
    LimitSweep(SweepArgs),
    /// Forward cone inclusion test
    HornForward(ForwardArgs),
    /// Mass of Hermitian-sum samples outside the Knutson-Tao cone
    ExceptionalMass(SpectraArgs),
}

#[derive(Args, Debug, Default)]
pub struct KtMemberArgs {
    /// Cumulative sums of the first spectrum, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Cumulative sums of the second spectrum
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Cumulative sums of the sum spectrum
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// CSV of triples with columns a1..an,b1..bn,c1..cn
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct GzCheckArgs {
    /// Rows 1..n, e.g. "1;3,2" (the zero left edge is implied)
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
    /// Full rows 0..n, e.g. "0;0,1;0,3,2"
    #[arg(long, allow_hyphen_values = true)]
    pub full: Option<String>,
    /// Tableau JSON file
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Required strict margin [default: 0, closed cone]
    #[arg(long)]
    pub delta: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct HiveCheckArgs {
    /// Full rows 0..n, e.g. "2;1,4;0,2,3"
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
    /// Tableau JSON file
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct Gamma0Args {
    /// Rank
    #[arg(long)]
    pub n: Option<usize>,
    /// Output format: json or dot
    #[arg(long)]
    pub format: Option<String>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct TropGzArgs {
    /// Rank (for the staircase network)
    #[arg(long)]
    pub n: Option<usize>,
    /// Restricted weighting JSON file
    #[arg(long)]
    pub wbar: Option<PathBuf>,
    /// Diagonal weights, comma-separated
    #[arg(long, allow_hyphen_values = true)]
    pub diagonals: Option<String>,
    /// Sink-adjacent horizontal weights, bottom line first
    #[arg(long, allow_hyphen_values = true)]
    pub sinks: Option<String>,
    /// Planar network JSON file, instead of the staircase network
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Full edge weighting for --network, comma-separated ("-inf" allowed)
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct LtInverseArgs {
    /// Rows 1..n, e.g. "1;3,2"
    #[arg(long, allow_hyphen_values = true)]
    pub rows: Option<String>,
    /// Tableau JSON file
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SpectraArgs {
    /// Rank [default: 2]
    #[arg(long)]
    pub n: Option<usize>,
    /// First cumulative spectrum [default: eigenvalues 2(n+1-2i)/(n-1)]
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Second cumulative spectrum [default: half of the first]
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Number of samples [default: 1000; 50000 for measure-compare, 10000 for exceptional-mass]
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SampleArgs {
    /// hermitian, multiplicative or tropical
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    pub spectra: SpectraArgs,
    /// Samples per seeded chunk [default: 1000]
    #[arg(long)]
    pub chunk_size: Option<usize>,
    /// Also write a histogram of the first coordinate to this file
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// Histogram bins [default: 50]
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct CompareArgs {
    #[command(flatten)]
    pub spectra: SpectraArgs,
    /// Random projections besides the coordinates [default: 3]
    #[arg(long)]
    pub projections: Option<usize>,
    /// KS pass threshold [default: 0.02]
    #[arg(long)]
    pub threshold: Option<f64>,
    /// First spectrum for the multiplicative and tropical generators
    #[arg(long, allow_hyphen_values = true)]
    pub r2: Option<String>,
    /// Second spectrum for the multiplicative and tropical generators
    #[arg(long, allow_hyphen_values = true)]
    pub s2: Option<String>,
    /// Samples per seeded chunk [default: 1000]
    #[arg(long)]
    pub chunk_size: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    /// Rank [default: 2]
    #[arg(long)]
    pub n: Option<usize>,
    /// Restricted weighting JSON file [default: seeded random generic weighting]
    #[arg(long)]
    pub wbar: Option<PathBuf>,
    /// Use the rank-two example with x = 1, y = 3, z = 0
    #[arg(long)]
    pub rank_two_example: bool,
    /// Genericity margin [default: 9/10 of the weighting's separation]
    #[arg(long)]
    pub delta: Option<String>,
    /// Comma-separated τ grid [default: 1,2,...,30]
    #[arg(long)]
    pub tau: Option<String>,
    /// Seeded random unit phases instead of all ones
    #[arg(long)]
    pub random_phases: bool,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct ForwardArgs {
    /// hermitian, multiplicative or tropical
    #[arg(long)]
    pub mode: Option<String>,
    /// Rank [default: 3]
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of triples [default: 100]
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Every input of a command, resolved or partial. Absent fields take their
/// defaults at dispatch.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chunk_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projections: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_rows: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonals: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sinks: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_two_example: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_phases: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wbar: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr; $($f:ident),*) => {
        ExperimentConfig { $($f: $top.$f.clone().or_else(|| $base.$f.clone()),)* }
    };
}

impl ExperimentConfig {
    /// Fields of `self` win over `base`.
    pub fn overlay(&self, base: &ExperimentConfig) -> ExperimentConfig {
        overlay!(self, base; command, mode, n, r, s, r2, s2, count, seed, threads, chunk_size, slack, delta, tau_grid,
            projections, threshold, a, b, c, rows, full_rows, diagonals, sinks, weights, format, rank_two_example,
            random_phases, bins, input, network, wbar, out, histogram)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn from_cli(cli: &Cli) -> Result<Self> {
        let floats = |s: &Option<String>| s.as_deref().map(parse_floats).transpose();
        let mut cfg = ExperimentConfig { seed: cli.seed, threads: cli.threads, slack: cli.slack.clone(), ..Default::default() };
        let spectra = |cfg: &mut ExperimentConfig, a: &SpectraArgs| -> Result<()> {
            cfg.n = a.n;
            cfg.r = floats(&a.r)?;
            cfg.s = floats(&a.s)?;
            cfg.count = a.count;
            cfg.out = a.out.clone();
            Ok(())
        };
        let flag = |b: bool| b.then_some(true);
        let name = match &cli.command {
            None => None,
            Some(Command::KtMember(a)) => {
                cfg.a = a.a.clone();
                cfg.b = a.b.clone();
                cfg.c = a.c.clone();
                cfg.input = a.csv.clone();
                Some("kt-member")
            }
            Some(Command::GzCheck(a)) => {
                cfg.rows = a.rows.clone();
                cfg.full_rows = a.full.clone();
                cfg.input = a.json.clone();
                cfg.delta = a.delta.clone();
                Some("gz-check")
            }
            Some(Command::HiveCheck(a)) => {
                cfg.full_rows = a.rows.clone();
                cfg.input = a.json.clone();
                Some("hive-check")
            }
            Some(Command::Gamma0(a)) => {
                cfg.n = a.n;
                cfg.format = a.format.clone();
                cfg.out = a.out.clone();
                Some("gamma0")
            }
            Some(Command::TropGz(a)) => {
                cfg.n = a.n;
                cfg.wbar = a.wbar.clone();
                cfg.diagonals = a.diagonals.clone();
                cfg.sinks = a.sinks.clone();
                cfg.network = a.network.clone();
                cfg.weights = a.weights.clone();
                cfg.out = a.out.clone();
                Some("trop-gz")
            }
            Some(Command::LtInverse(a)) => {
                cfg.rows = a.rows.clone();
                cfg.input = a.json.clone();
                cfg.out = a.out.clone();
                Some("lt-inverse")
            }
            Some(Command::KappaSample(a)) => {
                spectra(&mut cfg, a)?;
                Some("kappa-sample")
            }
            Some(Command::Sample(a)) => {
                spectra(&mut cfg, &a.spectra)?;
                cfg.mode = a.mode.clone();
                cfg.chunk_size = a.chunk_size;
                cfg.histogram = a.histogram.clone();
                cfg.bins = a.bins;
                Some("sample")
            }
            Some(Command::MeasureCompare(a)) => {
                spectra(&mut cfg, &a.spectra)?;
                cfg.projections = a.projections;
                cfg.threshold = a.threshold;
                cfg.r2 = floats(&a.r2)?;
                cfg.s2 = floats(&a.s2)?;
                cfg.chunk_size = a.chunk_size;
                Some("measure-compare")
            }
            Some(Command::LimitSweep(a)) => {
                cfg.n = a.n;
                cfg.wbar = a.wbar.clone();
                cfg.rank_two_example = flag(a.rank_two_example);
                cfg.delta = a.delta.clone();
                cfg.tau_grid = floats(&a.tau)?;
                cfg.random_phases = flag(a.random_phases);
                cfg.out = a.out.clone();
                Some("limit-sweep")
            }
            Some(Command::HornForward(a)) => {
                cfg.mode = a.mode.clone();
                cfg.n = a.n;
                cfg.count = a.count;
                cfg.out = a.out.clone();
                Some("horn-forward")
            }
            Some(Command::ExceptionalMass(a)) => {
                spectra(&mut cfg, a)?;
                Some("exceptional-mass")
            }
        };
        cfg.command = name.map(String::from);
        Ok(cfg)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn schedule(&self) -> Schedule {
        Schedule { seed: self.seed(), chunk_size: self.chunk_size.unwrap_or(crate::measure::DEFAULT_CHUNK), threads: self.threads.unwrap_or(1) }
    }

    fn slack(&self) -> Result<Rational> {
        self.slack.as_deref().map(rational::parse).transpose().map(|s| s.unwrap_or_else(Rational::zero))
    }

    /// `(n, r, s)` with defaults filled in and lengths checked.
    fn spectra(&self) -> Result<(usize, Vec<f64>, Vec<f64>)> {
        let n = self.n.or(self.r.as_ref().map(Vec::len)).unwrap_or(2);
        let (dr, ds) = default_spectra(n);
        let r = self.r.clone().unwrap_or(dr);
        let s = self.s.clone().unwrap_or(ds);
        for v in [&r, &s] {
            if v.len() != n {
                return Err(HornError::SizeMismatch { expected: n, found: v.len() });
            }
        }
        Ok((n, r, s))
    }

    /// Range and consistency checks that do not need the command's inputs.
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n {
            if n == 0 || n > 5 {
                return Err(HornError::InvalidArgument(format!("n = {n} outside 1..=5")));
            }
        }
        if self.count == Some(0) {
            return Err(HornError::InvalidArgument("count must be positive".into()));
        }
        if self.threads == Some(0) || self.chunk_size == Some(0) || self.bins == Some(0) {
            return Err(HornError::InvalidArgument("threads, chunk size and bins must be positive".into()));
        }
        for v in [&self.r, &self.s, &self.r2, &self.s2, &self.tau_grid].into_iter().flatten() {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(HornError::InvalidArgument("numeric lists must be nonempty and finite".into()));
            }
        }
        if let Some(t) = self.threshold {
            if !(t > 0.0 && t <= 1.0) {
                return Err(HornError::InvalidArgument(format!("threshold {t} outside (0, 1]")));
            }
        }
        self.slack()?;
        if let Some(d) = &self.delta {
            if rational::parse(d)?.is_negative() {
                return Err(HornError::InvalidArgument("delta must be nonnegative".into()));
            }
        }
        if let Some(m) = &self.mode {
            ForwardMode::parse(m).or_else(|_| Generator::from_mode(m).map(|_| ForwardMode::Tropical))?;
        }
        if let Some(f) = &self.format {
            if f != "json" && f != "dot" {
                return Err(HornError::InvalidArgument(format!("unknown format {f:?}")));
            }
        }
        Ok(())
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| HornError::Parse(format!("{x:?}: {e}"))))
        .collect()
}

/// Exit code for an error: usage problems 2, failed preconditions 3.
pub fn exit_code(e: &HornError) -> i32 {
    match e {
        HornError::NotGeneric(_)
        | HornError::DegenerateSpectrum(_)
        | HornError::NotInGzCone
        | HornError::NonStrictInterlacing(_)
        | HornError::NonPositiveScale
        | HornError::NonUnitPhase { .. }
        | HornError::NonHermitian { .. }
        | HornError::NotPositiveDefinite
        | HornError::Singular => EXIT_PRECONDITION,
        HornError::NoConvergence { .. } | HornError::ChamberNotFound { .. } | HornError::ChamberMismatch(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

struct Output<'a> {
    stdout: &'a mut dyn Write,
}

impl Output<'_> {
    /// Write `text` to `path`, or to stdout when absent.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => self.stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.stdout, "{text}")?;
        Ok(())
    }
}

/// Parse `args`, run the command, and return the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match resolve(&cli).and_then(|cfg| {
        if let Some(p) = &cli.save_config {
            std::fs::write(p, cfg.to_json())?;
        }
        dispatch(&cfg, &mut Output { stdout })
    }) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let HornError::NotGeneric(report) = &e {
                let _ = writeln!(stderr, "{}", serde_json::to_string_pretty(report).unwrap_or_default());
            }
            exit_code(&e)
        }
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let flags = ExperimentConfig::from_cli(cli)?;
    let file = match &cli.config {
        Some(p) => ExperimentConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    let cfg = flags.overlay(&file);
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let Some(command) = cfg.command.as_deref() else {
        return Err(HornError::InvalidArgument("no command given on the command line or in the config".into()));
    };
    match command {
        "kt-member" => cmd_kt_member(cfg, out),
        "gz-check" => cmd_gz_check(cfg, out),
        "hive-check" => cmd_hive_check(cfg, out),
        "gamma0" => cmd_gamma0(cfg, out),
        "trop-gz" => cmd_trop_gz(cfg, out),
        "lt-inverse" => cmd_lt_inverse(cfg, out),
        "kappa-sample" => cmd_kappa_sample(cfg, out),
        "sample" => cmd_sample(cfg, out),
        "measure-compare" => cmd_measure_compare(cfg, out),
        "limit-sweep" => cmd_limit_sweep(cfg, out),
        "horn-forward" => cmd_horn_forward(cfg, out),
        "exceptional-mass" => cmd_exceptional_mass(cfg, out),
        other => Err(HornError::InvalidArgument(format!("unknown command {other:?}"))),
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn read_triples(path: &Path) -> Result<Vec<HornTriple>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        out.push(HornTriple::from_csv_record(&fields)?);
    }
    Ok(out)
}

fn cmd_kt_member(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let eps = cfg.slack()?;
    let triples = match (&cfg.input, &cfg.a, &cfg.b, &cfg.c) {
        (Some(p), None, None, None) => read_triples(p)?,
        (None, Some(a), Some(b), Some(c)) => vec![HornTriple::new(rational::parse_list(a)?, rational::parse_list(b)?, rational::parse_list(c)?)?],
        _ => return Err(HornError::InvalidArgument("give either --a, --b and --c, or --csv".into())),
    };
    let mut all = true;
    for t in &triples {
        let ok = kt_member(t, &eps);
        all &= ok;
        out.line(if ok { "FEASIBLE" } else { "INFEASIBLE" })?;
    }
    Ok(verdict(all))
}

fn read_tableau(cfg: &ExperimentConfig, role: Role, allow_short: bool) -> Result<Tableau<Rational>> {
    match (&cfg.rows, &cfg.full_rows, &cfg.input) {
        (Some(r), None, None) if allow_short => parse_gz_rows(r, role),
        (None, Some(r), None) => parse_full_rows(r, role),
        (None, None, Some(p)) => Tableau::from_json(&std::fs::read_to_string(p)?, role),
        _ => Err(HornError::InvalidArgument("give exactly one tableau source".into())),
    }
}

fn fmt_opt(x: Option<Rational>) -> String {
    x.map(|v| rational::format(&v)).unwrap_or_else(|| "none".into())
}

fn cmd_gz_check(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let t = read_tableau(cfg, Role::Gz, true)?;
    let delta = cfg.delta.as_deref().map(rational::parse).transpose()?.unwrap_or_else(Rational::zero);
    let ok = gz_check(&t, &delta);
    out.line(&format!("{} margin={}", if ok { "PASS" } else { "FAIL" }, fmt_opt(gz_margin(&t))))?;
    Ok(verdict(ok))
}

fn cmd_hive_check(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let t = read_tableau(cfg, Role::Hive, false)?;
    let ok = hive_check_slack(&t, &cfg.slack()?);
    out.line(&format!("{} margin={}", if ok { "HIVE" } else { "NOT-HIVE" }, fmt_opt(hive_margin(&t))))?;
    let b = boundary(&t);
    out.line(&HornTriple::csv_header(t.n()).join(","))?;
    out.line(&b.csv_record().join(","))?;
    Ok(verdict(ok))
}

fn cmd_gamma0(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let g = build_gamma0(cfg.n.unwrap_or(2))?;
    let text = match cfg.format.as_deref().unwrap_or("json") {
        "dot" => g.to_dot(),
        _ => g.to_json()? + "\n",
    };
    out.emit(cfg.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn parse_tropical_list(s: &str) -> Result<Vec<Tropical>> {
    s.split(',')
        .map(|x| match x.trim() {
            "-inf" => Ok(Tropical::NegInf),
            v => rational::parse(v).map(Tropical::Fin),
        })
        .collect()
}

fn read_wbar(cfg: &ExperimentConfig) -> Result<Option<WbarWeighting>> {
    match (&cfg.wbar, &cfg.diagonals, &cfg.sinks) {
        (Some(p), None, None) => Ok(Some(WbarWeighting::from_json(&std::fs::read_to_string(p)?)?)),
        (None, Some(d), Some(h)) => {
            let sinks = rational::parse_list(h)?;
            let diagonals = if d.trim().is_empty() { Vec::new() } else { rational::parse_list(d)? };
            Ok(Some(WbarWeighting::new(sinks.len(), diagonals, sinks)?))
        }
        (None, None, None) => Ok(None),
        _ => Err(HornError::InvalidArgument("give either --wbar or both --diagonals and --sinks".into())),
    }
}

fn cmd_trop_gz(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let t = match (&cfg.network, read_wbar(cfg)?) {
        (Some(p), None) => {
            let g = PlanarNetwork::from_json(&std::fs::read_to_string(p)?)?;
            let w = parse_tropical_list(cfg.weights.as_deref().ok_or_else(|| HornError::InvalidArgument("--network needs --weights".into()))?)?;
            tropical_gz(&g, &w)?
        }
        (None, Some(w)) => {
            let g = build_gamma0(w.n)?;
            tropical_gz(&g, &w.embed_tropical(&g)?)?
        }
        _ => return Err(HornError::InvalidArgument("give a restricted weighting or --network with --weights".into())),
    };
    out.emit(cfg.out.as_deref(), &(t.to_json() + "\n"))?;
    Ok(EXIT_OK)
}

fn cmd_lt_inverse(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let xi = read_tableau(cfg, Role::Gz, true)?;
    let chamber = find_delta0_chamber(xi.n())?;
    let w = lt_inverse(&xi, &chamber)?;
    out.emit(cfg.out.as_deref(), &(w.to_json() + "\n"))?;
    Ok(EXIT_OK)
}

fn metadata(cfg: &ExperimentConfig, extra: &[(&str, String)]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# command: {}\n", cfg.command.as_deref().unwrap_or("")));
    s.push_str(&format!("# seed: {}\n", cfg.seed()));
    for (k, v) in extra {
        s.push_str(&format!("# {k}: {v}\n"));
    }
    s
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_kappa_sample(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let (n, r, s) = cfg.spectra()?;
    let count = cfg.count.unwrap_or(1000);
    let chamber = find_delta0_chamber(n)?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed());
    let mut chain_r = PolytopeSampler::new(&r, &mut rng)?;
    let mut chain_s = PolytopeSampler::new(&s, &mut rng)?;
    let rq = r.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
    let sq = s.iter().map(|&x| rational::from_f64(x)).collect::<Result<Vec<_>>>()?;
    let mut text = metadata(cfg, &[("r", join(&r)), ("s", join(&s)), ("count", count.to_string())]);
    text.push_str(&HornTriple::csv_header(n).join(","));
    text.push('\n');
    let mut all = true;
    for _ in 0..count {
        let u = chain_r.next_tableau(&mut rng).to_rational()?;
        let v = chain_s.next_tableau(&mut rng).to_rational()?;
        let t = HornTriple::new(rq.clone(), sq.clone(), kappa(&u, &v, &chamber)?)?;
        all &= kt_member(&t, &Rational::zero());
        text.push_str(&t.csv_record().join(","));
        text.push('\n');
    }
    out.emit(cfg.out.as_deref(), &text)?;
    Ok(verdict(all))
}

fn cmd_sample(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let mode = cfg.mode.as_deref().ok_or_else(|| HornError::InvalidArgument("--mode is required".into()))?;
    let generator = Generator::from_mode(mode)?;
    let (_, r, s) = cfg.spectra()?;
    let sample = generate(generator, &r, &s, cfg.count.unwrap_or(1000), &cfg.schedule())?;
    let mut buf = Vec::new();
    sample.write_csv(&mut buf)?;
    out.emit(cfg.out.as_deref(), &String::from_utf8(buf).expect("utf-8"))?;
    if let Some(p) = &cfg.histogram {
        let xs = sample.coordinate(0);
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut h = Vec::new();
        write_histogram(&mut h, &histogram(&xs, cfg.bins.unwrap_or(50), lo, hi))?;
        std::fs::write(p, h)?;
    }
    Ok(EXIT_OK)
}

fn spectrum_list(v: &Option<Vec<f64>>, fallback: &[f64]) -> Vec<f64> {
    v.clone().unwrap_or_else(|| fallback.to_vec())
}

fn cmd_measure_compare(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let (_, r, s) = cfg.spectra()?;
    let r2 = spectrum_list(&cfg.r2, &r);
    let s2 = spectrum_list(&cfg.s2, &s);
    let alternate = (cfg.r2.is_some() || cfg.s2.is_some()).then_some((&r2[..], &s2[..]));
    let report = measure_compare(
        &r,
        &s,
        cfg.count.unwrap_or(50_000),
        cfg.projections.unwrap_or(3),
        cfg.threshold.unwrap_or(0.02),
        &cfg.schedule(),
        alternate,
    )?;
    out.emit(cfg.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(verdict(report.pass))
}

fn random_phases(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count).map(|_| Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)).collect()
}

fn cmd_limit_sweep(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let explicit_delta = cfg.delta.as_deref().map(rational::parse).transpose()?;
    let (w, auto_delta) = if cfg.rank_two_example == Some(true) {
        rank_two_example()
    } else if let Some(w) = read_wbar(cfg)? {
        let d = explicit_delta.clone().ok_or_else(|| HornError::InvalidArgument("a supplied weighting needs --delta".into()))?;
        (w, d)
    } else {
        let chamber = find_delta0_chamber(cfg.n.unwrap_or(2))?;
        random_generic_weighting(&chamber, &mut ChaCha20Rng::seed_from_u64(cfg.seed()))?
    };
    let delta = explicit_delta.unwrap_or(auto_delta);
    let tau = cfg.tau_grid.clone().unwrap_or_else(default_tau_grid);
    let phases = (cfg.random_phases == Some(true)).then(|| random_phases(build_gamma0(w.n).map(|g| g.num_edges()).unwrap_or(0), cfg.seed()));
    let res = limit_sweep(&w, phases.as_deref(), &tau, &delta)?;
    let mut text = metadata(
        cfg,
        &[
            ("weighting", serde_json::to_string(&w)?),
            ("delta", rational::format(&delta)),
            ("phases", if phases.is_some() { "random".into() } else { "ones".into() }),
        ],
    );
    text.push_str("tau,error,top_error\n");
    for ((t, e), te) in res.tau.iter().zip(&res.error).zip(&res.top_error) {
        text.push_str(&format!("{t},{e},{te}\n"));
    }
    let slope = res.slope.map(|s| s.to_string()).unwrap_or_else(|| "absent".into());
    text.push_str(&format!("# slope: {slope} delta: {} ({})\n", rational::format(&delta), rational::to_f64(&delta)));
    out.emit(cfg.out.as_deref(), &text)?;
    if cfg.out.is_some() {
        out.line(&format!("slope: {slope} delta: {}", rational::format(&delta)))?;
    }
    Ok(EXIT_OK)
}

fn cmd_horn_forward(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let mode = ForwardMode::parse(cfg.mode.as_deref().ok_or_else(|| HornError::InvalidArgument("--mode is required".into()))?)?;
    let n = cfg.n.unwrap_or(3);
    if n > 4 {
        return Err(HornError::InvalidArgument("forward tests support n ≤ 4".into()));
    }
    let eps = match (&cfg.slack, mode) {
        (Some(_), _) => cfg.slack()?,
        (None, ForwardMode::Tropical) => Rational::zero(),
        (None, _) => rational::parse("1e-8")?,
    };
    let report = horn_forward_test(mode, n, cfg.count.unwrap_or(100), &eps, &mut ChaCha20Rng::seed_from_u64(cfg.seed()))?;
    out.emit(cfg.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(verdict(report.failures.is_empty()))
}

fn cmd_exceptional_mass(cfg: &ExperimentConfig, out: &mut Output) -> Result<i32> {
    let (n, r, s) = cfg.spectra()?;
    if n > 4 {
        return Err(HornError::InvalidArgument("exceptional mass supports n ≤ 4".into()));
    }
    let eps = match &cfg.slack {
        Some(_) => cfg.slack()?,
        None => rational::parse("1e-8")?,
    };
    let report = exceptional_mass_estimate(&r, &s, cfg.count.unwrap_or(10_000), &eps, &cfg.schedule())?;
    out.emit(cfg.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(verdict(report.failures == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("hornlab").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn kt_member_examples() {
        assert_eq!(run_capture(&["kt-member", "--a", "1", "--b", "2", "--c", "3"]), (0, "FEASIBLE\n".into(), String::new()));
        let (code, out, _) = run_capture(&["kt-member", "--a", "1,1", "--b", "1,1", "--c", "2.5,2"]);
        assert_eq!((code, out.as_str()), (1, "INFEASIBLE\n"));
        assert_eq!(run_capture(&["kt-member", "--a", "1,x", "--b", "1,1", "--c", "2,2"]).0, 2);
    }

    #[test]
    fn config_overlay_and_round_trip() {
        let file = ExperimentConfig { n: Some(3), count: Some(10), r: Some(vec![0.1, 0.30000000000000004, 1e-300]), ..Default::default() };
        let flags = ExperimentConfig { n: Some(2), ..Default::default() };
        let merged = flags.overlay(&file);
        assert_eq!((merged.n, merged.count), (Some(2), Some(10)));
        assert_eq!(ExperimentConfig::from_json(&merged.to_json()).unwrap(), merged);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["gz-check", "--rows", "1;3,2"]).0, 0);
        assert_eq!(run_capture(&["gz-check", "--rows", "4;3,2"]).0, 1);
        assert_eq!(run_capture(&["lt-inverse", "--rows", "4;3,2"]).0, 3);
        assert_eq!(run_capture(&["sample", "--mode", "bogus"]).0, 2);
        assert_eq!(run_capture(&["gamma0", "--n", "0"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
        assert_eq!(run_capture(&[]).0, 2);
    }
}
