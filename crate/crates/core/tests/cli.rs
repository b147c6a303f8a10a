use std::path::Path;
use std::process::{Command, Output};

const SUBCOMMANDS: [&str; 12] = [
    "kt-member",
    "gz-check",
    "hive-check",
    "gamma0",
    "trop-gz",
    "lt-inverse",
    "kappa-sample",
    "sample",
    "measure-compare",
    "limit-sweep",
    "horn-forward",
    "exceptional-mass",
];

fn hornlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hornlab")).args(args).current_dir(dir).env_remove("HORNLAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn help_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stdout(&hornlab(&["--help"], dir.path())), golden("help"));
    for c in SUBCOMMANDS {
        let out = hornlab(&[c, "--help"], dir.path());
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), golden(c), "{c}");
    }
}

#[test]
fn kt_member_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = hornlab(&["kt-member", "--a", "1", "--b", "2", "--c", "3"], dir.path());
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "FEASIBLE\n"));
    let o = hornlab(&["kt-member", "--a", "1,1", "--b", "1,1", "--c", "2.5,2"], dir.path());
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "INFEASIBLE\n"));
    let o = hornlab(&["kt-member", "--a", "1,one", "--b", "1,1", "--c", "2,2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_of_tropical_triples_is_feasible() {
    let dir = tempfile::tempdir().unwrap();
    let o = hornlab(&["--seed", "4", "kappa-sample", "--n", "3", "--count", "1000", "--out", "t.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = hornlab(&["kt-member", "--csv", "t.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| *l == "FEASIBLE").count(), 1000);
}

#[test]
fn sample_examples() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, out: &str| hornlab(&["--seed", seed, "sample", "--mode", "hermitian", "--n", "3", "--count", "300", "--out", out], dir.path());
    run("9", "a.csv");
    run("9", "b.csv");
    run("10", "c.csv");
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));

    let o = hornlab(&["sample", "--mode", "tropical", "--n", "2", "--count", "1000"], dir.path());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 1000);
    // r = (2, 0), s = (1, 0): top eigenvalue in [|2 - 1|, 2 + 1]
    assert!(rows.iter().all(|v| (1.0..=3.0).contains(&v[0])));

    let o = hornlab(&["sample", "--mode", "hermitian", "--n", "1", "--count", "20"], dir.path());
    assert!(data_rows(&stdout(&o)).iter().all(|v| v == &[1.5]));

    let o = hornlab(&["sample", "--mode", "other"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn measure_compare_passes_and_detects_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let o = hornlab(&["measure-compare"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["ks"].as_array().unwrap().iter().all(|e| e["ks"]["statistic"].as_f64().unwrap() < 0.02));
    let o = hornlab(&["measure-compare", "--count", "20000", "--r2", "3,0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

fn slope_line(out: &str) -> &str {
    out.lines().find(|l| l.starts_with("# slope:")).unwrap()
}

#[test]
fn limit_sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = hornlab(&["limit-sweep", "--rank-two-example"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 30);
    assert!(rows[29][1] < 1e-6);
    let slope: f64 = slope_line(&out).split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!(slope < 0.0);

    let o = hornlab(&["limit-sweep", "--rank-two-example", "--tau", "4"], dir.path());
    assert!(slope_line(&stdout(&o)).starts_with("# slope: absent"));

    let o = hornlab(&["limit-sweep", "--n", "3"], dir.path());
    let line = slope_line(&stdout(&o)).to_string();
    let words: Vec<&str> = line.split_whitespace().collect();
    let slope: f64 = words[2].parse().unwrap();
    let delta: f64 = words[5].trim_matches(|c| c == '(' || c == ')').parse().unwrap();
    assert!(slope <= -0.75 * delta, "{line}");

    std::fs::write(dir.path().join("flat.json"), r#"{"n":2,"diagonals":["0"],"sink_horizontals":["0","0"]}"#).unwrap();
    let o = hornlab(&["limit-sweep", "--wbar", "flat.json", "--delta", "1/10"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("min_path_gap"), "{err}");
}

#[test]
fn exit_codes_for_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hornlab(&["lt-inverse", "--rows", "4;3,2"], dir.path()).status.code(), Some(3));
    assert_eq!(hornlab(&["gz-check", "--rows", "4;3,2"], dir.path()).status.code(), Some(1));
    assert_eq!(hornlab(&["gz-check", "--rows", "1;3,2"], dir.path()).status.code(), Some(0));
    assert_eq!(hornlab(&["sample", "--mode", "hermitian", "--r", "1,3"], dir.path()).status.code(), Some(2));
    let wide = ["sample", "--mode", "multiplicative", "--n", "3", "--r", "7,14,14", "--s", "1,1,0", "--count", "2"];
    assert_eq!(hornlab(&wide, dir.path()).status.code(), Some(3));
    assert_eq!(hornlab(&["gamma0", "--n", "9"], dir.path()).status.code(), Some(2));
    assert_eq!(hornlab(&["--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(hornlab(&[], dir.path()).status.code(), Some(2));
}

#[test]
fn config_precedence_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"command":"sample","mode":"hermitian","n":3,"count":7,"seed":5}"#).unwrap();
    let from_file = hornlab(&["--config", "cfg.json", "--save-config", "saved.json"], dir.path());
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(data_rows(&stdout(&from_file)).len(), 7);
    let overridden = hornlab(&["--config", "cfg.json", "sample", "--count", "4"], dir.path());
    assert_eq!(data_rows(&stdout(&overridden)).len(), 4);
    let replay = hornlab(&["--config", "saved.json"], dir.path());
    assert_eq!(replay.stdout, from_file.stdout);
    let saved: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("saved.json")).unwrap()).unwrap();
    assert_eq!(saved["seed"], 5);
}

#[test]
fn env_seed_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hornlab"));
        c.args(args).current_dir(dir.path()).env_remove("HORNLAB_SEED");
        if let Some(s) = env {
            c.env("HORNLAB_SEED", s);
        }
        c.output().unwrap().stdout
    };
    let args = ["sample", "--mode", "hermitian", "--count", "5"];
    let flag: Vec<&str> = ["--seed", "33"].into_iter().chain(args).collect();
    assert_eq!(run(Some("33"), &args), run(None, &flag));
    assert_eq!(run(Some("1"), &flag), run(None, &flag));
    assert_ne!(run(Some("33"), &args), run(None, &args));
}

#[test]
fn gamma0_and_trop_gz() {
    let dir = tempfile::tempdir().unwrap();
    let o = hornlab(&["gamma0", "--n", "3"], dir.path());
    let g: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["rank"], 3);
    std::fs::write(dir.path().join("g.json"), &o.stdout).unwrap();
    let o = hornlab(&["trop-gz", "--diagonals", "3", "--sinks", "0,1"], dir.path());
    let t: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t["rows"][2], serde_json::json!(["0", "3", "1"]));
    let edges = g["edges"].as_array().unwrap().len();
    let zeros = vec!["0"; edges].join(",");
    let o = hornlab(&["trop-gz", "--network", "g.json", "--weights", &zeros], dir.path());
    assert_eq!(o.status.code(), Some(0));
}
