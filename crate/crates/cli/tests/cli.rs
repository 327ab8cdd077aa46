use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde::Deserialize;

fn boundlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boundlab")).args(args).env_remove("BOUNDS_THREADS").output().unwrap()
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Threshold {
    kind: String,
    q: Option<u64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    rate: Option<f64>,
    value: f64,
    bracket: (f64, f64),
    residual: f64,
    iterations: u32,
    boundary: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Estimate {
    p_hat: f64,
    lo: f64,
    hi: f64,
    errors: u64,
    trials: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Simulation {
    code: String,
    channel: String,
    trials: u64,
    seed: u64,
    block: Estimate,
    bit: Estimate,
    ambiguity: Option<Estimate>,
    analytic: Vec<(String, f64)>,
}

fn write_code(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn threshold_values() {
    let out = boundlab(&["threshold", "pstar", "--q", "2", "--lambda", "0.533", "--delta", "0.1", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let t: Threshold = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(t.kind, "pstar");
    assert_eq!((t.q, t.lambda, t.delta, t.rate), (Some(2), Some(0.533), Some(0.1), None));
    assert!((t.value - 0.077).abs() <= 2e-3);
    assert!(t.bracket.0 <= t.value && t.value <= t.bracket.1 && t.bracket.1 - t.bracket.0 < 1e-11);
    assert!(t.iterations > 0 && !t.boundary && t.residual <= 0.0);

    let out = boundlab(&["threshold", "johnson", "--q", "2", "--delta", "0.1", "--format", "json"]);
    let t: Threshold = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((t.value - 0.052786).abs() < 1e-6);

    let out = boundlab(&["threshold", "pstar-dual", "--lambda", "0.4", "--R", "0.4", "--delta", "0.1"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout(&out).starts_with("pstar-dual = "));
    let out = boundlab(&["threshold", "tvz", "--q", "49", "--delta", "0", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
}

#[test]
fn domain_errors_exit_2() {
    let out = boundlab(&["threshold", "pstar", "--q", "2", "--lambda", "0", "--delta", "0.1"]);
    assert_eq!(code_of(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    assert_eq!(code_of(&boundlab(&["threshold", "tvz", "--q", "4", "--delta", "0.1"])), 2);
    assert_eq!(code_of(&boundlab(&["threshold", "ru", "--q", "2", "--delta", "0.1"])), 2);
    assert_eq!(code_of(&boundlab(&["threshold", "johnson", "--delta", "0.1"])), 2);
    assert_eq!(code_of(&boundlab(&["figure", "no-such-figure"])), 2);
    assert_eq!(code_of(&boundlab(&["figure", "ru-q15", "--points", "1"])), 2);
    assert_eq!(code_of(&boundlab(&["verify", "nothing"])), 2);
    assert_eq!(code_of(&boundlab(&["frobnicate"])), 2);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_boundlab"))
        .args(["threshold", "johnson", "--q", "2", "--delta", "0.1"])
        .env("BOUNDS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code_of(&out), 2);
}

#[test]
fn figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = boundlab(&["figure", "pstar-vs-johnson", "--points", "32", "-o", path.to_str().unwrap()]);
        assert_eq!(code_of(&out), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    let strip = |t: &str| t.lines().filter(|l| !l.starts_with("# command")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&text), strip(&fs::read_to_string(&b).unwrap()));
    assert!(text.lines().any(|l| l.starts_with("# command: boundlab figure pstar-vs-johnson")));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "delta,pstar_q9,johnson_q9,pstar_q17,johnson_q17,upper_delta,lower_half_delta");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 33);

    let out = boundlab(&["figure", "F-lambda", "--points", "8", "--p-list", "0.1,0.2"]);
    assert_eq!(code_of(&out), 0);
    assert!(stdout(&out).contains("gamma,F_lambda_p0.1,F_lambda_p0.2\n"));
}

#[test]
fn simulate_repetition_code() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_code(dir.path(), "rep3.txt", "# binary repetition\n2 3 1\n1 1 1\n");
    let args = ["simulate", rep.as_str(), "--channel", "qsc", "--p", "0.1", "--trials", "200000", "--seed", "7"];
    let first = boundlab(&args);
    let second = boundlab(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("exact block"));

    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let s: Simulation = serde_json::from_str(&stdout(&boundlab(&json_args))).unwrap();
    assert_eq!((s.trials, s.seed, s.block.trials), (200_000, 7, 200_000));
    assert_eq!(s.code, "q=2 n=3 k=1");
    assert!(s.channel.starts_with("qSC"));
    assert!(s.block.lo <= 0.028 && 0.028 <= s.block.hi, "{:?}", s.block);
    assert!((s.block.p_hat - s.block.errors as f64 / 200_000.0).abs() < 1e-15);
    assert!(s.bit.trials == 3 * 200_000 && s.ambiguity.is_none());
    let exact = s.analytic.iter().find(|(k, _)| k.starts_with("exact block")).unwrap().1;
    assert!((exact - 0.028).abs() < 1e-15);

    let mut threaded = Command::new(env!("CARGO_BIN_EXE_boundlab"));
    let one = threaded.args(args).env("BOUNDS_THREADS", "1").output().unwrap();
    assert_eq!(one.stdout, first.stdout);

    let out = boundlab(&[
        "simulate",
        rep.as_str(),
        "--channel",
        "qec",
        "--lambda",
        "0.3",
        "--trials",
        "1000",
        "--format",
        "json",
    ]);
    let s: Simulation = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(s.ambiguity.is_some());
}

#[test]
fn simulate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_code(dir.path(), "rep3.txt", "2 3 1\n1 1 1\n");
    let trials0 = ["simulate", rep.as_str(), "--channel", "qsc", "--p", "0.1", "--trials", "0"];
    assert_eq!(code_of(&boundlab(&trials0)), 2);
    let broken = write_code(dir.path(), "broken.txt", "2 3 2\n1 1 1\n");
    assert_eq!(code_of(&boundlab(&["simulate", broken.as_str(), "--channel", "qsc", "--p", "0.1"])), 2);
    let dependent = write_code(dir.path(), "dep.txt", "2 3 2\n1 1 1\n1 1 1\n");
    assert_eq!(code_of(&boundlab(&["simulate", dependent.as_str(), "--channel", "qsc", "--p", "0.1"])), 2);
    let composite = write_code(dir.path(), "q4.txt", "4 2 1\n1 1\n");
    assert_eq!(code_of(&boundlab(&["simulate", composite.as_str(), "--channel", "qsc", "--p", "0.1"])), 2);
    assert_eq!(code_of(&boundlab(&["simulate", rep.as_str(), "--channel", "qsc"])), 2);
    assert_eq!(code_of(&boundlab(&["simulate", "/nonexistent/code.txt", "--channel", "qsc", "--p", "0.1"])), 2);
}

#[test]
fn verify_suite_passes() {
    let out = boundlab(&["verify", "all"]);
    assert_eq!(code_of(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    let out = boundlab(&["verify", "geometry", "--format", "json"]);
    assert_eq!(code_of(&out), 0);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(reports.iter().all(|r| r["violations"] == 0 && r["suite"] == "geometry"));
}
