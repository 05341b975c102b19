use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use specexp::expansion::a2m;
use specexp::symcore::SymPoly;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specexp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn coeff_renders_low_orders() {
    let o = run(&["coeff", "--order", "0", "--form", "ab"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/2 * B^(-3/2)");
    // a^3/4 (a''/a + (a'^2 - 1)/a^2)
    let o = run(&["coeff", "--order", "1", "--form", "a"]);
    assert_eq!(stdout(&o).trim(), "-1/4 * a + 1/4 * a * a[1]^2 + 1/4 * a^(2) * a[2]");
    let o = run(&["coeff", "--order", "1", "--format", "latex"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\\frac"));
}

#[test]
fn coeff_golden_and_guard() {
    let o = run(&["coeff", "--order", "4", "--check-golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["coeff", "--order", "5"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--order", "1", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--form", "xyz"]).status.code(), Some(2));
}

#[test]
fn coeff_json_round_trips() {
    let o = run(&["coeff", "--order", "2", "--format", "json"]);
    let p = SymPoly::from_json_str(&stdout(&o)).unwrap();
    assert_eq!(p, a2m(2));
}

#[test]
fn eval_tables() {
    let o = run(&["eval", "--family", "empty", "--H", "1", "--t", "2", "--maxM", "2", "--format", "json"]);
    assert!(o.status.success());
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["exponent"], 0);
    assert!(rows[2]["value"].as_f64().unwrap().abs() < 1e-12);
    // a = sin t at the equator: a_2 = a^2 a''/4 + a a'^2/4 - a/4 = -1/2
    let o = run(&["eval", "--family", "sphere", "--t", "1.5707963267948966", "--maxM", "1", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("exponent,re,im,kind"));
    let a2: f64 = lines.nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((a2 + 0.5).abs() < 1e-12, "{a2}");
    let o = run(&["eval", "--family", "radiation", "--H", "0.5", "--t", "0.7", "--maxM", "3", "--format", "json"]);
    assert!(json(&o)["rows"].as_array().unwrap().iter().all(|r| r["value"].as_f64().unwrap().is_finite()));
    assert_eq!(run(&["eval", "--family", "radiation", "--H", "1", "--t", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--family", "matter", "--t", "1"]).status.code(), Some(2));
}

#[test]
fn pscc_reconciliation_report() {
    let o = run(&["pscc", "--string", "ford", "--geometry", "s4", "--reconcile-paper"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("4725*zeta(7)/(16*pi^8)"));
    assert!(text.contains("27/7"));
    let o = run(&["pscc", "--reconcile-paper", "--format", "json"]);
    assert_eq!(json(&o)["pass"], true);
}

#[test]
fn pscc_finite_string_has_no_poles() {
    let o = run(&["pscc", "--string", &data("two-ball.json"), "--geometry", "s4", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let terms = json(&o)["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 3);
    assert!(terms.iter().all(|t| t["kind"].get("bulk").is_some()));
    // zeta_L(4) c_0 = (1 + 1/16) 2/3
    assert_eq!(terms[0]["coeff"]["exact"], "17/24");
}

#[test]
fn pscc_ford_log_periodic_rows() {
    let o = run(&["pscc", "--string", "ford", "--geometry", "s4", "--lambda", "100", "--format", "json"]);
    assert!(o.status.success());
    let doc = json(&o);
    let lp: Vec<&Value> = doc["terms"].as_array().unwrap().iter().filter_map(|t| t.get("logPeriodic")).collect();
    assert!(lp.len() >= 10);
    // first zero ordinate of zeta, halved
    let b0 = lp[0]["b"].as_f64().unwrap();
    assert!((b0 - 14.134725141734693 / 2.0).abs() < 1e-8, "{b0}");
    assert!(lp.iter().all(|t| (t["a"].as_f64().unwrap() - 0.25).abs() < 1e-12));
    assert!(doc["total"]["re"].as_f64().unwrap().is_finite());
    let text = stdout(&run(&["pscc", "--string", "ford", "--lambda", "100"]));
    assert!(text.contains("cos(7.0673"));
}

#[test]
fn pscc_errors_and_csv() {
    assert_eq!(run(&["pscc", "--string", "ford", "--maxM", "3"]).status.code(), Some(2));
    assert_eq!(run(&["pscc", "--geometry", "rw", "--family", "empty", "--H", "1", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["pscc", "--string", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(run(&["pscc", "--lambda", "-1"]).status.code(), Some(2));
    let o = run(&["pscc", "--geometry", "rw", "--family", "empty", "--H", "1", "--t", "2", "--no-poles", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("exponent,re,im,kind"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("specexp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# defaults\norder = 1\nform = a\n").unwrap();
    let cfg = cfg.display().to_string();
    let from_file = stdout(&run(&["--config", &cfg, "coeff"]));
    assert_eq!(from_file, stdout(&run(&["coeff", "--order", "1", "--form", "a"])));
    let overridden = stdout(&run(&["--config", &cfg, "coeff", "--order", "0"]));
    assert_eq!(overridden, stdout(&run(&["coeff", "--order", "0", "--form", "a"])));
    assert_eq!(overridden.trim(), "1/2 * a^(3)");
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", &bad.display().to_string(), "coeff"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", "--suite", "mellin", "--draws", "2", "--seed", "7"];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let doc = json(&a);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["seed"], 7);

    let o = run(&["verify", "--suite", "bell", "--bell-order", "3", "--maxM", "2"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["failed"], 0);

    let o = run(&["verify", "--suite", "bridge", "--specs", "3", "--paths", "20000", "--seed", "3"]);
    let doc = json(&o);
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["name"] == "E[x_1^2] = 1/12" && c["pass"] == true));

    let o = run(&["verify", "--suite", "dawson", "--draws", "1", "--draws-n4", "0"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_failure_and_thread_cap() {
    let o = run(&["verify", "--suite", "mellin", "--draws", "1", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_specexp"))
        .args(["coeff", "--order", "0"])
        .env("SPECEXP_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_specexp"))
        .args(["verify", "--suite", "bell", "--bell-order", "2", "--maxM", "1"])
        .env("SPECEXP_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
}
