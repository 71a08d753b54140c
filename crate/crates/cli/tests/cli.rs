use std::path::Path;
use std::process::{Command, Output};

fn ringtime(args: &[&str], dir: &Path, seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ringtime"));
    cmd.args(args).current_dir(dir).env_remove("RINGTIME_SEED");
    if let Some(s) = seed_env {
        cmd.env("RINGTIME_SEED", s);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn printed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("in.cfg"), "basis.L = 20\nfloquet.pulse_area = pi\nlimit.radii = 1,3\n").unwrap();
    let first = ringtime(&["check", "--config", "in.cfg", "--R", "2.5", "--print-config"], d, None);
    assert!(first.status.success());
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("basis.L = 20\n") && text.contains("basis.R = 2.5\n"));
    assert!(text.contains(&format!("floquet.pulse_area = {:?}\n", std::f64::consts::PI)));
    std::fs::write(d.join("canon.cfg"), &text).unwrap();
    let second = ringtime(&["check", "--config", "canon.cfg", "--print-config"], d, None);
    assert_eq!(String::from_utf8(second.stdout).unwrap(), text);
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let seed_of = |args: &[&str], env: Option<&str>| {
        let out = ringtime(args, d, env);
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().find(|l| l.starts_with("run.seed")).unwrap().to_string()
    };
    assert_eq!(seed_of(&["check", "--print-config"], None), "run.seed = 42");
    assert_eq!(seed_of(&["check", "--print-config"], Some("7")), "run.seed = 7");
    assert_eq!(seed_of(&["check", "--print-config", "--seed", "9"], Some("7")), "run.seed = 9");
    assert_eq!(ringtime(&["check", "--print-config"], d, Some("x")).status.code(), Some(2));
}

#[test]
fn seed_changes_random_states_only() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |seed: &str| ringtime(&["uncertainty", "--L", "12", "--seed", seed], d, None).stdout;
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
}

#[test]
fn csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let csv = ringtime(&["spectrum", "--L", "64", "--format", "csv"], d, None);
    let json = ringtime(&["spectrum", "--L", "64", "--format", "json"], d, None);
    assert!(csv.status.success() && json.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["table"], "spectrum");
    assert_eq!(doc["pass"], true);
    let mut rdr = csv::Reader::from_reader(csv.stdout.as_slice());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(doc["columns"].as_array().unwrap().len(), headers.len());
    assert!(headers.contains(&"tau[T]".to_string()));
    let rows = doc["rows"].as_array().unwrap();
    let mut count = 0;
    for (rec, row) in rdr.records().zip(rows) {
        let rec = rec.unwrap();
        for (h, v) in headers.iter().zip(rec.iter()) {
            match &row[h] {
                serde_json::Value::Number(n) => assert_eq!(n.as_f64().unwrap(), v.parse::<f64>().unwrap(), "{h}"),
                serde_json::Value::Bool(b) => assert_eq!(b.to_string(), v),
                other => panic!("unexpected {other}"),
            }
        }
        count += 1;
    }
    assert_eq!(count, 21);
}

#[test]
fn failures_leave_existing_output_alone() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("out.csv"), "previous").unwrap();
    std::fs::write(d.join("bad.cfg"), "spectrum.nu_max = 99\n").unwrap();
    let out = ringtime(&["spectrum", "--config", "bad.cfg", "--out", "out.csv"], d, None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(std::fs::read_to_string(d.join("out.csv")).unwrap(), "previous");
    let leftovers = std::fs::read_dir(d).unwrap().count();
    assert_eq!(leftovers, 2);

    let ok = ringtime(&["floquet", "--out", "out.csv"], d, None);
    assert!(ok.status.success());
    assert!(std::fs::read_to_string(d.join("out.csv")).unwrap().starts_with("pulse_area[rad],"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(ringtime(&["frobnicate"], d, None).status.code(), Some(2));
    assert_eq!(ringtime(&["check", "--format", "xml"], d, None).status.code(), Some(2));
    assert_eq!(ringtime(&["check", "--config", "missing.cfg"], d, None).status.code(), Some(2));
    assert_eq!(ringtime(&["floquet", "--config", "/dev/null", "--tol", "-1"], d, None).status.code(), Some(2));
}

#[test]
fn limit_tables_select_by_key() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("mw.cfg"), "limit.table = matter_wave\n").unwrap();
    let out = ringtime(&["limit", "--config", "mw.cfg"], d, None);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("l,theta[rad],"));
}
