use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nonsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonsep")).args(args).output().unwrap()
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn run_sample(name: &str, out: &Path, extra: &[&str]) -> (Output, Value, String) {
    let s = scenarios().join(name);
    let mut args = vec!["run", s.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = nonsep(&args);
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let kind = report["kind"].as_str().unwrap().to_string();
    let csv = fs::read_to_string(out.join(format!("{kind}.csv"))).unwrap();
    (o, report, csv)
}

#[test]
fn cubes_scenario_reports_area_19() {
    let t = TempDir::new().unwrap();
    let (o, r, csv) = run_sample("cubes_area_5.json", t.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(r["results"]["exhaustive"]["value"], 19.0);
    assert_eq!(r["results"]["closed_form"], 19.0);
    assert_eq!(r["passed"], true);
    assert!(csv.starts_with("run,step,value\n"));
}

#[test]
fn sigma_scenario_reports_two() {
    let t = TempDir::new().unwrap();
    let (o, r, _) = run_sample("sigma_triangle.json", t.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!((r["results"]["sigma"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn chessboard_bracket_contains_one() {
    let t = TempDir::new().unwrap();
    let (o, r, csv) = run_sample("lattice_chessboard.json", t.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let lo = r["results"]["tightness"]["lower"].as_f64().unwrap();
    let hi = r["results"]["tightness"]["upper"].as_f64().unwrap();
    assert!(lo <= 1.0 && 1.0 <= hi, "[{lo}, {hi}]");
    assert!(csv.starts_with("quantity,lower,upper\n"));
}

#[test]
fn every_sample_is_reproducible() {
    for entry in fs::read_dir(scenarios()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if !name.ends_with(".json") {
            continue;
        }
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        let (_, ra, ca) = run_sample(&name, a.path(), &[]);
        let (_, rb, cb) = run_sample(&name, b.path(), &[]);
        assert_eq!(ca, cb, "{name}: CSV differs between runs");
        assert_eq!(ra, rb, "{name}: report differs between runs");
    }
}

#[test]
fn seed_changes_random_series() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let (_, ra, ca) = run_sample("covering_simplex.json", a.path(), &["--seed", "1"]);
    let (_, rb, cb) = run_sample("covering_simplex.json", b.path(), &["--seed", "2"]);
    assert_eq!(ra["seed"], 1);
    assert_eq!(rb["seed"], 2);
    assert_ne!(ca, cb);
}

#[test]
fn failed_checks_exit_one() {
    // the stated perimeter formula is not the true maximum
    let t = TempDir::new().unwrap();
    let (o, r, _) = run_sample("cubes_perimeter_5.json", t.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(r["passed"], false);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL exhaustive maximum"));
}

#[test]
fn wrong_expectation_exits_one() {
    let t = TempDir::new().unwrap();
    let s = write(
        &t,
        "s.json",
        r#"{"kind":"sigma","parameters":{"body":{"dim":2,"vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]},"expect":2}}"#,
    );
    let out = t.path().join("o");
    let o = nonsep(&["run", &s, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let t = TempDir::new().unwrap();
    let out = t.path().join("o");
    let out = out.to_str().unwrap();
    let bad = [
        r#"{"kind":"teleport"}"#,
        r#"{"kind":"cubes","parameters":{"n":5,"colour":"red"}}"#,
        r#"{"kind":"cubes","parameters":{"n":3}}"#,
        r#"{"kind":"sigma","parameters":{"body":{"dim":2}}}"#,
        r#"{"kind":"lattice","parameters":{"task":"ns","body":{"dim":2,"vertices":[[0,0],[1,0],[0,1]]},"lattice":{"basis":[[1,0],[2,0]]}}}"#,
        r#"not json"#,
    ];
    for (i, text) in bad.iter().enumerate() {
        let s = write(&t, &format!("bad{i}.json"), text);
        let o = nonsep(&["run", &s, "--out", out]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(nonsep(&["run", "/nonexistent/s.json", "--out", out]).status.code(), Some(2));
    assert_eq!(nonsep(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nonsep(&["--tol", "-1", "cubes", "extremal", "--n", "5"]).status.code(), Some(2));
    // no output directory anywhere
    let s = write(&t, "noout.json", r#"{"kind":"cubes","parameters":{"n":4}}"#);
    assert_eq!(nonsep(&["run", &s]).status.code(), Some(2));
}

#[test]
fn one_shot_commands() {
    let t = TempDir::new().unwrap();
    let tri = write(&t, "tri.json", r#"{"dim":2,"vertices":[[0,0],[3,0],[0,3]]}"#);
    let o = nonsep(&["sigma", &tri]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["sigma"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["q"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);

    // touching translates of a square: NS, and the union fits in the doubled square
    let fam = write(
        &t,
        "fam.json",
        r#"{"base":{"dim":2,"vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]},"members":[{"x":[0,0],"tau":1},{"x":[2,0],"tau":1}]}"#,
    );
    let v: Value = serde_json::from_slice(&nonsep(&["ns", &fam]).stdout).unwrap();
    assert_eq!(v["ns"], true);
    let v: Value = serde_json::from_slice(&nonsep(&["wns", &fam]).stdout).unwrap();
    assert_eq!(v["wns"], true);
    let o = nonsep(&["lambda", &fam]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert_eq!(v["certified"], true);
    let o = nonsep(&["cover", &fam]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], true);

    let apart = write(
        &t,
        "apart.json",
        r#"{"base":{"dim":2,"vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]},"members":[{"x":[0,0],"tau":1},{"x":[3,0],"tau":1}]}"#,
    );
    let v: Value = serde_json::from_slice(&nonsep(&["ns", &apart]).stdout).unwrap();
    assert_eq!(v["ns"], false);
    assert_eq!(v["split"]["left"].as_array().unwrap().len(), 1);
    let v: Value = serde_json::from_slice(&nonsep(&["wns", &apart]).stdout).unwrap();
    assert_eq!(v["wns"], false);
    assert!(v["witness"]["gap"].as_f64().unwrap() > 0.9);

    let sq = write(&t, "sq.json", r#"{"dim":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#);
    let big = write(&t, "big.json", r#"{"dim":2,"vertices":[[0,0],[2,0],[2,2],[0,2]]}"#);
    let v: Value = serde_json::from_slice(&nonsep(&["summand", &sq, &big]).stdout).unwrap();
    assert_eq!(v["summand"], true);
    let v: Value = serde_json::from_slice(&nonsep(&["summand", &tri, &big]).stdout).unwrap();
    assert_eq!(v["summand"], false);
}

#[test]
fn lattice_commands() {
    let t = TempDir::new().unwrap();
    let body = write(&t, "k.json", r#"{"dim":2,"vertices":[[-0.5,-0.5],[0.5,-0.5],[0.5,0.5],[-0.5,0.5]]}"#);
    let chess = write(&t, "l.json", r#"{"basis":[[1,1],[1,-1]]}"#);
    let o = nonsep(&["lattice", "tightness", &body, &chess, "--resolution", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["lower"].as_f64().unwrap() <= 1.0 && v["upper"].as_f64().unwrap() >= 1.0);

    let z = write(&t, "z.json", r#"{"basis":[[1,0],[0,1]]}"#);
    let v: Value = serde_json::from_slice(&nonsep(&["lattice", "ns", &body, &z]).stdout).unwrap();
    assert_eq!(v["ns"], true);
    // half as tall a square leaves horizontal gaps
    let flat = write(&t, "f.json", r#"{"dim":2,"vertices":[[-0.5,-0.2],[0.5,-0.2],[0.5,0.2],[-0.5,0.2]]}"#);
    let v: Value = serde_json::from_slice(&nonsep(&["lattice", "ns", &flat, &z]).stdout).unwrap();
    assert_eq!(v["ns"], false);

    let out = t.path().join("curve.csv");
    let args = ["--seed", "4", "--out", out.to_str().unwrap(), "lattice", "mu1w", &flat, &z, "--window", "4", "--samples", "500", "--t-max", "3", "--steps", "6"];
    assert_eq!(nonsep(&args).status.code(), Some(0));
    let first = fs::read_to_string(&out).unwrap();
    assert_eq!(nonsep(&args).status.code(), Some(0));
    assert_eq!(first, fs::read_to_string(&out).unwrap());
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "t,hit_fraction,miss_margin");
    assert_eq!(lines.len(), 8);
    // horizontal lines are all hit once 0.4 t reaches the row spacing 1
    assert!(lines[6].starts_with("2.5,1.0,0.0"), "{}", lines[6]);
    assert!(lines[2].starts_with("0.5,") && !lines[2].starts_with("0.5,1.0,"), "{}", lines[2]);
}

#[test]
fn cubes_commands() {
    let v: Value = serde_json::from_slice(&nonsep(&["cubes", "search", "--n", "5", "--objective", "area"]).stdout).unwrap();
    assert_eq!(v["value"], 19.0);
    assert_eq!(v["family"]["offsets"].as_array().unwrap().len(), 5);
    let v: Value = serde_json::from_slice(&nonsep(&["cubes", "extremal", "--n", "7"]).stdout).unwrap();
    assert_eq!(v["area"], 39.0);
    assert_eq!(v["closed_form"]["area"], 39);
    assert_eq!(v["wns"], true);
    assert!((v["perimeter"].as_f64().unwrap() - (4.0 + 4.0 * 26f64.sqrt())).abs() < 1e-9);
    assert_eq!(nonsep(&["cubes", "search", "--n", "9"]).status.code(), Some(2));
}
