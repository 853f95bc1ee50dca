use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fgsim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgsim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("fgsim runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const OV_2_1: &str = r#"{"schema_version":1,"problem":"ov","n":2,"d":1,"u":["1","0"],"v":["1","0"]}"#;

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.json", "b.json"] {
        let o = fgsim(&["gen", "ov", "--n", "4", "--d", "3", "--seed", "7", "--out", out], dir.path());
        assert_eq!(code(&o), 0);
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let c = fgsim(&["gen", "ov", "--n", "4", "--d", "3", "--seed", "8"], dir.path());
    assert_ne!(c.stdout, a);
}

#[test]
fn gen_rejects_pigeonhole_threesum() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(&["gen", "threesum", "--n", "10", "--bound", "3"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("[-3, 3]"));
}

#[test]
fn gen_nwt_weights_in_range() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(&["gen", "nwt", "--n", "3", "-M", "1", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["problem"], "nwt");
    for e in v["edges"].as_array().unwrap() {
        assert!(e["w"].as_i64().unwrap().abs() <= 1);
        let (i, j) = (e["i"].as_u64().unwrap(), e["j"].as_u64().unwrap());
        assert!(1 <= i && i < j && j <= 3);
    }
}

#[test]
fn verify_small_ov_instance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ov.json"), OV_2_1).unwrap();
    let o = fgsim(&["verify", "ov.json", "--backend", "both", "--out", "r.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.matches("p_acc: 1/128\n").count(), 2, "{text}");
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert_eq!(reports[0]["pass"], true);

    let o = fgsim(&["verify", "ov.json", "--mode", "qram", "--out", "r.txt"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(dir.path().join("r.txt")).unwrap(), stdout(&o));
}

#[test]
fn verify_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"schema_version\": 1, \"problem\": ").unwrap();
    assert_eq!(code(&fgsim(&["verify", "bad.json"], dir.path())), 2);
    fs::write(dir.path().join("v2.json"), OV_2_1.replace(":1,", ":2,")).unwrap();
    assert_eq!(code(&fgsim(&["verify", "v2.json"], dir.path())), 2);
    assert_eq!(code(&fgsim(&["verify", "missing.json"], dir.path())), 2);
}

#[test]
fn verify_dense_over_cap() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(&["gen", "nwt", "--n", "3", "-M", "1", "--seed", "1", "--out", "g.json"], dir.path());
    assert_eq!(code(&o), 0);
    let o = fgsim(&["verify", "g.json", "--backend", "dense"], dir.path());
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn build_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ov.json"), OV_2_1).unwrap();
    let o = fgsim(&["build", "ov.json", "--mode", "explicit", "--out", "c.txt"], dir.path());
    assert_eq!(code(&o), 0);
    let o = fgsim(&["simulate", "c.txt", "--backend", "both"], dir.path());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("mode: explicit\n"));
    assert!(text.contains("p_acc: 1/128\n"));
    assert!(text.contains("backends_agree: true\n"));
}

#[test]
fn sweep_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(
        &["sweep", "ov", "--n", "1..8", "--d", "1..4", "--trials", "10", "--jobs", "4"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("total 320/320\n"), "{}", stdout(&o));
}

#[test]
fn sweep_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |o: Output| -> Vec<String> {
        // Drop the wall-time column.
        stdout(&o)
            .lines()
            .map(|l| l.rsplit_once(' ').map_or(l, |(head, _)| head).to_string())
            .collect()
    };
    let args = |jobs| vec!["sweep", "nwt", "--n", "2..4", "-M", "1,2", "--trials", "4", "--seed", "3", "--jobs", jobs];
    assert_eq!(strip(fgsim(&args("1"), dir.path())), strip(fgsim(&args("3"), dir.path())));
}

#[test]
fn sweep_without_trials() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(&["sweep", "ov", "--n", "1..3", "--d", "2", "--trials", "0"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("total 0/0\n"));
}

#[test]
fn sweep_with_mutated_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(
        &["sweep", "threesum", "--n", "3..4", "--bound", "2", "--trials", "4", "--mutated-control"],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("total 8/8\n"), "{text}");
    assert!(text.contains("removed): FAIL"));
}

#[test]
fn sweep_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = fgsim(&["sweep", "nwt", "--n", "7", "-M", "1", "--trials", "1"], dir.path());
    assert_eq!(code(&o), 2);
}
