use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

const CONFIGS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");

fn psoct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psoct")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

/// A reduced desk run in `dir`: the stock config with fewer detectors.
fn config(dir: &Path, phantom: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut cfg: Value = serde_json::from_str(&fs::read_to_string(format!("{CONFIGS}/desk_free.json")).unwrap()).unwrap();
    cfg["phantom"] = json!(format!("{CONFIGS}/{phantom}"));
    cfg["detectors"]["count"] = json!(60);
    cfg["output"] = json!("out");
    edit(&mut cfg);
    let p = dir.join("run.json");
    fs::write(&p, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    p
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn selftest_passes() {
    let o = psoct(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("tolerance"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn mutated_determinant_fails() {
    let o = psoct(&["selftest", "--mutate-determinant", "1e-6"]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8_lossy(&o.stdout);
    let line = text.lines().find(|l| l.contains("determinant")).unwrap();
    assert!(line.ends_with("FAIL"), "{line}");
}

#[test]
fn zero_contrast_forward_matches_background() {
    let dir = tempfile::tempdir().unwrap();
    let free = dir.path().join("flat.json");
    let mut ph = read(Path::new(&format!("{CONFIGS}/gaussian_free.json")));
    ph["eps"] = json!(0.0);
    fs::write(&free, ph.to_string()).unwrap();
    let cfg = config(dir.path(), "unused", |c| c["phantom"] = json!(free.to_str().unwrap()));
    let o = psoct(&["forward", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = dir.path().join("out/measurement");
    let man = read(&m.join("measurement.json"));
    for d in man["directions"].as_array().unwrap() {
        for s in 0..2 {
            let a = fs::read(m.join(d["data"][s].as_str().unwrap())).unwrap();
            let b = fs::read(m.join(d["background"][s].as_str().unwrap())).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "gaussian.json", |c| c["measurement"]["noise"] = json!(0.01));
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    for (out, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let o = psoct(&["forward", "--config", cfg, "--out", out.to_str().unwrap(), "--seed", seed]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let f = "measurement/data_0000_s1.csv";
    assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    assert_eq!(fs::read(a.join("forward.json")).unwrap(), fs::read(b.join("forward.json")).unwrap());
    assert_ne!(fs::read(a.join(f)).unwrap(), fs::read(c.join(f)).unwrap());
}

#[test]
fn missing_phantom_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "no_such_phantom.json", |_| {});
    let o = psoct(&["forward", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_flags_and_configs_are_validation_errors() {
    assert_eq!(code(&psoct(&["forward"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "gaussian.json", |c| c["detectors"]["count"] = json!(0));
    assert_eq!(code(&psoct(&["forward", "--config", cfg.to_str().unwrap()])), 1);
    let cfg = config(dir.path(), "gaussian.json", |c| c["surprise"] = json!(1));
    assert_eq!(code(&psoct(&["forward", "--config", cfg.to_str().unwrap()])), 1);
    let cfg = config(dir.path(), "gaussian.json", |_| {});
    assert_eq!(code(&psoct(&["forward", "--config", cfg.to_str().unwrap(), "--lambda", "-1"])), 1);
}

#[test]
fn pipeline_in_stages_flags_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "gaussian_free.json", |_| {});
    let cfg = cfg.to_str().unwrap();
    for cmd in ["forward", "extract", "invert"] {
        let o = psoct(&[cmd, "--config", cfg]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let out = dir.path().join("out");
    let report = read(&out.join("invert_report.json"));
    assert_eq!(report["status"], "ok");
    assert_eq!(report["closed_form"], true);
    assert_eq!(report["excluded"], 0);
    assert!(out.join("reconstruction.json").exists());
    assert!(out.join("samples.json").exists());
}

#[test]
fn corrupted_manifest_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "gaussian_free.json", |_| {});
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&psoct(&["forward", "--config", cfg])), 0);
    let m = dir.path().join("out/measurement/measurement.json");
    fs::write(&m, "{ \"eps\": 0.001, \"directions\": [").unwrap();
    let o = psoct(&["extract", "--config", cfg]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn excessive_exclusion_aborts_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "gaussian_free.json", |c| {
        c["inversion"]["admissibility"] = json!({ "tie": 1e-3, "pole": 0.9 });
        c["inversion"]["max_excluded_fraction"] = json!(0.1);
    });
    let o = psoct(&["roundtrip", "--config", cfg.to_str().unwrap()]);
    assert_ne!(code(&o), 0);
    let report = read(&dir.path().join("out/invert_report.json"));
    assert_eq!(report["status"], "aborted");
    assert!(report["error"].as_str().unwrap().contains("exclu"), "{report}");
}
