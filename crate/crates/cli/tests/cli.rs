// SPDX-License-Identifier: Apache-2.0
use std::path::Path;
use std::process::{Command, Output};

fn comet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comet")).args(args).current_dir(cwd).env_remove("COMET_CONFIG_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const SMALL: &str = r#"
[sweep]
ms_values = ["0.3e6 A/m", "0.4e6 A/m"]
ku_values = [0.5e6]
a_values = ["10 pJ/m"]
alpha_values = [0.01]
jc_values = ["1e11 A/m^2", "5e11 A/m^2"]
"#;

#[test]
fn help_documents_exit_codes_and_env() {
    let d = tempfile::tempdir().unwrap();
    let o = comet(&["--help"], d.path());
    let s = String::from_utf8(o.stdout).unwrap();
    for needle in ["Exit codes", "COMET_CONFIG_DIR", "sweep", "pareto", "report"] {
        assert!(s.contains(needle), "{needle}");
    }
}

#[test]
fn typo_in_override_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let o = comet(&["propagate", "--set", "material.ms_pm=1"], d.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("material.ms_pma"));
    let o = comet(&["propagate", "--set", "drive.j_c=\"5 V\""], d.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn propagate_writes_trace_and_summary() {
    let d = tempfile::tempdir().unwrap();
    let o = comet(&["propagate", "--out", "o", "--set", "drive.j_c=\"5e11 A/m^2\""], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace = std::fs::read_to_string(d.path().join("o/dw_trace.csv")).unwrap();
    assert!(trace.starts_with("t,q,phi,delta,v_inst\n"));
    assert!(d.path().join("o/propagate.json").exists());
    assert!(d.path().join("o/propagate.meta.json").exists());
}

#[test]
fn sweep_then_figures() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("small.toml"), SMALL).unwrap();
    let o = comet(&["sweep", "--config", "small.toml", "--mode", "propagation", "--jobs", "2", "--out", "s", "--figure", "fig-prop"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let prop = std::fs::read_to_string(d.path().join("s/fig-prop.csv")).unwrap();
    assert_eq!(prop.lines().count(), 5);
    assert!(!d.path().join("s/checkpoint.csv").exists());

    // energy-delay data needs gate totals
    let o = comet(&["report", "--figure", "fig-edp", "--input", "s/results.csv", "--out", "r"], d.path());
    assert_eq!(code(&o), 4);
    let o = comet(&["pareto", "--input", "s/results.csv", "--out", "r"], d.path());
    assert_eq!(code(&o), 4);
    let o = comet(&["report", "--figure", "fig-prop", "--input", "s/results.csv", "--out", "r"], d.path());
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(d.path().join("r/fig-prop.csv")).unwrap(), prop.as_bytes());
}

#[test]
fn config_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let cfgdir = d.path().join("cfg");
    std::fs::create_dir(&cfgdir).unwrap();
    std::fs::write(cfgdir.join("comet.toml"), "[drive]\nj_c = \"1e12 A/m^2\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_comet"))
        .args(["propagate", "--out", "o"])
        .current_dir(d.path())
        .env("COMET_CONFIG_DIR", &cfgdir)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let j = std::fs::read_to_string(d.path().join("o/propagate.json")).unwrap();
    assert!(j.contains("1000000000000.0"), "{j}");
}

#[test]
fn calibrate_reproduces_the_shipped_file() {
    let d = tempfile::tempdir().unwrap();
    let o = comet(&["calibrate", "--out", "c"], d.path());
    assert_eq!(code(&o), 0);
    let fresh = std::fs::read_to_string(d.path().join("c/table2.toml")).unwrap();
    let shipped = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../calibration/table2.toml")).unwrap();
    assert_eq!(fresh, shipped);
}
