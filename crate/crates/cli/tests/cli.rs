use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coherent-engine"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coherent-engine-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_config(name: &str, text: &str, extra: &[&str]) -> Output {
    let path = scratch(name);
    fs::write(&path, text).unwrap();
    bin().arg("run").arg(&path).args(extra).output().unwrap()
}

#[test]
fn output_file_is_byte_identical_across_runs() {
    let out_a = scratch("a.csv");
    let out_b = scratch("b.csv");
    let text = "experiment=collective\nn=10\nomega=pi\n";
    for out in [&out_a, &out_b] {
        let o = run_config("coll.cfg", text, &["--output", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(&out_a).unwrap();
    assert_eq!(a, fs::read(&out_b).unwrap());

    let csv = String::from_utf8(a).unwrap();
    assert!(csv.starts_with("# experiment=collective\n"));
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(data[0].starts_with("unit,theta_start,"));
    // header plus 10 units plus totals
    assert_eq!(data.len(), 12);
    assert!(data[11].starts_with("0,"));
}

#[test]
fn stdout_matches_file_output() {
    let out = scratch("single.csv");
    let text = "experiment=single\ndelta_theta=pi/4\n";
    let to_file = run_config("single.cfg", text, &["--output", out.to_str().unwrap()]);
    assert!(to_file.status.success());
    let to_stdout = run_config("single.cfg", text, &[]);
    assert!(to_stdout.status.success());
    assert_eq!(to_stdout.stdout, fs::read(&out).unwrap());
}

#[test]
fn config_errors_exit_with_code_two() {
    let o = run_config("bad.cfg", "t_c=-1\n", &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("ConfigError"), "{err}");
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn domain_errors_exit_with_code_two() {
    // at the Carnot point the bare cycle produces no work
    let o = run_config("carnot.cfg", "experiment=single\nt_c=2.5\nt_h=5\n", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("ZeroWork"));
}

#[test]
fn list_experiments_names_all_kinds() {
    let o = bin().arg("list-experiments").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "single",
        "collective",
        "boost-curve",
        "ep-scaling",
        "ep-ratio",
        "omega-pi",
        "split-cycle",
        "no-inversion",
    ] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name}");
    }
}

#[test]
fn selftest_passes_and_writes_plot_tables() {
    let dir = scratch("plots");
    let o = bin().arg("selftest").arg("--out-dir").arg(&dir).output().unwrap();
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    for name in ["boost.csv", "per_unit_entropy.csv", "ep_ratio.csv", "ep_scaling.csv"] {
        let csv = fs::read_to_string(dir.join(name)).unwrap();
        assert!(csv.starts_with("# experiment="), "{name}");
    }
}

#[test]
fn missing_config_file_fails() {
    let o = bin().arg("run").arg("/nonexistent/engine.cfg").output().unwrap();
    assert!(!o.status.success());
}
