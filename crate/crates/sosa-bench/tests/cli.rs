//! Process-level checks of the `sosa-bench` binary: exit codes, config
//! error handling before any run, env-var defaults and output files.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sosa-bench"))
}

#[test]
fn unknown_problem_fails_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = bin()
        .args(["--problems", "rosenbrock30", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("rosenbrock"), "diagnostic missing: {stderr}");
    assert!(!out.exists(), "no output may be written on a config error");
}

#[test]
fn unknown_algorithm_fails_with_diagnostic() {
    let output = bin().args(["--algorithms", "sosa,annealing"]).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("annealing"), "diagnostic missing: {stderr}");
}

#[test]
fn tiny_run_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let output = bin()
        .args([
            "--algorithms",
            "dds",
            "--problems",
            "ackley4",
            "--trials",
            "2",
            "--budget",
            "25",
            "--seed",
            "3",
            "--jobs",
            "2",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    for file in ["curves.csv", "summary.csv", "qtotals.csv", "curve_mean_dds_ackley4.csv"] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    let mut lines = curves.lines();
    assert_eq!(lines.next().unwrap(), "algorithm,problem,trial,eval_index,best_f");
    assert_eq!(curves.lines().count(), 1 + 2 * 25);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("algorithm,problem,trials,mean_final,std_final,q\n"));
    let qtotals = std::fs::read_to_string(out.join("qtotals.csv")).unwrap();
    assert!(qtotals.starts_with("algorithm,q_total\n"));
}

#[test]
fn out_dir_env_var_is_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-env");
    let output = bin()
        .env("SOSA_OUT_DIR", &out)
        .args([
            "--algorithms",
            "dds",
            "--problems",
            "ackley4",
            "--trials",
            "1",
            "--budget",
            "20",
        ])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(out.join("curves.csv").exists());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    let out_file = dir.path().join("from-file");
    let out_flag = dir.path().join("from-flag");
    std::fs::write(
        &config,
        format!(
            r#"
[experiment]
trials = 1
budget = 20
seed = 2
out = "{}"

[algorithms]
names = ["dds"]

[problems]
names = ["ackley4"]
"#,
            out_file.display()
        ),
    )
    .unwrap();

    let output = bin().arg("--config").arg(&config).output().unwrap();
    assert!(output.status.success());
    assert!(out_file.join("curves.csv").exists());

    // The flag wins over the file value.
    let output = bin()
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_flag)
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(out_flag.join("curves.csv").exists());

    // Identical invocations produce identical bytes.
    let bytes_before = std::fs::read(out_file.join("curves.csv")).unwrap();
    let output = bin().arg("--config").arg(&config).output().unwrap();
    assert!(output.status.success());
    assert_eq!(bytes_before, std::fs::read(out_file.join("curves.csv")).unwrap());
}

#[test]
fn config_error_mentions_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("broken.toml");
    std::fs::write(&config, "[experiment]\ntrials = \"many\"\n").unwrap();
    let output = bin().arg("--config").arg(&config).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("broken.toml"), "diagnostic missing: {stderr}");
}
