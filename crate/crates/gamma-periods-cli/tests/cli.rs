use assert_cmd::Command;
use predicates::prelude::*;

fn bin() -> Command {
    Command::cargo_bin("gamma-periods").unwrap()
}

#[test]
fn euler_exact_match_exit_zero() {
    bin()
        .args(["euler", "--a", "1/3", "--b", "1/3", "--digits", "30"])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"schema\": 1"))
        .stdout(predicate::str::contains("exact-match"));
}

#[test]
fn invalid_branch_is_input_error() {
    bin()
        .args(["theorem-b", "--branch", "d=2; points=0; mults=1"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("does not divide"));
}

#[test]
fn nontrivial_koblitz_ogus_exits_one() {
    bin()
        .args(["koblitz-ogus", "--modulus", "3", "--eps", "0,1,-1"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("\"trivial\": false"));
}

#[test]
fn trivial_koblitz_ogus_exits_zero() {
    // Moments at both units of Z/4 vanish for (0, 1, -2, 1).
    bin()
        .args(["koblitz-ogus", "--modulus", "4", "--eps", "0,1,-2,1"])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"trivial\": true"));
}

#[test]
fn config_file_supplies_parameters_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(
        &path,
        "branch = d = 3; points = 0, 1, inf; mults = 1, 1, 1\nlambda = 1\ndigits = 25\n",
    )
    .unwrap();
    bin()
        .args(["hrr-check", "--config", path.to_str().unwrap()])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"digits\": 25"));
    // The flag overrides the config value.
    bin()
        .args([
            "hrr-check",
            "--config",
            path.to_str().unwrap(),
            "--digits",
            "30",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"digits\": 30"));
}

#[test]
fn malformed_config_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "digits = 30\nnot a pair\n").unwrap();
    bin()
        .args(["euler", "--config", path.to_str().unwrap()])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("bad.cfg:2:1"));
}

#[test]
fn env_var_sets_default_digits() {
    bin()
        .env("GAMMA_PERIODS_DIGITS", "23")
        .args(["distribution", "--d", "2", "--s", "1/2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"digits\": 23"));
}

#[test]
fn digits_below_twenty_rejected() {
    bin()
        .args(["euler", "--a", "1/2", "--b", "1/2", "--digits", "10"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("at least 20"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let run = || {
        bin()
            .args([
                "theorem-b",
                "--branch",
                "d=3; points=0,1,inf; mults=1,1,1",
                "--lambda",
                "1",
                "--digits",
                "40",
            ])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn pslq_none_exits_one() {
    bin()
        .args([
            "pslq",
            "--values",
            "1,3.14159265358979323846264338327950288419716939937510",
            "--digits",
            "40",
            "--max-coeff",
            "1000000",
        ])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("\"relation\": null"));
}

#[test]
fn unit_period_pipeline() {
    bin()
        .args(["unit-period", "--m", "3", "--digits", "30"])
        .assert()
        .success()
        .stdout(predicate::str::contains("exact-match"));
}
