use std::process::{Command, Output};

fn qball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qball"))
        .args(args)
        .env_remove("QBALL_N")
        .env_remove("QBALL_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn passing_check_exits_zero_with_json() {
    let out = qball(&["relation-match"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"schema\": 1"));
    assert!(text.contains("\"pass\": true"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&qball(&["--help"])), 0);
    assert_eq!(code(&qball(&["--version"])), 0);
}

#[test]
fn bad_configuration_exits_two() {
    assert_eq!(code(&qball(&["check-su", "-n", "2"])), 2);
    assert_eq!(code(&qball(&["check-su", "--format", "csv"])), 2);
    assert_eq!(code(&qball(&["diagram"])), 2);
    assert_eq!(code(&qball(&["no-such-command"])), 2);
    assert_eq!(code(&qball(&["limit-sweep", "--cuts", "40"])), 2);
}

#[test]
fn failed_check_exits_three() {
    // a tolerance no floating point residual can meet
    let out = qball(&["check-su", "-n", "6", "--cuts", "2", "--q", "0.5", "--tol", "1e-300"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"pass\": false"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["limit-sweep", "-n", "8", "--q", "0.3,0.6", "--format", "csv"];
    let a = qball(&args);
    let b = qball(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("generator,q,N,value"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("qball-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fock.json");
    let to_file = qball(&["fock-formulas", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&to_file), 0);
    let to_stdout = qball(&["fock-formulas"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
