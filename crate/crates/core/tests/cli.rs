use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hatgame"))
        .args(args)
        .env_remove("HATGAME_ALLOW_LARGE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn enumerate_counts() {
    assert_eq!(stdout(&["enumerate", "--n", "5", "--das", "7", "--count-only"]), "320\n");
    assert_eq!(stdout(&["enumerate", "--n", "5", "--das", "6", "--count-only"]), "0\n");
    assert_eq!(stdout(&["enumerate", "--n", "2", "--das", "2", "--count-only"]), "6\n");
}

#[test]
fn enumerate_json_lines() {
    let text = stdout(&["enumerate", "--n", "5", "--das", "7", "--format", "json"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 320);
    assert!(lines.contains(&r#"{"members":[0,7,11,19,28,29,30],"signature":"024001","das":7}"#));
}

#[test]
fn output_does_not_depend_on_workers() {
    let one = stdout(&["enumerate", "--n", "5", "--das", "7", "--format", "csv"]);
    let four = stdout(&["enumerate", "--n", "5", "--das", "7", "--format", "csv", "--jobs", "4"]);
    assert_eq!(one, four);
    assert!(one.starts_with("members,signature,das\n\"0,1,2,15,23,27,28\",031021,7\n"));
    let a = stdout(&["orbits", "--format", "json"]);
    let b = stdout(&["orbits", "--format", "json", "--jobs", "3"]);
    assert_eq!(a, b);
}

#[test]
fn psi_values() {
    assert_eq!(stdout(&["psi", "--p", "1/2"]), "25/32 = 0.78125\n");
    assert_eq!(stdout(&["psi", "--p", "11/20"]), "2541771/3200000 = 0.7943034375\n");
    let curve = stdout(&["psi", "--curve", "4"]);
    assert_eq!(curve.lines().count(), 6);
    assert!(curve.contains("1/2,0.5,25/32,0.78125"));
}

#[test]
fn decimal_probabilities_are_rejected() {
    let out = run(&["psi", "--p", "0.55"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("11/20"));
    assert_eq!(code(&["psi", "--p", "3/2"]), 2);
    assert_eq!(code(&["psi", "--p", "1/0"]), 2);
}

#[test]
fn optimal_counts() {
    assert_eq!(stdout(&["optimal", "--p", "2-sqrt2", "--count-only"]), "40\n");
    assert_eq!(stdout(&["optimal", "--p", "11/20", "--count-only"]), "10\n");
    assert_eq!(stdout(&["optimal", "--p", "9/10", "--count-only"]), "30\n");
}

#[test]
fn verify_a_listed_optimum() {
    let text = stdout(&["verify", "--set", "0,7,11,19,28,29,30", "--p", "11/20", "--strict"]);
    assert!(text.contains("0.7943034375"));
    assert!(text.contains("matches Ψ(5,p): yes"));
    assert!(text.contains("all equal: yes"));
}

#[test]
fn matrix_round_trips_through_a_file() {
    let json = stdout(&["matrix", "--set", "1,6,14,22,24,27,29", "--format", "json"]);
    assert!(json.starts_with(r#"{"players":5,"rows":[["#));
    let path = std::env::temp_dir().join(format!("hatgame-cli-{}.json", std::process::id()));
    std::fs::write(&path, &json).unwrap();
    let text = stdout(&["verify", "--matrix", path.to_str().unwrap(), "--p", "9/10"]);
    assert!(text.contains("losing set: 1,6,14,22,24,27,29"));
    assert!(text.contains("matches Ψ(5,p): yes"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn unsafe_stars_fail_strict_verification() {
    let path = std::env::temp_dir().join(format!("hatgame-star-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"players":2,"rows":[["*","0"],["1","0"]]}"#).unwrap();
    let args = ["verify", "--matrix", path.to_str().unwrap(), "--p", "1/2", "--strict"];
    assert_eq!(code(&args), 4);
    std::fs::write(&path, r#"{"players":2,"rows":[["1","0"],["1","?"]]}"#).unwrap();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2, column 2"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn matrix_text_render() {
    let text = stdout(&["matrix", "--n", "2", "--set", "0,3"]);
    assert_eq!(text, "   | 0 1\nP1 | 1 0\nP2 | 1 0\n");
    assert_eq!(code(&["matrix", "--n", "2", "--set", "0"]), 2);
    assert!(stdout(&["matrix", "--n", "2", "--set", "0", "--allow-inadequate"]).contains("P1"));
    let stars = stdout(&["matrix", "--set", "0,7,11,19,28,29,30", "--unicode"]);
    assert_eq!(stars.matches('⋆').count(), 2);
}

#[test]
fn classes_and_orbits() {
    let text = stdout(&["classes"]);
    assert!(text.ends_with("12 classes, 320 sets\n"));
    let csv = stdout(&["classes", "--p", "11/20", "--format", "csv"]);
    assert_eq!(csv.lines().nth(1).unwrap(), "024001,2pq^4+4p^2q^3+p^5,10,2541771/3200000,0.7943034375");
    assert!(stdout(&["orbits"]).ends_with("12 orbits, 320 sets\n"));
    assert_eq!(stdout(&["orbits", "--p", "2-sqrt2", "--format", "json"]).lines().count(), 2);
}

#[test]
fn dominance_outputs() {
    let text = stdout(&["dominance"]);
    assert!(text.ends_with("undominated on (1/2, 1): 022210, 024001\n"));
    assert!(text.contains("022210 -> 024001 [P] on (2-sqrt2, 1)"));
    let dot = stdout(&["dominance", "--dot", "--reduced"]);
    assert!(dot.starts_with("digraph dominance {"));
}

#[test]
fn covering_and_certificate() {
    assert_eq!(stdout(&["covering", "--n", "5"]), "K(5,1) = 7\n");
    assert!(stdout(&["covering", "--n", "7"]).contains("not searched"));
    assert_eq!(code(&["covering", "--n", "10"]), 2);
    let cert = stdout(&["certify"]);
    assert!(cert.contains("das 8: 0 escaping sets"));
    assert!(cert.ends_with("das=7 is optimal: yes\n"));
    assert_eq!(code(&["certify", "--frontier", "100420", "--das-max", "8"]), 4);
    assert_eq!(code(&["certify", "--frontier", "100420"]), 3);
}

#[test]
fn resource_guard_exit_code() {
    assert_eq!(code(&["enumerate", "--n", "5", "--das", "16", "--count-only"]), 3);
    assert_eq!(code(&["enumerate", "--n", "6", "--das", "64", "--count-only"]), 3);
    assert_eq!(stdout(&["enumerate", "--n", "6", "--das", "64", "--count-only", "--allow-large"]), "1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_hatgame"))
        .args(["enumerate", "--n", "6", "--das", "64", "--count-only"])
        .env("HATGAME_ALLOW_LARGE", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n");
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["enumerate", "--n", "5"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["enumerate", "--n", "5", "--das", "0"]), 2);
}
