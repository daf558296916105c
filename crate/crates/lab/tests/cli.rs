use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obdd-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn width_exact_passes() {
    let o = lab(&["width-exact", "req:q=2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["function"], "req:q=2");
    assert!(v["claim"].as_str().unwrap().contains("2^{q/2}"));
}

#[test]
fn eval_prints_truth_table() {
    let o = lab(&["eval", "eq:n=2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // EQ_2 is 1 on 00 and 11.
    assert_eq!(v["checks"][1]["measured"], "9");
    let o = lab(&["eval", "modp:p=3,n=4", "--input", "1110", "--format", "csv"]);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",true,,true"));
}

#[test]
fn verify_rpj_and_modp() {
    assert_eq!(lab(&["verify", "rpj-obdd:k=1,a=2"]).status.code(), Some(0));
    assert_eq!(lab(&["verify", "modp-qobdd:p=3,n=6"]).status.code(), Some(0));
    // Checked against the wrong function, the fingerprint fails.
    assert_eq!(lab(&["verify", "eq-qobdd:q=4", "--against", "modp:p=3,n=4"]).status.code(), Some(1));
}

#[test]
fn reorder_reports_and_programs() {
    let o = lab(&["reorder", "eq-qobdd:q=4", "--layout", "q=4", "--mode", "xor"]);
    assert_eq!(o.status.code(), Some(0));
    let o = lab(&["reorder", "eq-obdd:q=2", "--layout", "q=2", "--mode", "direct", "--emit-program"]);
    assert!(stdout(&o).starts_with("obdd 4 "));
    let o = lab(&["reorder", "control-qobdd", "--layout", "q=2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(lab(&["eval", "nope:n=2"]).status.code(), Some(2));
    assert_eq!(lab(&["suite", ""]).status.code(), Some(2));
    assert_eq!(lab(&["reorder", "eq-obdd:q=2", "--layout", "q=3"]).status.code(), Some(2));
    assert_eq!(lab(&["verify", "eq-obdd:q=2", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(lab(&["width-exact", "eq:n=18"]).status.code(), Some(3));
    assert_eq!(lab(&["verify", "modp-qobdd:p=3,n=20"]).status.code(), Some(3));
}

#[test]
fn sampled_mode_records_seed() {
    let o = lab(&["verify", "modp-qobdd:p=3,n=20", "--samples", "200", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["inputs"], "sampled:count=200,seed=7");
}

#[test]
fn reports_are_deterministic() {
    for args in [&["suite", "quick"][..], &["verify", "modp-qobdd:p=5,n=20", "--samples", "300", "--seed", "3"][..]] {
        let a = lab(args);
        let b = lab(args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn saved_reports_re_emit() {
    let dir = std::env::temp_dir().join(format!("obdd-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quick.json");
    let o = lab(&["suite", "quick", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = lab(&["report", path.to_str().unwrap()]);
    assert_eq!(o.stdout, std::fs::read(&path).unwrap());
    let o = lab(&["report", path.to_str().unwrap(), "--format", "csv"]);
    assert!(stdout(&o).starts_with("report,check,measured,bound,pass\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}
