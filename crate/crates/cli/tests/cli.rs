use std::process::{Command, Output};

fn charsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charsum"))
        .args(args)
        .env_remove("CHARSUM_THREADS")
        .output()
        .expect("spawn charsum")
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

#[test]
fn expsum_json() {
    let out = charsum(&["expsum", "--a", "g^0", "--b", "g^0"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[0]["schema"], "charsum/1");
    assert_eq!(lines[0]["command"], "expsum");
    assert_eq!(lines[1]["tag"], "SQUARE_MATCH");
    assert_eq!(lines[1]["S0"], -9);
    assert_eq!(lines[1]["N"], 0);
}

#[test]
fn cyclotomy_csv() {
    let out = charsum(&["--format", "csv", "cyclotomy-table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["i\\j,0,1,2,3", "0,1,0,0,0", "1,0,0,1,1", "2,0,1,0,1", "3,0,1,1,0"]);
}

#[test]
fn exit_codes() {
    assert_eq!(charsum(&["expsum", "--a", "0", "--b", "0"]).status.code(), Some(2));
    assert_eq!(charsum(&["--p", "9", "cyclotomy-table"]).status.code(), Some(2));
    assert_eq!(charsum(&["--p", "101", "cyclotomy-table"]).status.code(), Some(3));
    assert_eq!(charsum(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn output_is_independent_of_thread_count() {
    let one = charsum(&["--threads", "1", "expsum-sweep", "--b", "g^1"]);
    let many = charsum(&["--threads", "4", "expsum-sweep", "--b", "g^1"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn verify_all_passes() {
    let out = charsum(&["verify-all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let steps: Vec<_> = json_lines(&out).into_iter().filter(|v| v.get("step").is_some()).collect();
    assert_eq!(steps.len(), 13);
    assert!(steps.iter().all(|s| s["passed"] == true));
}
