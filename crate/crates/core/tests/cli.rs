use std::process::Command;

fn nilprob(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilprob")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn dc_from_builtin_and_file() {
    let (code, out, _) = nilprob(&["dc", "--group", "builtin:sym3", "-k", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["dc"]["num"], "1");
    assert_eq!(v["results"]["dc"]["den"], "2");
    assert!(v.get("elapsed_ms").is_none());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.txt");
    std::fs::write(&path, "# dihedral of order 8\nperm 4\n(1,2,3,4)\n(1,3)\nend\n").unwrap();
    let (code, out, _) = nilprob(&["dc", "--group", path.to_str().unwrap(), "-k", "1", "--timing"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["dc"]["num"], "5");
    assert!(v.get("elapsed_ms").is_some());
}

#[test]
fn corrupted_group_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "perm 4\n(1,2)\n(1,x)\nend\n").unwrap();
    let (code, _, err) = nilprob(&["dc", "--group", path.to_str().unwrap(), "-k", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn stochastic_commands_need_a_seed() {
    let (code, _, err) = nilprob(&["generic", "--rank", "2", "--radius", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("--seed"));
    let args = ["estimate", "--sampler", "walk:heisenberg:steps=20", "--trials", "2000", "--seed", "42"];
    let (code, a, _) = nilprob(&args);
    assert_eq!(code, 0);
    assert_eq!(a, nilprob(&args).1);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let (code, out, _) = nilprob(&[
        "generic", "--rank", "2", "--radius", "2,4", "--trials", "300", "--seed", "7", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(path).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("rank,radius,"));
}

#[test]
fn gallagher_pgroup_and_acceptance_subset() {
    let (code, out, _) = nilprob(&["gallagher", "--group", "builtin:sym4", "--normal", "v4", "-k", "1", "--full-audit"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = nilprob(&["pgroup", "-p", "3", "-k", "1", "-n", "2", "--verify-all"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["sharp_index"], 9);
    let (code, _, err) = nilprob(&["acceptance", "--only", "gallagher"]);
    assert_eq!(code, 0);
    assert!(err.contains("PASS  4"), "{err}");
    let (code, _, _) = nilprob(&["acceptance", "--only", "nonsense"]);
    assert_eq!(code, 2);
}

#[test]
fn dphi_with_constants() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    // x1^2 = (1,2,3)
    std::fs::write(&path, "x1 x1 c:(1,2,3)^-1\n").unwrap();
    let (code, out, _) = nilprob(&["dphi", "--group", "builtin:sym3", "--word", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // Only (1,3,2) squares to (1,2,3).
    assert_eq!(v["results"]["dphi"]["num"], "1");
    assert_eq!(v["results"]["dphi"]["den"], "6");
}
