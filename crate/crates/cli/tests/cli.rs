use std::process::{Command, Output};

fn ybh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybh")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_exit_codes() {
    let out = ybh(&["check", "--magma", "x4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rump=true") && text.contains("rack=false"));

    assert_eq!(ybh(&["check", "--magma", "dihedral:3"]).status.code(), Some(1));
    let trivial = ybh(&["check", "--magma", "trivial:5", "--json"]);
    assert_eq!(trivial.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&trivial.stdout).unwrap();
    assert_eq!(v["structure"]["rack"], true);
    assert_eq!(v["solution"]["bijective"], true);
}

#[test]
fn homology_values() {
    let cases = [
        (&["--magma", "cyclic:4", "--theory", "nyb", "--degree", "3"][..], "Z^9 + Z_4"),
        (&["--magma", "x4", "--theory", "d", "--degree", "2"][..], "Z"),
        (&["--magma", "trivial:1", "--theory", "yb", "--degree", "4"][..], "Z"),
        (&["--magma", "cyclic:4", "--theory", "nyb", "--degree", "2", "--mod", "2"][..], "Z_2^4"),
    ];
    for (args, expected) in cases {
        let mut full = vec!["homology"];
        full.extend_from_slice(args);
        let out = ybh(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out).trim(), expected, "{args:?}");
    }
}

#[test]
fn homology_table_and_json() {
    let out = ybh(&["homology", "--magma", "x4", "--max-degree", "4"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("H^YB") && lines[1].ends_with("Z^36 + Z_2^3 + Z_4"));
    assert!(lines[2].ends_with("Z^22 + Z_2"));

    let out = ybh(&["homology", "--magma", "dihedral:4", "--theory", "nyb", "--degree", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v["homology"][0];
    assert_eq!(row["text"], "Z^10 + Z_2 + Z_4");
    assert_eq!(row["group"], serde_json::json!({ "rank": 10, "torsion": [2, 4] }));
}

#[test]
fn homology_cap() {
    let out = ybh(&["homology", "--magma", "x16", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("force"));
    assert!(stdout(&ybh(&["homology", "--help"])).contains("Degree caps"));
}

#[test]
fn invariant_values() {
    let base = ["invariant", "--magma", "cyclic:4", "--cocycle", "builtin:product-mod:2"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        ybh(&args)
    };
    assert_eq!(stdout(&run(&["--braid", "1 1"])).trim(), "8(0)+8(1)");
    assert_eq!(stdout(&run(&["--braid", "1 1 1 1 1 1"])).trim(), "8(0)+8(1)");
    assert_eq!(stdout(&run(&["--braid", "", "--strands", "2"])).trim(), "16(0)");
    assert_eq!(stdout(&run(&["--braid", "1"])).trim(), "4(0)");
    // σ1⁻¹σ2 closes to the unknot
    assert_eq!(stdout(&run(&["--braid", "-1 2", "--json"])).trim().replace(char::is_whitespace, ""), r#"{"0":4}"#);
}

#[test]
fn invariant_refuses_bad_cocycle() {
    let dir = std::env::temp_dir().join(format!("ybh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    // φ(x, y) = x mod 2
    std::fs::write(&path, "mod 2\n1 0 1\n1 1 1\n1 2 1\n1 3 1\n3 0 1\n3 1 1\n3 2 1\n3 3 1\n").unwrap();
    let path = path.to_str().unwrap();
    let args = ["invariant", "--magma", "cyclic:4", "--cocycle", path, "--braid", "1"];
    let out = ybh(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cocycle"));
    let mut unchecked = args.to_vec();
    unchecked.push("--unsafe");
    let out = ybh(&unchecked);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2(0)+2(1)");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cocycles_output() {
    let out = ybh(&["cocycles", "--magma", "cyclic:4", "--mod", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["text"], "Z_2^4");
    assert!(v["cocycles"].as_array().unwrap().len() >= 4);
}

#[test]
fn verify_suite() {
    let out = ybh(&["verify", "--magma", "cyclic:4", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("splitting (theorem)"));

    let out = ybh(&["verify", "--magma", "x16", "--max-degree", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);

    assert_eq!(ybh(&["verify", "--magma", "dihedral:3"]).status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(ybh(&["homology", "--magma", "nope"]).status.code(), Some(2));
    assert_eq!(ybh(&["homology"]).status.code(), Some(2));
    assert_eq!(ybh(&["homology", "--magma", "x4", "--theory", "cubical"]).status.code(), Some(2));
    assert_eq!(ybh(&["invariant", "--magma", "x4", "--cocycle", "builtin:zero:2", "--braid", "0"]).status.code(), Some(2));
}

#[test]
fn file_magma() {
    let dir = std::env::temp_dir().join(format!("ybh-cli-file-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x4.txt");
    std::fs::write(&path, "# x4\n4\n1 3 2 4\n2 4 1 3\n4 2 3 1\n3 1 4 2\n").unwrap();
    let spec = format!("file:{}", path.display());
    let out = ybh(&["homology", "--magma", &spec, "--theory", "yb", "--degree", "4"]);
    assert_eq!(stdout(&out).trim(), "Z^36 + Z_2^3 + Z_4");
    std::fs::remove_dir_all(&dir).unwrap();
}
