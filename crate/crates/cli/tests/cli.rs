use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn check_reports_witness_and_classes() {
    let (code, v) = report(&["check", "--input", &data("and_gate.json")]);
    assert_eq!(code, 3);
    assert_eq!(v["payload"]["computable"], false);
    let w = &v["payload"]["witness"];
    assert_eq!(
        (&w["x"], &w["x2"], &w["y"], &w["z"]),
        (&"0".into(), &"1".into(), &"1".into(), &"1".into())
    );

    let (code, v) = report(&["check", "--input", &data("copy_y.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["classes"], serde_json::json!([["0", "1"]]));
    assert_eq!(v["command"], "check");
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(data("copy_x.json"))
        .unwrap()
        .replacen("1/2", "1/0", 1);
    std::fs::write(&path, text).unwrap();
    let out = run(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("p_xy[0][0]"), "{err}");
    assert_eq!(run(&["check"]).status.code(), Some(1));
}

#[test]
fn rate_settings() {
    let (code, v) = report(&["rate", "--setting", "ps1", "--input", &data("copy_x.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["h_chi"], 1.0);
    let (_, v) = report(&["rate", "--setting", "as2", "--input", &data("copy_x.json")]);
    assert!((v["payload"]["h_g_x_given_y"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    let (_, v) = report(&[
        "rate",
        "--setting",
        "as1",
        "--input",
        &data("diagonal_copy_x.json"),
    ]);
    assert_eq!(v["payload"]["h_xeq_given_y"], 0.0);
    let (_, v) = report(&[
        "rate",
        "--setting",
        "ps1",
        "-n",
        "2",
        "--input",
        &data("copy_x.json"),
    ]);
    assert_eq!(v["payload"]["h_chi"], 1.0);
    assert_eq!(v["payload"]["sandwich"], serde_json::json!([1.0, 1.5]));
    let (code, _) = report(&[
        "rate",
        "--setting",
        "ps1",
        "--input",
        &data("and_gate.json"),
    ]);
    assert_eq!(code, 3);
    let (code, v) = report(&[
        "rate",
        "--setting",
        "ps2",
        "--input",
        &data("and_gate.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["h_chi"], 1.0);
}

#[test]
fn graphs_and_dot() {
    let (_, v) = report(&["graph", "--which", "eq", "--input", &data("copy_x.json")]);
    assert_eq!(
        (
            v["payload"]["vertices"].as_u64(),
            v["payload"]["edges"].as_u64()
        ),
        (Some(2), Some(1))
    );
    let (_, v) = report(&["graph", "--input", &data("diagonal_copy_x.json")]);
    assert_eq!(v["payload"]["edges"], 0);
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let (_, v) = report(&[
        "graph",
        "-n",
        "2",
        "--dot",
        dot.to_str().unwrap(),
        "--input",
        &data("copy_x.json"),
    ]);
    assert_eq!(
        (
            v["payload"]["vertices"].as_u64(),
            v["payload"]["edges"].as_u64()
        ),
        (Some(4), Some(6))
    );
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph \"G_eq^2\" {\n"));
    assert_eq!(text.matches(" -- ").count(), 6);
}

#[test]
fn cap_exceeded_exits_two() {
    let out = run(&["graph", "-n", "13", "--input", &data("copy_x.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn protocol_emit_then_audit() {
    let dir = tempfile::tempdir().unwrap();
    for (problem, rate) in [
        ("copy_x.json", 1.0),
        ("copy_y.json", 0.0),
        ("path_graph.json", 1.0),
    ] {
        for kind in ["canonical", "optimal"] {
            let file = dir.path().join(format!("{problem}.{kind}.proto"));
            let (code, _) = report(&[
                "protocol",
                "--kind",
                kind,
                "--emit",
                file.to_str().unwrap(),
                "--input",
                &data(problem),
            ]);
            assert_eq!(code, 0);
            let (code, v) = report(&[
                "audit",
                "--protocol",
                file.to_str().unwrap(),
                "--input",
                &data(problem),
            ]);
            assert_eq!(code, 0, "{problem} {kind}");
            assert_eq!(v["payload"]["passed"], true);
            if kind == "optimal" || problem != "path_graph.json" {
                assert_eq!(v["payload"]["rate_bits"], rate, "{problem} {kind}");
            }
        }
    }
    let (code, v) = report(&[
        "audit",
        "--protocol",
        &data("and_gate_reveal_protocol.json"),
        "--input",
        &data("and_gate.json"),
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["payload"]["bob_privacy"]["holds_exact"], false);
    assert!(v["payload"]["bob_privacy"]["witness"].is_object());
    let (code, v) = report(&[
        "audit",
        "--epsilon",
        "0.6",
        "--protocol",
        &data("and_gate_reveal_protocol.json"),
        "--input",
        &data("and_gate.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["mode"], "asymptotic");
}

#[test]
fn swsim_reports_error_rate() {
    let (code, v) = report(&[
        "swsim",
        "-n",
        "16",
        "--rate",
        "0.9",
        "--trials",
        "500",
        "--seed",
        "42",
        "--input",
        &data("bsc_side_information.json"),
    ]);
    assert_eq!(code, 0);
    let e = v["payload"]["empirical_block_error"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&e));
    let (code, _) = report(&[
        "swsim",
        "-n",
        "4",
        "--rate",
        "1",
        "--input",
        &data("and_gate.json"),
    ]);
    assert_eq!(code, 3);
}

#[test]
fn generated_problems_are_valid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let out = run(&[
        "gen-random",
        "--sizes",
        "2,2,2",
        "--grain",
        "8",
        "--seed",
        "7",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        run(&["check", "--input", path.to_str().unwrap()])
            .status
            .code()
            .map(|c| c == 0 || c == 3),
        Some(true)
    );
    for seed in ["1", "2", "3"] {
        let out = run(&[
            "gen-random",
            "--sizes",
            "3,2,2",
            "--computable-only",
            "--seed",
            seed,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(
            run(&["check", "--input", path.to_str().unwrap()])
                .status
                .code(),
            Some(0)
        );
    }
    assert_eq!(
        run(&["gen-random", "--sizes", "5,2,2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["gen-random", "--sizes", "2,2"]).status.code(),
        Some(1)
    );
}

#[test]
fn stdin_input_and_text_output() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_randsec"))
        .args(["check", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read(data("copy_y.json")).unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("payload.computable = true\n"), "{s}");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
