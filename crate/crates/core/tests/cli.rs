use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command as Proc, Stdio};

use kframe::cli::{parse, run_command, Command, Options};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn expected_exit(text: &str) -> i32 {
    text.lines()
        .find_map(|l| l.strip_prefix("# exit: "))
        .and_then(|c| c.trim().parse().ok())
        .expect("document declares its exit code")
}

#[test]
fn golden_outputs() {
    let mut seen = 0;
    for entry in fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("kf") {
            continue;
        }
        let input = fs::read_to_string(&path).unwrap();
        let golden = fs::read_to_string(path.with_extension("out")).unwrap();
        let out = run_command(Command::Run, &input, &Options::default());
        assert_eq!(out.stdout + &out.stderr, golden, "{}", path.display());
        assert_eq!(out.code, expected_exit(&input), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn documents_survive_render_and_reparse() {
    for entry in fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("kf") {
            continue;
        }
        let Ok(doc) = parse(&fs::read_to_string(&path).unwrap()) else { continue };
        let rendered = doc.to_string();
        let again = parse(&rendered).unwrap();
        assert_eq!(doc, again);
        assert_eq!(rendered, again.to_string());
    }
}

#[test]
fn rho_hand_value() {
    // (x-2)^2 (x-3) with g = x: 2^2 * 3 = 5 in F7, and 3^5 = 5.
    let out = run_command(Command::Rho, "field F7; rho f = (x-2)^2*(x-3); g = [x];", &Options::default());
    assert!(out.stdout.lines().any(|l| l == "rho=K1 exp=5 mod=6 gen=3"));
}

#[test]
fn subcommand_must_match_request() {
    let out = run_command(Command::Tame, "field F7; symbol {3};", &Options::default());
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("normalize request"));
}

#[test]
fn field_override_replaces_document_field() {
    let opts = Options { field: Some("F11".into()), ..Options::default() };
    let out = run_command(Command::Rho, "field F7; rho f = (x-2)^2*(x-3); g = [x];", &opts);
    // 2^2 * 3 = 12 = 1 in F11.
    assert!(out.stdout.contains("field=F11\n"));
    assert!(out.stdout.contains("rho=K1 exp=0 mod=10 gen=2\n"));
}

#[test]
fn mode_override() {
    let doc = "field F7; homotopy F = x - t; g = [1/(2*x-1)];";
    assert!(run_command(Command::Homotopy, doc, &Options::default()).stderr.contains("not strict"));
    let opts = Options { mode: Some(kframe::framed::HomotopyMode::Endpoint), ..Options::default() };
    let out = run_command(Command::Homotopy, doc, &opts);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("mode=endpoint\n"));
}

#[test]
fn json_report() {
    let opts = Options { json: true, ..Options::default() };
    let out = run_command(Command::ReduceFraming, "field F5; matrix [[2,0]];", &opts);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["check"], "ok");
    assert_eq!(v["steps"], 3);
    assert_eq!(v["step"][0], "c2 += 3*c1");

    let out = run_command(Command::Run, "field F7;\nsymbol {2 3};", &opts);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!((v["kind"].as_str(), v["line"].as_u64(), v["col"].as_u64()), (Some("parse"), Some(2), Some(11)));
}

#[test]
fn semantic_errors() {
    let cases = [
        ("field F6; symbol {1};", "not a prime power"),
        ("field F7 mod y+1; symbol {1};", "prime field"),
        ("field F9 mod y^3+y+1; symbol {1};", "needs degree 2"),
        ("field F7; symbol {z};", "unknown variable 'z'"),
        ("field F7; symbol {1/0};", "division by zero"),
        ("field F7; symbol {2,3} + {2};", "term 2 has 1 entries"),
        ("field F7; tame {3} at 2;", "rational function field"),
        ("field F5(x); rho f = x; g = [x];", "reserved"),
        ("field F5(t); tame {t} at t^2+1;", "not a place"),
        ("field F7; rho f = 1/x; g = [x];", "polynomial in x"),
        ("field F7; rho f = x^2; g = [x];", "not invertible"),
    ];
    for (doc, needle) in cases {
        let out = run_command(Command::Run, doc, &Options::default());
        assert_eq!(out.code, 2, "{doc}");
        assert!(out.stderr.contains(needle), "{doc}: {}", out.stderr);
    }
}

#[test]
fn smooth_check_under_hypothesis() {
    // f = 1 at t = 3 and t = 4, so both sides must agree.
    let doc = "field F7(t); smooth f = (t^2+1)*(t-2)/((t^2+1)*(t-2)+(t-3)*(t-4)); g = [(t-3)/(t-4)];";
    let out = run_command(Command::Run, doc, &Options::default());
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("hypothesis=true\n"));
    assert!(out.stdout.contains("equal=true\n"));
}

fn kframe(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Proc::new(env!("CARGO_BIN_EXE_kframe"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn binary_reads_stdin_and_sets_exit_codes() {
    let (code, out, _) = kframe(&["reduce-framing", "-"], "field F5; matrix [[2,0]];");
    assert_eq!(code, 0);
    assert!(out.ends_with("check=ok\n"));

    let (code, _, err) = kframe(&["normalize", "-"], "field F7; symbol {2,0};");
    assert_eq!(code, 2);
    assert!(err.contains("zero entry"));

    let (code, _, err) = kframe(&["rho", "/nonexistent/input.kf"], "");
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));

    let (code, _, _) = kframe(&["--mode", "sideways", "homotopy", "-"], "");
    assert_eq!(code, 2);
}

#[test]
fn binary_output_is_stable() {
    let path = data_dir().join("weil_f5t.kf");
    let path = path.to_str().unwrap();
    let first = kframe(&["reciprocity", path], "");
    let second = kframe(&["reciprocity", path], "");
    assert_eq!(first, second);
    assert_eq!(first.1, fs::read_to_string(data_dir().join("weil_f5t.out")).unwrap());
}
