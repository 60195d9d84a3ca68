use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperfell"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(hyperfell::report::SCHEMA_PATH);
    let text = std::fs::read_to_string(path).expect("schema file");
    let schema: Value = serde_json::from_str(&text).expect("schema is json");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Runs the command, checks the exit code and validates the JSON output.
fn json(args: &[&str], code: i32) -> Value {
    let out = run(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}\nstdout: {stdout}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout).expect("json output");
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    assert_eq!(v["exit_code"], code);
    v
}

#[test]
fn repro_ex41_reports_vietoris_and_fell() {
    let v = json(&["repro", "ex41", "--format", "json", "--no-timestamp"], 0);
    assert_eq!(v["status"], "MATCHED");
    let claims = v["report"]["reports"][0]["claims"].as_array().unwrap();
    let observed = |prefix: &str| -> Vec<String> {
        claims
            .iter()
            .filter(|c| c["id"].as_str().unwrap().starts_with(prefix))
            .map(|c| c["observed"].as_str().unwrap().to_string())
            .collect()
    };
    let vietoris = observed("vietoris");
    let fell = observed("fell");
    assert!(!vietoris.is_empty() && vietoris.iter().all(|o| o == "DIVERGES"), "{vietoris:?}");
    assert!(!fell.is_empty() && fell.iter().all(|o| o == "CONVERGES_AT_RESOLUTION"), "{fell:?}");
    assert!(v.get("timestamp").is_none());
}

#[test]
fn hausdorff_ex42_diverges() {
    let v = json(
        &[
            "hausdorff",
            "--builtin",
            "ex42",
            "--set-a",
            "ideal(-0.75,-0.375,0)",
            "--set-b",
            "ideal(-0.5,-0.5,0)",
            "--windows",
            "10,20,40",
            "--no-timestamp",
        ],
        0,
    );
    assert_eq!(v["status"], "DIVERGENT");
    let values: Vec<f64> = v["report"]["divergence"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn expectations_map_to_exit_codes() {
    let base = [
        "hausdorff",
        "--builtin",
        "ex42",
        "--set-a",
        "ideal(-0.75,-0.375,0)",
        "--set-b",
        "ideal(-0.5,-0.5,0)",
        "--windows",
        "10,20,40",
        "--no-timestamp",
    ];
    let mut args = base.to_vec();
    args.extend(["--expect", "divergent"]);
    json(&args, 0);
    let mut args = base.to_vec();
    args.extend(["--expect", "bounded"]);
    json(&args, 1);

    let v = json(
        &[
            "probe",
            "vietoris",
            "--builtin",
            "ex41",
            "--point=0.5,0.5",
            "--to=0.5,1",
            "--miss",
            "curve:l(0.5,0.5)",
            "--expect",
            "converges",
        ],
        1,
    );
    assert_eq!(v["status"], "DIVERGES");
    assert!(v["timestamp"].is_u64());
}

#[test]
fn probes_and_checks_validate() {
    let v = json(
        &["probe", "fell", "--builtin", "ex41", "--point=0.5,0.5", "--to=0.5,1", "--no-timestamp"],
        0,
    );
    assert_eq!(v["status"], "CONVERGES_AT_RESOLUTION");
    let v = json(
        &[
            "probe",
            "vietoris",
            "--builtin",
            "ex42",
            "--point=-0.5,-0.5,0",
            "--to=-0.5,0,0",
            "--miss",
            "curve:vietoris(-0.5,-0.5,0)",
            "--expect",
            "diverges",
            "--no-timestamp",
        ],
        0,
    );
    assert_eq!(v["report"]["tests"][0]["kind"], "miss");

    let v = json(&["meet", "--builtin", "ex42", "--x=-0.5,-0.5,0", "--y=-0.2,-0.8,0"], 0);
    assert_eq!(v["report"]["agrees"], true);
    let v = json(
        &["meet", "--builtin", "ex35", "--join", "--x=-0.2,-0.7,0", "--y=-0.7,-0.7,-0.3"],
        0,
    );
    assert_eq!(v["report"]["closed_form"], serde_json::json!([-0.2, -0.7, 0.0]));

    let v = json(&["classify", "--builtin", "ex25", "--point", "0.001,0.001"], 0);
    assert_eq!(v["status"], "NEITHER");
    let v = json(&["props", "dense-boundaries", "--builtin", "ex41", "--samples", "2"], 0);
    assert_eq!(v["status"], "PASSED_AT_RESOLUTION");
    let v = json(&["scene", "check", "--builtin", "ex42"], 0);
    assert_eq!(v["report"]["dim"], 3);
}

#[test]
fn scene_files_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("disc.scene");
    std::fs::write(&path, "region disc dim 2 { x1^2 + x2^2 <= 1 } order coordinatewise\n").unwrap();
    let v = json(&["scene", "check", path.to_str().unwrap()], 0);
    let printed = v["report"]["text"].as_str().unwrap().to_string();
    let again = dir.path().join("printed.scene");
    std::fs::write(&again, &printed).unwrap();
    let w = json(&["scene", "check", again.to_str().unwrap()], 0);
    assert_eq!(w["report"]["text"], printed);

    let v = json(
        &["props", "proper-inclusion", "--scene", path.to_str().unwrap(), "--point=0.1,0.2"],
        0,
    );
    assert_eq!(v["report"]["scene"], "disc");
}

#[test]
fn bad_scene_file_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scene");
    std::fs::write(&path, "region r dim 2 {\n  x1 +* x2 > 0\n}\n").unwrap();
    let out = run(&["scene", "check", path.to_str().unwrap()]);
    let code = out.status.code().unwrap();
    assert!(code >= 3, "{code}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.scene:2:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_and_io_errors() {
    for (args, code) in [
        (vec!["frobnicate"], 3),
        (vec!["repro", "ex99"], 3),
        (vec!["meet", "--builtin", "nope", "--x=0,0", "--y=0,0"], 3),
        (vec!["meet", "--builtin", "ex41", "--x=0.5", "--y=0.5,0.5"], 3),
        (vec!["probe", "fell", "--builtin", "ex41", "--point=0.5,0.5", "--hit", "blob(1)"], 3),
        (vec!["scene", "check", "/definitely/not/here.scene"], 4),
        (vec!["classify", "--builtin", "ex41", "--point=2,2"], 6),
        (vec!["--resolution", "1", "repro", "ex41"], 3),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn text_output_mirrors_json() {
    let args = ["meet", "--builtin", "ex41", "--x=0.5,0.2", "--y=0.2,0.6", "--no-timestamp"];
    let j = json(&args, 0);
    let mut targs = args.to_vec();
    targs.extend(["--format", "text"]);
    let out = run(&targs);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("hyperfell meet: FOUND (exit 0)\n"), "{text}");
    assert!(text.contains("point: [0.2, 0.2]"), "{text}");
    assert_eq!(j["report"]["brute"]["point"], serde_json::json!([0.2, 0.2]));
}

#[test]
fn plot_csv_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let v = json(&["repro", "ex42", "--plot-csv", d, "--no-timestamp"], 0);
    let plots = v["report"]["reports"][0]["plots"].as_array().unwrap();
    assert!(!plots.is_empty());
    for p in plots {
        let text = std::fs::read_to_string(dir.path().join(p.as_str().unwrap())).unwrap();
        assert!(text.lines().count() > 1);
    }
}

#[test]
fn same_argv_same_bytes() {
    let args = ["probe", "fell", "--builtin", "ex42", "--point=-0.5,-0.5,0", "--no-timestamp", "--seed", "0x1234"];
    let a = run(&args).stdout;
    let b = bin().args(args).env("HYPERFELL_THREADS", "3").output().unwrap().stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
