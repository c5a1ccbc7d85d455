use std::path::PathBuf;
use std::process::{Command, Output};

use maxclass5_core::{Element, PcGroup, PresentationParams, RawParams};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxclass5"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn table1() -> String {
    crate_dir().join("data/table1.csv").display().to_string()
}

fn assert_schema(name: &str, instance: &Value) {
    let path = crate_dir()
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn json_stdout(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| {
        panic!(
            "{args:?} gave non-JSON ({e}): {text}\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (value, code)
}

#[test]
fn build_writes_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let (report, code) = json_stdout(&[
        "build", "--n", "6", "--z", "1", "--w", "0", "--a", "1", "-o", p,
    ]);
    assert_eq!(code, 0);
    assert_schema("build", &report);
    assert_eq!(report["consistency"]["closure_ok"], true);
    let desc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("descriptor", &desc);
    assert_eq!(
        desc,
        serde_json::json!({"p": 5, "n": 6, "w": 0, "z": 1, "a": [1]})
    );
}

#[test]
fn exhaustive_build_at_n4() {
    let (report, code) = json_stdout(&["build", "--n", "4", "--mode", "exhaustive"]);
    assert_eq!(code, 0);
    assert_schema("build", &report);
    assert_eq!(report["consistency"]["mode"], "exhaustive");
}

#[test]
fn invalid_parameters_and_flags() {
    assert_eq!(
        run(&["build", "--n", "4", "--a", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["build", "--n", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["build", "--n", "4", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    let out = run(&["invariants", "--n", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
}

#[test]
fn reduced_exponents() {
    let (report, code) = json_stdout(&["build", "--n", "6", "--w", "7"]);
    assert_eq!(code, 0);
    assert_eq!(report["label"], "G_0^(6)(0,2)");
}

#[test]
fn invariants_and_transfers() {
    let (s, code) = json_stdout(&["invariants", "--n", "6", "--z", "1", "--a", "1"]);
    assert_eq!(code, 0);
    assert_schema("structure", &s);
    assert_eq!(s["class"], 5);
    assert_eq!(s["defect_k"], 1);
    assert_eq!(s["chi2_index"], 1);

    let (t, code) = json_stdout(&["transfers", "--n", "5", "--w", "1"]);
    assert_eq!(code, 0);
    assert_schema("transfers", &t);
    let trivial: Vec<bool> = t
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["trivial"].as_bool().unwrap())
        .collect();
    assert!(!trivial[1], "V_H2 is nontrivial when w = 1");
}

#[test]
fn classify_output() {
    let (c, code) = json_stdout(&["classify", "--n", "6", "--z", "1", "--a", "1"]);
    assert_eq!(code, 0);
    assert_schema("classify", &c);
    assert_eq!(c["label"], "G_1^(6)(1,0)");
    assert_eq!(c["classification"]["trigger"], "3.1");
    assert_eq!(c["label_in_candidates"], true);
    assert_eq!(c["outside_verified_family"], false);

    let (c, _) = json_stdout(&["classify", "--n", "7", "--a", "0,0,1"]);
    assert_schema("classify", &c);
    assert_eq!(c["outside_verified_family"], true);

    let (c, _) = json_stdout(&["classify", "--n", "5", "--w", "1"]);
    assert_eq!(c["classification"]["trigger"], Value::Null);
    assert_eq!(c["classification"]["candidates"], serde_json::json!([]));
}

#[test]
fn verify_is_deterministic_across_workers() {
    let runs: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|threads| {
            let out = bin()
                .args(["verify", "prop31", "--n", "4..5"])
                .env("MAXCLASS5_THREADS", threads)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let report: Value = serde_json::from_slice(&runs[0]).unwrap();
    assert_schema("report", &report);
    assert_eq!(report["tuples_tested"], 150);
    assert_eq!(report["violations"], serde_json::json!([]));
}

#[test]
fn verify_reports_violations_with_exit_2() {
    let (report, code) = json_stdout(&["verify", "3.3", "--n-range", "5..5"]);
    assert_eq!(code, 2);
    assert_schema("report", &report);
    assert!(!report["violations"].as_array().unwrap().is_empty());
    assert_eq!(run(&["verify", "3.1"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "3.1", "--n", "3..5"]).status.code(),
        Some(1)
    );
}

#[test]
fn predict_table1() {
    let t = table1();
    let (rows, code) = json_stdout(&["predict", "--table", &t, "--scenario", "HL"]);
    assert_eq!(code, 0);
    assert_schema("predictions", &rows);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let flagged: Vec<&Value> = rows
        .iter()
        .filter(|r| !r["flags"].as_array().unwrap().is_empty())
        .collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["record"]["p"], 559);
    for r in rows
        .iter()
        .filter(|r| r["flags"].as_array().unwrap().is_empty())
    {
        assert_eq!(r["candidates"].as_array().unwrap().len(), 12);
    }

    let (rows, _) = json_stdout(&["predict", "--table", &t, "--scenario", "HTilde", "--s", "6"]);
    assert_schema("predictions", &rows);
    assert_eq!(
        rows[0]["candidates"],
        serde_json::json!(["G_1^(5)(0,0)", "G_1^(6)(0,0)", "G_0^(7)(0,0)"])
    );
    let (rows, _) = json_stdout(&["predict", "--table", &t, "--scenario", "HTilde", "--large"]);
    assert!(rows[0]["error"].as_str().unwrap().contains("s of h_5"));
}

#[test]
fn predict_rejects_bad_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "p,mod,h,type,rank\n").unwrap();
    let out = run(&[
        "predict",
        "--table",
        path.to_str().unwrap(),
        "--scenario",
        "HL",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn dot_export_has_six_maximal_subgroups() {
    let out = run(&["export", "--n", "6", "--a", "1,2", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for i in 1..=6 {
        assert!(
            text.contains(&format!("  H{i} [label=")),
            "H{i} node missing"
        );
    }
    assert!(text.contains("  gamma2 [label="));
    assert!(text.contains("H1 = chi2"));
    assert_eq!(text.matches(" -> gamma2 ").count(), 6);
}

fn group_from(desc: &RawParams) -> PcGroup {
    PcGroup::build(&PresentationParams::from_raw(desc).unwrap()).unwrap()
}

#[test]
fn json_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let code = run(&[
        "export", "--n", "5", "--w", "3", "--a", "2", "--format", "json", "-o", p,
    ])
    .status
    .code();
    assert_eq!(code, Some(0));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema("export", &value);
    let desc: RawParams = serde_json::from_value(value["descriptor"].clone()).unwrap();
    let original = PcGroup::build(&PresentationParams::new(5, 3, 0, &[2]).unwrap()).unwrap();
    let rebuilt = group_from(&desc);
    assert_eq!(rebuilt.power_table(), original.power_table());
    assert_eq!(rebuilt.conj_x(), original.conj_x());
    assert_eq!(rebuilt.conj_y(), original.conj_y());

    // the descriptor alone is accepted as input, and gives the same invariants
    let desc_path = dir.path().join("d.json");
    std::fs::write(
        &desc_path,
        serde_json::to_string(&value["descriptor"]).unwrap(),
    )
    .unwrap();
    let (s, code) = json_stdout(&["invariants", "-i", desc_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(s, value["structure"]);
}

#[test]
fn table_export() {
    let out = run(&["export", "--n", "4", "--z", "2", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 625);
    let g = PcGroup::build(&PresentationParams::new(4, 0, 2, &[]).unwrap()).unwrap();
    let row: Vec<usize> = rows[7].split(' ').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row.len(), 625);
    let u = Element::from_index(4, 7);
    for (j, &idx) in row.iter().enumerate() {
        assert_eq!(g.multiply(&u, &Element::from_index(4, j)).index(), idx);
    }

    let out = run(&["export", "--n", "5", "--format", "table"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
}

#[test]
fn seeds_make_sampled_checks_reproducible() {
    let a = run(&["build", "--n", "7", "--samples", "2000", "--seed", "9"]).stdout;
    let b = run(&["build", "--n", "7", "--samples", "2000", "--seed", "9"]).stdout;
    assert_eq!(a, b);
}
