use std::path::Path;
use std::process::{Command, Output};

use paramat::audit::AuditReport;
use paramat::builtin;
use paramat::matrix::load_matrix_file;

fn paramat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paramat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn explosion_in_base_and_transform() {
    let base = paramat(&["entails", "--logic", "l3", "p, ~p", "q"]);
    assert_eq!(code(&base), 0);
    assert_eq!(stdout(&base).trim(), "holds");

    let para = paramat(&["entails", "--logic", "l3", "--para", "1", "p, ~p", "q"]);
    assert_eq!(code(&para), 1);
    assert!(stdout(&para).starts_with("fails"));
}

#[test]
fn k3_countermodel() {
    let o = paramat(&["entails", "--logic", "k3", "", "p -> p"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("p=1/2"), "{}", stdout(&o));
}

#[test]
fn json_entailment_reports_witness() {
    let o = paramat(&[
        "entails", "--logic", "l3", "--para", "1", "--format", "json", "p, ~p", "p | q",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["logic"], "P(L3)");
    assert_eq!(v["witness_subset"], serde_json::json!(["p"]));
}

#[test]
fn classify_consistent_mss() {
    let o = paramat(&["classify", "--logic", "l3", "~(p -> p)"]);
    assert_eq!(stdout(&o).trim(), "contradiction");
    let o = paramat(&["consistent", "--logic", "l3", "p, ~p"]);
    assert_eq!(
        (code(&o), stdout(&o).trim().to_string()),
        (0, "inconsistent".to_string())
    );
    let o = paramat(&["consistent", "--logic", "l3", "--para", "1", "p, ~p"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "consistent");
    let o = paramat(&["mss", "--logic", "l3", "p, ~p"]);
    assert_eq!(stdout(&o).trim(), "{p}; {~p}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&paramat(&["entails", "--logic", "l3", "p &", "q"])), 3);
    assert_eq!(code(&paramat(&["entails", "--logic", "nope", "p", "p"])), 2);
    assert_eq!(code(&paramat(&["table", "--samples", "0"])), 2);
    assert_eq!(code(&paramat(&["frobnicate"])), 2);
    assert_eq!(
        code(&paramat(&[
            "entails",
            "--logic",
            "file:/no/such/file",
            "p",
            "p"
        ])),
        3
    );
}

#[test]
fn partial_matrix_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.matrix");
    std::fs::write(
        &path,
        r#"{"name": "half", "values": ["0", "1"], "designated": ["1"]}"#,
    )
    .unwrap();
    let o = paramat(&["matrix", "validate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let selector = format!("file:{}", path.display());
    assert_eq!(
        code(&paramat(&["entails", "--logic", &selector, "p", "p"])),
        3
    );
}

#[test]
fn matrix_from_search_path() {
    let dir = tempfile::tempdir().unwrap();
    let shown = paramat(&["matrix", "show", "k3", "--format", "json"]);
    std::fs::write(dir.path().join("kleene.matrix"), shown.stdout).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_paramat"))
        .args(["entails", "--logic", "file:kleene", "", "p -> p"])
        .env("PARAMAT_MATRIX_PATH", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("p=1/2"));
}

#[test]
fn truth_table_rows() {
    let count_rows = |sel: &str| {
        let text = stdout(&paramat(&["matrix", "show", sel]));
        text.lines()
            .skip_while(|l| !l.starts_with('x'))
            .skip(1)
            .count()
    };
    assert_eq!(count_rows("l3"), 9);
    assert_eq!(count_rows("gn:4"), 16);
    assert_eq!(count_rows("cl2"), 4);
}

#[test]
fn shipped_matrices_match_builtins() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("matrices");
    for name in ["l3", "g3", "k3", "cl2"] {
        let path = dir.join(format!("{name}.matrix"));
        assert!(
            load_matrix_file(&path)
                .unwrap()
                .same_tables(&builtin(name).unwrap()),
            "{name}"
        );
        assert_eq!(
            code(&paramat(&["matrix", "validate", path.to_str().unwrap()])),
            0
        );
    }
}

#[test]
fn table_json_is_deterministic_and_round_trips() {
    let args = [
        "table",
        "--samples",
        "60",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = paramat(&args);
    let b = paramat(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let report: AuditReport = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report.grid.len(), 96);
    assert_eq!(report.budget.seed, 7);
    assert!(report.is_clean());
}

#[test]
fn table_text_marks_flagged_cells() {
    let o = paramat(&["table", "--samples", "60"]);
    let text = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(text.contains("joint_consistency/P(L3)"));
    assert!(text.contains("[known]"));
    assert!(!text.contains("UNEXPECTED"));
}

#[test]
fn audit_of_other_matrix() {
    let o = paramat(&[
        "audit",
        "--logic",
        "ln:4",
        "--samples",
        "40",
        "--format",
        "json",
    ]);
    let report: AuditReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!report.reference);
    assert_eq!(report.logics, ["L4", "P(L4)"]);
    assert_eq!(report.grid.len(), 32);
    assert!(report.discrepancies.is_empty());
}

#[test]
fn witnesses_command() {
    for (name, n) in [("l3", 17), ("g3", 13), ("k3", 12)] {
        let o = paramat(&["witnesses", "--logic", name]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains(&format!("{n}/{n} passed")), "{name}");
    }
    let o = paramat(&["witnesses", "--logic", "ln:5"]);
    assert!(stdout(&o).starts_with("no stored witnesses"));
}
