use std::path::Path;
use std::process::{Command, Output};

use annih_cli::document::OperatorDocument;

fn annih(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annih")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["determination", "y^5 + a*y + x"], 0),
        (&["determination", "2*y^3 + x"], 2),
        (&["determination", "y^3 + a*y"], 2),
        (&["annihilate", "y^4 + a*y^4 + x"], 2),
        (&["annihilate", "y^3 + x*y + x"], 2),
        (&["annihilate", "y^2 + a*y + x", "--precision", "16", "--verify"], 3),
        (&["annihilate", "y^2 + a*y + x", "--verify"], 0),
        (&["discriminant", "y^3 + a*y + x"], 0),
        (&["conjecture", "y^3 + a*y + x"], 0),
        (&["nonsense"], 2),
        (&["corpus", "run", "/nonexistent/dir"], 3),
    ];
    for (args, code) in cases {
        let o = annih(args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn parse_errors_point_at_the_column() {
    let o = annih(&["determination", "y^3 + 2*y^3 + x"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn determination_of_the_sextic() {
    let o = annih(&["determination", "y^6 + a*y^2 + b*y + x"]);
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn quartic_text_output_starts_with_leading_coefficient() {
    let o = annih(&["annihilate", "y^4 + a*y^3 + x"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("(27*a^4*x^2 - 256*x^3)*D4") || first.starts_with("(-27*a^4*x^2 + 256*x^3)*D4"), "{first}");
}

#[test]
fn json_round_trips() {
    let o = annih(&["annihilate", "y^5 + a*y + x", "--format", "json", "--verify", "--draws", "1"]);
    assert!(o.status.success());
    let doc = OperatorDocument::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.order, 4);
    assert_eq!(doc.vars, vec!["a", "x"]);
    assert_eq!(doc.verification.len(), 1);
    assert!(doc.verification[0].passed);
    let back = OperatorDocument::from_json(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_annih"))
        .args(["annihilate", "y^2 + a*y + x", "--verify"])
        .env("ANNIH_PRECISION_BITS", "32")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_annih"))
        .args(["annihilate", "y^2 + a*y + x", "--verify"])
        .env("ANNIH_PRECISION_BITS", "512")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("512 bits"), "{}", stdout(&o));
}

#[test]
fn shipped_corpus_passes() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden");
    let o = annih(&["corpus", "run", dir.to_str().unwrap(), "--jobs", "2"]);
    let table = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{table}");
    assert!(table.contains("trinomial_quintic"));
    assert!(!table.contains("FAIL"));
}

#[test]
fn corrupted_golden_operator_fails() {
    let tmp = std::env::temp_dir().join(format!("annih-corpus-{}", std::process::id()));
    let case = tmp.join("quadratic");
    std::fs::create_dir_all(&case).unwrap();
    std::fs::write(case.join("equation.txt"), "y^2 + a*y + x\n").unwrap();
    let doc = r#"{"equation":"y^2 + a*y + x","vars":["a","x"],"order":2,"low":1,
        "coeffs":[[],[{"c":"-3","e":[0,0]}],[{"c":"1","e":[2,0]},{"c":"-4","e":[0,1]}]],
        "kernel_dim":1,"time_ms":0}"#;
    std::fs::write(case.join("operator.json"), doc).unwrap();
    let o = annih(&["corpus", "run", tmp.to_str().unwrap()]);
    std::fs::remove_dir_all(&tmp).unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL"));
}
