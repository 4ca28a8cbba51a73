use std::io::Write;
use std::process::{Command, Output};

fn quadform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadform")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn golden_files_match() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/");
    let cases: [(&str, &[&str]); 3] = [
        ("witt_laurent.json", &["witt", "--field", "Q((x))", "<1,-1> + x*<1,1>", "--json"]),
        ("hyp_over.json", &["hyp-over", "--field", "Q", "--q", "<1,1,1,1>", "--p", "<1,1>", "--json"]),
        ("verify_hauptsatz.json", &["verify", "hauptsatz", "--seed", "7", "--json"]),
    ];
    for (file, args) in cases {
        let o = quadform(args);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(stdout(&o), std::fs::read_to_string(format!("{dir}{file}")).unwrap(), "{file}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(quadform(&["isotropy", "<1,1,1>"]).status.code(), Some(0));
    assert_eq!(quadform(&["isotropy", "--expect", "yes", "<1,1,1>"]).status.code(), Some(1));
    assert_eq!(quadform(&["isometric", "--expect", "no", "<1,1>", "<2,2>"]).status.code(), Some(1));
    assert_eq!(quadform(&["witt", "<1,0>"]).status.code(), Some(64));
    assert_eq!(quadform(&["witt", "--field", "F4", "<1>"]).status.code(), Some(64));
    assert_eq!(quadform(&[]).status.code(), Some(64));
}

#[test]
fn text_output() {
    assert_eq!(stdout(&quadform(&["witt", "--field", "F7", "<1,1,1,1,1>"])), "index 2\nanisotropic part <1>\n");
    assert_eq!(stdout(&quadform(&["subform", "<2>", "<1,1>"])), "Yes\n");
    assert_eq!(stdout(&quadform(&["divide", "--pi", "pf(1,1)", "<1,1,1,1,3,3,3,3>"])), "Yes\nquotient <1,1>\n");
    assert_eq!(stdout(&quadform(&["neighbor", "<1,1,1>"])).lines().next(), Some("Yes"));
}

#[test]
fn json_output_is_well_formed() {
    let o = quadform(&["hyp-over", "--q", "<1,1,1,3>", "--p", "<1,1>", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "No");
    assert_eq!(v["certificate"]["kind"], "TwoDimDivisibilityObstruction");
    assert_eq!(v["certificate"]["payload"]["beta"], "<1,1>");
}

#[test]
fn corpus_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "\"<1,-1,2>\"").unwrap();
    writeln!(f, "{{\"q\":\"<1,1,1,1>\",\"p\":\"<1,1>\"}}").unwrap();
    writeln!(f, "{{\"field\":\"F5\",\"q\":\"<1,2,3>\",\"p\":\"<1,1>\"}}").unwrap();
    let o = quadform(&["verify", "--corpus", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "corpus");
    assert_eq!(v["instances"], 3);
    assert_eq!(v["certificates_replayed"], 2);
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/../../docs/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

#[test]
fn json_validates_against_schemas() {
    let decision = schema("decision.schema.json");
    assert!(!decision.is_valid(&serde_json::json!({ "verdict": "Maybe" })));
    let cases: [&[&str]; 5] = [
        &["hyp-over", "--q", "<1,1,1,1>", "--p", "<1,1>", "--json"],
        &["hyp-over", "--q", "<1,1,1,3>", "--p", "<1,1,1,1>", "--json"],
        &["hyp-over", "--q", "<1,1,1>", "--p", "<1>", "--json"],
        &["hyp-over", "--q", "<1,1,1,1,1,1,1,1>", "--p", "<1,1,1>", "--json"],
        &["hyp-over", "--q", "<1,2,3,6,5,7>", "--p", "<1,1,1,7,3>", "--json"],
    ];
    for args in cases {
        let v: serde_json::Value = serde_json::from_slice(&quadform(args).stdout).unwrap();
        assert!(decision.is_valid(&v), "{args:?}: {v}");
    }
    let report = schema("suite_report.schema.json");
    for args in [&["verify", "hauptsatz", "--json"][..], &["verify", "i1", "springer", "--samples", "20", "--json"]] {
        let v: serde_json::Value = serde_json::from_slice(&quadform(args).stdout).unwrap();
        assert!(report.is_valid(&v), "{args:?}: {v}");
    }
}
