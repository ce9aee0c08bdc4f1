//! End-to-end runs of the `fracnorm` binary.

use std::path::Path;
use std::process::{Command, Output};

fn fracnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracnorm"))
        .args(args)
        .output()
        .expect("spawn fracnorm")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"{
  "domain": {"kind": "disk", "radius": 1.0, "resolution": 16},
  "functions": ["linear", "sine"],
  "tau": [0.5],
  "triples": 10,
  "suites": ["whitney-props", "lemma31", "bbm"]
}"#;

#[test]
fn verify_writes_suite_tables_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = fracnorm(&["verify", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "9"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&o.stderr));
    for name in ["whitney-props.csv", "lemma31.csv", "bbm.csv", "summary.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("suite,assertion,measured,relation,bound,verdict\n"));
    assert!(!summary.contains("FAIL"));
    let triples = std::fs::read_to_string(out.join("lemma31.csv")).unwrap();
    assert!(triples.lines().skip(1).all(|l| l.starts_with("9,")), "seed recorded");
}

#[test]
fn subcommands_emit_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"domain": {"kind": "l_shape", "resolution": 16}, "functions": ["linear"], "tau": [0.5],
            "lambda_grid": {"points": 8}}"#,
    );
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    for cmd in ["domain", "seminorm", "whitney", "kfunc"] {
        let o = fracnorm(&[cmd, "--config", &cfg, "--out", out_s]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["domain_n16.csv", "seminorm.csv", "whitney_n16.csv", "interp_norm.csv", "kfunc_n16_linear_p2_a0.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let seminorm = std::fs::read_to_string(out.join("seminorm.csv")).unwrap();
    let row = seminorm.lines().nth(1).unwrap();
    // every float carries 17 significant digits
    let tilde = row.split(',').nth(10).unwrap();
    assert_eq!(tilde.split('e').next().unwrap().replace(['.', '-'], "").len(), 17, "{tilde}");
}

#[test]
fn config_errors_exit_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_config(
        dir.path(),
        r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": []}"#,
    );
    let o = fracnorm(&["verify", "--config", &empty]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no functions selected"));

    let typo = write_config(
        dir.path(),
        "{\n  \"domain\": {\"kind\": \"unit_square\", \"resolution\": 16},\n  \"functions\": [\"linear\"],\n  \"alhpa\": [0.5]\n}",
    );
    let o = fracnorm(&["verify", "--config", &typo]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(2));
    assert!(err.contains("line 4") && err.contains("alhpa"), "{err}");

    let bad_s = write_config(
        dir.path(),
        r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": ["linear"], "s": [1.2]}"#,
    );
    let o = fracnorm(&["seminorm", "--config", &bad_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s/p/alpha/tau"));
}

#[test]
fn failing_assertions_give_a_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    // a non-smooth function with unbounded gradient near the boundary breaks the limit diagnostic
    let cfg = write_config(
        dir.path(),
        r#"{"domain": {"kind": "unit_square", "resolution": 16}, "functions": ["linear", "dist_pow_0.25"]}"#,
    );
    let out = dir.path().join("out");
    let o = fracnorm(&["bbm", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.contains(",FAIL"));
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            fracnorm::harness::ExperimentConfig::load(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
