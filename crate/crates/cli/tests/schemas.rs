mod common;

use std::path::Path;

use common::{fixture, path_str, rt_cases, run, write_model};
use serde_json::Value;

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}-v1.schema.json"));
    jsonschema::validator_for(&load(&p)).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}");
}

#[test]
fn fixtures_match_the_model_schema() {
    let v = schema("model");
    for name in ["A", "B", "C", "D"] {
        assert_valid(&v, &load(&fixture(name)), name);
    }
}

#[test]
fn emitted_models_and_certificates_match_their_schemas() {
    let (mv, cv) = (schema("model"), schema("certificate"));
    let dir = tempfile::tempdir().unwrap();
    for (i, case) in rt_cases(8).iter().enumerate() {
        let src = write_model(dir.path(), &format!("m{i}.json"), &case.perturbed.0, &case.perturbed.1);
        assert_valid(&mv, &load(&src), "perturbed model");
        for cmd in ["hopf", "ls"] {
            let cert = dir.path().join(format!("c{i}{cmd}.json"));
            let normal = dir.path().join(format!("n{i}{cmd}.json"));
            let r = run(&[cmd, path_str(&src), "-o", path_str(&cert), "--model-out", path_str(&normal)]);
            assert_eq!(r.code, 0, "seed {}: {}", case.seed, r.stdout);
            assert_valid(&cv, &load(&cert), "certificate");
            assert_valid(&mv, &load(&normal), "normalized model");
        }
    }
}

#[test]
fn obstruction_reports_match_the_obstruction_schema() {
    let v = schema("obstruction");
    let dir = tempfile::tempdir().unwrap();
    for (name, cmd) in [("A", "hopf"), ("B", "hopf"), ("C", "ls")] {
        let out = dir.path().join(format!("{name}.json"));
        assert_eq!(run(&[cmd, path_str(&fixture(name)), "-o", path_str(&out)]).code, 3);
        assert_valid(&v, &load(&out), name);
    }
}

#[test]
fn schemas_reject_malformed_coefficients() {
    let v = schema("model");
    let mut doc = load(&fixture("A"));
    doc["differential"]["w5"][0]["coeff"] = Value::from("0.5");
    assert!(!v.is_valid(&doc));
}

#[test]
fn homotopy_steps_match_the_certificate_schema() {
    use fibrewise::perturb::{perturb, PerturbMode, PerturbationSpec};
    use fibrewise_core::Comultiplication;

    let m = common::trivial_model(common::rt_base(1, 16), &[1, 3, 5, 15]);
    let spec = PerturbationSpec { seed: 11, max_word_length: 3, mode: PerturbMode::ExactHomotopy };
    let (pm, pc) = perturb(&m, &Comultiplication::standard(&m), &spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let src = write_model(dir.path(), "m.json", &pm, &pc);
    let cert = dir.path().join("c.json");
    assert_eq!(run(&["ls", path_str(&src), "-o", path_str(&cert)]).code, 0);
    let doc = load(&cert);
    assert!(doc["steps"].as_array().unwrap().iter().any(|s| s["kind"] == "homotopy"));
    assert_valid(&schema("certificate"), &doc, "certificate");
}
