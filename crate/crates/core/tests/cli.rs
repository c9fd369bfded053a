use std::path::{Path, PathBuf};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    root().join("data").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("zpkit").chain(args.iter().copied());
    let code = zpkit::cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

fn validate(schema: &str, v: &Value) {
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema}: {errors:#?}");
}

#[test]
fn every_command_matches_its_schema() {
    let xy = data("xy.json");
    let coset = data("coset.json");
    let point = data("coset_point.json");
    let curve = data("curve_t_1mt_2.json");
    let special = data("special.json");
    let e2 = data("ell_squared.json");
    let diag = data("diagonal.json");
    let h2 = data("h2.json");
    let gens = data("projections.json");
    let ell = data("curve_x3m2.json");
    let dset = data("diagonal_set.json");
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("counts.csv").to_string_lossy().into_owned();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("torus-torsion", vec!["torus", "torsion", "--curve", &xy]),
        ("torus-defect", vec!["torus", "defect", "--variety", &coset, "--sub", &point]),
        ("torus-unlikely", vec!["torus", "unlikely", "--curve", &curve, "--exp-bound", "3", "--t-height", "1"]),
        ("modular-j", vec!["modular", "j", "--z", "0.1+1.2i"]),
        ("modular-reduce", vec!["modular", "reduce", "--z", "0.3+0.1i"]),
        ("modular-phi", vec!["modular", "phi", "--level", "3"]),
        ("modular-complexity", vec!["modular", "complexity", &special]),
        ("modular-relate", vec!["modular", "relate", "--z1", "i", "--z2", "2i"]),
        ("modular-relate", vec!["modular", "relate", "--z1", "i", "--z2", "0.3+1.7i"]),
        ("abelian-degree", vec!["abelian", "degree", "--torus", &e2, "--sublattice", &diag, "--h2", &h2, "--torsion", "1/2,0,0,1/3"]),
        ("abelian-minima", vec!["abelian", "minima", "--torus", &e2]),
        ("abelian-nearby", vec!["abelian", "nearby", "--torus", &e2, "--sublattice", &diag, "--z", "0.4+0.1i", "--z", "1.4+2.1i"]),
        ("abelian-annihilate", vec!["abelian", "annihilate", "--source", &e2, "--generators", &gens, "--torsion", "1/2,0,0,1/3"]),
        ("abelian-height", vec!["abelian", "height", "--curve", &ell, "--point", "3,5"]),
        ("count-run", vec!["count", "run", "--set", &dset, "--k", "1", "--tmin", "3", "--tmax", "6", "--mode", "pi2-image", "--csv", &csv]),
        ("count-fit", vec!["count", "fit", &csv]),
        ("demo", vec!["demo", "manin-mumford"]),
    ];
    for (schema, args) in &cases {
        validate(schema, &run_json(args));
    }
}

#[test]
fn relate_finds_level_two() {
    let v = run_json(&["modular", "relate", "--z1", "i", "--z2", "2i"]);
    assert_eq!(v["relation"]["level"], 2);
}

#[test]
fn phi_level_one_is_x_minus_y() {
    let v = run_json(&["modular", "phi", "--level", "1"]);
    assert_eq!(v["terms"], serde_json::json!([[0, 1, "-1"], [1, 0, "1"]]));
    assert_eq!(v["symmetry"], "antisymmetric");
    assert_eq!(v["degree"], 1);
    let v = run_json(&["modular", "phi", "--level", "2"]);
    assert_eq!(v["symmetry"], "symmetric");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["torus", "--help"]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["modular", "j"]).0, 2);
    assert_eq!(run(&["--precision-bits", "20", "modular", "j", "--z", "i"]).0, 2);
    // runtime errors
    assert_eq!(run(&["modular", "j", "--z", "1-2i"]).0, 1);
    assert_eq!(run(&["torus", "torsion", "--curve", "/nonexistent.json"]).0, 1);
    // csv is only offered by commands that produce tables
    assert_eq!(run(&["--format", "csv", "modular", "j", "--z", "i"]).0, 2);
    let (code, out, _) = run(&["--format", "csv", "count", "run", "--set", &data("exp2.json"), "--k", "1", "--tmin", "3", "--tmax", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# {"));
    assert!(out.lines().nth(1).unwrap().starts_with("T,count"));
}

#[test]
fn identical_seeds_give_identical_bytes() {
    for args in [
        vec!["--seed", "7", "demo", "defect-sweep"],
        vec!["--seed", "3", "demo", "manin-mumford"],
        vec!["count", "run", "--set", &data("parabola.json"), "--k", "1", "--tmin", "2", "--tmax", "9"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
    }
}

#[test]
fn output_file_holds_the_same_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.json");
    let ps = p.to_string_lossy();
    let (code, _, _) = run(&["--out", &ps, "modular", "reduce", "--z", "0.3+0.1i"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&*p)).unwrap()).unwrap();
    assert_eq!(v["command"], "modular reduce");
    assert_eq!(v["config"]["output"]["path"], Value::String(ps.into_owned()));
}
