use circulant_schur::cli::run;
use circulant_schur::SRing;
use serde_json::Value;

fn schur(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["schur"];
    full.extend_from_slice(args);
    let out = run(full);
    let text = if out.code == 0 { out.stdout } else { out.stderr };
    (out.code, serde_json::from_str(&text).unwrap_or(Value::String(text)))
}

#[test]
fn schurity_of_cyc8() {
    let (code, v) = schur(&["schurity", "--n", "8", "--ring", r#"{"basic_sets":[[0],[1,3],[2,6],[4],[5,7]]}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["schurian"], true);
    assert_eq!(v["aut_order"], "16");
}

#[test]
fn example12_certificate() {
    let (code, v) = schur(&["example12", "--p", "5", "--p3", "11", "--p4", "13", "--d", "4", "--distinct"]);
    assert_eq!(code, 0);
    assert_eq!(v["nonschurian_certificate"], true);
    assert_eq!(v["n"], 3575);
    let (_, v) = schur(&["example12"]);
    assert_eq!(v["nonschurian_certificate"], false);
    assert_eq!(v["equal_factors"], true);
}

#[test]
fn enumerate_contains_fixture() {
    let out = run(["schur", "enumerate", "--n", "9"]);
    assert_eq!(out.code, 0);
    let fixture = SRing::validate(9, vec![vec![0], vec![3, 6], vec![1, 2, 4, 5, 7, 8]]).unwrap();
    let found = out.stdout.lines().any(|l| {
        let v: Value = serde_json::from_str(l).unwrap();
        serde_json::from_value::<SRing>(v).map(|a| a == fixture).unwrap_or(false)
    });
    assert!(found);
}

#[test]
fn exit_codes() {
    let (code, v) = schur(&["validate", "--ring", r#"{"basic_sets":[[0],[1,2"#]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("column"));
    let (code, _) = schur(&["validate", "--ring", r#"{"basic_sets":[[0],[1],[2,3]]}"#]);
    assert_eq!(code, 1);
    let (code, _) = schur(&["aut", "--node-budget", "1", "--ring", r#"{"basic_sets":[[0],[1,2,3,4,5,6]]}"#]);
    assert_eq!(code, 2);
    let (code, _) = schur(&["aut", "--aut-bound", "5", "--ring", r#"{"basic_sets":[[0],[1,2,3,4,5,6]]}"#]);
    assert_eq!(code, 2);
    let (code, _) = schur(&["enumerate", "--n", "16", "--enum-budget", "3"]);
    assert_eq!(code, 2);
    let (code, _) = schur(&["example12", "--d", "2"]);
    assert_eq!(code, 1);
    let (code, _) = schur(&["no-such-verb"]);
    assert_eq!(code, 1);
}

#[test]
fn construct_and_analyze() {
    let (code, v) = schur(&["construct", "--kind", "cyclotomic", "--n", "8", "--gens", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["basic_sets"], serde_json::json!([[0], [1, 3], [2, 6], [4], [5, 7]]));
    let z3 = r#"{"basic_sets":[[0],[1,2]]}"#;
    let (code, v) = schur(&["construct", "--kind", "gwp", "--n", "9", "--u", "3", "--l", "3", "--left", z3, "--right", z3]);
    assert_eq!(code, 0);
    let ring = v.to_string();
    let (code, a) = schur(&["analyze", "--ring", &ring]);
    assert_eq!(code, 0);
    assert_eq!(a["lattice"], serde_json::json!([1, 3, 9]));
    let (code, r) = schur(&["resolve", "--ring", &ring]);
    assert_eq!(code, 0);
    assert_eq!(r["verified"], true);
    assert_eq!(r["order"], "1296");
    let (code, nv) = schur(&["nonschurity", "--ring", &ring, "--u", "3", "--l", "3"]);
    assert_eq!(code, 0);
    assert_eq!(nv["holds"], false);
}

#[test]
fn sweep_and_determinism() {
    let a = run(["schur", "sweep", "--ns", "4,12", "--jobs", "2"]);
    let b = run(["schur", "sweep", "--ns", "4,12", "--jobs", "3"]);
    assert_eq!(a.code, 0);
    assert_eq!(a, b);
    let first: Value = serde_json::from_str(a.stdout.lines().next().unwrap()).unwrap();
    assert_eq!(first["entries"], 3);
    assert_eq!(first["schurian"], 3);
    let e1 = run(["schur", "enumerate", "--n", "24"]);
    let e2 = run(["schur", "enumerate", "--n", "24"]);
    assert_eq!(e1, e2);
}
