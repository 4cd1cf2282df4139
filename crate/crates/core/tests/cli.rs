use std::process::{Command, Output};

fn k3real(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3real"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn unit_l(pairs: &[(usize, i64)]) -> String {
    let mut v = vec![0i64; 22];
    for &(i, x) in pairs {
        v[i] = x;
    }
    serde_json::to_string(&v).unwrap()
}

fn temp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("k3real-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn invariants_of_the_sphere_entry() {
    let o = k3real(&["invariants", "catalog:sphere", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["b"], 11);
    assert_eq!(v["lambda"], 11);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["types"], serde_json::json!(["sphere"]));
    assert_eq!((v["num_components"].clone(), v["h_star"].clone()), (1.into(), 2.into()));
}

#[test]
fn invariants_from_exported_files() {
    let dir = temp_dir("export");
    let o = k3real(&["catalog", "--export", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let file = dir.join("two_tori_ambiguous.json");
    let o = k3real(&["invariants", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("two tori"), "{text}");
    assert!(text.contains("genus 2 + 1 spheres"), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn identity_is_not_admissible() {
    let dir = temp_dir("identity");
    let rows: Vec<Vec<i64>> =
        (0..22).map(|i| (0..22).map(|j| i64::from(i == j)).collect()).collect();
    let text = serde_json::json!({ "lattice": "K3", "matrix": rows }).to_string();
    let file = dir.join("identity.json");
    std::fs::write(&file, text).unwrap();
    let o = k3real(&["invariants", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not admissible"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn input_errors_have_their_exit_codes() {
    let dir = temp_dir("errors");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(k3real(&["invariants", bad.to_str().unwrap()]).status.code(), Some(2));
    let negation = dir.join("negation.json");
    std::fs::write(&negation, r#"{"lattice": "<2>", "matrix": [[-1]]}"#).unwrap();
    assert_eq!(k3real(&["invariants", negation.to_str().unwrap()]).status.code(), Some(0));
    let bad_iso = dir.join("not_isometry.json");
    let u_and_two = r#"{"lattice": {"rank": 2, "gram": [[0,1],[1,2]]}, "matrix": [[0,1],[1,0]]}"#;
    std::fs::write(&bad_iso, u_and_two).unwrap();
    assert_eq!(k3real(&["invariants", bad_iso.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn catalog_table_and_json_agree() {
    let table = k3real(&["catalog"]);
    assert_eq!(table.status.code(), Some(0));
    let rows = json(&k3real(&["catalog", "--format", "json"]));
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 6);
    let text = stdout(&table);
    for r in rows {
        assert_eq!(r["pass"], true);
        let line = text
            .lines()
            .find(|l| l.starts_with(r["name"].as_str().unwrap()))
            .unwrap();
        let c = &r["computed"];
        assert!(line.contains(&format!("({},{})", c[0], c[1])));
        assert!(line.ends_with("pass"));
    }
}

#[test]
fn corrupted_catalog_fails() {
    let o = k3real(&["catalog", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn witness_commands() {
    let o = k3real(&["witness", "catalog:max_M", "--k", "19", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["M_basis"].as_array().unwrap().len(), 19);
    assert_eq!(v["r_image_dim"], 19);
    assert_eq!(v["checks"]["r_image_matches"], true);

    assert_eq!(k3real(&["witness", "catalog:max_M", "--k", "20"]).status.code(), Some(4));
    let o = k3real(&["witness", "catalog:max_M", "--k", "2", "--bound", "0"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bound"));

    let l = unit_l(&[(2, 1), (3, 2)]);
    let o = k3real(&["witness", "catalog:max_M", "--l", &l, "--k", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["polarization"]["k0"], 1);
    assert_eq!(v["checks"]["y_orthogonal_to_l"], true);
}

#[test]
fn obstruction_commands() {
    let l = unit_l(&[(2, 1), (3, 2)]);
    let o = k3real(&["obstruction", "catalog:max_M", "--l", &l, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "not_contractible");
    assert_eq!(v["k0"], 1);
    assert_eq!(v["han_bound"], 19);
    assert!(v["fired_rules"].as_array().unwrap().contains(&"M_surface".into()));

    let sphere_l = unit_l(&[(2, 1), (3, 1), (4, 1), (5, 1)]);
    let o = k3real(&["obstruction", "catalog:sphere", "--l", &sphere_l, "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["verdict"], "contractible");
    assert_eq!(v["quartic"]["k0"], 0);

    let bad = unit_l(&[(0, 1)]);
    assert_eq!(k3real(&["obstruction", "catalog:max_M", "--l", &bad]).status.code(), Some(3));
    assert_eq!(k3real(&["obstruction", "catalog:max_M", "--l", "[1,"]).status.code(), Some(2));
}

#[test]
fn quadric_model_from_file() {
    let dir = temp_dir("quadric");
    let file = dir.join("quadric.json");
    std::fs::write(&file, r#"{"lattice": "U", "matrix": [[0,-1],[-1,0]]}"#).unwrap();
    let o = k3real(&["obstruction", file.to_str().unwrap(), "--l", "[1,1]", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "contractible");
    assert_eq!(v["han_bound"], serde_json::Value::Null);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn moduli_commands() {
    let v = json(&k3real(&["moduli", "catalog:max_M", "--format", "json"]));
    assert_eq!(v["dim_omega"], 20);
    let strata = v["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 21);
    assert_eq!(strata[19]["dim"], 1);
    assert_eq!(strata[20]["in_range"], false);

    let l = unit_l(&[(2, 1), (3, 2)]);
    let v = json(&k3real(&["moduli", "catalog:max_M", "--l", &l, "--format", "json"]));
    assert_eq!(v["k0"], 1);
    assert_eq!(v["strata"][1]["dim"], 19);
    assert_eq!(v["strata"][0]["in_range"], false);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["witness", "catalog:two_tori_ambiguous", "--format", "json"],
        vec!["random-check", "--seed", "11", "--count", "20", "--format", "json"],
        vec!["diagram", "--format", "json"],
    ] {
        let a = k3real(&args);
        let b = k3real(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = k3real(&["random-check", "--seed", "1", "--count", "5", "--format", "json"]);
    let b = k3real(&["random-check", "--seed", "2", "--count", "5", "--format", "json"]);
    assert_ne!(a.stdout, b.stdout);
}
