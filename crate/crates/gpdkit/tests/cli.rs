use std::path::PathBuf;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["gpdkit", "--format", "json"];
    argv.extend_from_slice(args);
    let out = gpdkit::run(&argv);
    assert!(out.code <= 1, "{argv:?}: exit {} {}", out.code, out.stderr);
    (out.code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn validate_reports() {
    let (code, v) = json(&["validate", &fixture("z2.gpd")]);
    assert_eq!(code, 0);
    assert_eq!(v["violations"], Value::Array(vec![]));
    let (code, v) = json(&["validate", &fixture("broken.gpd")]);
    assert_eq!(code, 1);
    assert_eq!(v["violations"][0]["invariant"], "bijection");
    assert_eq!(v["violations"][0]["ids"][0], "swap");
}

#[test]
fn groupoid_queries() {
    let (_, v) = json(&["components", &fixture("z2_rigid2.gpd")]);
    assert_eq!(v["components"], serde_json::json!([["dot"], ["i", "j"]]));
    let (_, v) = json(&["aut", &fixture("tors2.gpd"), "j"]);
    assert_eq!(v["order"], 2);
    let (_, v) = json(&["base", &fixture("z2.gpd"), "dot"]);
    assert_eq!(v["tuple"].as_array().unwrap().len(), 1);
}

#[test]
fn extend_restrict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("c.gpd").display().to_string();
    let back = dir.path().join("g.gpd").display().to_string();
    assert_eq!(gpdkit::run(["gpdkit", "extend", &fixture("tors2.gpd"), "j", "-o", &cover]).code, 0);
    assert_eq!(gpdkit::run(["gpdkit", "restrict", &cover, "-o", &back]).code, 0);
    assert_eq!(std::fs::read_to_string(back).unwrap(), std::fs::read_to_string(fixture("tors2.gpd")).unwrap());
}

#[test]
fn morphism_commands() {
    let h = fixture("z2_to_rigid2.gpd");
    assert_eq!(json(&["morphism-check", &h]).0, 0);
    assert_eq!(json(&["iso", &h]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.gpd").display().to_string();
    assert_eq!(gpdkit::run(["gpdkit", "functor-c", &h, "-o", &c]).code, 0);
    let (code, v) = json(&["cover-morphism-check", &c]);
    assert_eq!(code, 0, "{v}");
    let g = dir.path().join("g.gpd").display().to_string();
    assert_eq!(gpdkit::run(["gpdkit", "functor-g", &c, "-o", &g]).code, 0);
    let back = gpdkit_core::io::read_document(std::path::Path::new(&g)).unwrap();
    let orig = gpdkit_core::io::read_document(std::path::Path::new(&h)).unwrap();
    match (back, orig) {
        (gpdkit_core::io::Document::Morphism(a), gpdkit_core::io::Document::Morphism(b)) => assert_eq!(a, b),
        _ => panic!("expected morphisms"),
    }
    let (code, v) = json(&["enumerate", "morphisms", &fixture("z2.gpd"), &fixture("rigid2.gpd")]);
    assert_eq!((code, v["count"].as_u64()), (0, Some(2)));
    let (_, v) = json(&["enumerate", "covers", &fixture("rigid2_cover.gpd"), &fixture("z2_cover.gpd")]);
    assert_eq!(v["count"], 0);
}

#[test]
fn cover_commands() {
    assert_eq!(json(&["determinacy", &fixture("z2_cover.gpd")]).0, 0);
    assert_eq!(json(&["determinacy", &fixture("ghost_cover.gpd")]).0, 1);
    assert_eq!(json(&["validate", &fixture("ghost_cover.gpd")]).0, 1);
    let (code, v) = json(&["epsilon", &fixture("rigid2.gpd"), "j"]);
    assert_eq!((code, &v["identity"]), (0, &Value::Bool(true)));
    let (code, _) = json(&["eta", &fixture("tors2_cover.gpd"), "j"]);
    assert_eq!(code, 0);
}

#[test]
fn laws_over_corpus() {
    let (code, v) = json(&["laws"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
    let out = gpdkit::run(["gpdkit", "laws", "--bound", "2"]);
    assert_eq!(out.code, 3);
}

#[test]
fn family_commands() {
    let (_, v) = json(&["census", &fixture("z2_rigid2_family.gpd")]);
    assert_eq!(v["flagged"], serde_json::json!(["a1"]));
    assert_eq!((v["flagged_count"].as_u64(), v["base_count"].as_u64()), (Some(1), Some(2)));
    assert_eq!(json(&["independence", &fixture("z2_rigid2_family.gpd")]).0, 0);
    let (code, v) = json(&["independence", &fixture("crossing_family.gpd")]);
    assert_eq!((code, v["automorphism_count"].as_u64()), (1, Some(2)));
    let (code, v) = json(&["family-morphism-check", &fixture("crossing_morphism.gpd")]);
    assert_eq!((code, &v["violations"][0]["invariant"]), (1, &Value::from("fibre-crossing")));

    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("f.gpd").display().to_string();
    let fc = dir.path().join("fc.gpd").display().to_string();
    let back = dir.path().join("b.gpd").display().to_string();
    assert_eq!(gpdkit::run(["gpdkit", "family-split", &fixture("z2_rigid2.gpd"), "-o", &fam]).code, 0);
    assert_eq!(gpdkit::run(["gpdkit", "family-extend", &fam, "--section", "a2=j", "-o", &fc]).code, 0);
    assert_eq!(gpdkit::run(["gpdkit", "family-restrict", &fc, "-o", &back]).code, 0);
    assert_eq!(std::fs::read_to_string(&back).unwrap(), std::fs::read_to_string(&fam).unwrap());
    assert_eq!(gpdkit::run(["gpdkit", "family-extend", &fam, "--section", "a1=j"]).code, 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["gpdkit", "--format", "json", "equiv", &fixture("z2.gpd"), &fixture("tors2.gpd")];
    let a = gpdkit::run(args);
    let b = gpdkit::run(args);
    assert_eq!(a, b);
    assert_eq!(a.code, 0);
}

#[test]
fn usage_errors_write_no_report() {
    for args in [vec!["gpdkit"], vec!["gpdkit", "aut", &fixture("z2.gpd"), "nope"], vec!["gpdkit", "restrict", &fixture("z2.gpd")]] {
        let out = gpdkit::run(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}
