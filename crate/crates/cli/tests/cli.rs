use std::path::PathBuf;
use std::process::{Command, Output};

use milfib_core::arrangement::{build_lattice, named_arrangement};
use milfib_core::milnor::full_spectrum;
use milfib_core::report::{analyze, AnalysisDocument, AnalysisOptions};

fn milfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milfib"))
        .args(args)
        .current_dir(workspace())
        .output()
        .expect("binary runs")
}

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn milnor_hesse_at_six() {
    let out = milfib(&["milnor", "--name", "hesse", "--k", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(
        s.contains("grf0=1") && s.contains("grf1=1") && s.contains("b1=2"),
        "{s}"
    );
}

#[test]
fn realize_mod_27() {
    let out = milfib(&["realize", "--name", "ex-3-1-iii", "--mod", "27"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("induced_triples=9 new_triples=0"), "{s}");
    assert!(s.lines().any(|l| l.starts_with("x=(")), "{s}");
}

#[test]
fn aomoto_with_wrong_subset_size_is_a_user_error() {
    let out = milfib(&["aomoto", "--name", "braid", "--k", "3", "--I", "1,5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn aomoto_net_block() {
    let out = milfib(&["aomoto", "--name", "braid", "--k", "2", "--I", "1,6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("aomoto_h1=1"));
}

#[test]
fn examples_suite_and_filters() {
    let out = milfib(&["examples"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let only = milfib(&["examples", "--only", "braid"]);
    assert_eq!(only.status.code(), Some(0));
    assert!(stdout(&only).lines().all(|l| l.contains(" braid ")));

    let broken = milfib(&["examples", "--only", "braid", "--corrupt", "braid"]);
    assert_eq!(broken.status.code(), Some(2));

    assert_eq!(
        milfib(&["examples", "--only", "nothing"]).status.code(),
        Some(1)
    );
}

#[test]
fn user_errors_exit_one() {
    assert_eq!(milfib(&["milnor", "--name", "nope"]).status.code(), Some(1));
    assert_eq!(milfib(&["milnor"]).status.code(), Some(1));
    assert_eq!(
        milfib(&["milnor", "--name", "braid", "--input", "data/ceva3.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        milfib(&["milnor", "--name", "braid", "--k", "6"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        milfib(&["milnor", "--input", "data/missing.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        milfib(&["net", "--name", "braid", "--m", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        milfib(&["realize", "--name", "hesse", "--mod", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(milfib(&["bogus"]).status.code(), Some(1));
    assert_eq!(milfib(&["--help"]).status.code(), Some(0));
}

#[test]
fn milnor_json_matches_library() {
    let out = milfib(&["milnor", "--name", "ceva3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let cli: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = named_arrangement("ceva3").unwrap();
    let lat = build_lattice(&arr).unwrap();
    let lib = serde_json::to_value(full_spectrum(&arr, &lat).unwrap()).unwrap();
    assert_eq!(cli, lib);
}

#[test]
fn analyze_json_matches_library_and_is_stable() {
    let a = milfib(&["analyze", "--name", "pappus-dual", "--format", "json"]);
    let b = milfib(&["analyze", "--name", "pappus-dual", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: AnalysisDocument = serde_json::from_slice(&a.stdout).unwrap();
    let arr = named_arrangement("pappus-dual").unwrap();
    let lat = build_lattice(&arr).unwrap();
    assert_eq!(
        doc,
        analyze(&arr, &lat, &AnalysisOptions::default()).unwrap()
    );
}

#[test]
fn analyze_table_shows_braid_row() {
    let out = milfib(&["analyze", "--name", "braid"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(
        s.lines()
            .any(|l| l.starts_with("k=2 ") && l.contains("b1=1")),
        "{s}"
    );
}

#[test]
fn section_of_braid_in_c4() {
    let out = milfib(&[
        "section",
        "--input",
        "data/braid-c4.json",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["arrangement"]["lines"].as_array().unwrap().len(), 6);
    assert_eq!(v["certificate"]["seed"], 3);

    let spectrum = milfib(&[
        "milnor",
        "--input",
        "data/braid-c4.json",
        "--format",
        "json",
    ]);
    let reports: serde_json::Value = serde_json::from_slice(&spectrum.stdout).unwrap();
    let b1: Vec<u64> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["b1"].as_u64().unwrap())
        .collect();
    assert_eq!(b1, vec![0, 1, 0, 1, 0]);
}

#[test]
fn lattice_net_cond02_theorem1() {
    let lattice = milfib(&["lattice", "--input", "data/ceva3.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&lattice.stdout).unwrap();
    assert_eq!(v["sigma"], 12);

    let net = milfib(&["net", "--name", "braid", "--m", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&net.stdout).unwrap();
    assert_eq!(v, serde_json::json!([[1, 2, 3, 3, 2, 1]]));

    let found = milfib(&["cond02", "--name", "ex-3-1-iii", "--k", "3"]);
    assert_eq!(found.status.code(), Some(0));
    assert!(stdout(&found).contains("no subset"));

    let check = milfib(&["cond02", "--name", "braid", "--k", "2", "--I", "1,6"]);
    assert!(stdout(&check).contains("holds=true"));

    let t1 = milfib(&[
        "theorem1",
        "--name",
        "braid",
        "--partition",
        "data/braid-partition.json",
        "--m",
        "3",
    ]);
    assert_eq!(t1.status.code(), Some(0));
    assert!(stdout(&t1).contains("t1i=true t1ii=true"));
}
