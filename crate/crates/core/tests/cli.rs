use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn rla(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rla"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = rla(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

/// Value column of a `key,value,decimal` table.
fn value<'a>(table: &'a str, key: &str) -> &'a str {
    table
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|rest| rest.strip_prefix(',')))
        .and_then(|rest| rest.split(',').next())
        .unwrap_or_else(|| panic!("no `{key}` in\n{table}"))
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn moments_of_the_sentence() {
    let out = stdout_ok(&["moments", &data("sentence.edges")]);
    assert_eq!(out.lines().next(), Some("key,value,decimal"));
    assert_eq!(value(&out, "e_d"), "96");
    assert_eq!(value(&out, "var_d"), "1084/5");
}

#[test]
fn tsv_uses_tabs() {
    let out = stdout_ok(&["--format", "tsv", "moments", &data("sentence.edges")]);
    assert!(out.lines().next().unwrap().split('\t').eq(["key", "value", "decimal"]));
}

#[test]
fn significance_from_arrangement_and_from_d_agree() {
    let from_file = stdout_ok(&["sig", &data("sentence.edges"), "--arrangement", &data("sentence.arrangement")]);
    let from_d = stdout_ok(&["sig", &data("sentence.edges"), "--D", "40"]);
    assert_eq!(from_file, from_d);
    assert_eq!(value(&from_d, "z_squared"), "3920/271");
    assert_eq!(value(&from_d, "cantelli_bound"), "271/4191");
}

#[test]
fn bounds_of_the_sentence() {
    let out = stdout_ok(&["bounds", &data("sentence.edges")]);
    assert_eq!(value(&out, "upper_dm"), "242");
    assert_eq!(value(&out, "upper_em"), "211");
    assert_eq!(value(&out, "upper"), "211");
}

#[test]
fn treebank_summary() {
    let out = stdout_ok(&["treebank", &data("sentence.conllu")]);
    let summary = out.lines().find(|l| l.starts_with("collection,")).unwrap();
    assert!(summary.ends_with(",5/2"), "{summary}");
}

#[test]
fn oracle_distribution_of_a_path() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "p3.edges", "3 2\n1 2\n2 3\n");
    let out = stdout_ok(&["oracle", &path]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "d,count,cumulative,cumulative_float");
    assert!(rows[1].starts_with("2,2,1/3,"), "{}", rows[1]);
    assert!(rows[2].starts_with("3,4,1,"), "{}", rows[2]);
}

#[test]
fn selftest_passes() {
    let out = stdout_ok(&["selftest", "--max-pair-n", "8", "--max-tree-n", "6"]);
    assert!(out.lines().all(|l| l.starts_with("PASS") || l.starts_with("DIAG")), "{out}");
}

#[test]
fn gnm_curve_endpoints() {
    let out = stdout_ok(&["ensemble", "gnm", "--n", "5", "--rational"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 1 + 11);
    assert!(rows[1].starts_with("0,0,"), "{}", rows[1]);
    assert!(rows[11].starts_with("10,0,"), "{}", rows[11]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let triangle = write(&dir, "k3.edges", "3 3\n1 2\n2 3\n1 3\n");
    assert_eq!(rla(&["sig", &triangle, "--D", "4"]).status.code(), Some(4));
    let bad = write(&dir, "bad.edges", "3 1\n1 1\n");
    assert_eq!(rla(&["moments", &bad]).status.code(), Some(2));
    let missing = dir.path().join("missing.edges");
    let out = rla(&["moments", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.edges"));
    assert_eq!(rla(&["oracle", &data("sentence.edges")]).status.code(), Some(3));
}

#[test]
fn written_graph_reads_back() {
    let dir = TempDir::new().unwrap();
    let (g, a) = rla::fixture::sentence();
    let gp = dir.path().join("g.edges");
    let ap = dir.path().join("g.arrangement");
    rla::io::write_graph(&g, fs::File::create(&gp).unwrap()).unwrap();
    rla::io::write_arrangement(&a, fs::File::create(&ap).unwrap()).unwrap();
    assert_eq!(rla::io::read_graph_file(Path::new(&gp)).unwrap(), g);
    assert_eq!(rla::io::read_arrangement_file(&ap).unwrap(), a);
    let out = stdout_ok(&["sig", gp.to_str().unwrap(), "--arrangement", ap.to_str().unwrap()]);
    assert_eq!(value(&out, "d_observed"), "40");
}
