use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gridpaths::cli_io::{read_graph, read_representation};
use gridpaths::representation::{derive_graph, validate};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gridpaths(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridpaths")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gridpaths-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn verify_accepts_a_valid_representation() {
    let o = gridpaths(&["verify", "cpg", data("k4_sub2.rep.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn k4_is_not_three_colourable() {
    let k4 = data("k4.graph");
    assert_eq!(code(&gridpaths(&["solve", "kcol", "--k", "3", k4.to_str().unwrap()])), 1);
    assert_eq!(code(&gridpaths(&["solve", "kcol", "--k", "4", k4.to_str().unwrap()])), 0);
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(code(&gridpaths(&["frobnicate"])), 2);
    assert_eq!(code(&gridpaths(&["derive", "/nonexistent/rep.json"])), 2);
    let bad = scratch("bad.rep.json");
    std::fs::write(&bad, "{\"semantics\":\"cpg\",\"paths\":{\"a\":[[0]]}}").unwrap();
    assert_eq!(code(&gridpaths(&["derive", bad.to_str().unwrap()])), 2);
}

#[test]
fn build_writes_graph_and_representation() {
    let prefix = scratch("g2");
    let o = gridpaths(&["build", "gk", "--k", "2", "-o", prefix.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let read = |suffix: &str| std::fs::read_to_string(prefix.with_extension(suffix)).unwrap();
    let g = read_graph(&read("graph")).unwrap();
    let rep = read_representation(&read("rep.json")).unwrap();
    assert!(validate(&rep).is_valid());
    assert_eq!(derive_graph(&rep).unwrap().edge_count(), g.edge_count());
}

#[test]
fn sat_reduction_round_trips_through_files() {
    let formula = data("phi0.cnf");
    let prefix = scratch("phi0");
    let o = gridpaths(&["reduce", "sat", "--i", "2", formula.to_str().unwrap(), "-o", prefix.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = prefix.with_extension("rep.json");
    assert_eq!(code(&gridpaths(&["verify", "cpg", rep.to_str().unwrap()])), 0);
    let o = gridpaths(&["extract-assignment", "--i", "2", formula.to_str().unwrap(), rep.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("x=1") && text.contains("y=0"), "{text}");
}
