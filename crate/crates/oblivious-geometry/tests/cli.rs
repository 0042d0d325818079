use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn obgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obgeo")).args(args).output().expect("obgeo runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("obgeo-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn random_file(name: &str, n: usize, seed: u64) -> PathBuf {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (x >> 33) as f64 / (1u64 << 31) as f64
    };
    let text: String = (0..n).map(|_| format!("{:.6} {:.6}\n", 100.0 * next(), 100.0 * next())).collect();
    write(name, &format!("# random points\n{text}"))
}

#[test]
fn envelope_shape() {
    let tri = write("tri.txt", "0 0\n4 0\n# apex\n\n0 3\n");
    let v = json(&obgeo(&["hull", "--input", s(&tri)]));
    assert_eq!(v["algorithm"], "hull");
    assert_eq!(v["n"], 3);
    assert_eq!(v["parameters"]["seed"], 0);
    assert_eq!(v["parameters"]["separation"], "21/10");
    assert_eq!(v["parameters"]["grid_bits"], 20);
    assert_eq!(v["result"]["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn two_points_are_mutual_neighbors() {
    let two = write("two.txt", "1.5 1\n2.5 1\n");
    let v = json(&obgeo(&["ann", "--input", s(&two)]));
    let nb = v["result"]["neighbors"].as_array().unwrap();
    assert_eq!(nb[0]["neighbor"], 1);
    assert_eq!(nb[1]["neighbor"], 0);
    assert!((nb[0]["distance"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let cp = json(&obgeo(&["closest-pair", "--input", s(&two)]));
    assert_eq!((cp["result"]["a"].as_u64(), cp["result"]["b"].as_u64()), (Some(0), Some(1)));
}

#[test]
fn quadtree_and_wspd_output() {
    let f = random_file("qt.txt", 60, 1);
    let q = json(&obgeo(&["quadtree", "--input", s(&f), "--grid-bits", "12"]));
    let nodes = q["result"]["nodes"].as_array().unwrap();
    assert_eq!(q["result"]["node_count"].as_u64().unwrap() as usize, nodes.len());
    assert!(q["result"]["internal_count"].as_u64().unwrap() <= 59);
    assert!(nodes[0]["parent"].is_null());
    for node in nodes {
        for key in ["id", "depth", "prefix", "parent", "children", "point"] {
            assert!(node.get(key).is_some(), "{key}");
        }
        assert!(u64::from_str_radix(node["prefix"].as_str().unwrap(), 16).is_ok());
    }
    let w = json(&obgeo(&["wspd", "--input", s(&f), "--grid-bits", "12", "--separation", "5/2"]));
    assert_eq!(w["parameters"]["separation"], "5/2");
    assert!(w["result"]["pair_count"].as_u64().unwrap() > 0);
}

#[test]
fn json_is_byte_identical_and_svg_does_not_change_it() {
    let f = random_file("ident.txt", 80, 2);
    for cmd in ["hull", "quadtree", "ann"] {
        let a = obgeo(&[cmd, "--input", s(&f)]);
        let svg = scratch(&format!("{cmd}.svg"));
        let b = obgeo(&[cmd, "--input", s(&f), "--svg", s(&svg)]);
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let doc = fs::read_to_string(&svg).unwrap();
        assert!(doc.starts_with("<svg") && doc.contains(r#"width="1024" height="1024""#), "{cmd}");
        let file = scratch(&format!("{cmd}.json"));
        assert!(obgeo(&[cmd, "--input", s(&f), "--json", s(&file)]).stdout.is_empty());
        assert_eq!(fs::read(&file).unwrap(), a.stdout, "{cmd}");
    }
    for cmd in ["wspd", "closest-pair"] {
        assert_eq!(obgeo(&[cmd, "--input", s(&f)]).stdout, obgeo(&[cmd, "--input", s(&f)]).stdout);
    }
}

#[test]
fn parse_errors_exit_1_with_line_numbers() {
    let bad = write("bad.txt", "# header\n1 2\n\n3 oops\n");
    let out = obgeo(&["hull", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
    let three = write("three.txt", "1 2 3\n");
    assert_eq!(obgeo(&["hull", "--input", s(&three)]).status.code(), Some(1));
    let empty = write("empty.txt", "# nothing\n");
    assert_eq!(obgeo(&["hull", "--input", s(&empty)]).status.code(), Some(1));
    assert_eq!(obgeo(&["hull", "--input", "/nonexistent/points.txt"]).status.code(), Some(1));
    assert_eq!(obgeo(&["hull"]).status.code(), Some(1));
    assert_eq!(obgeo(&["hull", "--input", s(&bad), "--separation", "x"]).status.code(), Some(1));
    assert_eq!(obgeo(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(obgeo(&["--help"]).status.code(), Some(0));
}

#[test]
fn constraint_violations_exit_2() {
    let dup = write("dup.txt", "0 0\n5 5\n0.0000001 0\n");
    let out = obgeo(&["hull", "--input", s(&dup)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lines 1 and 3"));
    let one = write("one.txt", "3 4\n");
    assert_eq!(obgeo(&["ann", "--input", s(&one)]).status.code(), Some(2));
    assert_eq!(obgeo(&["closest-pair", "--input", s(&one)]).status.code(), Some(2));
    let tri = write("tri2.txt", "0 0\n4 0\n0 3\n");
    assert_eq!(obgeo(&["wspd", "--input", s(&tri), "--separation", "2"]).status.code(), Some(2));
    assert_eq!(obgeo(&["hull", "--input", s(&tri), "--grid-bits", "40"]).status.code(), Some(2));
    assert_eq!(obgeo(&["hull", "--input", s(&tri), "--grid-bits", "28"]).status.code(), Some(2));
}

#[test]
fn audit_verdicts_and_dump() {
    let tri = write("audit.txt", "0 0\n4 0\n0 3\n1 1\n");
    let dump = scratch("trace.txt");
    let v = json(&obgeo(&["audit", "hull", "--input", s(&tri), "--trials", "5", "--dump", s(&dump)]));
    let r = &v["result"];
    assert_eq!(v["algorithm"], "audit");
    assert_eq!(r["algorithm"], "hull");
    assert_eq!(r["verdict"], 1);
    assert_eq!(r["pairs_compared"], 5);
    assert_eq!(r["n"], 4);
    let text = fs::read_to_string(&dump).unwrap();
    assert_eq!(text.lines().count() as u64, r["trace_length"].as_u64().unwrap());
    for line in text.lines().take(50) {
        let f: Vec<&str> = line.split(' ').collect();
        assert_eq!(f.len(), 3, "{line}");
        assert!(f[0].parse::<u32>().is_ok() && f[1].parse::<usize>().is_ok() && (f[2] == "r" || f[2] == "w"));
    }
    for alg in ["sort", "anlv", "list-rank", "tree-contract", "hull", "quadtree", "wspd", "closest-pair", "ann"] {
        let out = obgeo(&["audit", alg, "--n", "40", "--trials", "3", "--seed", "9"]);
        assert_eq!(out.status.code(), Some(0), "{alg}");
        assert_eq!(json(&out)["result"]["verdict"], 1, "{alg}");
        assert_eq!(out.stdout, obgeo(&["audit", alg, "--n", "40", "--trials", "3", "--seed", "9"]).stdout);
    }
    assert_eq!(obgeo(&["audit", "ann", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn bench_schedule() {
    let v = json(&obgeo(&["bench", "hull", "--min-exp", "4", "--max-exp", "7"]));
    assert_eq!(v["parameters"]["schedule"], serde_json::json!([16, 32, 64, 128]));
    let rows = v["result"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[0]["doubling"].is_null());
    assert!(rows[1]["doubling"].as_f64().unwrap() > 1.0);
    assert_eq!(v["result"][0]["within_bound"], true);
    assert_eq!(obgeo(&["bench", "--min-exp", "9", "--max-exp", "8"]).status.code(), Some(1));
}
