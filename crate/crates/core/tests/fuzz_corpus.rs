//! Replays the checked-in fuzz corpus through the parser entry points and
//! checks each seed is accepted or rejected as its name says.

use std::path::PathBuf;

use hodgeforge::chain::SparseIntMatrix;
use hodgeforge::complex::icosahedron;
use hodgeforge::io;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn check(target: &str, rejected: &[&str], parse: impl Fn(&[u8]) -> bool) {
    for (name, bytes) in seeds(target) {
        let want = !rejected.contains(&name.as_str());
        assert_eq!(parse(&bytes), want, "{target}/{name}");
    }
}

#[test]
fn complex_seeds() {
    check("parse_complex", &["repeated_vertex.json"], |b| io::parse_complex(b).is_ok());
}

#[test]
fn vertex_map_seeds() {
    check("parse_vertex_map", &["duplicate_key.json"], |b| io::parse_vertex_map(b).is_ok());
}

#[test]
fn action_seeds() {
    let k = icosahedron();
    check("parse_action", &["partial.json"], |b| io::parse_action(b, &k).is_ok());
}

#[test]
fn catalog_seeds() {
    check("parse_catalog", &["incomplete.json"], |b| io::parse_catalog(b).is_ok());
}

#[test]
fn record_seeds() {
    check("parse_records", &["bad_components.json"], |b| io::parse_records(b).is_ok());
}

#[test]
fn triplet_seeds() {
    check("parse_triplets", &["out_of_range.txt"], |b| {
        std::str::from_utf8(b).is_ok_and(|t| SparseIntMatrix::parse_triplets(t).is_ok())
    });
}
