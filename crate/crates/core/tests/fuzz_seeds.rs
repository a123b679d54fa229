//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::Path;

use sdcode::format::{parse_design, parse_generator_matrix, parse_known_counts, write_design, write_generator_matrix};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn generator_seeds() {
    let mut parsed = 0;
    for (_, text) in seeds("parse_generator") {
        if let Ok(m) = parse_generator_matrix(&text) {
            let mut buf = Vec::new();
            write_generator_matrix(&m, &mut buf).unwrap();
            assert_eq!(parse_generator_matrix(std::str::from_utf8(&buf).unwrap()).unwrap(), m);
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn design_seeds() {
    let mut parsed = 0;
    for (_, text) in seeds("parse_design") {
        if let Ok(d) = parse_design(&text, None) {
            let mut buf = Vec::new();
            write_design(&d, &mut buf).unwrap();
            assert_eq!(parse_design(std::str::from_utf8(&buf).unwrap(), None).unwrap(), d);
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn known_count_seeds() {
    let results: Vec<bool> = seeds("parse_known_counts")
        .iter()
        .map(|(_, text)| parse_known_counts(text).is_ok())
        .collect();
    assert!(results.contains(&true) && results.contains(&false));
}
