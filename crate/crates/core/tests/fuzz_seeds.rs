//! The fuzz targets' properties on the checked-in corpus seeds.

use std::fs;
use std::path::PathBuf;

use catsolve_core::ddefront::parse_dde;
use catsolve_core::exactpoly::{parse_poly, VarTable};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let s = fs::read_to_string(&p).unwrap();
            (p, s)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn dde_seeds_round_trip() {
    for (path, src) in seeds("parse_dde") {
        let sys = parse_dde(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_dde(&sys.print()).unwrap(), sys, "{}", path.display());
    }
}

#[test]
fn poly_seeds_round_trip() {
    let vars = VarTable::new(&["t", "u", "x1", "z0"]).unwrap();
    for (path, src) in seeds("parse_poly") {
        let p = parse_poly(&src, &vars).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_poly(&p.to_text(), &vars).unwrap(), p, "{}", path.display());
    }
}
