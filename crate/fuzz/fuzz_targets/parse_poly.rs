#![no_main]

use catsolve_core::exactpoly::{parse_poly, VarTable};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    // large powers of sums are slow, not wrong
    if src.len() > 256 {
        return;
    }
    let vars = VarTable::new(&["t", "u", "x1", "z0"]).unwrap();
    if let Ok(p) = parse_poly(src, &vars) {
        let again = parse_poly(&p.to_text(), &vars).expect("canonical text parses");
        assert_eq!(again, p);
    }
});
