#![no_main]

use catsolve_core::ddefront::parse_dde;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if src.len() > 512 {
        return;
    }
    if let Ok(sys) = parse_dde(src) {
        // printing gives valid input describing the same system
        let again = parse_dde(&sys.print()).expect("printed system parses");
        assert_eq!(again, sys);
    }
});
