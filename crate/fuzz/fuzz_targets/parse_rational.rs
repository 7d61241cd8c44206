#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::parse::parse_rational;

fuzz_target!(|input: &str| {
    if let Ok(r) = parse_rational(input) {
        let again = parse_rational(&r.to_string()).expect("printed rational parses");
        assert_eq!(again, r);
    }
});
