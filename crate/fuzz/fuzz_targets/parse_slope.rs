#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::parse::parse_slope;

fuzz_target!(|input: &str| {
    if let Ok((slope, _)) = parse_slope(input) {
        // accepted slopes are normalized and print back to themselves
        let (again, reduced) = parse_slope(&slope.to_string()).expect("printed slope parses");
        assert_eq!(again, slope);
        assert!(!reduced);
    }
});
