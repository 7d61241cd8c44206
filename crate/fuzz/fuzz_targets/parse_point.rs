#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::parse::parse_point;

fuzz_target!(|input: &str| {
    if let Ok(p) = parse_point(input) {
        assert!(p.x.is_finite() && p.y.is_finite() && p.z.is_finite());
        let _ = p.validate();
    }
});
