#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::parse::{parse_fhs_values, FHS_KEYS};

fuzz_target!(|input: &str| {
    if let Ok(values) = parse_fhs_values(input) {
        assert!(values.keys().all(|k| FHS_KEYS.contains(&k.as_str())));
    }
});
