#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::parse::{parse_grid, MAX_GRID_POINTS};

fuzz_target!(|input: &str| {
    if let Ok(grid) = parse_grid(input) {
        assert!(!grid.is_empty() && grid.len() <= MAX_GRID_POINTS);
        assert!(grid.iter().all(|x| x.is_finite()));
    }
});
