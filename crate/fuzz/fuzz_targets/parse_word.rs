#![no_main]

use libfuzzer_sys::fuzz_target;
use teich_core::fricke::Word;

fuzz_target!(|input: &str| {
    if let Ok(w) = Word::parse(input) {
        let again = Word::parse(&w.to_string()).expect("printed word parses");
        assert_eq!(again, w);
    }
});
