#![no_main]

use fkburger::semigroup::{reduce, Word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = s.parse::<Word>() {
        assert_eq!(w.to_string(), s);
        let r = reduce(&w);
        assert_eq!(reduce(&r.to_word()), r);
    }
});
