#![no_main]

use fkburger::semigroup::{reduce, ReducedWord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<ReducedWord>() {
        assert_eq!(r.to_string().parse::<ReducedWord>().unwrap(), r);
        assert_eq!(reduce(&r.to_word()), r);
    }
});
