#![no_main]

use fkburger::matching::Matching;
use fkburger::semigroup::Word;
use libfuzzer_sys::fuzz_target;

// First line is the word, the rest the matching JSON.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Some((word, json)) = s.split_once('\n') else { return };
    let Ok(word) = word.parse::<Word>() else { return };
    if let Ok(m) = Matching::from_json(json, &word) {
        m.validate(&word).unwrap();
        assert_eq!(Matching::from_json(&m.to_json(), &word).unwrap(), m);
    }
});
