#![no_main]

use fkburger::planar_map::{map_to_word, RootedMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((m, t)) = RootedMap::from_dot(s) {
        assert_eq!(RootedMap::from_dot(&m.to_dot(&t)).unwrap(), (m.clone(), t.clone()));
        let _ = map_to_word(&m, &t);
    }
});
