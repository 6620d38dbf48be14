#![no_main]

use fkburger::planar_map::{canonical_form, RootedMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((m, t)) = RootedMap::from_json(s) {
        assert_eq!(RootedMap::from_json(&m.to_json(&t)).unwrap(), (m.clone(), t.clone()));
        let _ = canonical_form(&m, &t);
    }
});
