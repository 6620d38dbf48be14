#![no_main]

use fkburger::stack_sim::{InitialStackPolicy, Trajectory, TrajectoryMeta};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let rows = s.lines().filter(|l| !l.starts_with('#')).count();
    let meta = TrajectoryMeta {
        p: 0.5,
        n: rows.saturating_sub(2),
        policy: InitialStackPolicy::Alternating,
        seed: 0,
        rng: fkburger::rng::RNG_NAME.to_string(),
    };
    if let Ok(t) = Trajectory::from_csv(s, &meta) {
        assert_eq!(Trajectory::from_csv(&t.to_csv(), &meta).unwrap(), t);
    }
});
