#![no_main]
use libfuzzer_sys::fuzz_target;

use sdcode::format::parse_known_counts;
use sdcode::gleason::fit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(known) = parse_known_counts(text) {
        // Small lengths keep each run fast.
        for n in [8, 16, 24, 32] {
            let _ = fit(n, &known);
        }
    }
});
