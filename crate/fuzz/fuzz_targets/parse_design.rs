#![no_main]
use libfuzzer_sys::fuzz_target;

use sdcode::format::{parse_design, write_design};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = parse_design(text, None) {
        let mut out = Vec::new();
        write_design(&d, &mut out).unwrap();
        let again = parse_design(std::str::from_utf8(&out).unwrap(), Some(d.point_count())).unwrap();
        assert_eq!(again.blocks(), d.blocks());
    }
});
