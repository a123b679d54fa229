#![no_main]
use libfuzzer_sys::fuzz_target;

use sdcode::format::{parse_generator_matrix, write_generator_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_generator_matrix(text) {
        let mut out = Vec::new();
        write_generator_matrix(&m, &mut out).unwrap();
        let again = parse_generator_matrix(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again, m);
        let _ = m.rank();
    }
});
