#![no_main]

use alavi_core::io::{parse_matrix_csv, write_matrix_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = parse_matrix_csv(text) else { return };
    if m.iter().all(|x| x.is_finite()) {
        let back = parse_matrix_csv(&write_matrix_csv(&m)).expect("written matrix parses");
        assert_eq!(back, m);
    }
});
