#![no_main]

use alavi_core::io::{parse_trace_csv, write_trace_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = parse_trace_csv(text) else { return };
    if let Ok(out) = write_trace_csv(&records) {
        let _ = parse_trace_csv(&out);
    }
});
