#![no_main]

use alavi_core::io::parse_snapshot_csv;
use libfuzzer_sys::fuzz_target;

// first two bytes pick the block sizes
fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let (n, m) = (data[0] as usize % 8, data[1] as usize % 8);
    let Ok(text) = std::str::from_utf8(&data[2..]) else { return };
    let _ = parse_snapshot_csv(text, n, m);
});
