#![no_main]

use alavi_core::io::RunConfigDoc;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = RunConfigDoc::parse(text) {
        let _ = doc.validate();
    }
});
