#![no_main]

use alavi_core::io::{canonical_problem_json, ProblemDoc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = ProblemDoc::parse(text) else { return };
    // sidecar references have no base directory here and must fail cleanly
    if let Ok(problem) = doc.to_problem(None) {
        let _ = canonical_problem_json(&problem);
    }
});
