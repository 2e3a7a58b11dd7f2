#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::json::parse_reduction_file;
use polyknap::{Problem, SolutionVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(entries) = parse_reduction_file(text) else { return };
    let out = serde_json::to_string(&entries).unwrap();
    let again = parse_reduction_file(&out).unwrap();
    assert_eq!(serde_json::to_string(&again).unwrap(), out);
    for e in &entries {
        // Validated traces must map any assignment of the right length.
        let x = SolutionVector::zeros(e.instance.len());
        let back = e.trace.pull_back(&x).unwrap();
        assert_eq!(back.len(), e.trace.source_len());
        assert_eq!(back.cardinality(), 0);
    }
});
