#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::json::{parse_solution, solution_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_solution(text) {
        let out = solution_to_json(&x);
        assert_eq!(parse_solution(&out).unwrap(), x);
        assert_eq!(x.complement().complement(), x);
    }
});
