#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::num::parse_decimal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(n) = parse_decimal(text) {
        assert_eq!(n.to_string(), text);
    }
});
