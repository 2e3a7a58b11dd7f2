#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<Rational>() {
        let again: Rational = r.to_string().parse().unwrap();
        assert_eq!(again, r);
    }
});
