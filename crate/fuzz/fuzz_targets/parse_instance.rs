#![no_main]
use libfuzzer_sys::fuzz_target;

use polyknap::json::{instance_to_json, parse_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(instance) = parse_instance(text) {
        let out = instance_to_json(&instance);
        let again = parse_instance(&out).unwrap();
        assert_eq!(again, instance);
        assert_eq!(instance_to_json(&again), out);
        let _ = instance.canonicalize();
    }
});
