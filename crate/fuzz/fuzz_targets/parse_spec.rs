#![no_main]

use gw_core::geometry::{parse_spec, validate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_spec(text) {
            let _ = validate(&spec);
            let _ = spec.to_text();
        }
    }
});
