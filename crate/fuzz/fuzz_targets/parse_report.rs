#![no_main]

use gw_core::report::parse_report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = parse_report(text) {
            assert_eq!(parse_report(&report.to_json()).unwrap(), report);
        }
    }
});
