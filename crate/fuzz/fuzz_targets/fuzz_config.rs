//! Fuzzes the TOML run-configuration parser: arbitrary input must
//! produce Ok or a structured error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = qdcs::config::parse_config(text);
    }
});
