//! Fuzzes the state-record JSON parser; accepted records must also
//! rebuild into a vector and spec without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(record) = qdcs::records::parse_state_record(text) {
            let _ = record.to_vector();
            let _ = record.to_spec();
        }
    }
});
