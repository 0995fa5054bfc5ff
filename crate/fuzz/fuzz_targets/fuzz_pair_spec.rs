//! Fuzzes the pair-specification JSON parser; accepted specs must also
//! survive the downstream concurrence evaluation without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

use qdcs::algebra::Deformation;
use qdcs::entangle::concurrence_pair;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = qdcs::records::parse_pair_spec(text) {
            let _ = concurrence_pair(&spec, Deformation::new(0.1).unwrap());
        }
    }
});
