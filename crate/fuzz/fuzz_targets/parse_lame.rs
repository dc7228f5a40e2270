//! The parser must return cleanly — never panic, never overflow — on
//! arbitrary input.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = liedg::harness::parse::parse_lame(s);
    }
});
