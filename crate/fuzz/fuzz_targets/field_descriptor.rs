//! Fuzz the field descriptor parser: must never panic, and accepted
//! descriptors must round-trip through the canonical rendering.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(field) = brauer::text::parse_field(s) {
            let canonical = field.descriptor();
            let back = brauer::text::parse_field(&canonical).expect("canonical descriptor parses");
            assert_eq!(back.descriptor(), canonical);
        }
    }
});
