//! Fuzz the system/form parser: must never panic, and accepted systems
//! must round-trip through the canonical rendering.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((field, ft)) = brauer::text::parse_system(s) {
            let canonical = brauer::text::render_system(&field, &ft);
            let (field2, ft2) = brauer::text::parse_system(&canonical).expect("canonical system parses");
            assert_eq!(field2.descriptor(), field.descriptor());
            assert_eq!(ft2, ft);
        }
    }
});
