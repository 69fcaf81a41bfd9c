//! Fuzz the certificate parser and verifier: parsing arbitrary bytes
//! must never panic, accepted certificates must re-serialize to the same
//! bytes, and verification must not panic on structurally valid input.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cert) = brauer::cert::Certificate::parse(s) {
            let canonical = cert.to_text();
            let back = brauer::cert::Certificate::parse(&canonical).expect("canonical certificate parses");
            assert_eq!(back.to_text(), canonical);
            let _ = brauer::oracle::verify_certificate(&cert);
        }
    }
});
