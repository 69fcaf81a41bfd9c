//! Fuzz the job-file parser: must never panic, and accepted jobs must
//! round-trip through the canonical rendering.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(job) = brauer::job::JobSpec::parse(s) {
            let canonical = job.render();
            let back = brauer::job::JobSpec::parse(&canonical).expect("canonical job parses");
            assert_eq!(back, job);
        }
    }
});
