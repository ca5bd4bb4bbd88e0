#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(n) = collatz_core::parse_natural(s) {
            // Canonical form must reparse to the same value.
            let canonical = n.to_string();
            assert_eq!(collatz_core::parse_natural(&canonical).unwrap(), n);
        }
    }
});
