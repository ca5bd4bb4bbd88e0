#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = collatz_core::emit::parse_histogram_csv(data);
});
