#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // The checkpoint parser must reject arbitrary input gracefully; on
    // accept, re-serializing and re-parsing must be lossless.
    if let Ok((header, records)) = collatz_core::checkpoint::parse(data) {
        let mut buf = Vec::new();
        collatz_core::checkpoint::write_header(&mut buf, &header).unwrap();
        for rec in &records {
            collatz_core::checkpoint::append_chunk(&mut buf, rec).unwrap();
        }
        let (header2, records2) = collatz_core::checkpoint::parse(&buf[..]).unwrap();
        assert_eq!(header, header2);
        assert_eq!(records, records2);
    }
});
