#![no_main]

use libfuzzer_sys::fuzz_target;
use lorenz_core::dataio::{parse_grouped_csv, write_grouped_csv};

// Anything the parser accepts must survive a write and re-read unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(parsed) = parse_grouped_csv(data) else {
        return;
    };
    let mut buf = Vec::new();
    write_grouped_csv(&parsed.records, &mut buf).expect("write accepted records");
    let again = parse_grouped_csv(buf.as_slice()).expect("re-parse written records");
    assert_eq!(again.records, parsed.records);
});
