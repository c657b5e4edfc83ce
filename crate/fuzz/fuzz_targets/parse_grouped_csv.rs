#![no_main]

use libfuzzer_sys::fuzz_target;
use lorenz_core::dataio::parse_grouped_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(parsed) = parse_grouped_csv(data) {
        for rec in &parsed.records {
            assert!((0.0..1.0).contains(&rec.gini));
            for m in [0.05, 0.10] {
                let _ = rec.tail_ratio(m);
            }
        }
    }
});
