#![no_main]

use hodgeforge::catalog::{builtin_catalog, check_record};
use hodgeforge::io::{parse_record, parse_records};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_record(data);
    if let Ok(records) = parse_records(data) {
        let c = builtin_catalog(2);
        for r in &records {
            let _ = check_record(&c, r);
        }
    }
});
