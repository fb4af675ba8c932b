#![no_main]

use hodgeforge::io::{parse_complex, write_complex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(k) = parse_complex(data) {
        let text = write_complex(&k);
        let back = parse_complex(text.as_bytes()).expect("writer output parses");
        assert_eq!(back, k);
    }
});
