#![no_main]

use hodgeforge::catalog::{enumerate_extensions, EnumerationOptions};
use hodgeforge::io::parse_catalog;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = parse_catalog(data) {
        if c.entries().len() > 24 {
            return;
        }
        let opts = EnumerationOptions {
            max_dim: 8,
            max_components: 2,
            include_reference: false,
        };
        let _ = enumerate_extensions(&c, &opts);
    }
});
