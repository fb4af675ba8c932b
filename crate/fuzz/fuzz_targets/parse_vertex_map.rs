#![no_main]

use hodgeforge::io::{parse_vertex_map, write_vertex_map};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = parse_vertex_map(data) {
        let back = parse_vertex_map(write_vertex_map(&m).as_bytes()).expect("writer output parses");
        assert_eq!(back, m);
    }
});
