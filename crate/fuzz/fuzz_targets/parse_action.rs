#![no_main]

use std::sync::OnceLock;

use hodgeforge::complex::{icosahedron, SimplicialComplex};
use hodgeforge::io::{parse_action, parse_generators};
use libfuzzer_sys::fuzz_target;

static ICOSAHEDRON: OnceLock<SimplicialComplex> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let k = ICOSAHEDRON.get_or_init(icosahedron);
    let _ = parse_generators(data);
    if let Ok(g) = parse_action(data, k) {
        let _ = hodgeforge::complex::quotient(k, &g);
    }
});
