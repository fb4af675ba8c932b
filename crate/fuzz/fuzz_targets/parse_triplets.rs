#![no_main]

use hodgeforge::chain::SparseIntMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((k, m)) = SparseIntMatrix::parse_triplets(text) {
        let (k2, back) = SparseIntMatrix::parse_triplets(&m.write_triplets(k)).expect("writer output parses");
        assert_eq!((k2, back), (k, m));
    }
});
