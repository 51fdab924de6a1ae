#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_cli::tsv::read_patterns;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = read_patterns(text);
    }
});
