#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_sim::case::{format_cases, parse_cases};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cases) = parse_cases(text) {
        let again = parse_cases(&format_cases(&cases)).expect("formatted cases reparse");
        assert_eq!(again.len(), cases.len());
    }
});
