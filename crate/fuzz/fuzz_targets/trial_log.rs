#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_core::abstraction::{abstract_trial, AbstractionConfig, TrialLog};
use teamseq_core::ClassLabel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(log) = TrialLog::parse_jsonl(text) {
        let _ = abstract_trial(&log, "fuzz", ClassLabel::Rea, &AbstractionConfig::default());
    }
});
