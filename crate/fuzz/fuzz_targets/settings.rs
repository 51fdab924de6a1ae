#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_cli::settings::{Settings, KEYS};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = Settings::parse(text) {
        for k in KEYS {
            let _ = s.pick::<u64>(None, k, 0);
        }
    }
});
