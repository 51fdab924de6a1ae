#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_core::miner::{canonical_form, is_equivalent};
use teamseq_core::Pattern;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = Pattern::parse(text) else { return };
    if p.len() > 6 {
        return;
    }
    let again = Pattern::parse(&p.to_string()).expect("printed pattern reparses");
    assert!(is_equivalent(&p, &again));
    let key = canonical_form(&p);
    let q = Pattern::parse(&key).expect("canonical key reparses");
    assert_eq!(canonical_form(&q), key);
});
