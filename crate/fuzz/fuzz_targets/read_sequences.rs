#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_core::seqfile::{read_sequences, write_sequences};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seqs) = read_sequences(text) {
        let printed = write_sequences(&seqs);
        assert_eq!(read_sequences(&printed).unwrap(), seqs);
    }
});
