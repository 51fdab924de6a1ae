#![no_main]

use libfuzzer_sys::fuzz_target;
use teamseq_core::parse_atom_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(atoms) = parse_atom_list(text) {
        // Printing then reparsing is the identity.
        let printed = teamseq_core::term::join_atoms(&atoms);
        assert_eq!(parse_atom_list(&printed).unwrap(), atoms);
    }
});
