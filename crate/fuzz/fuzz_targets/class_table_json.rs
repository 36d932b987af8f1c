#![no_main]

use libfuzzer_sys::fuzz_target;
use spermat::classes::ClassTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = ClassTable::from_json(text) {
        assert_eq!(
            ClassTable::from_json(&t.to_json()).unwrap().classes,
            t.classes
        );
    }
});
