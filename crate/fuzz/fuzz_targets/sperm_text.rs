#![no_main]

use libfuzzer_sys::fuzz_target;
use spermat::matrix::{pi_to_sigma, sigma_to_pi, SPermMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = SPermMatrix::from_text(text) {
        assert_eq!(SPermMatrix::from_text(&m.to_text()).unwrap(), m);
        assert_eq!(pi_to_sigma(&sigma_to_pi(&m)), m);
    }
});
