#![no_main]

use libfuzzer_sys::fuzz_target;
use spermat::matrix::{pi_to_sigma, sigma_to_pi, PiMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = PiMatrix::from_json(text) {
        assert_eq!(PiMatrix::from_json(&p.to_json()).unwrap(), p);
        assert_eq!(sigma_to_pi(&pi_to_sigma(&p)), p);
    }
});
