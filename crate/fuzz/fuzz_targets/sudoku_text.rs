#![no_main]

use libfuzzer_sys::fuzz_target;
use spermat::matrix::{compose_sudoku, decompose_sudoku, SudokuMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = SudokuMatrix::from_text(text) {
        assert_eq!(SudokuMatrix::from_text(&m.to_text()).unwrap(), m);
        assert_eq!(compose_sudoku(&decompose_sudoku(&m)).unwrap(), m);
    }
});
