//! Replays the checked-in fuzz corpus seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use spermat::classes::ClassTable;
use spermat::matrix::{
    compose_sudoku, decompose_sudoku, pi_to_sigma, sigma_to_pi, PiMatrix, SPermMatrix, SudokuMatrix,
};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn sperm_text_seeds() {
    for (name, text) in seeds("sperm_text") {
        let parsed = SPermMatrix::from_text(&text);
        assert_eq!(
            parsed.is_ok(),
            name.contains("valid") || name.contains("n1"),
            "{name}"
        );
        if let Ok(m) = parsed {
            assert_eq!(SPermMatrix::from_text(&m.to_text()).unwrap(), m);
            assert_eq!(pi_to_sigma(&sigma_to_pi(&m)), m);
        }
    }
}

#[test]
fn pi_json_seeds() {
    for (name, text) in seeds("pi_json") {
        let parsed = PiMatrix::from_json(&text);
        assert_eq!(parsed.is_ok(), !name.contains("violation"), "{name}");
        if let Ok(p) = parsed {
            assert_eq!(PiMatrix::from_json(&p.to_json()).unwrap(), p);
            assert_eq!(sigma_to_pi(&pi_to_sigma(&p)), p);
        }
    }
}

#[test]
fn sudoku_text_seeds() {
    for (name, text) in seeds("sudoku_text") {
        let parsed = SudokuMatrix::from_text(&text);
        assert_eq!(parsed.is_ok(), !name.contains("violation"), "{name}");
        if let Ok(m) = parsed {
            assert_eq!(compose_sudoku(&decompose_sudoku(&m)).unwrap(), m);
        }
    }
}

#[test]
fn class_table_json_seeds() {
    for (name, text) in seeds("class_table_json") {
        let t = ClassTable::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            ClassTable::from_json(&t.to_json()).unwrap().classes,
            t.classes
        );
    }
}
