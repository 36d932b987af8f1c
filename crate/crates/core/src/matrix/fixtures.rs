//! Three worked Π₃ matrices. The first two are disjoint; the third agrees
//! with the first in four positions and with the second in two.

use crate::matrix::pi::{validate_pi, PiMatrix};

fn build(rows: [[(usize, usize); 3]; 3]) -> PiMatrix {
    let entries: Vec<Vec<_>> = rows.iter().map(|r| r.to_vec()).collect();
    validate_pi(3, &entries).expect("fixture is a valid Pi matrix")
}

pub fn pi_prime() -> PiMatrix {
    build([
        [(1, 2), (3, 1), (2, 3)],
        [(2, 1), (3, 3), (1, 2)],
        [(3, 3), (1, 2), (2, 1)],
    ])
}

pub fn pi_second() -> PiMatrix {
    build([
        [(1, 3), (3, 2), (2, 1)],
        [(3, 1), (1, 1), (2, 2)],
        [(3, 2), (1, 3), (2, 3)],
    ])
}

pub fn pi_third() -> PiMatrix {
    build([
        [(1, 2), (3, 3), (2, 1)],
        [(2, 1), (3, 2), (1, 2)],
        [(3, 3), (1, 1), (2, 3)],
    ])
}
