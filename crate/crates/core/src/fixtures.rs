//! Tiny hand-built conditions and spaces used across tests and examples.

use std::collections::BTreeMap;

use crate::condition::Condition;
use crate::set::PointSet;

fn cond(points: &[u32], depth: usize, table: &[((u32, usize), &[u32])]) -> Condition {
    let support: PointSet = points.iter().copied().collect();
    let mut cells = BTreeMap::new();
    for &((alpha, level), value) in table {
        cells.insert((alpha, level), value.iter().copied().collect());
    }
    Condition::new(support, depth, cells).expect("fixture is structurally sound")
}

/// `t = <{0}, 1, U(0,0)={0}>`.
pub fn fix_t() -> Condition {
    cond(&[0], 1, &[((0, 0), &[0])])
}

/// First half of the twin pair: `<{0}, 2, U(0,j)={0}>`.
pub fn fix_pair_p0() -> Condition {
    cond(&[0], 2, &[((0, 0), &[0]), ((0, 1), &[0])])
}

/// Second half of the twin pair: `<{1}, 2, U(1,j)={1}>`.
pub fn fix_pair_p1() -> Condition {
    cond(&[1], 2, &[((1, 0), &[1]), ((1, 1), &[1])])
}

/// `<{0,1}, 1, U(0,0)=U(1,0)={0,1}>`; fails (P3) with witness (0, 1, 0).
pub fn fix_bad() -> Condition {
    cond(&[0, 1], 1, &[((0, 0), &[0, 1]), ((1, 0), &[0, 1])])
}

/// `<{0,1}, 1, U(0,0)={0}, U(1,0)={1}>`.
pub fn fix_q() -> Condition {
    cond(&[0, 1], 1, &[((0, 0), &[0]), ((1, 0), &[1])])
}

/// Rooted twins: `p0 = <{0,1}, 2, U(0,.)={0}, U(1,.)={0,1}>`.
pub fn fix_root_p0() -> Condition {
    cond(
        &[0, 1],
        2,
        &[
            ((0, 0), &[0]),
            ((0, 1), &[0]),
            ((1, 0), &[0, 1]),
            ((1, 1), &[0, 1]),
        ],
    )
}

/// Rooted twins: `p1 = <{0,2}, 2, U(0,.)={0}, U(2,.)={0,2}>`.
pub fn fix_root_p1() -> Condition {
    cond(
        &[0, 2],
        2,
        &[
            ((0, 0), &[0]),
            ((0, 1), &[0]),
            ((2, 0), &[0, 2]),
            ((2, 1), &[0, 2]),
        ],
    )
}

/// The expected amalgam of the twin pair with `xi0=0, k=0, m=1`.
pub fn fix_amalg() -> Condition {
    let all: &[u32] = &[0, 1, 2, 3, 4, 5];
    let side1: &[u32] = &[0, 1, 4, 5];
    cond(
        all,
        2,
        &[
            ((0, 0), all),
            ((0, 1), all),
            ((1, 0), side1),
            ((1, 1), side1),
            ((2, 0), &[2]),
            ((2, 1), &[2]),
            ((3, 0), &[3]),
            ((3, 1), &[3]),
            ((4, 0), &[4]),
            ((4, 1), &[4]),
            ((5, 0), &[5]),
            ((5, 1), &[5]),
        ],
    )
}

/// Sierpinski space input: points {0,1}, generating family {{0},{0,1}}.
pub fn sierpinski_generators() -> (PointSet, Vec<PointSet>) {
    let points: PointSet = [0, 1].into_iter().collect();
    (
        points,
        vec![PointSet::singleton(0), [0, 1].into_iter().collect()],
    )
}
