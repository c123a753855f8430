//! Conditions `<A, n, U>` and the extension order on them.
//!
//! A condition is a finite support `A`, a depth `n`, and a total table
//! `U : A x n -> P(A)` subject to:
//!
//! * (P2) `alpha ∈ U(alpha, i)` and `U(alpha, i) ⊆ U(alpha, i-1)` for `0 < i < n`;
//! * (P3) if `beta ∈ U(alpha, i)` and `U(alpha, i) ⊆ U(beta, 0)` then `beta <= alpha`.
//!
//! Inclusion is read non-strictly throughout; [`Inclusion::Strict`] is
//! available to measure how much the strict reading differs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::set::PointSet;

/// Depth index `i < n`.
pub type Level = usize;

/// How to read the inclusion symbol in (P2)/(P3) and (d2).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Inclusion {
    #[default]
    NonStrict,
    Strict,
}

impl Inclusion {
    pub fn holds(self, a: &PointSet, b: &PointSet) -> bool {
        match self {
            Inclusion::NonStrict => a.is_subset(b),
            Inclusion::Strict => a.is_subset(b) && a != b,
        }
    }
}

/// Structural malformation: the candidate is not even a table over `A x n`.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum Malformed {
    #[error("U is missing the cell ({alpha},{level})")]
    MissingCell { alpha: u32, level: Level },
    #[error("U has a cell ({alpha},{level}) outside A x n")]
    UnexpectedCell { alpha: u32, level: Level },
    #[error("U({alpha},{level}) contains {point}, which is not in A")]
    ValueOutsideSupport { alpha: u32, level: Level, point: u32 },
}

/// A violation of (P2) or (P3), with its witness.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Error)]
pub enum Violation {
    #[error("(P2) fails: {alpha} not in U({alpha},{level})")]
    P2NotMember { alpha: u32, level: Level },
    #[error("(P2) fails: U({alpha},{level}) not included in U({alpha},{prev})", prev = level - 1)]
    P2NotNested { alpha: u32, level: Level },
    #[error("(P3) fails at (alpha={alpha}, beta={beta}, i={level})")]
    P3 { alpha: u32, beta: u32, level: Level },
}

/// Why `q <= p` fails, naming the first failing clause and its witness.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum ExtensionFailure {
    #[error("(a) fails: support of p not included in support of q")]
    Support,
    #[error("(b) fails: depth decreased from {from} to {to}")]
    Depth { from: usize, to: usize },
    #[error("(c) fails at ({alpha},{level}): U_p differs from U_q restricted to A_p")]
    Restriction { alpha: u32, level: Level },
    #[error("(d1) fails: cells ({0},{1}) and ({2},{3}) were disjoint in p", a.0, a.1, b.0, b.1)]
    DisjointnessLost { a: (u32, Level), b: (u32, Level) },
    #[error("(d2) fails: U_p({0},{1}) included in U_p({2},{3}) but not in q", a.0, a.1, b.0, b.1)]
    InclusionLost { a: (u32, Level), b: (u32, Level) },
}

/// A condition `<A, n, U>`. Construction via [`Condition::new`] guarantees
/// (P1); (P2)/(P3) are checked by [`Condition::violations`].
#[derive(Clone, PartialEq, Eq)]
pub struct Condition {
    support: PointSet,
    depth: usize,
    cells: BTreeMap<(u32, Level), PointSet>,
}

impl Condition {
    /// The empty condition `<∅, 0, ∅>`, the maximum of the poset.
    pub fn empty() -> Self {
        Condition {
            support: PointSet::EMPTY,
            depth: 0,
            cells: BTreeMap::new(),
        }
    }

    /// Builds a condition from raw parts, rejecting structural malformation.
    pub fn new(
        support: PointSet,
        depth: usize,
        cells: BTreeMap<(u32, Level), PointSet>,
    ) -> Result<Self, Malformed> {
        for (&(alpha, level), value) in &cells {
            if !support.contains(alpha) || level >= depth {
                return Err(Malformed::UnexpectedCell { alpha, level });
            }
            if let Some(point) = value.diff(&support).first() {
                return Err(Malformed::ValueOutsideSupport {
                    alpha,
                    level,
                    point,
                });
            }
        }
        for alpha in support.iter() {
            for level in 0..depth {
                if !cells.contains_key(&(alpha, level)) {
                    return Err(Malformed::MissingCell { alpha, level });
                }
            }
        }
        Ok(Condition {
            support,
            depth,
            cells,
        })
    }

    /// Condition with `U(alpha, i) = {alpha}` everywhere.
    pub fn with_singleton_cells(support: PointSet, depth: usize) -> Self {
        let mut cells = BTreeMap::new();
        for alpha in support.iter() {
            for level in 0..depth {
                cells.insert((alpha, level), PointSet::singleton(alpha));
            }
        }
        Condition {
            support,
            depth,
            cells,
        }
    }

    pub fn support(&self) -> PointSet {
        self.support
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The cell `U(alpha, i)`. Panics outside the domain.
    pub fn cell(&self, alpha: u32, level: Level) -> PointSet {
        self.cells[&(alpha, level)]
    }

    pub fn try_cell(&self, alpha: u32, level: Level) -> Option<PointSet> {
        self.cells.get(&(alpha, level)).copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = ((u32, Level), PointSet)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }

    /// Index pairs `(alpha, i)` in lexicographic order.
    pub fn index_pairs(&self) -> impl Iterator<Item = (u32, Level)> + '_ {
        let depth = self.depth;
        self.support
            .iter()
            .flat_map(move |alpha| (0..depth).map(move |i| (alpha, i)))
    }

    /// Overwrites one cell. Intended for mutated-table experiments; the result
    /// may violate (P2)/(P3) or stop extending its parents, which is the point.
    pub fn set_cell(&mut self, alpha: u32, level: Level, value: PointSet) {
        assert!(
            self.cells.contains_key(&(alpha, level)),
            "cell ({alpha},{level}) outside the domain"
        );
        self.cells.insert((alpha, level), value.inter(&self.support));
    }

    /// All (P2)/(P3) violations, lexicographically least witness first.
    pub fn violations(&self) -> Vec<Violation> {
        self.violations_with(Inclusion::NonStrict)
    }

    pub fn violations_with(&self, mode: Inclusion) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.depth == 0 {
            return out;
        }
        for alpha in self.support.iter() {
            for level in 0..self.depth {
                let cell = self.cell(alpha, level);
                if !cell.contains(alpha) {
                    out.push(Violation::P2NotMember { alpha, level });
                }
                if level > 0 && !mode.holds(&cell, &self.cell(alpha, level - 1)) {
                    out.push(Violation::P2NotNested { alpha, level });
                }
            }
        }
        for alpha in self.support.iter() {
            for beta in self.support.iter() {
                if beta <= alpha {
                    continue;
                }
                let base = self.cell(beta, 0);
                for level in 0..self.depth {
                    let cell = self.cell(alpha, level);
                    if cell.contains(beta) && mode.holds(&cell, &base) {
                        out.push(Violation::P3 { alpha, beta, level });
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn first_violation(&self) -> Option<Violation> {
        self.violations().into_iter().next()
    }

    pub fn is_valid(&self) -> bool {
        self.first_violation().is_none()
    }

    /// Adds a fresh point with singleton rows at every level.
    pub fn add_point(&self, alpha: u32) -> Result<Condition, AddPointError> {
        if self.support.contains(alpha) {
            return Err(AddPointError::Duplicate(alpha));
        }
        if alpha >= crate::set::MAX_POINTS {
            return Err(AddPointError::OutOfRange(alpha));
        }
        let mut next = self.clone();
        next.support.insert(alpha);
        for level in 0..self.depth {
            next.cells.insert((alpha, level), PointSet::singleton(alpha));
        }
        Ok(next)
    }

    /// Adds one level, with `U(alpha, n) = {alpha}` for every point.
    pub fn deepen(&self) -> Condition {
        let mut next = self.clone();
        for alpha in self.support.iter() {
            next.cells
                .insert((alpha, self.depth), PointSet::singleton(alpha));
        }
        next.depth += 1;
        next
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum AddPointError {
    #[error("point {0} is already in the support")]
    Duplicate(u32),
    #[error("point {0} exceeds the capacity")]
    OutOfRange(u32),
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<A={:?}, n={}, U={{", self.support, self.depth)?;
        let mut first = true;
        for ((a, i), v) in self.rows() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "({a},{i})->{v:?}")?;
        }
        write!(f, "}}>")
    }
}

/// The clause check for `q <= p`, assuming both are structurally sound.
/// Returns the first failing clause, scanning (a), (b), (c), then (d1)/(d2)
/// over lexicographically ordered pairs.
pub fn extension_failure(q: &Condition, p: &Condition) -> Option<ExtensionFailure> {
    if !p.support().is_subset(&q.support()) {
        return Some(ExtensionFailure::Support);
    }
    if q.depth() < p.depth() {
        return Some(ExtensionFailure::Depth {
            from: p.depth(),
            to: q.depth(),
        });
    }
    let a_p = p.support();
    for (alpha, level) in p.index_pairs() {
        if p.cell(alpha, level) != q.cell(alpha, level).inter(&a_p) {
            return Some(ExtensionFailure::Restriction { alpha, level });
        }
    }
    let pairs: Vec<(u32, Level)> = p.index_pairs().collect();
    for &a in &pairs {
        for &b in &pairs {
            let (pa, pb) = (p.cell(a.0, a.1), p.cell(b.0, b.1));
            let (qa, qb) = (q.cell(a.0, a.1), q.cell(b.0, b.1));
            if pa.is_disjoint(&pb) && !qa.is_disjoint(&qb) {
                return Some(ExtensionFailure::DisjointnessLost { a, b });
            }
            if pa.is_subset(&pb) && !qa.is_subset(&qb) {
                return Some(ExtensionFailure::InclusionLost { a, b });
            }
        }
    }
    None
}

/// Errors from [`check_extension`]: invalid inputs are rejected before the
/// clause check runs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum OrderError {
    #[error("lower condition invalid: {0}")]
    InvalidLower(Violation),
    #[error("upper condition invalid: {0}")]
    InvalidUpper(Violation),
}

/// Decides `q <= p`, first rejecting invalid inputs.
pub fn check_extension(
    q: &Condition,
    p: &Condition,
) -> Result<Result<(), ExtensionFailure>, OrderError> {
    if let Some(v) = q.first_violation() {
        return Err(OrderError::InvalidLower(v));
    }
    if let Some(v) = p.first_violation() {
        return Err(OrderError::InvalidUpper(v));
    }
    Ok(match extension_failure(q, p) {
        None => Ok(()),
        Some(f) => Err(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn fix_t_is_valid() {
        assert!(fix_t().violations().is_empty());
    }

    #[test]
    fn fix_bad_violates_p3() {
        let v = fix_bad().violations();
        assert_eq!(
            v,
            vec![Violation::P3 {
                alpha: 0,
                beta: 1,
                level: 0
            }]
        );
    }

    #[test]
    fn fix_bad_valid_under_strict_reading() {
        // {0,1} is not strictly included in {0,1}, so the strict reading
        // accepts FIX_BAD; the non-strict default does not.
        assert!(fix_bad().violations_with(Inclusion::Strict).is_empty());
    }

    #[test]
    fn empty_cell_violates_p2() {
        let mut t = fix_t();
        t.set_cell(0, 0, PointSet::EMPTY);
        assert_eq!(
            t.first_violation(),
            Some(Violation::P2NotMember { alpha: 0, level: 0 })
        );
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let support: PointSet = [0, 1].into_iter().collect();
        let mut cells = BTreeMap::new();
        cells.insert((0, 0), PointSet::singleton(0));
        assert_eq!(
            Condition::new(support, 1, cells.clone()),
            Err(Malformed::MissingCell { alpha: 1, level: 0 })
        );
        cells.insert((1, 0), [1, 7].into_iter().collect());
        assert_eq!(
            Condition::new(support, 1, cells),
            Err(Malformed::ValueOutsideSupport {
                alpha: 1,
                level: 0,
                point: 7
            })
        );
    }

    #[test]
    fn extension_examples() {
        assert_eq!(check_extension(&fix_q(), &fix_t()), Ok(Ok(())));
        assert_eq!(check_extension(&fix_t(), &fix_t()), Ok(Ok(())));
    }

    #[test]
    fn d1_failure_with_witness() {
        // Extend FIX_Q by point 2 present in both previously disjoint cells.
        let mut q = fix_q().add_point(2).unwrap();
        q.set_cell(0, 0, [0, 2].into_iter().collect());
        q.set_cell(1, 0, [1, 2].into_iter().collect());
        assert!(q.is_valid());
        assert_eq!(
            check_extension(&q, &fix_q()),
            Ok(Err(ExtensionFailure::DisjointnessLost {
                a: (0, 0),
                b: (1, 0)
            }))
        );
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(
            check_extension(&fix_bad(), &fix_t()),
            Err(OrderError::InvalidLower(_))
        ));
    }

    #[test]
    fn add_point_examples() {
        let q = fix_t().add_point(5).unwrap();
        assert_eq!(q.support().to_vec(), vec![0, 5]);
        assert_eq!(q.cell(5, 0), PointSet::singleton(5));
        assert!(q.is_valid());
        assert_eq!(extension_failure(&q, &fix_t()), None);

        assert_eq!(fix_t().add_point(0), Err(AddPointError::Duplicate(0)));

        let e = Condition::empty().add_point(3).unwrap();
        assert_eq!(e.support().to_vec(), vec![3]);
        assert_eq!(e.depth(), 0);
    }

    #[test]
    fn deepen_examples() {
        let q = fix_t().deepen();
        assert_eq!(q.depth(), 2);
        assert_eq!(q.cell(0, 1), PointSet::singleton(0));
        assert!(q.is_valid());
        assert_eq!(extension_failure(&q, &fix_t()), None);

        assert_eq!(Condition::empty().deepen().depth(), 1);

        let q = fix_q().deepen();
        assert_eq!(q.cell(1, 1), PointSet::singleton(1));
        assert_eq!(check_extension(&q, &fix_q()), Ok(Ok(())));
    }
}
