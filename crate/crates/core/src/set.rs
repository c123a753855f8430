//! Small sets of points, backed by a 128-bit mask.
//!
//! Every point in this crate is a natural number below [`MAX_POINTS`]. All
//! supports, U-cells and open sets at desk scale fit comfortably in that
//! range, and the mask representation makes the heavily repeated subset and
//! disjointness tests a single machine operation.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exclusive upper bound on point values.
pub const MAX_POINTS: u32 = 128;

/// A finite set of points, each below [`MAX_POINTS`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(u128);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(p: u32) -> Self {
        assert!(p < MAX_POINTS, "point {p} out of range");
        PointSet(1u128 << p)
    }

    /// Builds a set from arbitrary values, rejecting out-of-range points.
    pub fn try_from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Result<Self, u32> {
        let mut s = PointSet::EMPTY;
        for p in iter {
            if p >= MAX_POINTS {
                return Err(p);
            }
            s.insert(p);
        }
        Ok(s)
    }

    pub fn insert(&mut self, p: u32) {
        assert!(p < MAX_POINTS, "point {p} out of range");
        self.0 |= 1u128 << p;
    }

    pub fn remove(&mut self, p: u32) {
        if p < MAX_POINTS {
            self.0 &= !(1u128 << p);
        }
    }

    pub fn contains(&self, p: u32) -> bool {
        p < MAX_POINTS && self.0 & (1u128 << p) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn inter(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn diff(&self, other: &PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    /// Non-strict inclusion.
    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(&self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros())
        }
    }

    pub fn last(&self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(127 - self.0.leading_zeros())
        }
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        let bits = self.0;
        (0..MAX_POINTS).filter(move |p| bits & (1u128 << p) != 0)
    }

    /// Rank of `p` among the members (number of members strictly below).
    pub fn rank_of(&self, p: u32) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some((self.0 & ((1u128 << p) - 1)).count_ones() as usize)
    }

    /// Member with the given rank, if any.
    pub fn nth(&self, rank: usize) -> Option<u32> {
        self.iter().nth(rank)
    }

    /// Every element of `self` is strictly below every element of `other`.
    /// Vacuously true when either side is empty.
    pub fn all_below(&self, other: &PointSet) -> bool {
        match (self.last(), other.first()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl FromIterator<u32> for PointSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<u32>::deserialize(deserializer)?;
        PointSet::try_from_iter(values)
            .map_err(|p| D::Error::custom(format!("point {p} exceeds the capacity {MAX_POINTS}")))
    }
}
