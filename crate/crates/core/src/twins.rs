//! Twin detection, the twin/smashing/exchange functions, canonical shape
//! keys, and extraction of amalgamable pairs from finite families.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::condition::Condition;
use crate::set::PointSet;

/// The unique order-preserving bijection between two equally sized ordered
/// sets, or `None` on size mismatch.
pub fn order_iso(a0: &PointSet, a1: &PointSet) -> Option<BTreeMap<u32, u32>> {
    if a0.len() != a1.len() {
        return None;
    }
    Some(a0.iter().zip(a1.iter()).collect())
}

/// Witness that two conditions are twins: the twin function sigma together
/// with the root `D = A0 ∩ A1` and the derived smashing/exchange functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwinCertificate {
    a0: PointSet,
    a1: PointSet,
    sigma: BTreeMap<u32, u32>,
    sigma_inv: BTreeMap<u32, u32>,
}

impl TwinCertificate {
    pub fn a0(&self) -> PointSet {
        self.a0
    }

    pub fn a1(&self) -> PointSet {
        self.a1
    }

    /// The root `D = A0 ∩ A1`.
    pub fn root(&self) -> PointSet {
        self.a0.inter(&self.a1)
    }

    pub fn sigma(&self, alpha: u32) -> u32 {
        self.sigma[&alpha]
    }

    pub fn sigma_inv(&self, beta: u32) -> u32 {
        self.sigma_inv[&beta]
    }

    pub fn sigma_map(&self) -> &BTreeMap<u32, u32> {
        &self.sigma
    }

    /// Image of a subset of `A0` under sigma.
    pub fn sigma_image(&self, s: &PointSet) -> PointSet {
        s.iter().map(|a| self.sigma(a)).collect()
    }

    /// The smashing function `sigma^{-1} ∪ id_{A0}`, projecting `A0 ∪ A1`
    /// onto `A0`.
    pub fn smash(&self, x: u32) -> u32 {
        if self.a0.contains(x) {
            x
        } else {
            self.sigma_inv(x)
        }
    }

    /// The exchange function `sigma ∪ sigma^{-1}`, an involution on
    /// `A0 ∪ A1` fixing the root pointwise.
    pub fn exchange(&self, x: u32) -> u32 {
        if self.a0.contains(x) {
            self.sigma(x)
        } else {
            self.sigma_inv(x)
        }
    }

    pub fn exchange_image(&self, s: &PointSet) -> PointSet {
        s.iter().map(|x| self.exchange(x)).collect()
    }

    pub fn smash_map(&self) -> BTreeMap<u32, u32> {
        self.a0
            .union(&self.a1)
            .iter()
            .map(|x| (x, self.smash(x)))
            .collect()
    }

    pub fn exchange_map(&self) -> BTreeMap<u32, u32> {
        self.a0
            .union(&self.a1)
            .iter()
            .map(|x| (x, self.exchange(x)))
            .collect()
    }

    /// Certificate for the pair in the opposite order.
    pub fn invert(&self) -> TwinCertificate {
        TwinCertificate {
            a0: self.a1,
            a1: self.a0,
            sigma: self.sigma_inv.clone(),
            sigma_inv: self.sigma.clone(),
        }
    }
}

/// Checks whether `p0` and `p1` are twins: equal depth and size, the order
/// isomorphism fixes the root pointwise (I1) and carries the `U`-table of
/// `p0` onto that of `p1` (I2).
pub fn is_twin_pair(p0: &Condition, p1: &Condition) -> Option<TwinCertificate> {
    if p0.depth() != p1.depth() {
        return None;
    }
    let sigma = order_iso(&p0.support(), &p1.support())?;
    let root = p0.support().inter(&p1.support());
    if root.iter().any(|d| sigma[&d] != d) {
        return None;
    }
    let cert = TwinCertificate {
        a0: p0.support(),
        a1: p1.support(),
        sigma_inv: sigma.iter().map(|(&a, &b)| (b, a)).collect(),
        sigma,
    };
    for (alpha, i) in p0.index_pairs() {
        if p1.cell(cert.sigma(alpha), i) != cert.sigma_image(&p0.cell(alpha, i)) {
            return None;
        }
    }
    Some(cert)
}

/// Shape of a condition up to order-preserving relabeling: the `U`-table
/// pulled back along the rank of each point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonKey {
    pub depth: usize,
    pub size: usize,
    cells: Vec<PointSet>,
}

/// Canonical shape key; two conditions have equal keys iff the unique order
/// isomorphism between their supports satisfies I2. Together with I1 on the
/// supports this characterises twins exactly.
pub fn canonicalize(p: &Condition) -> CanonKey {
    let support = p.support();
    let mut cells = Vec::with_capacity(support.len() * p.depth());
    for (alpha, i) in p.index_pairs() {
        cells.push(
            p.cell(alpha, i)
                .iter()
                .map(|x| support.rank_of(x).expect("cell member in support") as u32)
                .collect(),
        );
    }
    CanonKey {
        depth: p.depth(),
        size: support.len(),
        cells,
    }
}

/// A condition with a designated point of its support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedCondition {
    pub cond: Condition,
    pub mark: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum MarkError {
    #[error("mark {0} is not in the support")]
    NotInSupport(u32),
}

impl MarkedCondition {
    pub fn new(cond: Condition, mark: u32) -> Result<Self, MarkError> {
        if !cond.support().contains(mark) {
            return Err(MarkError::NotInSupport(mark));
        }
        Ok(MarkedCondition { cond, mark })
    }
}

/// Does the amalgamation hypothesis `A0∩A1 < A0∖A1 < A1∖A0` hold
/// (elementwise, vacuously on empty sets)?
pub fn support_order_holds(a0: &PointSet, a1: &PointSet) -> bool {
    let root = a0.inter(a1);
    let only0 = a0.diff(a1);
    let only1 = a1.diff(a0);
    root.all_below(&only0) && root.all_below(&only1) && only0.all_below(&only1)
}

/// Finds the lexicographically least index pair `(i, j)`, `i < j`, whose
/// members are twins with `sigma(mark_i) = mark_j`, `mark_i ∈ A0∖A1`, and
/// the amalgamation hypothesis holding. Candidates are bucketed by canonical
/// key first, so non-isomorphic members never reach the pairwise check.
pub fn find_amalgamable_pair(
    family: &[MarkedCondition],
) -> Option<((usize, usize), TwinCertificate)> {
    let mut buckets: HashMap<CanonKey, Vec<usize>> = HashMap::new();
    for (idx, m) in family.iter().enumerate() {
        buckets.entry(canonicalize(&m.cond)).or_default().push(idx);
    }
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for members in buckets.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                candidates.push((i.min(j), i.max(j)));
            }
        }
    }
    candidates.sort_unstable();
    for (i, j) in candidates {
        let (mi, mj) = (&family[i], &family[j]);
        let Some(cert) = is_twin_pair(&mi.cond, &mj.cond) else {
            continue;
        };
        let private0 = cert.a0().diff(&cert.a1());
        if private0.contains(mi.mark)
            && cert.sigma(mi.mark) == mj.mark
            && support_order_holds(&cert.a0(), &cert.a1())
        {
            return Some(((i, j), cert));
        }
    }
    None
}

/// Order-preserving relabeling of a condition along an explicit bijection of
/// its support. The image of a valid condition is valid.
pub fn relabel(p: &Condition, map: &BTreeMap<u32, u32>) -> Condition {
    let image = |s: &PointSet| -> PointSet { s.iter().map(|x| map[&x]).collect() };
    let support = image(&p.support());
    let mut cells = std::collections::BTreeMap::new();
    for ((alpha, i), value) in p.rows() {
        cells.insert((map[&alpha], i), image(&value));
    }
    Condition::new(support, p.depth(), cells).expect("relabeling preserves structure")
}
