//! Finite topological spaces, bases, neighborhood bases, and the exhaustive
//! search for irreducible decompositions.
//!
//! A base `U` with owner families `U_x` is irreducible when every `U_x` is a
//! neighborhood base of `x` and dropping any single point's family destroys
//! base-ness. Every finite T0 space admits one (take the minimal
//! neighborhoods), which is exactly why the phenomenon under study only
//! appears at infinite scale.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::set::PointSet;

/// Hard cap on the number of points accepted by the decomposition searches.
pub const MAX_SEARCH_POINTS: usize = 6;
/// Hard cap on candidate base size in [`find_irreducible_base`].
pub const MAX_BASE_SIZE: usize = 14;
/// Default node budget for the backtracking searches.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// A finite point set together with its family of open sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSpace {
    points: PointSet,
    opens: BTreeSet<PointSet>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TopologyError {
    #[error("generator #{0} is not a subset of the point set")]
    GeneratorNotSubset(usize),
    #[error("space has {0} points, more than the supported {max}", max = 16)]
    TooManyPoints(usize),
}

/// The topology generated by a family: all unions of finite intersections of
/// generators, plus the empty set and the whole space.
pub fn generate_topology(
    points: PointSet,
    generators: &[PointSet],
) -> Result<FiniteSpace, TopologyError> {
    if points.len() > 16 {
        return Err(TopologyError::TooManyPoints(points.len()));
    }
    for (i, g) in generators.iter().enumerate() {
        if !g.is_subset(&points) {
            return Err(TopologyError::GeneratorNotSubset(i));
        }
    }
    let mut opens: BTreeSet<PointSet> = BTreeSet::new();
    opens.insert(PointSet::EMPTY);
    opens.insert(points);
    opens.extend(generators.iter().copied());
    // Close under pairwise intersection, then pairwise union, to a fixpoint.
    for op in [PointSet::inter as fn(&PointSet, &PointSet) -> PointSet, PointSet::union] {
        loop {
            let mut fresh = Vec::new();
            for a in &opens {
                for b in &opens {
                    let c = op(a, b);
                    if !opens.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            opens.extend(fresh);
        }
    }
    Ok(FiniteSpace { points, opens })
}

impl FiniteSpace {
    /// Builds a space from an explicit family, verifying the closure axioms.
    pub fn from_opens(points: PointSet, opens: BTreeSet<PointSet>) -> Option<FiniteSpace> {
        if !opens.contains(&PointSet::EMPTY) || !opens.contains(&points) {
            return None;
        }
        for a in &opens {
            if !a.is_subset(&points) {
                return None;
            }
            for b in &opens {
                if !opens.contains(&a.union(b)) || !opens.contains(&a.inter(b)) {
                    return None;
                }
            }
        }
        Some(FiniteSpace { points, opens })
    }

    pub fn points(&self) -> PointSet {
        self.points
    }

    pub fn opens(&self) -> &BTreeSet<PointSet> {
        &self.opens
    }

    /// Smallest open set containing each point: the intersection of all its
    /// open neighborhoods, itself open in a finite space.
    pub fn minimal_neighborhoods(&self) -> BTreeMap<u32, PointSet> {
        self.points
            .iter()
            .map(|x| {
                let min = self
                    .opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(self.points, |acc, o| acc.inter(o));
                (x, min)
            })
            .collect()
    }

    /// Distinct points have distinct minimal neighborhoods.
    pub fn is_t0(&self) -> bool {
        let mins = self.minimal_neighborhoods();
        let distinct: BTreeSet<_> = mins.values().collect();
        distinct.len() == mins.len()
    }

    /// Is `family` a base: for every open `O` and `x ∈ O`, some member `V`
    /// has `x ∈ V ⊆ O`?
    pub fn is_base<'a, I: IntoIterator<Item = &'a PointSet> + Copy>(&self, family: I) -> bool {
        self.opens.iter().all(|o| {
            o.iter().all(|x| {
                family
                    .into_iter()
                    .any(|v| v.contains(x) && v.is_subset(o))
            })
        })
    }

    /// Is `family` a neighborhood base of `x`: every member contains `x` and
    /// every open neighborhood of `x` contains a member?
    pub fn is_neighborhood_base<'a, I: IntoIterator<Item = &'a PointSet> + Copy>(
        &self,
        x: u32,
        family: I,
    ) -> bool {
        if family.into_iter().any(|v| !v.contains(x)) {
            return false;
        }
        self.opens
            .iter()
            .filter(|o| o.contains(x))
            .all(|o| family.into_iter().any(|v| v.is_subset(o)))
    }
}

/// A candidate irreducibility witness: a base plus per-point owner families.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub base: BTreeSet<PointSet>,
    pub owners: BTreeMap<u32, BTreeSet<PointSet>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DecompositionFailure {
    #[error("owner family of {x} has member {member:?} outside the base")]
    OwnerOutsideBase { x: u32, member: PointSet },
    #[error("member {member:?} of the owner family of {x} does not contain {x}")]
    MemberMissesOwner { x: u32, member: PointSet },
    #[error("base member {member:?} belongs to no owner family")]
    UnownedMember { member: PointSet },
    #[error("the family is not a base: no member realizes {x} inside {open:?}")]
    NotABase { x: u32, open: PointSet },
    #[error("owner family of {x} is not a neighborhood base of {x}")]
    NotNeighborhoodBase { x: u32 },
    #[error("dropping the owner family of {x} still leaves a base")]
    StillBaseWithout { x: u32 },
}

/// Checks the decomposition against the definition of irreducibility,
/// reporting the first failing clause with its witness.
pub fn check_decomposition(
    space: &FiniteSpace,
    dec: &Decomposition,
) -> Result<(), DecompositionFailure> {
    for (&x, family) in &dec.owners {
        for member in family {
            if !dec.base.contains(member) {
                return Err(DecompositionFailure::OwnerOutsideBase { x, member: *member });
            }
            if !member.contains(x) {
                return Err(DecompositionFailure::MemberMissesOwner { x, member: *member });
            }
        }
    }
    for member in &dec.base {
        if !dec.owners.values().any(|f| f.contains(member)) {
            return Err(DecompositionFailure::UnownedMember { member: *member });
        }
    }
    for o in space.opens() {
        for x in o.iter() {
            if !dec.base.iter().any(|v| v.contains(x) && v.is_subset(o)) {
                return Err(DecompositionFailure::NotABase { x, open: *o });
            }
        }
    }
    for x in space.points().iter() {
        let family = dec.owners.get(&x).cloned().unwrap_or_default();
        if !space.is_neighborhood_base(x, &family) {
            return Err(DecompositionFailure::NotNeighborhoodBase { x });
        }
    }
    for x in space.points().iter() {
        let reduced: BTreeSet<PointSet> = dec
            .owners
            .iter()
            .filter(|(&y, _)| y != x)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        if space.is_base(&reduced) {
            return Err(DecompositionFailure::StillBaseWithout { x });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum SearchError {
    #[error("the given family is not a base of the space")]
    NotABase,
    #[error("space has {0} points, above the search cap {cap}", cap = MAX_SEARCH_POINTS)]
    TooLarge(usize),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

struct Requirement {
    realizers: Vec<usize>,
    last_realizer: usize,
}

/// Exhaustive owner-assignment search: each base member takes a nonempty set
/// of owners among the points it contains; the first assignment (in
/// enumeration order) passing [`check_decomposition`] wins.
pub fn find_irreducible_decomposition(
    space: &FiniteSpace,
    base: &BTreeSet<PointSet>,
) -> Result<Option<Decomposition>, SearchError> {
    let mut budget = DEFAULT_BUDGET;
    find_irreducible_decomposition_budgeted(space, base, &mut budget)
}

pub fn find_irreducible_decomposition_budgeted(
    space: &FiniteSpace,
    base: &BTreeSet<PointSet>,
    budget: &mut u64,
) -> Result<Option<Decomposition>, SearchError> {
    if space.points().len() > MAX_SEARCH_POINTS {
        return Err(SearchError::TooLarge(space.points().len()));
    }
    if !space.is_base(base) {
        return Err(SearchError::NotABase);
    }
    let members: Vec<PointSet> = base.iter().copied().collect();

    // Neighborhood requirements (x, O) with the member indices realizing them.
    let mut requirements: Vec<Requirement> = Vec::new();
    for o in space.opens() {
        for x in o.iter() {
            let realizers: Vec<usize> = members
                .iter()
                .enumerate()
                .filter(|(_, v)| v.contains(x) && v.is_subset(o))
                .map(|(i, _)| i)
                .collect();
            let last_realizer = realizers.iter().copied().max().expect("base precondition");
            requirements.push(Requirement {
                realizers,
                last_realizer,
            });
        }
    }
    // Requirement (x, O) is satisfied when some realizer's owner set holds x.
    let req_points: Vec<u32> = space
        .opens()
        .iter()
        .flat_map(|o| o.iter())
        .collect();

    let mut owners: Vec<PointSet> = vec![PointSet::EMPTY; members.len()];
    let found = assign(
        space,
        &members,
        &requirements,
        &req_points,
        &mut owners,
        0,
        budget,
    )?;
    if !found {
        return Ok(None);
    }
    let mut owner_map: BTreeMap<u32, BTreeSet<PointSet>> = BTreeMap::new();
    for (member, owner_set) in members.iter().zip(&owners) {
        for x in owner_set.iter() {
            owner_map.entry(x).or_default().insert(*member);
        }
    }
    Ok(Some(Decomposition {
        base: base.clone(),
        owners: owner_map,
    }))
}

fn assign(
    space: &FiniteSpace,
    members: &[PointSet],
    requirements: &[Requirement],
    req_points: &[u32],
    owners: &mut Vec<PointSet>,
    pos: usize,
    budget: &mut u64,
) -> Result<bool, SearchError> {
    if *budget == 0 {
        return Err(SearchError::BudgetExceeded(DEFAULT_BUDGET));
    }
    *budget -= 1;
    if pos == members.len() {
        return Ok(leaf_accepts(space, requirements, owners));
    }
    let candidates: Vec<u32> = members[pos].inter(&space.points()).to_vec();
    // Nonempty subsets of the member's points, in ascending mask order.
    for mask in 1u32..(1 << candidates.len()) {
        let owner_set: PointSet = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &x)| x)
            .collect();
        owners[pos] = owner_set;
        // Prune: any requirement whose realizers are all assigned must
        // already be satisfied.
        let feasible = requirements.iter().enumerate().all(|(r, req)| {
            req.last_realizer > pos
                || req
                    .realizers
                    .iter()
                    .any(|&i| owners[i].contains(req_points[r]))
        });
        if feasible && assign(space, members, requirements, req_points, owners, pos + 1, budget)? {
            return Ok(true);
        }
    }
    owners[pos] = PointSet::EMPTY;
    Ok(false)
}

fn leaf_accepts(space: &FiniteSpace, requirements: &[Requirement], owners: &[PointSet]) -> bool {
    // (i) holds by the pruning above; check (ii): for each x, dropping the
    // members owned only by x must destroy some requirement.
    space.points().iter().all(|x| {
        requirements.iter().any(|req| {
            req.realizers
                .iter()
                .all(|&i| owners[i].is_subset(&PointSet::singleton(x)))
        })
    })
}

/// Searches candidate bases smallest-first for one admitting an irreducible
/// decomposition. Every base must contain the minimal-neighborhood family,
/// so candidates are that family plus extras drawn from the remaining
/// nonempty opens.
pub fn find_irreducible_base(
    space: &FiniteSpace,
) -> Result<Option<(BTreeSet<PointSet>, Decomposition)>, SearchError> {
    if space.points().len() > MAX_SEARCH_POINTS {
        return Err(SearchError::TooLarge(space.points().len()));
    }
    let mandatory: BTreeSet<PointSet> = space.minimal_neighborhoods().into_values().collect();
    let extras: Vec<PointSet> = space
        .opens()
        .iter()
        .filter(|o| !o.is_empty() && !mandatory.contains(o))
        .copied()
        .collect();
    let mut budget = DEFAULT_BUDGET;
    let max_extra = MAX_BASE_SIZE.saturating_sub(mandatory.len()).min(extras.len());
    for size in 0..=max_extra {
        for combo in combinations(&extras, size) {
            let mut base = mandatory.clone();
            base.extend(combo);
            if let Some(dec) = find_irreducible_decomposition_budgeted(space, &base, &mut budget)? {
                return Ok(Some((base, dec)));
            }
        }
    }
    Ok(None)
}

fn combinations(items: &[PointSet], size: usize) -> Vec<Vec<PointSet>> {
    use itertools::Itertools;
    items.iter().copied().combinations(size).collect()
}

/// Brute-force enumeration of owner assignments for a fixed base, with no
/// pruning: the independent oracle for [`find_irreducible_decomposition`].
pub fn brute_force_decomposition(
    space: &FiniteSpace,
    base: &BTreeSet<PointSet>,
) -> Option<Decomposition> {
    let members: Vec<PointSet> = base.iter().copied().collect();
    let mut owners: Vec<PointSet> = vec![PointSet::EMPTY; members.len()];
    brute_assign(space, base, &members, &mut owners, 0)
}

fn brute_assign(
    space: &FiniteSpace,
    base: &BTreeSet<PointSet>,
    members: &[PointSet],
    owners: &mut Vec<PointSet>,
    pos: usize,
) -> Option<Decomposition> {
    if pos == members.len() {
        let mut owner_map: BTreeMap<u32, BTreeSet<PointSet>> = BTreeMap::new();
        for x in space.points().iter() {
            owner_map.insert(x, BTreeSet::new());
        }
        for (member, owner_set) in members.iter().zip(owners.iter()) {
            for x in owner_set.iter() {
                owner_map.get_mut(&x).unwrap().insert(*member);
            }
        }
        owner_map.retain(|_, f| !f.is_empty());
        let dec = Decomposition {
            base: base.clone(),
            owners: owner_map,
        };
        return check_decomposition(space, &dec).ok().map(|_| dec);
    }
    let candidates: Vec<u32> = members[pos].to_vec();
    for mask in 1u32..(1 << candidates.len()) {
        owners[pos] = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &x)| x)
            .collect();
        if let Some(dec) = brute_assign(space, base, members, owners, pos + 1) {
            return Some(dec);
        }
    }
    None
}

/// Brute-force search over all (base, owner-assignment) pairs, smallest base
/// first: the oracle for [`find_irreducible_base`]. Only intended for spaces
/// with at most four points.
pub fn brute_force_irreducible_base(
    space: &FiniteSpace,
) -> Option<(BTreeSet<PointSet>, Decomposition)> {
    let candidates: Vec<PointSet> = space
        .opens()
        .iter()
        .filter(|o| !o.is_empty())
        .copied()
        .collect();
    use itertools::Itertools;
    for size in 1..=candidates.len() {
        for combo in candidates.iter().copied().combinations(size) {
            let base: BTreeSet<PointSet> = combo.into_iter().collect();
            if !space.is_base(&base) {
                continue;
            }
            if let Some(dec) = brute_force_decomposition(space, &base) {
                return Some((base, dec));
            }
        }
    }
    None
}

/// Every topology on the given points, by filtering all subset families for
/// the closure axioms. Exponential in `2^|points|`; fine up to 4 points.
pub fn all_topologies(points: PointSet) -> Vec<FiniteSpace> {
    let subsets: Vec<PointSet> = all_subsets(points);
    let n = subsets.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let opens: BTreeSet<PointSet> = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        if let Some(space) = FiniteSpace::from_opens(points, opens) {
            out.push(space);
        }
    }
    out
}

fn all_subsets(points: PointSet) -> Vec<PointSet> {
    let pts = points.to_vec();
    (0u32..(1 << pts.len()))
        .map(|mask| {
            pts.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}

/// The minimal-neighborhood decomposition: base `{U_x}` with each point
/// owning its own minimal neighborhood. For T0 spaces this always passes
/// [`check_decomposition`].
pub fn minimal_decomposition(space: &FiniteSpace) -> Decomposition {
    let mins = space.minimal_neighborhoods();
    let base: BTreeSet<PointSet> = mins.values().copied().collect();
    let owners: BTreeMap<u32, BTreeSet<PointSet>> = mins
        .into_iter()
        .map(|(x, u)| (x, [u].into_iter().collect()))
        .collect();
    Decomposition { base, owners }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sierpinski_generators;

    fn sierpinski() -> FiniteSpace {
        let (points, gens) = sierpinski_generators();
        generate_topology(points, &gens).unwrap()
    }

    fn discrete(n: u32) -> FiniteSpace {
        let points: PointSet = (0..n).collect();
        let gens: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        generate_topology(points, &gens).unwrap()
    }

    fn indiscrete2() -> FiniteSpace {
        let points: PointSet = [0, 1].into_iter().collect();
        generate_topology(points, &[]).unwrap()
    }

    #[test]
    fn generate_examples() {
        let s = sierpinski();
        let expected: BTreeSet<PointSet> = [
            PointSet::EMPTY,
            PointSet::singleton(0),
            [0, 1].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(*s.opens(), expected);

        assert_eq!(discrete(3).opens().len(), 8);
        assert_eq!(indiscrete2().opens().len(), 2);
    }

    #[test]
    fn generator_outside_points_rejected() {
        let points = PointSet::singleton(0);
        let gen: PointSet = [0, 3].into_iter().collect();
        assert_eq!(
            generate_topology(points, &[gen]),
            Err(TopologyError::GeneratorNotSubset(0))
        );
    }

    #[test]
    fn minimal_neighborhood_examples() {
        let mins = sierpinski().minimal_neighborhoods();
        assert_eq!(mins[&0], PointSet::singleton(0));
        assert_eq!(mins[&1], [0, 1].into_iter().collect());

        for (x, u) in discrete(3).minimal_neighborhoods() {
            assert_eq!(u, PointSet::singleton(x));
        }

        let full: PointSet = [0, 1].into_iter().collect();
        for (_, u) in indiscrete2().minimal_neighborhoods() {
            assert_eq!(u, full);
        }
    }

    #[test]
    fn is_base_examples() {
        let s = sierpinski();
        let full: PointSet = [0, 1].into_iter().collect();
        let both = [PointSet::singleton(0), full];
        assert!(s.is_base(&both));
        assert!(!s.is_base(&[full]));
        let singletons: Vec<PointSet> = (0..3).map(PointSet::singleton).collect();
        assert!(discrete(3).is_base(&singletons));
    }

    #[test]
    fn neighborhood_base_examples() {
        let s = sierpinski();
        let full: PointSet = [0, 1].into_iter().collect();
        assert!(s.is_neighborhood_base(1, &[full]));
        assert!(!s.is_neighborhood_base(1, &[PointSet::singleton(0)]));
        let d = discrete(3);
        for x in 0..3 {
            assert!(d.is_neighborhood_base(x, &[PointSet::singleton(x)]));
        }
    }

    #[test]
    fn sierpinski_decomposition_is_irreducible() {
        let s = sierpinski();
        let dec = minimal_decomposition(&s);
        assert_eq!(check_decomposition(&s, &dec), Ok(()));
    }

    #[test]
    fn discrete_singletons_are_irreducible() {
        let d = discrete(4);
        let dec = minimal_decomposition(&d);
        assert_eq!(check_decomposition(&d, &dec), Ok(()));
    }

    #[test]
    fn indiscrete_fails_clause_two() {
        let s = indiscrete2();
        let full: PointSet = [0, 1].into_iter().collect();
        let dec = Decomposition {
            base: [full].into_iter().collect(),
            owners: [
                (0u32, [full].into_iter().collect()),
                (1u32, [full].into_iter().collect()),
            ]
            .into_iter()
            .collect(),
        };
        assert_eq!(
            check_decomposition(&s, &dec),
            Err(DecompositionFailure::StillBaseWithout { x: 0 })
        );
    }

    #[test]
    fn search_examples() {
        let s = sierpinski();
        let full: PointSet = [0, 1].into_iter().collect();
        let base: BTreeSet<PointSet> = [PointSet::singleton(0), full].into_iter().collect();
        let dec = find_irreducible_decomposition(&s, &base).unwrap().unwrap();
        assert_eq!(check_decomposition(&s, &dec), Ok(()));

        let d = discrete(3);
        let base: BTreeSet<PointSet> = (0..3).map(PointSet::singleton).collect();
        assert!(find_irreducible_decomposition(&d, &base).unwrap().is_some());

        let i = indiscrete2();
        let base: BTreeSet<PointSet> = [full].into_iter().collect();
        assert_eq!(find_irreducible_decomposition(&i, &base), Ok(None));
    }

    #[test]
    fn not_a_base_rejected() {
        let s = sierpinski();
        let full: PointSet = [0, 1].into_iter().collect();
        let base: BTreeSet<PointSet> = [full].into_iter().collect();
        assert_eq!(
            find_irreducible_decomposition(&s, &base),
            Err(SearchError::NotABase)
        );
    }

    #[test]
    fn find_base_examples() {
        assert_eq!(find_irreducible_base(&indiscrete2()), Ok(None));
        assert!(find_irreducible_base(&sierpinski()).unwrap().is_some());
        assert!(find_irreducible_base(&discrete(4)).unwrap().is_some());
    }

    #[test]
    fn twentynine_topologies_on_three_points() {
        let points: PointSet = [0, 1, 2].into_iter().collect();
        assert_eq!(all_topologies(points).len(), 29);
    }

    #[test]
    fn full_family_is_a_base() {
        for space in all_topologies([0, 1, 2].into_iter().collect()) {
            let family: Vec<PointSet> = space
                .opens()
                .iter()
                .filter(|o| !o.is_empty())
                .copied()
                .collect();
            assert!(space.is_base(&family));
        }
    }
}
