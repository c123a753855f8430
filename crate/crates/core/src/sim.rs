//! Finite descending chains of conditions, their limit structure, and the
//! killing amalgamation move.
//!
//! A chain stands in for the generic filter at desk scale: the limit table
//! is the pointwise union `U(alpha, i) = ∪ U_p(alpha, i)` over chain
//! members, and every member's table is the restriction of the limit to its
//! own support.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use thiserror::Error;

use crate::amalgamation::{
    amalgamate, AmalgamationFailure, AmalgamationRequest, AmalgamationTrace,
};
use crate::condition::{extension_failure, Condition, ExtensionFailure, Level, Violation};
use crate::set::PointSet;
use crate::topology::{generate_topology, FiniteSpace, TopologyError};
use crate::twins::{find_amalgamable_pair, MarkedCondition};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SimulationConfig {
    /// Points 0..universe must all appear.
    pub universe: u32,
    /// Target depth of the final chain member.
    pub depth: usize,
    pub seed: u64,
    /// Maximum number of extension steps.
    pub budget: usize,
    /// Attempt randomized cell enrichment when adding points. Without it the
    /// chain grows by plain add_point/deepen and every cell is a singleton.
    pub enrich: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum SimError {
    #[error("universe and depth must both be at least 1")]
    InvalidConfig,
}

/// The pointwise union over a descending chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LimitStructure {
    pub points: PointSet,
    pub depth: usize,
    pub cells: BTreeMap<(u32, Level), PointSet>,
    pub chain: Vec<Condition>,
}

impl LimitStructure {
    pub fn cell(&self, alpha: u32, i: Level) -> Option<PointSet> {
        self.cells.get(&(alpha, i)).copied()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ChainError {
    #[error("chain member #{index} is invalid: {violation}")]
    InvalidMember { index: usize, violation: Violation },
    #[error("chain member #{index} does not extend its predecessor: {failure}")]
    NotDescending {
        index: usize,
        failure: ExtensionFailure,
    },
    #[error("member #{index} disagrees with the limit restricted to it at ({alpha},{level})")]
    RestrictionMismatch {
        index: usize,
        alpha: u32,
        level: Level,
    },
}

/// Forms the limit of a descending chain (later members extend earlier
/// ones), checking validity, the chain property, and that each member is the
/// restriction of the limit.
pub fn limit_structure(chain: &[Condition]) -> Result<LimitStructure, ChainError> {
    for (index, member) in chain.iter().enumerate() {
        if let Some(violation) = member.first_violation() {
            return Err(ChainError::InvalidMember { index, violation });
        }
        if index > 0 {
            if let Some(failure) = extension_failure(member, &chain[index - 1]) {
                return Err(ChainError::NotDescending { index, failure });
            }
        }
    }
    let mut points = PointSet::EMPTY;
    let mut depth = 0;
    for member in chain {
        points = points.union(&member.support());
        depth = depth.max(member.depth());
    }
    let mut cells: BTreeMap<(u32, Level), PointSet> = BTreeMap::new();
    for member in chain {
        for ((alpha, i), value) in member.rows() {
            cells
                .entry((alpha, i))
                .and_modify(|acc| *acc = acc.union(&value))
                .or_insert(value);
        }
    }
    // Clause (c) transported to the limit.
    for (index, member) in chain.iter().enumerate() {
        for ((alpha, level), value) in member.rows() {
            if cells[&(alpha, level)].inter(&member.support()) != value {
                return Err(ChainError::RestrictionMismatch {
                    index,
                    alpha,
                    level,
                });
            }
        }
    }
    Ok(LimitStructure {
        points,
        depth,
        cells,
        chain: chain.to_vec(),
    })
}

/// (P3) quantified over the whole limit table.
pub fn check_p3_global(limit: &LimitStructure) -> Result<(), (u32, u32, Level)> {
    for (&(alpha, level), cell) in &limit.cells {
        for beta in cell.iter() {
            if beta <= alpha {
                continue;
            }
            if let Some(base) = limit.cell(beta, 0) {
                if cell.is_subset(&base) {
                    return Err((alpha, beta, level));
                }
            }
        }
    }
    Ok(())
}

/// A pair of cells intersecting without an inner cell witnessing the
/// intersection from inside, left over after best-effort repair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UnmetIntersection {
    pub x: u32,
    pub a: (u32, Level),
    pub b: (u32, Level),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimulationOutcome {
    pub structure: LimitStructure,
    pub steps: usize,
    /// False when the task budget ran out before the universe and depth were
    /// reached; the structure is then partial.
    pub completed: bool,
    pub unmet: Vec<UnmetIntersection>,
}

/// Extends `cur` by a new point, trying a few randomized enrichments that
/// seed the new point into existing cells (prefix-closed per row, so the
/// nesting of levels survives) before falling back to singleton rows.
pub fn enriched_add(cur: &Condition, point: u32, rng: &mut impl Rng) -> Condition {
    let plain = cur.add_point(point).expect("fresh point");
    for _ in 0..4 {
        let mut candidate = plain.clone();
        for alpha in cur.support().iter() {
            if !rng.gen_bool(0.4) {
                continue;
            }
            let cutoff = rng.gen_range(0..=cur.depth());
            for i in 0..cutoff {
                let mut cell = candidate.cell(alpha, i);
                cell.insert(point);
                candidate.set_cell(alpha, i, cell);
            }
        }
        if candidate.is_valid() && extension_failure(&candidate, cur).is_none() {
            return candidate;
        }
    }
    plain
}

/// Builds a descending chain from the empty condition until every point of
/// the universe is present and the target depth is reached, then forms the
/// limit. Deterministic for a fixed seed.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationOutcome, SimError> {
    if config.universe == 0 || config.depth == 0 {
        return Err(SimError::InvalidConfig);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut chain = vec![Condition::empty()];
    let mut steps = 0;
    let completed = loop {
        let cur = chain.last().unwrap().clone();
        let missing: Vec<u32> = (0..config.universe)
            .filter(|&p| !cur.support().contains(p))
            .collect();
        let need_depth = cur.depth() < config.depth;
        if missing.is_empty() && !need_depth {
            break true;
        }
        if steps >= config.budget {
            break false;
        }
        steps += 1;
        // Round-robin flavoured scheduling: deepen when behind on depth or
        // when a coin flip says so, otherwise add a random missing point.
        let next = if need_depth && (missing.is_empty() || rng.gen_bool(0.5)) {
            cur.deepen()
        } else {
            let point = *missing.choose(&mut rng).unwrap();
            if config.enrich {
                enriched_add(&cur, point, &mut rng)
            } else {
                cur.add_point(point).expect("point is missing")
            }
        };
        chain.push(next);
    };
    let structure = limit_structure(&chain).expect("simulation chains are descending");
    let unmet = unmet_intersections(&structure);
    Ok(SimulationOutcome {
        structure,
        steps,
        completed,
        unmet,
    })
}

/// Reports pairs of intersecting cells with no cell of a common member
/// sitting inside the intersection. Best-effort diagnostic; deepening always
/// repairs these at the new level for points present at that time.
pub fn unmet_intersections(limit: &LimitStructure) -> Vec<UnmetIntersection> {
    let mut out = Vec::new();
    let pairs: Vec<((u32, Level), PointSet)> =
        limit.cells.iter().map(|(&k, &v)| (k, v)).collect();
    for (idx, &(a, ref ca)) in pairs.iter().enumerate() {
        for &(b, ref cb) in &pairs[idx + 1..] {
            let inter = ca.inter(cb);
            for x in inter.iter() {
                let witnessed = (0..limit.depth)
                    .any(|l| limit.cell(x, l).is_some_and(|c| c.is_subset(&inter)));
                if !witnessed {
                    out.push(UnmetIntersection { x, a, b });
                }
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum KillError {
    #[error("no amalgamable pair in the family")]
    NoPair,
    #[error(transparent)]
    Amalgamation(#[from] AmalgamationFailure),
    #[error("postcondition failed: {0}")]
    Postcondition(&'static str),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KillOutcome {
    pub pair: (usize, usize),
    pub trace: AmalgamationTrace,
}

/// The theorem's killer move at finite scale: pick an amalgamable twin pair
/// with aligned marks and amalgamate so that the later mark's cell at level
/// `m` captures the earlier mark while its level-`k` cell is absorbed:
/// `mark_i ∈ U_p(mark_j, m)` and `U_p(mark_j, k) ⊆ U_p(mark_i, k)`.
pub fn kill_irreducibility_attempt(
    family: &[MarkedCondition],
    k: Level,
    m: Level,
) -> Result<KillOutcome, KillError> {
    let ((i, j), _cert) = find_amalgamable_pair(family).ok_or(KillError::NoPair)?;
    let req = AmalgamationRequest::new(
        family[i].cond.clone(),
        family[j].cond.clone(),
        family[i].mark,
        k,
        m,
    )
    .map_err(AmalgamationFailure::from)?;
    let trace = amalgamate(&req).map_err(AmalgamationFailure::from)?;
    let (mark_i, mark_j) = (family[i].mark, family[j].mark);
    if !trace.p.cell(mark_j, m).contains(mark_i) {
        return Err(KillError::Postcondition("mark_i not in U_p(mark_j, m)"));
    }
    if !trace.p.cell(mark_j, k).is_subset(&trace.p.cell(mark_i, k)) {
        return Err(KillError::Postcondition(
            "U_p(mark_j, k) not included in U_p(mark_i, k)",
        ));
    }
    Ok(KillOutcome {
        pair: (i, j),
        trace,
    })
}

/// Traces the limit cells onto a subset of the points and generates the
/// subspace topology from them.
pub fn export_fragment(
    limit: &LimitStructure,
    subset: PointSet,
) -> Result<(FiniteSpace, Vec<PointSet>), FragmentError> {
    if !subset.is_subset(&limit.points) {
        return Err(FragmentError::NotASubset);
    }
    let mut family: Vec<PointSet> = Vec::new();
    for alpha in subset.iter() {
        for i in 0..limit.depth {
            if let Some(cell) = limit.cell(alpha, i) {
                let trace = cell.inter(&subset);
                if !family.contains(&trace) {
                    family.push(trace);
                }
            }
        }
    }
    family.sort();
    let space = generate_topology(subset, &family)?;
    Ok((space, family))
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum FragmentError {
    #[error("the requested fragment is not a subset of the limit's points")]
    NotASubset,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn quick_config(universe: u32, depth: usize, seed: u64) -> SimulationConfig {
        SimulationConfig {
            universe,
            depth,
            seed,
            budget: 10_000,
            enrich: false,
        }
    }

    #[test]
    fn two_point_simulation() {
        let out = run_simulation(&quick_config(2, 1, 123)).unwrap();
        assert!(out.completed);
        let s = &out.structure;
        assert_eq!(s.cell(0, 0), Some(PointSet::singleton(0)));
        assert_eq!(s.cell(1, 0), Some(PointSet::singleton(1)));
    }

    #[test]
    fn single_point_limit_is_fix_t() {
        let out = run_simulation(&quick_config(1, 1, 7)).unwrap();
        let s = &out.structure;
        assert_eq!(s.points, PointSet::singleton(0));
        assert_eq!(s.depth, 1);
        assert_eq!(s.cell(0, 0), Some(PointSet::singleton(0)));
        assert_eq!(fix_t().cell(0, 0), s.cell(0, 0).unwrap());
    }

    #[test]
    fn limit_examples() {
        let limit = limit_structure(&[fix_t(), fix_q()]).unwrap();
        assert_eq!(limit.cell(0, 0), Some(PointSet::singleton(0)));
        assert_eq!(limit.cell(1, 0), Some(PointSet::singleton(1)));

        let solo = limit_structure(&[fix_t()]).unwrap();
        assert_eq!(solo.cell(0, 0), Some(PointSet::singleton(0)));

        assert!(matches!(
            limit_structure(&[fix_t(), fix_bad()]),
            Err(ChainError::InvalidMember { index: 1, .. })
        ));
    }

    #[test]
    fn p3_global_examples() {
        let amalg = limit_structure(&[fix_amalg()]).unwrap();
        assert_eq!(check_p3_global(&amalg), Ok(()));

        // A structure holding FIX_BAD's table, assembled directly.
        let bad = LimitStructure {
            points: [0, 1].into_iter().collect(),
            depth: 1,
            cells: fix_bad().rows().collect(),
            chain: vec![],
        };
        assert_eq!(check_p3_global(&bad), Err((0, 1, 0)));

        let empty = limit_structure(&[]).unwrap();
        assert_eq!(check_p3_global(&empty), Ok(()));
    }

    #[test]
    fn killer_move_on_the_twin_pair() {
        let family = vec![
            MarkedCondition::new(fix_pair_p0(), 0).unwrap(),
            MarkedCondition::new(fix_pair_p1(), 1).unwrap(),
        ];
        let out = kill_irreducibility_attempt(&family, 0, 1).unwrap();
        assert_eq!(out.pair, (0, 1));
        assert_eq!(out.trace.p, fix_amalg());
        assert!(out.trace.p.cell(1, 1).contains(0));
        assert!(out.trace.p.cell(1, 0).is_subset(&out.trace.p.cell(0, 0)));
    }

    #[test]
    fn killer_move_failures() {
        let single = vec![MarkedCondition::new(fix_t(), 0).unwrap()];
        assert!(matches!(
            kill_irreducibility_attempt(&single, 0, 1),
            Err(KillError::NoPair)
        ));

        let non_twins = vec![
            MarkedCondition::new(fix_pair_p0(), 0).unwrap(),
            MarkedCondition::new(fix_q(), 1).unwrap(),
        ];
        assert!(matches!(
            kill_irreducibility_attempt(&non_twins, 0, 1),
            Err(KillError::NoPair)
        ));
    }

    #[test]
    fn export_examples() {
        let amalg = limit_structure(&[fix_amalg()]).unwrap();
        let subset: PointSet = [0, 1].into_iter().collect();
        let (space, family) = export_fragment(&amalg, subset).unwrap();
        // Both U(0,j) and U(1,j) trace to {0,1}.
        assert_eq!(family, vec![subset]);
        assert_eq!(space.opens().len(), 2);

        let (space, _) = export_fragment(&amalg, PointSet::singleton(3)).unwrap();
        assert_eq!(space.opens().len(), 2);

        let out = run_simulation(&quick_config(2, 1, 5)).unwrap();
        let (space, _) = export_fragment(&out.structure, subset).unwrap();
        assert_eq!(space.opens().len(), 4); // discrete on two points
    }

    #[test]
    fn fragment_subset_checked() {
        let limit = limit_structure(&[fix_t()]).unwrap();
        assert!(matches!(
            export_fragment(&limit, PointSet::singleton(9)),
            Err(FragmentError::NotASubset)
        ));
    }
}
