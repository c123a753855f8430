//! Randomized generation of conditions, twin pairs and amalgamation
//! requests; fuzz campaigns over the module invariants; greedy
//! counterexample shrinking; and one mutation hook per checkable claim as a
//! negative control for the claim checkers.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::amalgamation::{
    amalgamate, compute_v, verify_amalgamation, AmalgamationRequest, AmalgamationTrace, BlockMap,
    Claim, ALL_CLAIMS,
};
use crate::condition::{extension_failure, Condition, Level};
use crate::doc::RequestDoc;
use crate::set::{PointSet, MAX_POINTS};
use crate::sim::{enriched_add, kill_irreducibility_attempt};
use crate::topology::{
    brute_force_decomposition, brute_force_irreducible_base, check_decomposition,
    find_irreducible_base, find_irreducible_decomposition, generate_topology,
    minimal_decomposition,
};
use crate::twins::{
    canonicalize, is_twin_pair, order_iso, relabel, MarkedCondition,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GenParams {
    pub max_side_points: usize,
    pub max_depth: usize,
    pub universe: u32,
    pub seed: u64,
    pub trials: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_side_points: 6,
            max_depth: 4,
            universe: 64,
            seed: 0,
            trials: 100,
        }
    }
}

/// Builds a valid condition from singleton rows by randomized cell growth:
/// each step inserts a point into a row at all levels up to a chosen one (so
/// the nesting of levels survives) and keeps the result only when it is
/// still valid.
pub fn gen_condition_on(support: &[u32], depth: usize, rng: &mut impl Rng) -> Condition {
    let set: PointSet = support.iter().copied().collect();
    let mut cond = Condition::with_singleton_cells(set, depth);
    if support.len() < 2 || depth == 0 {
        return cond;
    }
    let attempts = rng.gen_range(0..=support.len() * depth * 2);
    for _ in 0..attempts {
        let &alpha = support.choose(rng).unwrap();
        let &gamma = support.choose(rng).unwrap();
        let i = rng.gen_range(0..depth);
        if gamma == alpha || cond.cell(alpha, i).contains(gamma) {
            continue;
        }
        let mut candidate = cond.clone();
        for j in 0..=i {
            let mut cell = candidate.cell(alpha, j);
            cell.insert(gamma);
            candidate.set_cell(alpha, j, cell);
        }
        if candidate.is_valid() {
            cond = candidate;
        }
    }
    cond
}

pub fn gen_condition(params: &GenParams, rng: &mut impl Rng) -> Condition {
    if params.max_side_points == 0 {
        return Condition::empty();
    }
    let size = rng.gen_range(1..=params.max_side_points);
    let depth = if params.max_depth == 0 {
        0
    } else {
        rng.gen_range(1..=params.max_depth)
    };
    let bound = (params.universe as usize).clamp(size, MAX_POINTS as usize);
    let mut support: Vec<u32> = rand::seq::index::sample(rng, bound, size)
        .iter()
        .map(|i| i as u32)
        .collect();
    support.sort_unstable();
    gen_condition_on(&support, depth, rng)
}

/// Generates a request satisfying the whole amalgamation hypothesis by
/// construction: a root `D`, a condition over `D ∪ S0` with `D < S0`, its
/// rank-preserving copy onto `D ∪ S1` with `S0 < S1`, a designated
/// `xi0 ∈ S0`, and levels `k < m < n`.
pub fn gen_twin_request(params: &GenParams, rng: &mut impl Rng) -> AmalgamationRequest {
    let max_side = params.max_side_points.max(1);
    let s = rng.gen_range(1..=max_side);
    let r = rng.gen_range(0..=max_side - s);
    let n = rng.gen_range(2..=params.max_depth.max(2));
    let total = r + 2 * s;
    let bound = (params.universe as usize).clamp(total, MAX_POINTS as usize);
    let mut picked: Vec<u32> = rand::seq::index::sample(rng, bound, total)
        .iter()
        .map(|i| i as u32)
        .collect();
    picked.sort_unstable();
    let (root, rest) = picked.split_at(r);
    let (side0, _side1) = rest.split_at(s);
    let a0: Vec<u32> = root.iter().chain(side0).copied().collect();
    let p0 = gen_condition_on(&a0, n, rng);
    let a1: PointSet = root.iter().chain(&rest[s..]).copied().collect();
    let sigma = order_iso(&p0.support(), &a1).expect("equal sizes");
    let p1 = relabel(&p0, &sigma);
    let xi0 = *side0.choose(rng).unwrap();
    let k = rng.gen_range(0..n - 1);
    let m = rng.gen_range(k + 1..n);
    AmalgamationRequest::new(p0, p1, xi0, k, m).expect("construction satisfies the hypothesis")
}

/// One deterministic trace mutation per checkable claim. `apply` performs
/// the first applicable edit in a fixed scan order and reports whether one
/// was found; the matched claim checker must then flag the mutated trace.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum MutationHook {
    /// Adds a support point to a `U'`-row whose image under smashing is
    /// missing from the corresponding `U0`-row.
    ForeignSupportMember,
    /// The same with a fresh-block point.
    ForeignBlockMember,
    /// The same with a fresh-block point, on the final table.
    ForeignBlockInFinal,
    /// Removes a point from its own level-0 `U'`-cell.
    DropReflexive,
    /// Removes a parent-cell member from the matching `U'`-row.
    TrimRestriction,
    /// Removes a point from its own level-0 cell of the final table.
    DropReflexiveFinal,
    /// Removes a parent-cell member from the matching final-table row.
    TrimRestrictionFinal,
    /// Removes `xi0` from `U(xi1, m)`.
    DropStarMembership,
    /// Adds a block point from outside `rho[V1(xi1, k)]` to a final row.
    SmuggleBlockPast,
    /// Makes one final row disagree with the `rho[V1(xi1, k)]` variant.
    SkewVariantRow,
}

pub const ALL_HOOKS: [MutationHook; 10] = [
    MutationHook::ForeignSupportMember,
    MutationHook::ForeignBlockMember,
    MutationHook::ForeignBlockInFinal,
    MutationHook::DropReflexive,
    MutationHook::TrimRestriction,
    MutationHook::DropReflexiveFinal,
    MutationHook::TrimRestrictionFinal,
    MutationHook::DropStarMembership,
    MutationHook::SmuggleBlockPast,
    MutationHook::SkewVariantRow,
];

impl MutationHook {
    pub fn name(&self) -> &'static str {
        match self {
            MutationHook::ForeignSupportMember => "foreign-support-member",
            MutationHook::ForeignBlockMember => "foreign-block-member",
            MutationHook::ForeignBlockInFinal => "foreign-block-in-final",
            MutationHook::DropReflexive => "drop-reflexive",
            MutationHook::TrimRestriction => "trim-restriction",
            MutationHook::DropReflexiveFinal => "drop-reflexive-final",
            MutationHook::TrimRestrictionFinal => "trim-restriction-final",
            MutationHook::DropStarMembership => "drop-star-membership",
            MutationHook::SmuggleBlockPast => "smuggle-block-past",
            MutationHook::SkewVariantRow => "skew-variant-row",
        }
    }

    pub fn by_name(name: &str) -> Option<MutationHook> {
        ALL_HOOKS.into_iter().find(|h| h.name() == name)
    }

    /// The claim this mutation is built to violate.
    pub fn target(&self) -> Claim {
        match self {
            MutationHook::ForeignSupportMember => Claim::Push,
            MutationHook::ForeignBlockMember => Claim::Push2,
            MutationHook::ForeignBlockInFinal => Claim::Push3,
            MutationHook::DropReflexive => Claim::PPrimeValid,
            MutationHook::TrimRestriction => Claim::PPrimeExtends,
            MutationHook::DropReflexiveFinal => Claim::PValid,
            MutationHook::TrimRestrictionFinal => Claim::PExtends,
            MutationHook::DropStarMembership => Claim::Star,
            MutationHook::SmuggleBlockPast => Claim::UMinusUPrime,
            MutationHook::SkewVariantRow => Claim::U2Equality,
        }
    }

    pub fn apply(&self, trace: &mut AmalgamationTrace, req: &AmalgamationRequest) -> bool {
        match self {
            MutationHook::ForeignSupportMember => {
                let mut table = trace.p_prime.clone();
                let done = add_foreign_support(&mut table, req);
                trace.p_prime = table;
                done
            }
            MutationHook::ForeignBlockMember => {
                let rho = trace.rho.clone();
                let mut table = trace.p_prime.clone();
                let done = add_foreign_block(&mut table, &rho, req);
                trace.p_prime = table;
                done
            }
            MutationHook::ForeignBlockInFinal => {
                let rho = trace.rho.clone();
                let mut table = trace.p.clone();
                let done = add_foreign_block(&mut table, &rho, req);
                trace.p = table;
                done
            }
            MutationHook::DropReflexive => {
                let mut table = trace.p_prime.clone();
                let done = drop_reflexive(&mut table, req);
                trace.p_prime = table;
                done
            }
            MutationHook::TrimRestriction => {
                let mut table = trace.p_prime.clone();
                let done = trim_restriction(&mut table, req);
                trace.p_prime = table;
                done
            }
            MutationHook::DropReflexiveFinal => {
                let mut table = trace.p.clone();
                let done = drop_reflexive(&mut table, req);
                trace.p = table;
                done
            }
            MutationHook::TrimRestrictionFinal => {
                let mut table = trace.p.clone();
                let done = trim_restriction(&mut table, req);
                trace.p = table;
                done
            }
            MutationHook::DropStarMembership => {
                let (xi0, xi1, m) = (req.xi0(), req.xi1(), req.m());
                let mut cell = trace.p.cell(xi1, m);
                if !cell.contains(xi0) {
                    return false;
                }
                cell.remove(xi0);
                trace.p.set_cell(xi1, m, cell);
                true
            }
            MutationHook::SmuggleBlockPast => {
                let foreign = trace.block.diff(&v1_image(trace, req));
                let rows: Vec<_> = trace.p.rows().collect();
                for ((z, j), value) in rows {
                    if let Some(b) = foreign.diff(&value).first() {
                        let mut cell = value;
                        cell.insert(b);
                        trace.p.set_cell(z, j, cell);
                        return true;
                    }
                }
                false
            }
            MutationHook::SkewVariantRow => {
                let image = v1_image(trace, req);
                let guard = req.p0().cell(req.xi0(), req.k());
                let rows: Vec<_> = trace.p.rows().collect();
                for &((z, j), value) in &rows {
                    let prime = trace.p_prime.try_cell(z, j).unwrap_or(PointSet::EMPTY);
                    let modified = req
                        .p0()
                        .try_cell(z, j)
                        .is_some_and(|u0| guard.is_subset(&u0));
                    if !modified {
                        continue;
                    }
                    if let Some(e) = image.inter(&value).diff(&prime).first() {
                        let mut cell = value;
                        cell.remove(e);
                        trace.p.set_cell(z, j, cell);
                        return true;
                    }
                }
                for &((z, j), value) in &rows {
                    let modified = req
                        .p0()
                        .try_cell(z, j)
                        .is_some_and(|u0| guard.is_subset(&u0));
                    if modified {
                        continue;
                    }
                    if let Some(e) = image.diff(&value).first() {
                        let mut cell = value;
                        cell.insert(e);
                        trace.p.set_cell(z, j, cell);
                        return true;
                    }
                }
                false
            }
        }
    }
}

fn v1_image(trace: &AmalgamationTrace, req: &AmalgamationRequest) -> PointSet {
    compute_v(req.p1(), req.xi1(), req.k())
        .iter()
        .map(|pair| trace.rho[pair])
        .collect()
}

fn add_foreign_support(table: &mut Condition, req: &AmalgamationRequest) -> bool {
    let cert = req.cert();
    let a_star = req.a_star();
    for beta in a_star.iter() {
        for j in 0..table.depth() {
            let target = req.p0().cell(cert.smash(beta), j);
            let cell = table.cell(beta, j);
            for alpha in a_star.iter() {
                if !target.contains(cert.smash(alpha)) && !cell.contains(alpha) {
                    let mut cell = cell;
                    cell.insert(alpha);
                    table.set_cell(beta, j, cell);
                    return true;
                }
            }
        }
    }
    false
}

fn add_foreign_block(
    table: &mut Condition,
    rho: &BlockMap,
    req: &AmalgamationRequest,
) -> bool {
    let cert = req.cert();
    let a_star = req.a_star();
    for beta in a_star.iter() {
        for j in 0..table.depth() {
            let target = req.p0().cell(cert.smash(beta), j);
            let cell = table.cell(beta, j);
            for (&(alpha, _), &b) in rho {
                if !target.contains(cert.smash(alpha)) && !cell.contains(b) {
                    let mut cell = cell;
                    cell.insert(b);
                    table.set_cell(beta, j, cell);
                    return true;
                }
            }
        }
    }
    false
}

fn drop_reflexive(table: &mut Condition, req: &AmalgamationRequest) -> bool {
    let beta = match req.a_star().first() {
        Some(beta) => beta,
        None => return false,
    };
    let mut cell = table.cell(beta, 0);
    cell.remove(beta);
    table.set_cell(beta, 0, cell);
    true
}

fn trim_restriction(table: &mut Condition, req: &AmalgamationRequest) -> bool {
    for eps in 0..2 {
        for ((beta, j), value) in req.side(eps).rows() {
            if let Some(x) = value.iter().find(|&x| x != beta) {
                let mut cell = table.cell(beta, j);
                cell.remove(x);
                table.set_cell(beta, j, cell);
                return true;
            }
        }
    }
    // All parent cells are singletons; breaking reflexivity also breaks the
    // restriction clause.
    drop_reflexive(table, req)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum ShrinkError {
    #[error("the starting input does not fail")]
    DoesNotFail,
}

/// Greedy minimization of a failing amalgamation request: repeatedly drops
/// the deepest level, a support point, or a cell member — always rebuilding
/// the second condition as the twin image of the first, so every candidate
/// still satisfies the amalgamation hypothesis — and keeps the first
/// candidate that still fails. Stops when no single removal fails.
pub fn shrink_request(
    req: &AmalgamationRequest,
    fails: &mut dyn FnMut(&AmalgamationRequest) -> bool,
) -> Result<AmalgamationRequest, ShrinkError> {
    if !fails(req) {
        return Err(ShrinkError::DoesNotFail);
    }
    let mut cur = req.clone();
    loop {
        let mut improved = false;
        for cand in shrink_candidates(&cur) {
            if fails(&cand) {
                cur = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            return Ok(cur);
        }
    }
}

fn derive_request(
    p0: Condition,
    old: &AmalgamationRequest,
    k: Level,
    m: Level,
) -> Option<AmalgamationRequest> {
    if !p0.support().contains(old.xi0()) {
        return None;
    }
    let cert = old.cert();
    let sigma: BTreeMap<u32, u32> = p0.support().iter().map(|x| (x, cert.sigma(x))).collect();
    let p1 = relabel(&p0, &sigma);
    AmalgamationRequest::new(p0, p1, old.xi0(), k, m).ok()
}

fn truncate(p: &Condition, depth: usize) -> Condition {
    let cells = p.rows().filter(|&((_, i), _)| i < depth).collect();
    Condition::new(p.support(), depth, cells).expect("prefix of a table")
}

fn drop_point(p: &Condition, alpha: u32) -> Condition {
    let mut support = p.support();
    support.remove(alpha);
    let cells = p
        .rows()
        .filter(|&((beta, _), _)| beta != alpha)
        .map(|((beta, i), mut value)| {
            value.remove(alpha);
            ((beta, i), value)
        })
        .collect();
    Condition::new(support, p.depth(), cells).expect("removing a point keeps the shape")
}

fn remove_from_row(p: &Condition, alpha: u32, x: u32, from_level: Level) -> Condition {
    let mut q = p.clone();
    for j in from_level..p.depth() {
        let mut cell = q.cell(alpha, j);
        cell.remove(x);
        q.set_cell(alpha, j, cell);
    }
    q
}

fn shrink_candidates(req: &AmalgamationRequest) -> Vec<AmalgamationRequest> {
    let mut out = Vec::new();
    let p0 = req.p0();
    let n = req.depth();
    if n > 2 {
        let m = req.m().min(n - 2);
        let k = req.k().min(m - 1);
        out.extend(derive_request(truncate(p0, n - 1), req, k, m));
    }
    if p0.support().len() > 1 {
        for alpha in p0.support().iter() {
            if alpha == req.xi0() {
                continue;
            }
            out.extend(derive_request(drop_point(p0, alpha), req, req.k(), req.m()));
        }
    }
    for ((alpha, i), value) in p0.rows() {
        for x in value.iter() {
            if x == alpha {
                continue;
            }
            // One pair of candidates per (row, member), keyed at the deepest
            // level holding the member.
            if i + 1 < n && p0.cell(alpha, i + 1).contains(x) {
                continue;
            }
            out.extend(derive_request(
                remove_from_row(p0, alpha, x, i),
                req,
                req.k(),
                req.m(),
            ));
            if i > 0 {
                out.extend(derive_request(
                    remove_from_row(p0, alpha, x, 0),
                    req,
                    req.k(),
                    req.m(),
                ));
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Property {
    /// Amalgamate a generated request and re-check every claim.
    AmalgamationFull,
    /// Reflexivity, transitivity, and extension laws of add_point/deepen.
    OrderLaws,
    /// Twin symmetry, exchange involution, canonical-key oracle.
    TwinLaws,
    /// The final-table variant equality and the difference containment.
    U2Equality,
    /// Fast decomposition searches agree with brute-force enumeration.
    TopologyOracle,
    /// Marked twin families always admit the killing amalgamation.
    KillerMove,
}

pub const ALL_PROPERTIES: [Property; 6] = [
    Property::AmalgamationFull,
    Property::OrderLaws,
    Property::TwinLaws,
    Property::U2Equality,
    Property::TopologyOracle,
    Property::KillerMove,
];

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::AmalgamationFull => "amalgamation-full",
            Property::OrderLaws => "order-laws",
            Property::TwinLaws => "twin-laws",
            Property::U2Equality => "u2-equality",
            Property::TopologyOracle => "topology-oracle",
            Property::KillerMove => "killer-move",
        }
    }

    pub fn by_name(name: &str) -> Option<Property> {
        ALL_PROPERTIES.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FuzzFailure {
    pub trial: u64,
    pub property: String,
    pub detail: String,
    pub shrunk: Option<RequestDoc>,
    pub shrunk_points: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FuzzReport {
    pub trials: u64,
    pub properties: Vec<String>,
    pub mutation: Option<String>,
    /// Trials where the mutation hook found nothing to edit.
    pub skipped: u64,
    pub failures: Vec<FuzzFailure>,
    pub wall_ms: u128,
}

fn trial_rng(seed: u64, trial: u64, lane: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ lane.wrapping_mul(0xD1B5_4A32_D192_ED03),
    )
}

/// Runs `params.trials` independent trials of each listed property. The
/// mutation hook, when given, is exercised by the amalgamation-based
/// properties as a negative control. Deterministic for fixed inputs.
pub fn run_fuzz(
    params: &GenParams,
    properties: &[Property],
    mutation: Option<MutationHook>,
) -> FuzzReport {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut skipped = 0u64;
    for trial in 0..params.trials {
        for (lane, &property) in properties.iter().enumerate() {
            let mut rng = trial_rng(params.seed, trial, lane as u64);
            let mut found: Vec<(String, Option<AmalgamationRequest>)> = Vec::new();
            match property {
                Property::AmalgamationFull => {
                    claim_trial(params, &mut rng, mutation, None, &mut found, &mut skipped)
                }
                Property::U2Equality => claim_trial(
                    params,
                    &mut rng,
                    mutation,
                    Some(&[Claim::U2Equality, Claim::UMinusUPrime]),
                    &mut found,
                    &mut skipped,
                ),
                Property::OrderLaws => order_trial(params, &mut rng, &mut found),
                Property::TwinLaws => twin_trial(params, &mut rng, &mut found),
                Property::TopologyOracle => topology_trial(&mut rng, &mut found),
                Property::KillerMove => killer_trial(params, &mut rng, &mut found),
            }
            for (detail, shrunk) in found {
                failures.push(FuzzFailure {
                    trial,
                    property: property.name().to_string(),
                    detail,
                    shrunk_points: shrunk.as_ref().map(|r| r.a_star().len()),
                    shrunk: shrunk.as_ref().map(RequestDoc::from),
                });
            }
        }
    }
    FuzzReport {
        trials: params.trials,
        properties: properties.iter().map(|p| p.name().to_string()).collect(),
        mutation: mutation.map(|h| h.name().to_string()),
        skipped,
        failures,
        wall_ms: start.elapsed().as_millis(),
    }
}

fn claim_trial(
    params: &GenParams,
    rng: &mut impl Rng,
    mutation: Option<MutationHook>,
    claims: Option<&[Claim]>,
    out: &mut Vec<(String, Option<AmalgamationRequest>)>,
    skipped: &mut u64,
) {
    let req = gen_twin_request(params, rng);
    let trace = match amalgamate(&req) {
        Ok(trace) => trace,
        Err(e) => {
            out.push((format!("construction failed: {e}"), None));
            return;
        }
    };
    match mutation {
        None => {
            let report = verify_amalgamation(&trace, &req);
            let relevant = claims.unwrap_or(&ALL_CLAIMS);
            for &claim in relevant {
                if report.holds(claim) {
                    continue;
                }
                let witness = report.outcome(claim).witness.clone().unwrap_or_default();
                let shrunk = shrink_request(&req, &mut |r| {
                    amalgamate(r)
                        .map(|t| !verify_amalgamation(&t, r).holds(claim))
                        .unwrap_or(false)
                })
                .unwrap_or_else(|_| req.clone());
                out.push((format!("claim {} failed: {witness}", claim.name()), Some(shrunk)));
            }
        }
        Some(hook) => {
            let mut mutated = trace.clone();
            if !hook.apply(&mut mutated, &req) {
                *skipped += 1;
                return;
            }
            let claim = hook.target();
            let report = verify_amalgamation(&mutated, &req);
            if report.holds(claim) {
                out.push((
                    format!("mutation {} escaped the {} checker", hook.name(), claim.name()),
                    None,
                ));
                return;
            }
            let witness = report.outcome(claim).witness.clone().unwrap_or_default();
            let shrunk = shrink_request(&req, &mut |r| match amalgamate(r) {
                Ok(t) => {
                    let mut t = t;
                    hook.apply(&mut t, r) && !verify_amalgamation(&t, r).holds(claim)
                }
                Err(_) => false,
            })
            .unwrap_or_else(|_| req.clone());
            out.push((
                format!("mutation {} detected by {}: {witness}", hook.name(), claim.name()),
                Some(shrunk),
            ));
        }
    }
}

fn fresh_point(p: &Condition) -> Option<u32> {
    (0..MAX_POINTS).find(|&x| !p.support().contains(x))
}

fn random_extension(p: &Condition, rng: &mut impl Rng) -> Condition {
    match rng.gen_range(0..3) {
        0 => match fresh_point(p) {
            Some(x) => p.add_point(x).expect("point is fresh"),
            None => p.deepen(),
        },
        1 => p.deepen(),
        _ => match fresh_point(p) {
            Some(x) => enriched_add(p, x, rng),
            None => p.deepen(),
        },
    }
}

fn order_trial(
    params: &GenParams,
    rng: &mut impl Rng,
    out: &mut Vec<(String, Option<AmalgamationRequest>)>,
) {
    let p = gen_condition(params, rng);
    if let Some(v) = p.first_violation() {
        out.push((format!("generated condition invalid: {v}"), None));
        return;
    }
    if let Some(f) = extension_failure(&p, &p) {
        out.push((format!("reflexivity failed: {f}"), None));
    }
    let q = random_extension(&p, rng);
    let r = random_extension(&q, rng);
    for (name, lo, hi) in [("q<=p", &p, &q), ("r<=q", &q, &r), ("r<=p", &p, &r)] {
        if let Some(f) = extension_failure(hi, lo) {
            out.push((format!("{name} failed: {f}"), None));
        }
    }
    for c in [&q, &r] {
        if let Some(v) = c.first_violation() {
            out.push((format!("extension step produced invalid condition: {v}"), None));
        }
    }
}

fn twin_trial(
    params: &GenParams,
    rng: &mut impl Rng,
    out: &mut Vec<(String, Option<AmalgamationRequest>)>,
) {
    let req = gen_twin_request(params, rng);
    let (p0, p1, cert) = (req.p0(), req.p1(), req.cert());
    match is_twin_pair(p1, p0) {
        Some(back) if back == cert.invert() => {}
        _ => out.push(("twin symmetry failed".to_string(), None)),
    }
    let a_star = req.a_star();
    for x in a_star.iter() {
        if cert.exchange(cert.exchange(x)) != x {
            out.push((format!("exchange not an involution at {x}"), None));
        }
        let smashed = cert.smash(x);
        if !p0.support().contains(smashed) {
            out.push((format!("smashing leaves A0 at {x}"), None));
        }
    }
    if canonicalize(p0) != canonicalize(p1) {
        out.push(("twins with different canonical keys".to_string(), None));
    }
    // Oracle on an arbitrary pair: canonical-key equality plus the
    // root-fixing order isomorphism characterises twins exactly.
    let c0 = gen_condition(params, rng);
    let c1 = gen_condition(params, rng);
    let direct = is_twin_pair(&c0, &c1).is_some();
    let via_keys = canonicalize(&c0) == canonicalize(&c1)
        && order_iso(&c0.support(), &c1.support()).is_some_and(|iso| {
            c0.support()
                .inter(&c1.support())
                .iter()
                .all(|d| iso[&d] == d)
        });
    if direct != via_keys {
        out.push((
            format!("canonical oracle disagrees with direct check: {direct} vs {via_keys}"),
            None,
        ));
    }
}

fn topology_trial(rng: &mut impl Rng, out: &mut Vec<(String, Option<AmalgamationRequest>)>) {
    let count = rng.gen_range(1..=3u32);
    let points: PointSet = (0..count).collect();
    let gens: Vec<PointSet> = (0..rng.gen_range(0..=4))
        .map(|_| {
            let mask = rng.gen_range(0..(1u32 << count));
            (0..count).filter(|i| mask & (1 << i) != 0).collect()
        })
        .collect();
    let space = generate_topology(points, &gens).expect("within the point cap");

    let mandatory: BTreeSet<PointSet> = space.minimal_neighborhoods().into_values().collect();
    let extras: Vec<PointSet> = space
        .opens()
        .iter()
        .filter(|o| !o.is_empty() && !mandatory.contains(o))
        .copied()
        .collect();
    let mut base = mandatory;
    if !extras.is_empty() && rng.gen_bool(0.5) {
        base.insert(*extras.choose(rng).unwrap());
    }
    let brute = brute_force_decomposition(&space, &base);
    match find_irreducible_decomposition(&space, &base) {
        Err(e) => out.push((format!("decomposition search errored: {e}"), None)),
        Ok(fast) => {
            if fast.is_some() != brute.is_some() {
                out.push((
                    format!(
                        "decomposition oracle mismatch: fast={} brute={}",
                        fast.is_some(),
                        brute.is_some()
                    ),
                    None,
                ));
            }
            for dec in fast.iter().chain(brute.iter()) {
                if let Err(e) = check_decomposition(&space, dec) {
                    out.push((format!("reported decomposition fails the checker: {e}"), None));
                }
            }
        }
    }

    let brute_base = brute_force_irreducible_base(&space);
    match find_irreducible_base(&space) {
        Err(e) => out.push((format!("base search errored: {e}"), None)),
        Ok(found) => {
            if found.is_some() != brute_base.is_some() {
                out.push((
                    format!(
                        "base oracle mismatch: fast={} brute={}",
                        found.is_some(),
                        brute_base.is_some()
                    ),
                    None,
                ));
            }
            for (_, dec) in found.iter().chain(brute_base.iter()) {
                if let Err(e) = check_decomposition(&space, dec) {
                    out.push((format!("reported base fails the checker: {e}"), None));
                }
            }
        }
    }

    if space.is_t0() {
        if let Err(e) = check_decomposition(&space, &minimal_decomposition(&space)) {
            out.push((format!("minimal decomposition rejected on a T0 space: {e}"), None));
        }
    }
}

fn killer_trial(
    params: &GenParams,
    rng: &mut impl Rng,
    out: &mut Vec<(String, Option<AmalgamationRequest>)>,
) {
    let side = rng.gen_range(1..=params.max_side_points.clamp(1, 4));
    let depth = rng.gen_range(2..=params.max_depth.max(2));
    let copies = rng.gen_range(2..=8u32);
    let base: Vec<u32> = (0..side as u32).collect();
    let proto = gen_condition_on(&base, depth, rng);
    let mark_rank = rng.gen_range(0..side as u32);
    let family: Vec<MarkedCondition> = (0..copies)
        .map(|t| {
            let offset = t * side as u32;
            let map: BTreeMap<u32, u32> = base.iter().map(|&x| (x, x + offset)).collect();
            MarkedCondition::new(relabel(&proto, &map), mark_rank + offset)
                .expect("mark is in the copy's support")
        })
        .collect();
    let k = rng.gen_range(0..depth - 1);
    let m = rng.gen_range(k + 1..depth);
    match kill_irreducibility_attempt(&family, k, m) {
        Ok(outcome) => {
            if let Some(v) = outcome.trace.p.first_violation() {
                out.push((format!("killer result invalid: {v}"), None));
            }
        }
        Err(e) => out.push((format!("killer move failed: {e}"), None)),
    }
}
