//! The amalgamation of a twin pair: the explicit two-step construction of a
//! common extension realizing the containment pattern
//! `xi0 ∈ U(xi1, m) ⊆ U(xi1, k) ⊆ U(xi0, k)`, together with a checker that
//! re-verifies every claim of the construction by exhaustive quantification
//! over the finite trace.
//!
//! The construction: over `A* = A0 ∪ A1` a fresh block `B` of one new point
//! per pair `(alpha, i) ∈ A* x n` is chosen, each such point seeded as the
//! singleton witness of its cell. `U'` unions the two parent tables along the
//! exchange function and embeds the derived-inclusion tables `V`/`W` as
//! block points; the final table then enlarges exactly the rows whose parent
//! cell absorbs `U0(xi0, k)`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::condition::{extension_failure, Condition, Level};
use crate::set::{PointSet, MAX_POINTS};
use crate::twins::{is_twin_pair, support_order_holds, TwinCertificate};

/// One side of the pair.
pub type Side = usize;

/// A table of derived index-pair sets, keyed by `(beta, j)`.
pub type PairTable = BTreeMap<(u32, Level), BTreeSet<(u32, Level)>>;

/// A validated amalgamation input: twins with ordered supports, a designated
/// `xi0` private to the first side, and levels `k < m < n`.
#[derive(Clone, Debug)]
pub struct AmalgamationRequest {
    p0: Condition,
    p1: Condition,
    cert: TwinCertificate,
    xi0: u32,
    k: Level,
    m: Level,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum RequestError {
    #[error("condition p{side} is invalid: {violation}")]
    InvalidCondition {
        side: Side,
        violation: crate::condition::Violation,
    },
    #[error("the conditions are not twins")]
    NotTwins,
    #[error("support order A0∩A1 < A0∖A1 < A1∖A0 fails")]
    SupportOrder,
    #[error("levels must satisfy k < m < n, got k={k}, m={m}, n={n}")]
    LevelOrder { k: Level, m: Level, n: usize },
    #[error("xi0={xi0} is not in A0∖A1")]
    Xi0NotPrivate { xi0: u32 },
}

impl AmalgamationRequest {
    pub fn new(
        p0: Condition,
        p1: Condition,
        xi0: u32,
        k: Level,
        m: Level,
    ) -> Result<Self, RequestError> {
        if let Some(violation) = p0.first_violation() {
            return Err(RequestError::InvalidCondition { side: 0, violation });
        }
        if let Some(violation) = p1.first_violation() {
            return Err(RequestError::InvalidCondition { side: 1, violation });
        }
        let cert = is_twin_pair(&p0, &p1).ok_or(RequestError::NotTwins)?;
        if !support_order_holds(&p0.support(), &p1.support()) {
            return Err(RequestError::SupportOrder);
        }
        let n = p0.depth();
        if !(k < m && m < n) {
            return Err(RequestError::LevelOrder { k, m, n });
        }
        if !p0.support().diff(&p1.support()).contains(xi0) {
            return Err(RequestError::Xi0NotPrivate { xi0 });
        }
        Ok(AmalgamationRequest {
            p0,
            p1,
            cert,
            xi0,
            k,
            m,
        })
    }

    pub fn side(&self, eps: Side) -> &Condition {
        match eps {
            0 => &self.p0,
            1 => &self.p1,
            _ => panic!("side must be 0 or 1"),
        }
    }

    pub fn p0(&self) -> &Condition {
        &self.p0
    }

    pub fn p1(&self) -> &Condition {
        &self.p1
    }

    pub fn cert(&self) -> &TwinCertificate {
        &self.cert
    }

    pub fn xi0(&self) -> u32 {
        self.xi0
    }

    /// `xi1 = sigma(xi0)`.
    pub fn xi1(&self) -> u32 {
        self.cert.sigma(self.xi0)
    }

    pub fn k(&self) -> Level {
        self.k
    }

    pub fn m(&self) -> Level {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.p0.depth()
    }

    pub fn a_star(&self) -> PointSet {
        self.p0.support().union(&self.p1.support())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum AmalgamationError {
    #[error("fresh block needs points up to {needed}, beyond the capacity {max}", max = MAX_POINTS)]
    Capacity { needed: u64 },
    #[error(
        "U'({delta},{level}) differs between the two sides: {side0:?} vs {side1:?}"
    )]
    WellDefinedness {
        delta: u32,
        level: Level,
        side0: PointSet,
        side1: PointSet,
    },
}

/// Enumeration of the fresh block: `rho[(alpha, i)]` is the new point paired
/// with `(alpha, i)`.
pub type BlockMap = BTreeMap<(u32, Level), u32>;

/// Chooses the fresh block above `A*`: the `|A*|·n` smallest naturals
/// strictly above `max(A*)`, with the bijection `rho` enumerating `A* x n`
/// lexicographically onto `B` in increasing order.
pub fn fresh_block(
    a_star: &PointSet,
    n: usize,
) -> Result<(PointSet, BlockMap), AmalgamationError> {
    let count = a_star.len() * n;
    let start = a_star.last().map_or(0, |m| m + 1);
    let needed = start as u64 + count as u64;
    if needed > MAX_POINTS as u64 {
        return Err(AmalgamationError::Capacity { needed: needed - 1 });
    }
    let mut rho = BTreeMap::new();
    let mut next = start;
    for alpha in a_star.iter() {
        for i in 0..n {
            rho.insert((alpha, i), next);
            next += 1;
        }
    }
    let block = (start..next).collect();
    Ok((block, rho))
}

/// `V_eps(beta, j)`: the pairs of side `eps` whose cell is included in
/// `U_eps(beta, j)`.
pub fn compute_v(p_eps: &Condition, beta: u32, j: Level) -> BTreeSet<(u32, Level)> {
    let target = p_eps.cell(beta, j);
    p_eps
        .index_pairs()
        .filter(|&(alpha, i)| p_eps.cell(alpha, i).is_subset(&target))
        .collect()
}

/// `W_eps(beta, j)`: the pairs of the opposite side whose inclusion in
/// `U_eps(beta, j)` is forced through a root pair `(gamma, l) ∈ D x n`.
pub fn compute_w(
    p0: &Condition,
    p1: &Condition,
    cert: &TwinCertificate,
    eps: Side,
    beta: u32,
    j: Level,
) -> BTreeSet<(u32, Level)> {
    let (own, other) = match eps {
        0 => (p0, p1),
        1 => (p1, p0),
        _ => panic!("side must be 0 or 1"),
    };
    let root = cert.root();
    let n = own.depth();
    let target = own.cell(beta, j);
    let witnesses: Vec<(u32, Level)> = root
        .iter()
        .flat_map(|gamma| (0..n).map(move |l| (gamma, l)))
        .filter(|&(gamma, l)| own.cell(gamma, l).is_subset(&target))
        .collect();
    other
        .index_pairs()
        .filter(|&(alpha, i)| {
            let cell = other.cell(alpha, i);
            witnesses
                .iter()
                .any(|&(gamma, l)| cell.is_subset(&other.cell(gamma, l)))
        })
        .collect()
}

/// The first construction step: `p' = <A* ∪ B, n, U'>` with the `V`/`W`
/// tables that define it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinimalAmalgam {
    pub a_star: PointSet,
    pub block: PointSet,
    pub rho: BlockMap,
    pub v: [PairTable; 2],
    pub w: [PairTable; 2],
    pub p_prime: Condition,
}

impl MinimalAmalgam {
    pub fn rho_image(&self, pairs: &BTreeSet<(u32, Level)>) -> PointSet {
        pairs.iter().map(|pair| self.rho[pair]).collect()
    }
}

/// Builds `U'` on `(A* ∪ B) x n`. Rows of root points are computed from both
/// sides and must agree; a disagreement would falsify the construction's
/// well-definedness remark and is reported as a hard error.
pub fn build_uprime(req: &AmalgamationRequest) -> Result<MinimalAmalgam, AmalgamationError> {
    let n = req.depth();
    let a_star = req.a_star();
    let (block, rho) = fresh_block(&a_star, n)?;
    let cert = req.cert();
    let root = cert.root();

    let mut v: [PairTable; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut w: [PairTable; 2] = [BTreeMap::new(), BTreeMap::new()];
    for eps in 0..2 {
        for (beta, j) in req.side(eps).index_pairs() {
            v[eps].insert((beta, j), compute_v(req.side(eps), beta, j));
            w[eps].insert(
                (beta, j),
                compute_w(req.p0(), req.p1(), cert, eps, beta, j),
            );
        }
    }

    let row = |eps: Side, beta: u32, j: Level| -> PointSet {
        let mirror = cert.exchange(beta);
        let mut out = req.side(eps).cell(beta, j);
        out = out.union(&req.side(1 - eps).cell(mirror, j));
        for pair in v[eps][&(beta, j)].iter().chain(w[eps][&(beta, j)].iter()) {
            out.insert(rho[pair]);
        }
        out
    };

    let mut cells: BTreeMap<(u32, Level), PointSet> = BTreeMap::new();
    for beta in a_star.iter() {
        let eps = if req.p0().support().contains(beta) { 0 } else { 1 };
        for j in 0..n {
            let value = row(eps, beta, j);
            if root.contains(beta) {
                let other = row(1, beta, j);
                if value != other {
                    return Err(AmalgamationError::WellDefinedness {
                        delta: beta,
                        level: j,
                        side0: value,
                        side1: other,
                    });
                }
            }
            cells.insert((beta, j), value);
        }
    }
    for &b in rho.values() {
        for j in 0..n {
            cells.insert((b, j), PointSet::singleton(b));
        }
    }

    let p_prime = Condition::new(a_star.union(&block), n, cells)
        .expect("U' is total over (A* ∪ B) x n by construction");
    Ok(MinimalAmalgam {
        a_star,
        block,
        rho,
        v,
        w,
        p_prime,
    })
}

/// The second step: rows `(z, j)` with `z ∈ A0` and
/// `U0(xi0, k) ⊆ U0(z, j)` absorb `U'(xi1, k)`; all other rows (including
/// every block and `A1`-only row, where `U0` is undefined) are untouched.
pub fn apply_modification(min: &MinimalAmalgam, req: &AmalgamationRequest) -> Condition {
    let guard_cell = req.p0().cell(req.xi0(), req.k());
    let boost = min.p_prime.cell(req.xi1(), req.k());
    let mut cells = BTreeMap::new();
    for ((z, j), value) in min.p_prime.rows() {
        let modified = req
            .p0()
            .try_cell(z, j)
            .is_some_and(|u0| guard_cell.is_subset(&u0));
        let value = if modified { value.union(&boost) } else { value };
        cells.insert((z, j), value);
    }
    Condition::new(min.p_prime.support(), min.p_prime.depth(), cells)
        .expect("modification preserves the table domain")
}

/// Every intermediate object of the construction, plus the result `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmalgamationTrace {
    pub a_star: PointSet,
    pub block: PointSet,
    pub rho: BlockMap,
    pub v: [PairTable; 2],
    pub w: [PairTable; 2],
    pub p_prime: Condition,
    pub p: Condition,
}

/// Runs the full construction.
pub fn amalgamate(req: &AmalgamationRequest) -> Result<AmalgamationTrace, AmalgamationError> {
    let min = build_uprime(req)?;
    let p = apply_modification(&min, req);
    Ok(AmalgamationTrace {
        a_star: min.a_star,
        block: min.block,
        rho: min.rho,
        v: min.v,
        w: min.w,
        p_prime: min.p_prime,
        p,
    })
}

/// A claim of the construction, checkable against a (possibly mutated) trace.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Claim {
    /// `alpha ∈ U'(beta, j) ∩ A*` implies `smash(alpha) ∈ U0(smash(beta), j)`.
    Push,
    /// The same for block points `rho(alpha, i) ∈ U'(beta, j)`.
    Push2,
    /// The same for block points of the final table `U`.
    Push3,
    /// `p' ∈ P`.
    PPrimeValid,
    /// `p' <= p0, p1`.
    PPrimeExtends,
    /// `p ∈ P`.
    PValid,
    /// `p <= p0, p1`.
    PExtends,
    /// `xi0 ∈ U(xi1, m) ⊆ U(xi1, k) ⊆ U(xi0, k)`.
    Star,
    /// `U(z, j) ∖ U'(z, j) ⊆ rho[V1(xi1, k)]` for every row.
    UMinusUPrime,
    /// The final table equals the variant built with `rho[V1(xi1, k)]` in
    /// place of `U'(xi1, k)`.
    U2Equality,
}

pub const ALL_CLAIMS: [Claim; 10] = [
    Claim::Push,
    Claim::Push2,
    Claim::Push3,
    Claim::PPrimeValid,
    Claim::PPrimeExtends,
    Claim::PValid,
    Claim::PExtends,
    Claim::Star,
    Claim::UMinusUPrime,
    Claim::U2Equality,
];

impl Claim {
    pub fn name(&self) -> &'static str {
        match self {
            Claim::Push => "push",
            Claim::Push2 => "push2",
            Claim::Push3 => "push3",
            Claim::PPrimeValid => "p-prime-in-P",
            Claim::PPrimeExtends => "p-prime-extends",
            Claim::PValid => "p-in-P",
            Claim::PExtends => "p-extends",
            Claim::Star => "star",
            Claim::UMinusUPrime => "u-minus-uprime",
            Claim::U2Equality => "u2-equality",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClaimOutcome {
    pub holds: bool,
    pub witness: Option<String>,
}

impl ClaimOutcome {
    fn ok() -> Self {
        ClaimOutcome {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        ClaimOutcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Result of re-checking every claim against a trace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClaimReport {
    outcomes: BTreeMap<Claim, ClaimOutcome>,
    /// Do the block points of each `U'`-row all come from
    /// `V_eps(beta,j) ∪ W_eps(beta,j)` (the reading the construction uses)?
    pub push2_same_side_reading: bool,
    /// The alternative reading `V_eps(beta,j) ∪ W_{1-eps}(beta,j)` that the
    /// claim's case split mentions.
    pub push2_opposite_reading: bool,
}

impl ClaimReport {
    pub fn outcome(&self, claim: Claim) -> &ClaimOutcome {
        &self.outcomes[&claim]
    }

    pub fn holds(&self, claim: Claim) -> bool {
        self.outcomes[&claim].holds
    }

    pub fn all_hold(&self) -> bool {
        self.outcomes.values().all(|o| o.holds)
    }

    pub fn failing(&self) -> Vec<Claim> {
        self.outcomes
            .iter()
            .filter(|(_, o)| !o.holds)
            .map(|(&c, _)| c)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Claim, &ClaimOutcome)> {
        self.outcomes.iter().map(|(&c, o)| (c, o))
    }
}

fn check_push_style(
    table: &Condition,
    req: &AmalgamationRequest,
    rho_inv: &BTreeMap<u32, (u32, Level)>,
    blocks_only: bool,
) -> ClaimOutcome {
    let cert = req.cert();
    let a_star = req.p0().support().union(&req.p1().support());
    for beta in a_star.iter() {
        for j in 0..table.depth() {
            let Some(cell) = table.try_cell(beta, j) else {
                continue;
            };
            for x in cell.iter() {
                let alpha = if blocks_only {
                    match rho_inv.get(&x) {
                        Some(&(alpha, _)) => alpha,
                        None => continue,
                    }
                } else {
                    if !a_star.contains(x) {
                        continue;
                    }
                    x
                };
                let target = req.p0().cell(cert.smash(beta), j);
                if !target.contains(cert.smash(alpha)) {
                    return ClaimOutcome::fail(format!(
                        "member {x} of cell ({beta},{j}) pushes to {} outside U0({},{j})",
                        cert.smash(alpha),
                        cert.smash(beta)
                    ));
                }
            }
        }
    }
    ClaimOutcome::ok()
}

fn check_validity(cond: &Condition) -> ClaimOutcome {
    match cond.first_violation() {
        None => ClaimOutcome::ok(),
        Some(v) => ClaimOutcome::fail(v.to_string()),
    }
}

fn check_extends_both(cond: &Condition, req: &AmalgamationRequest) -> ClaimOutcome {
    for eps in 0..2 {
        if let Some(f) = extension_failure(cond, req.side(eps)) {
            return ClaimOutcome::fail(format!("against p{eps}: {f}"));
        }
    }
    ClaimOutcome::ok()
}

/// Re-checks every claim of the construction against `trace`, by exhaustive
/// quantification over its finite domains. The trace may have been mutated;
/// failures are report entries, never errors.
pub fn verify_amalgamation(trace: &AmalgamationTrace, req: &AmalgamationRequest) -> ClaimReport {
    let rho_inv: BTreeMap<u32, (u32, Level)> =
        trace.rho.iter().map(|(&pair, &b)| (b, pair)).collect();
    let mut outcomes = BTreeMap::new();

    outcomes.insert(
        Claim::Push,
        check_push_style(&trace.p_prime, req, &rho_inv, false),
    );
    outcomes.insert(
        Claim::Push2,
        check_push_style(&trace.p_prime, req, &rho_inv, true),
    );
    outcomes.insert(Claim::Push3, check_push_style(&trace.p, req, &rho_inv, true));
    outcomes.insert(Claim::PPrimeValid, check_validity(&trace.p_prime));
    outcomes.insert(Claim::PPrimeExtends, check_extends_both(&trace.p_prime, req));
    outcomes.insert(Claim::PValid, check_validity(&trace.p));
    outcomes.insert(Claim::PExtends, check_extends_both(&trace.p, req));

    let star = {
        let xi0 = req.xi0();
        let xi1 = req.xi1();
        let um = trace.p.try_cell(xi1, req.m());
        let uk = trace.p.try_cell(xi1, req.k());
        let uk0 = trace.p.try_cell(xi0, req.k());
        match (um, uk, uk0) {
            (Some(um), Some(uk), Some(uk0)) => {
                if !um.contains(xi0) {
                    ClaimOutcome::fail(format!("xi0={xi0} not in U(xi1={xi1}, m={})", req.m()))
                } else if !um.is_subset(&uk) {
                    ClaimOutcome::fail(format!("U(xi1,m) not included in U(xi1,k={})", req.k()))
                } else if !uk.is_subset(&uk0) {
                    ClaimOutcome::fail("U(xi1,k) not included in U(xi0,k)".to_string())
                } else {
                    ClaimOutcome::ok()
                }
            }
            _ => ClaimOutcome::fail("a cell named by (*) is missing".to_string()),
        }
    };
    outcomes.insert(Claim::Star, star);

    // rho-image of V1(xi1, k), recomputed from the request.
    let v1_image: PointSet = compute_v(req.p1(), req.xi1(), req.k())
        .iter()
        .map(|pair| trace.rho[pair])
        .collect();

    let mut u_minus = ClaimOutcome::ok();
    for ((z, j), value) in trace.p.rows() {
        let prime = trace
            .p_prime
            .try_cell(z, j)
            .unwrap_or(PointSet::EMPTY);
        let extra = value.diff(&prime);
        if !extra.is_subset(&v1_image) {
            u_minus = ClaimOutcome::fail(format!(
                "U({z},{j}) ∖ U'({z},{j}) = {extra:?} escapes rho[V1(xi1,k)]"
            ));
            break;
        }
    }
    outcomes.insert(Claim::UMinusUPrime, u_minus);

    let guard_cell = req.p0().cell(req.xi0(), req.k());
    let mut u2 = ClaimOutcome::ok();
    for ((z, j), value) in trace.p.rows() {
        let prime = trace
            .p_prime
            .try_cell(z, j)
            .unwrap_or(PointSet::EMPTY);
        let modified = req
            .p0()
            .try_cell(z, j)
            .is_some_and(|u0| guard_cell.is_subset(&u0));
        let expected = if modified {
            prime.union(&v1_image)
        } else {
            prime
        };
        if value != expected {
            u2 = ClaimOutcome::fail(format!(
                "U({z},{j}) = {value:?}, variant gives {expected:?}"
            ));
            break;
        }
    }
    outcomes.insert(Claim::U2Equality, u2);

    // Which reading of the claim's case split covers the block points?
    let mut same_side = true;
    let mut opposite = true;
    let a_star = &trace.a_star;
    for beta in a_star.iter() {
        let eps: Side = if req.p0().support().contains(beta) { 0 } else { 1 };
        for j in 0..trace.p_prime.depth() {
            let Some(cell) = trace.p_prime.try_cell(beta, j) else {
                continue;
            };
            for x in cell.iter() {
                let Some(&pair) = rho_inv.get(&x) else {
                    continue;
                };
                let in_v = trace.v[eps]
                    .get(&(beta, j))
                    .is_some_and(|s| s.contains(&pair));
                let in_w_same = trace.w[eps]
                    .get(&(beta, j))
                    .is_some_and(|s| s.contains(&pair));
                let in_w_opp = trace.w[1 - eps]
                    .get(&(beta, j))
                    .is_some_and(|s| s.contains(&pair));
                same_side &= in_v || in_w_same;
                opposite &= in_v || in_w_opp;
            }
        }
    }

    ClaimReport {
        outcomes,
        push2_same_side_reading: same_side,
        push2_opposite_reading: opposite,
    }
}

/// Builds the request for the shared twin-pair fixture and amalgamates it.
pub fn amalgamate_pair(
    p0: Condition,
    p1: Condition,
    xi0: u32,
    k: Level,
    m: Level,
) -> Result<(AmalgamationRequest, AmalgamationTrace), AmalgamationFailure> {
    let req = AmalgamationRequest::new(p0, p1, xi0, k, m)?;
    let trace = amalgamate(&req)?;
    Ok((req, trace))
}

/// Either the hypothesis is rejected or the construction itself fails.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum AmalgamationFailure {
    #[error(transparent)]
    Request(#[from] RequestError),
    #[error(transparent)]
    Construction(#[from] AmalgamationError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn pair_request() -> AmalgamationRequest {
        AmalgamationRequest::new(fix_pair_p0(), fix_pair_p1(), 0, 0, 1).unwrap()
    }

    fn root_request() -> AmalgamationRequest {
        AmalgamationRequest::new(fix_root_p0(), fix_root_p1(), 1, 0, 1).unwrap()
    }

    #[test]
    fn fresh_block_examples() {
        let a: PointSet = [0, 1].into_iter().collect();
        let (b, rho) = fresh_block(&a, 2).unwrap();
        assert_eq!(b.to_vec(), vec![2, 3, 4, 5]);
        assert_eq!(rho[&(0, 0)], 2);
        assert_eq!(rho[&(0, 1)], 3);
        assert_eq!(rho[&(1, 0)], 4);
        assert_eq!(rho[&(1, 1)], 5);

        let (b, rho) = fresh_block(&PointSet::singleton(7), 1).unwrap();
        assert_eq!(b.to_vec(), vec![8]);
        assert_eq!(rho[&(7, 0)], 8);

        let (b, rho) = fresh_block(&PointSet::EMPTY, 3).unwrap();
        assert!(b.is_empty());
        assert!(rho.is_empty());
    }

    #[test]
    fn compute_v_examples() {
        let pairs: BTreeSet<_> = [(0, 0), (0, 1)].into_iter().collect();
        assert_eq!(compute_v(&fix_pair_p0(), 0, 0), pairs);

        let all: BTreeSet<_> = [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect();
        assert_eq!(compute_v(&fix_root_p0(), 1, 0), all);

        // (beta, j) itself and all deeper levels always belong.
        let v = compute_v(&fix_root_p0(), 0, 0);
        assert!(v.contains(&(0, 0)) && v.contains(&(0, 1)));
    }

    #[test]
    fn compute_w_examples() {
        let req = pair_request();
        for eps in 0..2 {
            for (beta, j) in req.side(eps).index_pairs() {
                assert!(compute_w(req.p0(), req.p1(), req.cert(), eps, beta, j).is_empty());
            }
        }

        let req = root_request();
        let expected: BTreeSet<_> = [(0, 0), (0, 1)].into_iter().collect();
        assert_eq!(
            compute_w(req.p0(), req.p1(), req.cert(), 0, 1, 0),
            expected
        );
        assert_eq!(
            compute_w(req.p0(), req.p1(), req.cert(), 0, 0, 0),
            expected
        );
    }

    #[test]
    fn uprime_on_the_twin_pair() {
        let min = build_uprime(&pair_request()).unwrap();
        let u0: PointSet = [0, 1, 2, 3].into_iter().collect();
        let u1: PointSet = [0, 1, 4, 5].into_iter().collect();
        for j in 0..2 {
            assert_eq!(min.p_prime.cell(0, j), u0);
            assert_eq!(min.p_prime.cell(1, j), u1);
        }
        for b in min.block.iter() {
            for j in 0..2 {
                assert_eq!(min.p_prime.cell(b, j), PointSet::singleton(b));
            }
        }
    }

    #[test]
    fn uprime_well_defined_on_root() {
        // Root rows computed from both sides agree; build_uprime succeeds.
        let min = build_uprime(&root_request()).unwrap();
        // Both readings give {0} plus the rho-images of {(0,0),(0,1)}.
        let expected: PointSet = [0, min.rho[&(0, 0)], min.rho[&(0, 1)]]
            .into_iter()
            .collect();
        assert_eq!(min.p_prime.cell(0, 0), expected);
    }

    #[test]
    fn modification_on_the_twin_pair() {
        let req = pair_request();
        let trace = amalgamate(&req).unwrap();
        assert_eq!(trace.p, fix_amalg());
        // z = 1 lies in A1 only, so its rows take the otherwise-branch.
        assert_eq!(trace.p.cell(1, 0), trace.p_prime.cell(1, 0));
        // Block rows stay singletons.
        for b in trace.block.iter() {
            assert_eq!(trace.p.cell(b, 0), PointSet::singleton(b));
        }
    }

    #[test]
    fn level_order_rejected() {
        assert_eq!(
            AmalgamationRequest::new(fix_pair_p0(), fix_pair_p1(), 0, 1, 1).unwrap_err(),
            RequestError::LevelOrder { k: 1, m: 1, n: 2 }
        );
    }

    #[test]
    fn root_amalgam_passes_all_claims() {
        let req = root_request();
        let trace = amalgamate(&req).unwrap();
        let report = verify_amalgamation(&trace, &req);
        assert!(report.all_hold(), "failing: {:?}", report.failing());
    }

    #[test]
    fn golden_trace_passes_all_claims() {
        let req = pair_request();
        let trace = amalgamate(&req).unwrap();
        let report = verify_amalgamation(&trace, &req);
        assert!(report.all_hold(), "failing: {:?}", report.failing());
        assert!(report.push2_same_side_reading);
    }

    #[test]
    fn mutated_star_is_flagged() {
        let req = pair_request();
        let mut trace = amalgamate(&req).unwrap();
        let mut cell = trace.p.cell(1, 1);
        cell.remove(0);
        trace.p.set_cell(1, 1, cell);
        let report = verify_amalgamation(&trace, &req);
        assert!(!report.holds(Claim::Star));
    }

    #[test]
    fn mutated_u2_is_flagged() {
        let req = pair_request();
        let mut trace = amalgamate(&req).unwrap();
        let mut cell = trace.p.cell(0, 0);
        cell.remove(4);
        trace.p.set_cell(0, 0, cell);
        let report = verify_amalgamation(&trace, &req);
        assert!(!report.holds(Claim::U2Equality));
    }
}
