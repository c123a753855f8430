//! Run the full amalgamation construction on the disjoint twin pair and
//! re-check every claim against the trace.

use finbase::amalgamation::{amalgamate, verify_amalgamation, AmalgamationRequest};
use finbase::fixtures::{fix_amalg, fix_pair_p0, fix_pair_p1};

fn main() {
    let req = AmalgamationRequest::new(fix_pair_p0(), fix_pair_p1(), 0, 0, 1).unwrap();
    let trace = amalgamate(&req).unwrap();

    println!("A* = {:?}", trace.a_star.to_vec());
    println!("B  = {:?}", trace.block.to_vec());
    println!("rho = {:?}", trace.rho);
    for ((alpha, i), value) in trace.p_prime.rows() {
        println!("U'({alpha},{i}) = {:?}", value.to_vec());
    }
    for ((alpha, i), value) in trace.p.rows() {
        println!("U({alpha},{i}) = {:?}", value.to_vec());
    }
    println!("matches the worked-out table: {}", trace.p == fix_amalg());

    let report = verify_amalgamation(&trace, &req);
    for (claim, outcome) in report.iter() {
        println!("claim {:<16} holds = {}", claim.name(), outcome.holds);
    }
}
