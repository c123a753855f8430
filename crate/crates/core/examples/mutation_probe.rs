//! Negative controls: mutate an honest amalgamation trace once per claim and
//! confirm the matched checker flags it, then shrink the witness.

use finbase::amalgamation::{amalgamate, verify_amalgamation};
use finbase::verifier::{gen_twin_request, shrink_request, GenParams, ALL_HOOKS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let params = GenParams {
        max_side_points: 4,
        max_depth: 3,
        universe: 32,
        seed: 9,
        trials: 0,
    };
    for hook in ALL_HOOKS {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        // Scan trials until the hook finds something to edit.
        let mut shown = false;
        for _ in 0..500 {
            let req = gen_twin_request(&params, &mut rng);
            let Ok(mut trace) = amalgamate(&req) else { continue };
            if !hook.apply(&mut trace, &req) {
                continue;
            }
            let report = verify_amalgamation(&trace, &req);
            let claim = hook.target();
            let detected = !report.holds(claim);
            let shrunk = shrink_request(&req, &mut |r| match amalgamate(r) {
                Ok(mut t) => hook.apply(&mut t, r) && !verify_amalgamation(&t, r).holds(claim),
                Err(_) => false,
            });
            println!(
                "{:<24} -> {:<16} detected = {detected}, shrunk witness = {:?} points",
                hook.name(),
                claim.name(),
                shrunk.map(|r| r.a_star().len())
            );
            shown = true;
            break;
        }
        if !shown {
            println!("{:<24} never applicable in 500 trials", hook.name());
        }
    }
}
