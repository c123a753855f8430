//! Detect twins, print the pairing function with its smashing and exchange
//! variants, and extract an amalgamable pair from a marked family.

use finbase::fixtures::{fix_pair_p0, fix_pair_p1, fix_root_p0, fix_root_p1};
use finbase::twins::{canonicalize, find_amalgamable_pair, is_twin_pair, MarkedCondition};

fn main() {
    let (p0, p1) = (fix_root_p0(), fix_root_p1());
    let cert = is_twin_pair(&p0, &p1).expect("rooted twins");
    println!("root: {:?}", cert.root().to_vec());
    println!("sigma: {:?}", cert.sigma_map());
    println!("smash: {:?}", cert.smash_map());
    println!("exchange: {:?}", cert.exchange_map());
    println!("same canonical key: {}", canonicalize(&p0) == canonicalize(&p1));

    let family = vec![
        MarkedCondition::new(fix_pair_p0(), 0).unwrap(),
        MarkedCondition::new(fix_pair_p1(), 1).unwrap(),
    ];
    let ((i, j), cert) = find_amalgamable_pair(&family).expect("the pair qualifies");
    println!("\namalgamable pair: #{i} with #{j}, sigma(0) = {}", cert.sigma(0));
}
