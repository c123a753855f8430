//! Validate conditions against the three axioms and show how the strict
//! reading of the nesting axiom changes a verdict.

use finbase::condition::Inclusion;
use finbase::fixtures::{fix_bad, fix_q, fix_t};

fn main() {
    for (name, cond) in [("one-point", fix_t()), ("two-point", fix_q())] {
        println!("{name}: valid = {}", cond.is_valid());
    }

    let bad = fix_bad();
    println!("\ncrossed pair, non-strict reading:");
    for v in bad.violations() {
        println!("  violation: {v}");
    }
    println!(
        "crossed pair, strict reading: {} violations",
        bad.violations_with(Inclusion::Strict).len()
    );
}
