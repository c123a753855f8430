//! The extension order on conditions: grow a condition by add_point and
//! deepen, check the order laws, and show a failure witness.

use finbase::condition::{check_extension, extension_failure};
use finbase::fixtures::{fix_q, fix_t};

fn main() {
    let p = fix_t();
    let q = fix_q();

    println!("q <= p: {:?}", check_extension(&q, &p));
    println!("p <= q: {:?}", check_extension(&p, &q).unwrap().unwrap_err());

    let r = q.add_point(5).unwrap().deepen();
    println!("\ngrown support: {:?}, depth {}", r.support().to_vec(), r.depth());
    println!("r <= q: {}", extension_failure(&r, &q).is_none());
    println!("r <= p: {}", extension_failure(&r, &p).is_none());
    println!("reflexive: {}", extension_failure(&r, &r).is_none());
}
