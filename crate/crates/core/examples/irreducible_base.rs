//! Irreducible bases of finite spaces: the two-point examples, plus a tally
//! over every labeled topology on three points.

use finbase::fixtures::sierpinski_generators;
use finbase::set::PointSet;
use finbase::topology::{all_topologies, find_irreducible_base, generate_topology};

fn main() {
    let (points, gens) = sierpinski_generators();
    let space = generate_topology(points, &gens).unwrap();
    match find_irreducible_base(&space).unwrap() {
        Some((base, dec)) => {
            println!("two-point chain space: irreducible base found");
            println!("  base: {:?}", base.iter().map(|s| s.to_vec()).collect::<Vec<_>>());
            println!("  owners: {:?}", dec.owners);
        }
        None => println!("two-point chain space: none"),
    }

    let indiscrete = generate_topology([0, 1].into_iter().collect(), &[]).unwrap();
    println!(
        "two-point indiscrete space: {:?}",
        find_irreducible_base(&indiscrete).unwrap().map(|_| "found")
    );

    let three: PointSet = (0..3).collect();
    let spaces = all_topologies(three);
    let with_base = spaces
        .iter()
        .filter(|s| find_irreducible_base(s).unwrap().is_some())
        .count();
    let t0 = spaces.iter().filter(|s| s.is_t0()).count();
    println!(
        "\n{} topologies on three points: {} T0, {} with an irreducible base",
        spaces.len(),
        t0,
        with_base
    );
}
