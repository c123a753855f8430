//! Seeded simulation: build a descending chain, form its limit, check the
//! global invariants, and export a finite fragment as a topological space.

use finbase::set::PointSet;
use finbase::sim::{check_p3_global, export_fragment, run_simulation, SimulationConfig};

fn main() {
    let config = SimulationConfig {
        universe: 8,
        depth: 3,
        seed: 11,
        budget: 10_000,
        enrich: true,
    };
    let outcome = run_simulation(&config).unwrap();
    let limit = &outcome.structure;
    println!(
        "chain of {} members, {} steps, completed: {}",
        limit.chain.len(),
        outcome.steps,
        outcome.completed
    );
    println!("points: {:?}, depth: {}", limit.points.to_vec(), limit.depth);
    println!("global nesting check: {:?}", check_p3_global(limit));
    println!("unwitnessed cell intersections: {}", outcome.unmet.len());

    let subset: PointSet = (0..4).collect();
    let (space, family) = export_fragment(limit, subset).unwrap();
    println!("\nfragment on {:?}:", subset.to_vec());
    println!("  traced cells: {:?}", family.iter().map(|s| s.to_vec()).collect::<Vec<_>>());
    println!("  opens: {}", space.opens().len());
    println!("  T0: {}", space.is_t0());
}
