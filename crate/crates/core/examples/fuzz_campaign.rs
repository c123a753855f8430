//! A short randomized campaign over every property family.

use finbase::verifier::{run_fuzz, GenParams, ALL_PROPERTIES};

fn main() {
    let params = GenParams {
        max_side_points: 5,
        max_depth: 4,
        universe: 48,
        seed: 2024,
        trials: 200,
    };
    for property in ALL_PROPERTIES {
        let report = run_fuzz(&params, &[property], None);
        println!(
            "{:<18} {} trials, {} failures, {} ms",
            property.name(),
            report.trials,
            report.failures.len(),
            report.wall_ms
        );
        for f in report.failures.iter().take(3) {
            println!("  trial {}: {}", f.trial, f.detail);
        }
    }
}
