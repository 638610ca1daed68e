//! Checks the harmonic steering sequence against its defining properties.

use cfp::solver::validate_steering_sequence;

fn main() {
    for (sigma, m) in [(0.5, 13), (0.9, 100), (1.5, 4)] {
        let r = validate_steering_sequence(sigma, m, 100_000);
        println!(
            "sigma = {sigma}, m = {m}: sum = {:.3}, lag sum = {:.4} (bound {:.3}), steering sequence: {}",
            r.partial_sum,
            r.lag_partial_sum,
            r.lag_bound,
            r.is_steering_sequence()
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
}
