//! Shared instance builders for the benchmark targets.

use stirred::config::{Configuration, StirringParams};
use stirred::rational::ratio;

/// The alternating period-2 row, the canonical hard instance family.
pub fn alternating(cells: usize) -> Configuration {
    Configuration::alternating(cells, 2).expect("period 2 divides an even cell count")
}

/// A reproducible well-stirred instance at kappa = 1/4, window 4.
pub fn stirred_instance(cells: usize, seed: u64) -> Configuration {
    let params = StirringParams::new(ratio(1, 4), 4).expect("valid parameters");
    Configuration::random_stirred(cells, &params, seed, 100_000).expect("feasible parameters")
}
