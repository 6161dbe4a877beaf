//! Shared inputs for the benchmarks.

use taustar_core::{expand_table, Fixture, PairedSample};

/// Deterministic tie-free sample of size `n` with mild positive dependence.
pub fn smooth_sample(n: usize) -> PairedSample {
    // Weyl sequence; no RNG needed for reproducible inputs.
    let xs: Vec<f64> = (0..n)
        .map(|i| (i as f64 * 0.618_033_988_75).fract())
        .collect();
    let ys: Vec<f64> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| 0.5 * x + 0.5 * (i as f64 * 0.414_213_562_37).fract())
        .collect();
    PairedSample::new(xs, ys).expect("finite values")
}

pub fn fixture_sample(f: Fixture) -> PairedSample {
    expand_table(&f.table().expect("tabulated fixture")).expect("nonempty table")
}
