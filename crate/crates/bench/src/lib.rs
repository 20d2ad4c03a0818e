//! Shared fixtures for the criterion benchmarks.

use spinstar::{model_rng, sample_random_model, ModelSpec};

/// A deterministic random bath of `n` spins at inverse temperature `beta`.
pub fn bath(n: usize, beta: f64) -> ModelSpec {
    let mut rng = model_rng(0xBEEF, 0);
    sample_random_model(n, 1.0, beta, &mut rng).expect("valid model")
}
