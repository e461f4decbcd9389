//! Shared fixtures for the benchmarks.

use spinboson::{Complex64, ModelParams};

/// Parameters of the dissipative reference point (Δ = ω0 = 1, g = 0.3,
/// κ = 0.02, ωc = 10, T = 0.1).
pub fn reference_params() -> ModelParams {
    ModelParams::new(1.0, 1.0, Complex64::new(0.3, 0.0), 0.02, 10.0, 0.1)
        .expect("reference parameters are valid")
}
