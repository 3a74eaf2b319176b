//! Shared fixtures for the criterion benchmarks.

use rectpart_core::{generate, Family, GenSpec, Instance, Rect};

/// Uniform instance with `n` areas in the unit square.
pub fn uniform_instance(n: usize, seed: u64) -> Instance {
    let container = Rect::with_size(1.0, 1.0).expect("unit square");
    generate(&GenSpec::new(n, Family::Uniform, seed, container)).expect("valid spec")
}

/// Geometric instance with `n` areas in the unit square.
pub fn geometric_instance(n: usize, q: f64, seed: u64) -> Instance {
    let container = Rect::with_size(1.0, 1.0).expect("unit square");
    generate(&GenSpec::new(n, Family::Geometric { q }, seed, container)).expect("valid spec")
}
