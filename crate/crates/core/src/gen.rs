//! Seeded random instances.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! whose output is specified bit-for-bit and does not depend on the platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::instance::{rescale, Instance};

/// Distribution of the raw areas before rescaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Independent draws from the uniform distribution on `(0, 1]`.
    Uniform,
    /// `A_i ∝ q^i` times a uniform jitter in `[0.9, 1.1]`. `q` close to one
    /// gives slowly decreasing sequences, small `q` fast decreasing ones.
    Geometric { q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub family: Family,
    pub seed: u64,
    pub container: Rect,
    /// Apply the `[0.9, 1.1]` jitter to geometric areas.
    pub jitter: bool,
}

impl GenSpec {
    pub fn new(n: usize, family: Family, seed: u64, container: Rect) -> GenSpec {
        GenSpec {
            n,
            family,
            seed,
            container,
            jitter: true,
        }
    }
}

pub const JITTER_LOW: f64 = 0.9;
pub const JITTER_HIGH: f64 = 1.1;

/// Draws an instance whose areas sum to the container area.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    if spec.n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let raw: Vec<f64> = match spec.family {
        Family::Uniform => (0..spec.n).map(|_| 1.0 - rng.gen::<f64>()).collect(),
        Family::Geometric { q } => {
            if !(q > 0.0 && q <= 1.0) {
                return Err(Error::InvalidSpec(format!("q must lie in (0, 1], got {q}")));
            }
            (1..=spec.n)
                .map(|i| {
                    let jitter = if spec.jitter {
                        rng.gen_range(JITTER_LOW..=JITTER_HIGH)
                    } else {
                        1.0
                    };
                    q.powi(i as i32) * jitter
                })
                .collect()
        }
    };
    if let Some((index, &value)) = raw.iter().enumerate().find(|(_, a)| !a.is_normal()) {
        return Err(Error::InvalidSpec(format!(
            "area {index} underflows to {value}; use fewer areas or a larger q"
        )));
    }
    let areas = rescale(raw, spec.container.area());
    Instance::new(spec.container, areas, false)
}
