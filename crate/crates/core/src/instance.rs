use crate::error::{Error, Result};
use crate::geometry::Rect;

/// Relative tolerance on `|sum(areas) - area(container)|`.
pub const AREA_REL_TOL: f64 = 1e-9;

/// A container rectangle and the target areas of its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    container: Rect,
    areas: Vec<f64>,
}

impl Instance {
    /// Validates the areas against the container.
    ///
    /// With `normalize` the areas are rescaled so that they sum to the
    /// container area; without it a mismatch beyond [`AREA_REL_TOL`] is an
    /// error.
    pub fn new(container: Rect, areas: Vec<f64>, normalize: bool) -> Result<Instance> {
        if areas.is_empty() {
            return Err(Error::EmptyAreas);
        }
        if let Some((index, &value)) = areas
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0))
        {
            return Err(Error::InvalidArea { index, value });
        }
        let expected = container.area();
        let sum: f64 = areas.iter().sum();
        let areas = if normalize {
            rescale(areas, expected)
        } else {
            if (sum - expected).abs() > AREA_REL_TOL * expected {
                return Err(Error::AreaSumMismatch { sum, expected });
            }
            areas
        };
        Ok(Instance { container, areas })
    }

    pub fn container(&self) -> &Rect {
        &self.container
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }
}

/// Scales `areas` so that they sum to `target`.
pub(crate) fn rescale(mut areas: Vec<f64>, target: f64) -> Vec<f64> {
    let sum: f64 = areas.iter().sum();
    let factor = target / sum;
    for a in &mut areas {
        *a *= factor;
    }
    areas
}
