//! Partitioning a rectangle into pieces of prescribed areas with small total
//! half-perimeter.
//!
//! Two divide-and-conquer partitioners share one recursion: sort the areas,
//! reduce them to two blocks, cut the rectangle in proportion across its
//! longer side, and recurse into both pieces.
//!
//! - [`partition_dc`] reduces by merging the two smallest entries, which
//!   guarantees a total within a factor 1.203 of optimal.
//! - [`partition_mdc`] merges everything below the running mean at once;
//!   fewer reduction steps, no quality guarantee.
//!
//! [`bounds`] certifies layouts against lower bounds, [`oracle`] finds the
//! exact guillotine optimum for small inputs, and [`gen`] draws seeded test
//! instances.
//!
//! ```
//! use rectpart_core::{partition_dc, report, Instance, Rect};
//!
//! let container = Rect::with_size(1.0, 1.0).unwrap();
//! let inst = Instance::new(container, vec![0.5, 0.5], false).unwrap();
//! let layout = partition_dc(&inst).unwrap();
//! assert_eq!(layout.total_half_perimeter(), 3.0);
//! let ratio = report(&inst, &layout).unwrap().approx_ratio;
//! assert!((1.0..1.03).contains(&ratio));
//! ```

pub mod bounds;
pub mod dc;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod instance;
pub mod io;
pub mod layout;
pub mod mdc;
pub mod oracle;
pub mod svg;

pub use bounds::{
    detect_forced, lower_bound, lower_bound_with, report, report_rects, report_rects_with,
    report_with, ForcedMode, QualityReport,
};
pub use dc::{partition_dc, partition_dc_with_stats, Block, ReductionStats};
pub use error::{Error, Result};
pub use gen::{generate, Family, GenSpec};
pub use geometry::{aspect_ratio, half_perimeter, split_rect, Cut, Rect};
pub use instance::Instance;
pub use layout::{validate_layout, Diagnostics, Layout, LayoutTree};
pub use mdc::{partition_mdc, partition_mdc_with_stats};
pub use oracle::optimal_guillotine;
