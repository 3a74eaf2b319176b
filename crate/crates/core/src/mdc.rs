//! Threshold bundling: each reduction step merges every entry below the mean
//! of the current list, so long tails collapse in one step.

use crate::dc::{
    insertion_point, partition_with, Bipartition, Block, Reduction, ReductionStats, WorkingList,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::layout::Layout;

/// Merge all entries below the running mean until two remain.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThresholdMerge;

impl Reduction for ThresholdMerge {
    fn bipartition(&self, sorted: &[f64]) -> Result<Bipartition> {
        if sorted.len() < 2 {
            return Err(Error::TooFewEntries {
                len: sorted.len(),
                min: 1,
            });
        }
        let mut list = WorkingList::new(sorted);
        while list.len() > 2 {
            let m = bundle_start(list.totals(), list.len());
            list.merge_tail(m - 1);
        }
        Ok(list.finish())
    }
}

/// One bundling step on a non-increasing block list of length > 2.
///
/// With `tau` the mean total, let `i` be the first 1-based position holding
/// a total strictly below `tau`. Entries `m..=len` are merged, where `m = i`
/// if such an `i` exists and `i < len`, and `m = ceil(len / 2)` otherwise.
/// The merged block is re-inserted after any equal totals. The list ends
/// with length `m`.
pub fn mdc_reduce_step(blocks: &mut Vec<Block>) -> Result<()> {
    let len = blocks.len();
    if len <= 2 {
        return Err(Error::TooFewEntries { len, min: 2 });
    }
    let m = bundle_start(blocks.iter().map(|b| b.total), len);
    let mut tail = blocks.drain(m - 1..);
    let mut merged = tail.next().expect("m <= len");
    for b in tail {
        merged.merge(b);
    }
    let k = insertion_point(blocks, merged.total);
    blocks.insert(k, merged);
    Ok(())
}

/// The 1-based position `m` from which a step merges, given the
/// non-increasing totals of a list of length `len > 2`.
fn bundle_start(totals: impl Iterator<Item = f64> + Clone, len: usize) -> usize {
    let first = totals.clone().next().expect("non-empty list");
    let mean = totals.clone().sum::<f64>() / len as f64;
    // The head is never below the mean; rounding in the mean can say otherwise.
    let tau = mean.min(first);
    match totals.into_iter().position(|t| t < tau) {
        Some(p) if p + 1 < len => p + 1,
        _ => len.div_ceil(2),
    }
}

/// Partitions the container with threshold bundling.
pub fn partition_mdc(inst: &Instance) -> Result<Layout> {
    partition_with(inst, &ThresholdMerge).map(|(layout, _)| layout)
}

/// [`partition_mdc`] plus the reduction-loop counts.
pub fn partition_mdc_with_stats(inst: &Instance) -> Result<(Layout, ReductionStats)> {
    partition_with(inst, &ThresholdMerge)
}
