//! Divide-and-conquer partitioning by repeatedly merging the two smallest
//! areas, plus the recursion skeleton shared with the threshold variant.

use crate::error::{Error, Result};
use crate::geometry::{split_rect_areas, Cut, Rect};
use crate::instance::Instance;
use crate::layout::{Layout, LayoutTree};

/// A group of merged areas, identified by positions in the sorted working
/// list of the current call.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub members: Vec<usize>,
    pub total: f64,
}

impl Block {
    pub fn singleton(position: usize, area: f64) -> Block {
        Block {
            members: vec![position],
            total: area,
        }
    }

    /// Absorbs `other`; the merged total is `self.total + other.total`.
    pub fn merge(&mut self, other: Block) {
        self.members.extend(other.members);
        self.total += other.total;
    }
}

/// The two blocks a reduction ends with, `first.total >= second.total`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bipartition {
    pub first: Block,
    pub second: Block,
    /// Iterations of the reduction loop.
    pub steps: usize,
}

/// A rule that reduces a non-increasing area list to two blocks.
pub trait Reduction {
    fn bipartition(&self, sorted: &[f64]) -> Result<Bipartition>;
}

/// Merge the two smallest entries until two remain.
#[derive(Debug, Clone, Copy, Default)]
pub struct PairwiseMerge;

impl Reduction for PairwiseMerge {
    fn bipartition(&self, sorted: &[f64]) -> Result<Bipartition> {
        bipartition_two_smallest(sorted)
    }
}

/// Stable descending sort. `perm[k]` is the original index of the `k`-th
/// sorted area.
pub fn sort_descending(areas: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..areas.len()).collect();
    perm.sort_by(|&a, &b| areas[b].total_cmp(&areas[a]));
    let sorted = perm.iter().map(|&i| areas[i]).collect();
    (sorted, perm)
}

/// Position at which `total` keeps `blocks` non-increasing, after any
/// entries equal to it.
pub(crate) fn insertion_point(blocks: &[Block], total: f64) -> usize {
    blocks.partition_point(|b| b.total >= total)
}

/// One singleton block per entry of `sorted`.
pub fn singletons(sorted: &[f64]) -> Vec<Block> {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &a)| Block::singleton(i, a))
        .collect()
}

const NIL: u32 = u32::MAX;

/// A block in the working list: its total and the ends of its member chain.
#[derive(Debug, Clone, Copy)]
struct Entry {
    total: f64,
    head: u32,
    tail: u32,
}

/// The sorted working list of a reduction. Members are kept as linked
/// chains so merging never allocates; only the list itself is shifted.
#[derive(Debug, Clone)]
pub(crate) struct WorkingList {
    entries: Vec<Entry>,
    next: Vec<u32>,
    steps: usize,
}

impl WorkingList {
    pub(crate) fn new(sorted: &[f64]) -> WorkingList {
        WorkingList {
            entries: sorted
                .iter()
                .enumerate()
                .map(|(i, &total)| Entry {
                    total,
                    head: i as u32,
                    tail: i as u32,
                })
                .collect(),
            next: vec![NIL; sorted.len()],
            steps: 0,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.entries.len()
    }

    pub(crate) fn totals(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.entries.iter().map(|e| e.total)
    }

    /// Replaces entries `from..` by their union and re-inserts it after any
    /// equal totals.
    pub(crate) fn merge_tail(&mut self, from: usize) {
        let mut tail = self.entries.drain(from..);
        let mut merged = tail.next().expect("non-empty tail");
        for e in tail {
            self.next[merged.tail as usize] = e.head;
            merged.tail = e.tail;
            merged.total += e.total;
        }
        let k = self.entries.partition_point(|e| e.total >= merged.total);
        self.entries.insert(k, merged);
        self.steps += 1;
    }

    fn block(&self, e: &Entry) -> Block {
        let mut members = Vec::new();
        let mut at = e.head;
        while at != NIL {
            members.push(at as usize);
            at = self.next[at as usize];
        }
        members.sort_unstable();
        Block {
            members,
            total: e.total,
        }
    }

    pub(crate) fn finish(self) -> Bipartition {
        debug_assert_eq!(self.entries.len(), 2);
        Bipartition {
            first: self.block(&self.entries[0]),
            second: self.block(&self.entries[1]),
            steps: self.steps,
        }
    }
}

/// Reduces `sorted` to two blocks by merging the last two entries and
/// re-inserting the sum where it keeps the list sorted.
pub fn bipartition_two_smallest(sorted: &[f64]) -> Result<Bipartition> {
    if sorted.len() < 2 {
        return Err(Error::TooFewEntries {
            len: sorted.len(),
            min: 1,
        });
    }
    let mut list = WorkingList::new(sorted);
    while list.len() > 2 {
        list.merge_tail(list.len() - 2);
    }
    Ok(list.finish())
}

/// One reduction performed while building a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionRecord {
    /// Length of the list entering the reduction.
    pub len: usize,
    pub steps: usize,
}

/// Reduction counts collected over a whole partition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub records: Vec<ReductionRecord>,
}

impl ReductionStats {
    pub fn total_steps(&self) -> usize {
        self.records.iter().map(|r| r.steps).sum()
    }
}

/// Sorts, reduces to two blocks, splits, and recurses; the reduction rule is
/// the only thing that differs between the two partitioners.
pub fn partition_with<R: Reduction>(
    inst: &Instance,
    reduction: &R,
) -> Result<(Layout, ReductionStats)> {
    let (sorted, perm) = sort_descending(inst.areas());
    let items: Vec<(usize, f64)> = perm.into_iter().zip(sorted).collect();
    let mut stats = ReductionStats::default();
    let tree = build(*inst.container(), &items, reduction, &mut stats)?;
    Ok((Layout::from_tree(tree)?, stats))
}

fn build<R: Reduction>(
    rect: Rect,
    items: &[(usize, f64)],
    reduction: &R,
    stats: &mut ReductionStats,
) -> Result<LayoutTree> {
    if let [(index, _)] = items {
        return Ok(LayoutTree::Leaf {
            index: *index,
            rect,
        });
    }
    let sorted: Vec<f64> = items.iter().map(|&(_, a)| a).collect();
    let Bipartition {
        first,
        second,
        steps,
    } = reduction.bipartition(&sorted)?;
    stats.records.push(ReductionRecord {
        len: items.len(),
        steps,
    });

    let (first_rect, second_rect) = split_rect_areas(&rect, first.total, second.total)?;
    let pick = |b: &Block| -> Vec<(usize, f64)> { b.members.iter().map(|&p| items[p]).collect() };
    let left = build(first_rect, &pick(&first), reduction, stats)?;
    let right = build(second_rect, &pick(&second), reduction, stats)?;
    Ok(LayoutTree::Internal {
        rect,
        cut: Cut::for_rect(&rect),
        left: Box::new(left),
        right: Box::new(right),
    })
}

/// Partitions the container by merging the two smallest areas at each level.
pub fn partition_dc(inst: &Instance) -> Result<Layout> {
    partition_with(inst, &PairwiseMerge).map(|(layout, _)| layout)
}

/// [`partition_dc`] plus the reduction-loop counts.
pub fn partition_dc_with_stats(inst: &Instance) -> Result<(Layout, ReductionStats)> {
    partition_with(inst, &PairwiseMerge)
}
