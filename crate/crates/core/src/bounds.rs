//! Lower bounds on the total half-perimeter and quality reports.
//!
//! Every piece satisfies `w + h >= 2 sqrt(area)`. Pieces that are *forced*
//! have their short side pinned by the container or by other forced pieces,
//! so their own `w + h` is a lower bound as well. A node of the cut tree is
//! forced when
//!
//! 1. it is the root;
//! 2. it is the right child of a forced node whose largest constituent area
//!    is at least half of the node's area;
//! 3. both of its long edges lie within long edges of forced nodes.
//!
//! Rule 3 is applied until nothing changes. A square has no distinguished
//! long edge; all four of its edges count as long.

use std::collections::{BTreeMap, BTreeSet};

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{aspect_ratio, half_perimeter, Rect};
use crate::instance::Instance;
use crate::layout::{
    total_half_perimeter, validate_layout, Layout, LayoutTree, NodeKind, NodeView, EDGE_REL_TOL,
};

/// How the containment rule attributes a candidate's two long edges.
///
/// `SameRect` is the default: with `PerEdge` the forced-aware bound can
/// exceed the guillotine optimum on small instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForcedMode {
    /// Each long edge may lie in a different forced rectangle.
    PerEdge,
    /// Both long edges must lie in long edges of one forced rectangle.
    #[default]
    SameRect,
}

/// Slack on the "largest area is at least half" test, relative to node area.
const HALF_REL_TOL: f64 = 1e-12;

/// An axis-parallel segment `lo..hi` on the line `coord`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    coord: f64,
    lo: f64,
    hi: f64,
}

/// The pairs of opposite edges that count as long edges of `r`: the
/// horizontal pair, the vertical pair, or both for a square.
fn long_edge_pairs(r: &Rect) -> Vec<(Orientation, [Segment; 2])> {
    let horizontal = (
        Orientation::Horizontal,
        [
            Segment {
                coord: r.y(),
                lo: r.x(),
                hi: r.right(),
            },
            Segment {
                coord: r.top(),
                lo: r.x(),
                hi: r.right(),
            },
        ],
    );
    let vertical = (
        Orientation::Vertical,
        [
            Segment {
                coord: r.x(),
                lo: r.y(),
                hi: r.top(),
            },
            Segment {
                coord: r.right(),
                lo: r.y(),
                hi: r.top(),
            },
        ],
    );
    let (w, h) = (r.width(), r.height());
    if (w - h).abs() <= 1e-12 * w.max(h) {
        vec![horizontal, vertical]
    } else if w > h {
        vec![horizontal]
    } else {
        vec![vertical]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Orientation {
    Horizontal,
    Vertical,
}

/// Long edges of forced nodes, bucketed by line coordinate.
#[derive(Default)]
struct EdgeIndex {
    horizontal: BTreeMap<OrderedFloat<f64>, Vec<(f64, f64, usize)>>,
    vertical: BTreeMap<OrderedFloat<f64>, Vec<(f64, f64, usize)>>,
}

impl EdgeIndex {
    fn lines(&self, o: Orientation) -> &BTreeMap<OrderedFloat<f64>, Vec<(f64, f64, usize)>> {
        match o {
            Orientation::Horizontal => &self.horizontal,
            Orientation::Vertical => &self.vertical,
        }
    }

    fn add(&mut self, id: usize, r: &Rect) {
        for (o, pair) in long_edge_pairs(r) {
            let lines = match o {
                Orientation::Horizontal => &mut self.horizontal,
                Orientation::Vertical => &mut self.vertical,
            };
            for s in pair {
                lines
                    .entry(OrderedFloat(s.coord))
                    .or_default()
                    .push((s.lo, s.hi, id));
            }
        }
    }

    /// Ids of forced nodes whose long edges contain `s`.
    fn containing(
        &self,
        o: Orientation,
        s: &Segment,
        tol: f64,
    ) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = (s.lo, s.hi);
        self.lines(o)
            .range(OrderedFloat(s.coord - tol)..=OrderedFloat(s.coord + tol))
            .flat_map(|(_, segs)| segs.iter())
            .filter(move |(a, b, _)| lo >= a - tol && hi <= b + tol)
            .map(|&(_, _, id)| id)
    }

    fn certifies(&self, r: &Rect, mode: ForcedMode, tol: f64) -> bool {
        long_edge_pairs(r)
            .into_iter()
            .any(|(o, [e1, e2])| match mode {
                ForcedMode::PerEdge => {
                    self.containing(o, &e1, tol).next().is_some()
                        && self.containing(o, &e2, tol).next().is_some()
                }
                ForcedMode::SameRect => {
                    let first: BTreeSet<usize> = self.containing(o, &e1, tol).collect();
                    self.containing(o, &e2, tol).any(|id| first.contains(&id))
                }
            })
    }
}

/// Largest constituent area and total constituent area of every node.
fn constituent_areas(nodes: &[NodeView], areas: &[f64]) -> Vec<(f64, f64)> {
    let mut acc = vec![(0.0f64, 0.0f64); nodes.len()];
    for id in (0..nodes.len()).rev() {
        acc[id] = match nodes[id].kind {
            NodeKind::Leaf { index } => (areas[index], areas[index]),
            NodeKind::Internal { left, right, .. } => {
                let (l, r) = (acc[left], acc[right]);
                (l.0.max(r.0), l.1 + r.1)
            }
        };
    }
    acc
}

/// Pre-order ids of the forced nodes of `tree`. `areas` is indexed by leaf
/// index.
pub fn detect_forced(
    tree: &LayoutTree,
    areas: &[f64],
    mode: ForcedMode,
) -> Result<BTreeSet<usize>> {
    tree.check(areas.len())?;
    let nodes = tree.flatten();
    let constituents = constituent_areas(&nodes, areas);
    let root = tree.rect();
    let tol = EDGE_REL_TOL * root.width().max(root.height());

    let mut forced = vec![false; nodes.len()];
    let mut index = EdgeIndex::default();
    forced[0] = true;
    index.add(0, root);

    let mut changed = true;
    while changed {
        changed = false;
        for id in 1..nodes.len() {
            if forced[id] {
                continue;
            }
            let node = &nodes[id];
            let parent = node
                .parent
                .ok_or_else(|| Error::MalformedTree("non-root node without parent".into()))?;
            let by_half = forced[parent]
                && matches!(nodes[parent].kind, NodeKind::Internal { right, .. } if right == id)
                && {
                    let (largest, total) = constituents[parent];
                    largest >= 0.5 * total * (1.0 - HALF_REL_TOL)
                };
            if by_half || index.certifies(&node.rect, mode, tol) {
                forced[id] = true;
                index.add(id, &node.rect);
                changed = true;
            }
        }
    }
    Ok(forced
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(i, _)| i)
        .collect())
}

/// Which area indices sit in forced leaves.
fn forced_leaves(tree: &LayoutTree, areas: &[f64], mode: ForcedMode) -> Result<Vec<bool>> {
    let forced = detect_forced(tree, areas, mode)?;
    let mut out = vec![false; areas.len()];
    for (id, node) in tree.flatten().iter().enumerate() {
        if let NodeKind::Leaf { index } = node.kind {
            out[index] = forced.contains(&id);
        }
    }
    Ok(out)
}

fn naive_bound(areas: &[f64]) -> f64 {
    areas.iter().map(|a| 2.0 * a.sqrt()).sum()
}

fn forced_aware_bound(rects: &[Rect], areas: &[f64], forced: &[bool]) -> f64 {
    rects
        .iter()
        .zip(areas)
        .zip(forced)
        .map(|((r, a), &f)| if f { half_perimeter(r) } else { 2.0 * a.sqrt() })
        .sum()
}

fn ensure_valid(inst: &Instance, rects: &[Rect]) -> Result<()> {
    let diagnostics = validate_layout(inst, rects);
    if diagnostics.is_ok() {
        Ok(())
    } else {
        Err(Error::InvalidLayout(format!("{diagnostics:?}")))
    }
}

/// Layout-free bound `sum 2 sqrt(A_i)` and the bound that uses `w + h` for
/// forced leaves.
pub fn lower_bound(inst: &Instance, layout: &Layout) -> Result<(f64, f64)> {
    lower_bound_with(inst, layout, ForcedMode::default())
}

pub fn lower_bound_with(inst: &Instance, layout: &Layout, mode: ForcedMode) -> Result<(f64, f64)> {
    ensure_valid(inst, layout.rects())?;
    let forced = forced_leaves(layout.tree(), inst.areas(), mode)?;
    Ok((
        naive_bound(inst.areas()),
        forced_aware_bound(layout.rects(), inst.areas(), &forced),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RectQuality {
    pub index: usize,
    pub half_perimeter: f64,
    pub aspect_ratio: f64,
    pub is_forced: bool,
}

/// Achieved total against both lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QualityReport {
    pub total_half_perimeter: f64,
    pub naive_lower_bound: f64,
    pub forced_aware_lower_bound: f64,
    /// `total_half_perimeter / forced_aware_lower_bound`.
    pub approx_ratio: f64,
    pub max_aspect_ratio: f64,
    pub per_rect: Vec<RectQuality>,
}

fn assemble(inst: &Instance, rects: &[Rect], forced: &[bool]) -> QualityReport {
    let total = total_half_perimeter(rects);
    let forced_aware = forced_aware_bound(rects, inst.areas(), forced);
    let per_rect: Vec<RectQuality> = rects
        .iter()
        .zip(forced)
        .enumerate()
        .map(|(index, (r, &is_forced))| RectQuality {
            index,
            half_perimeter: half_perimeter(r),
            aspect_ratio: aspect_ratio(r),
            is_forced,
        })
        .collect();
    QualityReport {
        total_half_perimeter: total,
        naive_lower_bound: naive_bound(inst.areas()),
        forced_aware_lower_bound: forced_aware,
        approx_ratio: total / forced_aware,
        max_aspect_ratio: per_rect.iter().map(|q| q.aspect_ratio).fold(1.0, f64::max),
        per_rect,
    }
}

/// Quality report for a layout produced with its cut tree.
pub fn report(inst: &Instance, layout: &Layout) -> Result<QualityReport> {
    report_with(inst, layout, ForcedMode::default())
}

pub fn report_with(inst: &Instance, layout: &Layout, mode: ForcedMode) -> Result<QualityReport> {
    ensure_valid(inst, layout.rects())?;
    let forced = forced_leaves(layout.tree(), inst.areas(), mode)?;
    Ok(assemble(inst, layout.rects(), &forced))
}

/// Quality report for pieces without a cut tree.
///
/// The tree is recovered when the pieces form a guillotine partition. When
/// they do not, no leaf is treated as forced except a single piece filling
/// the container.
pub fn report_rects(inst: &Instance, rects: &[Rect]) -> Result<QualityReport> {
    report_rects_with(inst, rects, ForcedMode::default())
}

pub fn report_rects_with(
    inst: &Instance,
    rects: &[Rect],
    mode: ForcedMode,
) -> Result<QualityReport> {
    ensure_valid(inst, rects)?;
    let forced = match LayoutTree::recover(inst.container(), rects) {
        Some(tree) => forced_leaves(&tree, inst.areas(), mode)?,
        None => vec![inst.len() == 1; inst.len()],
    };
    Ok(assemble(inst, rects, &forced))
}
