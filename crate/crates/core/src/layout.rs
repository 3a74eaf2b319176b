//! Guillotine layout trees, flat layouts, and layout validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Cut, Rect};
use crate::instance::{Instance, AREA_REL_TOL};

/// Overlap allowed between two pieces, relative to the container area.
pub const OVERLAP_REL_TOL: f64 = 1e-12;

/// Slack on edge coordinates, relative to the container's longer side.
pub const EDGE_REL_TOL: f64 = 1e-9;

/// A binary guillotine-cut tree.
///
/// For a vertical cut `left` is the left piece; for a horizontal cut `left`
/// is the top piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LayoutTree {
    Leaf {
        index: usize,
        rect: Rect,
    },
    Internal {
        rect: Rect,
        cut: Cut,
        left: Box<LayoutTree>,
        right: Box<LayoutTree>,
    },
}

/// One node of a flattened tree; ids are pre-order positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeView {
    pub rect: Rect,
    pub parent: Option<usize>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf { index: usize },
    Internal { cut: Cut, left: usize, right: usize },
}

impl LayoutTree {
    pub fn rect(&self) -> &Rect {
        match self {
            LayoutTree::Leaf { rect, .. } | LayoutTree::Internal { rect, .. } => rect,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            LayoutTree::Leaf { .. } => 1,
            LayoutTree::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Pre-order flattening. Node 0 is the root and every parent precedes
    /// its children.
    pub fn flatten(&self) -> Vec<NodeView> {
        let mut out = Vec::new();
        flatten_into(self, None, &mut out);
        out
    }

    /// Checks that leaf indices are exactly `0..n` and that every internal
    /// node is tiled by its children along its cut.
    pub fn check(&self, n: usize) -> Result<()> {
        let extent = self.rect().width().max(self.rect().height());
        let tol = EDGE_REL_TOL * extent;
        let mut seen = vec![false; n];
        check_node(self, tol, &mut seen)?;
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedTree(format!(
                "area index {missing} has no leaf"
            )));
        }
        Ok(())
    }

    /// Rebuilds a guillotine tree from flat pieces, or `None` when the pieces
    /// do not form a guillotine partition of `container`.
    ///
    /// Cuts parallel to the shorter side are tried first. The first valid cut
    /// position along the sweep is used.
    pub fn recover(container: &Rect, rects: &[Rect]) -> Option<LayoutTree> {
        if rects.is_empty() {
            return None;
        }
        let tol = EDGE_REL_TOL * container.width().max(container.height());
        let indices: Vec<usize> = (0..rects.len()).collect();
        recover_node(*container, indices, rects, tol)
    }
}

fn flatten_into(node: &LayoutTree, parent: Option<usize>, out: &mut Vec<NodeView>) -> usize {
    let id = out.len();
    match node {
        LayoutTree::Leaf { index, rect } => out.push(NodeView {
            rect: *rect,
            parent,
            kind: NodeKind::Leaf { index: *index },
        }),
        LayoutTree::Internal {
            rect,
            cut,
            left,
            right,
        } => {
            // Placeholder children; patched once their ids are known.
            out.push(NodeView {
                rect: *rect,
                parent,
                kind: NodeKind::Internal {
                    cut: *cut,
                    left: 0,
                    right: 0,
                },
            });
            let l = flatten_into(left, Some(id), out);
            let r = flatten_into(right, Some(id), out);
            out[id].kind = NodeKind::Internal {
                cut: *cut,
                left: l,
                right: r,
            };
        }
    }
    id
}

fn check_node(node: &LayoutTree, tol: f64, seen: &mut [bool]) -> Result<()> {
    match node {
        LayoutTree::Leaf { index, .. } => {
            let slot = seen.get_mut(*index).ok_or_else(|| {
                Error::MalformedTree(format!("area index {index} is out of range"))
            })?;
            if *slot {
                return Err(Error::MalformedTree(format!(
                    "area index {index} appears twice"
                )));
            }
            *slot = true;
            Ok(())
        }
        LayoutTree::Internal {
            rect,
            cut,
            left,
            right,
        } => {
            let (l, r) = (left.rect(), right.rect());
            let near = |a: f64, b: f64| (a - b).abs() <= tol;
            let tiled = match cut {
                Cut::Vertical => {
                    near(l.x(), rect.x())
                        && near(l.right(), r.x())
                        && near(r.right(), rect.right())
                        && [l, r]
                            .iter()
                            .all(|c| near(c.y(), rect.y()) && near(c.top(), rect.top()))
                }
                Cut::Horizontal => {
                    near(l.top(), rect.top())
                        && near(l.y(), r.top())
                        && near(r.y(), rect.y())
                        && [l, r]
                            .iter()
                            .all(|c| near(c.x(), rect.x()) && near(c.right(), rect.right()))
                }
            };
            if !tiled {
                return Err(Error::MalformedTree(format!(
                    "children of {rect:?} do not tile it along a {cut:?} cut"
                )));
            }
            check_node(left, tol, seen)?;
            check_node(right, tol, seen)
        }
    }
}

fn recover_node(
    region: Rect,
    mut group: Vec<usize>,
    rects: &[Rect],
    tol: f64,
) -> Option<LayoutTree> {
    if let [index] = group[..] {
        return Some(LayoutTree::Leaf {
            index,
            rect: rects[index],
        });
    }
    let order = match Cut::for_rect(&region) {
        Cut::Vertical => [Cut::Vertical, Cut::Horizontal],
        Cut::Horizontal => [Cut::Horizontal, Cut::Vertical],
    };
    for cut in order {
        // Sweep from the left (vertical) or from the top (horizontal).
        let key = |i: &usize| match cut {
            Cut::Vertical => rects[*i].x(),
            Cut::Horizontal => -rects[*i].top(),
        };
        group.sort_by(|a, b| key(a).total_cmp(&key(b)).then(a.cmp(b)));
        let mut reach = f64::NEG_INFINITY;
        for k in 0..group.len() - 1 {
            let r = &rects[group[k]];
            reach = reach.max(match cut {
                Cut::Vertical => r.right(),
                Cut::Horizontal => -r.y(),
            });
            if reach <= key(&group[k + 1]) + tol {
                let pos = match cut {
                    Cut::Vertical => reach,
                    Cut::Horizontal => -reach,
                };
                let (first, second) = match cut {
                    Cut::Vertical => (
                        Rect::new(region.x(), region.y(), pos - region.x(), region.height())
                            .ok()?,
                        Rect::new(pos, region.y(), region.right() - pos, region.height()).ok()?,
                    ),
                    Cut::Horizontal => (
                        Rect::new(region.x(), pos, region.width(), region.top() - pos).ok()?,
                        Rect::new(region.x(), region.y(), region.width(), pos - region.y()).ok()?,
                    ),
                };
                let rest = group.split_off(k + 1);
                let left = recover_node(first, group, rects, tol)?;
                let right = recover_node(second, rest, rects, tol)?;
                return Some(LayoutTree::Internal {
                    rect: region,
                    cut,
                    left: Box::new(left),
                    right: Box::new(right),
                });
            }
        }
    }
    None
}

/// Placed pieces, `rects[i]` holding area `i`, plus the cut tree that
/// produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    rects: Vec<Rect>,
    tree: LayoutTree,
}

impl Layout {
    /// Builds the flat list from the tree's leaves.
    pub fn from_tree(tree: LayoutTree) -> Result<Layout> {
        let n = tree.leaf_count();
        let mut slots: Vec<Option<Rect>> = vec![None; n];
        for node in tree.flatten() {
            if let NodeKind::Leaf { index } = node.kind {
                let slot = slots.get_mut(index).ok_or_else(|| {
                    Error::MalformedTree(format!("area index {index} is out of range"))
                })?;
                if slot.replace(node.rect).is_some() {
                    return Err(Error::MalformedTree(format!(
                        "area index {index} appears twice"
                    )));
                }
            }
        }
        let rects = slots
            .into_iter()
            .map(|r| r.expect("n leaves with distinct in-range indices"))
            .collect();
        Ok(Layout { rects, tree })
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn tree(&self) -> &LayoutTree {
        &self.tree
    }

    pub fn total_half_perimeter(&self) -> f64 {
        total_half_perimeter(&self.rects)
    }
}

pub fn total_half_perimeter(rects: &[Rect]) -> f64 {
    rects.iter().map(crate::geometry::half_perimeter).sum()
}

/// Outcome of [`validate_layout`]; every list holds offending indices.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    /// Set when the number of pieces differs from the number of areas.
    pub count_mismatch: Option<(usize, usize)>,
    pub area_mismatch: Vec<usize>,
    pub area_sum_ok: bool,
    pub overlaps: Vec<(usize, usize)>,
    pub outside: Vec<usize>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.count_mismatch.is_none()
            && self.area_mismatch.is_empty()
            && self.area_sum_ok
            && self.overlaps.is_empty()
            && self.outside.is_empty()
    }
}

/// Checks per-piece areas, tiling, and containment.
pub fn validate_layout(inst: &Instance, rects: &[Rect]) -> Diagnostics {
    let container = inst.container();
    let total = container.area();
    if rects.len() != inst.len() {
        return Diagnostics {
            count_mismatch: Some((inst.len(), rects.len())),
            ..Diagnostics::default()
        };
    }

    let area_mismatch = inst
        .areas()
        .iter()
        .zip(rects)
        .enumerate()
        .filter(|(_, (a, r))| (r.area() - **a).abs() > AREA_REL_TOL * **a)
        .map(|(i, _)| i)
        .collect();

    let sum: f64 = rects.iter().map(Rect::area).sum();
    let area_sum_ok = (sum - total).abs() <= AREA_REL_TOL * total;

    let edge_tol = EDGE_REL_TOL * container.width().max(container.height());
    let outside = rects
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.within(container, edge_tol))
        .map(|(i, _)| i)
        .collect();

    // Sweep along x so only horizontally overlapping pairs are compared.
    let overlap_tol = OVERLAP_REL_TOL * total;
    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by(|&a, &b| rects[a].x().total_cmp(&rects[b].x()).then(a.cmp(&b)));
    let mut overlaps = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let ri = &rects[i];
        for &j in &order[k + 1..] {
            if rects[j].x() >= ri.right() {
                break;
            }
            if ri.overlap_area(&rects[j]) > overlap_tol {
                overlaps.push((i.min(j), i.max(j)));
            }
        }
    }
    overlaps.sort_unstable();

    Diagnostics {
        count_mismatch: None,
        area_mismatch,
        area_sum_ok,
        overlaps,
        outside,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64, y: f64, w: f64, h: f64) -> Rect {
        Rect::new(x, y, w, h).unwrap()
    }

    fn unit_instance(areas: Vec<f64>) -> Instance {
        Instance::new(r(0.0, 0.0, 1.0, 1.0), areas, false).unwrap()
    }

    #[test]
    fn halves_pass() {
        let inst = unit_instance(vec![0.5, 0.5]);
        let d = validate_layout(&inst, &[r(0.0, 0.5, 1.0, 0.5), r(0.0, 0.0, 1.0, 0.5)]);
        assert!(d.is_ok(), "{d:?}");
    }

    #[test]
    fn duplicate_rect_overlaps() {
        let inst = unit_instance(vec![0.5, 0.5]);
        let d = validate_layout(&inst, &[r(0.0, 0.0, 1.0, 0.5), r(0.0, 0.0, 1.0, 0.5)]);
        assert_eq!(d.overlaps, vec![(0, 1)]);
        assert!(!d.is_ok());
    }

    #[test]
    fn wrong_areas_flag_both_indices() {
        let inst = unit_instance(vec![0.6, 0.4]);
        let d = validate_layout(&inst, &[r(0.0, 0.5, 1.0, 0.5), r(0.0, 0.0, 1.0, 0.5)]);
        assert_eq!(d.area_mismatch, vec![0, 1]);
        assert!(d.area_sum_ok);
        assert!(d.overlaps.is_empty());
    }

    #[test]
    fn outside_container_is_flagged() {
        let inst = unit_instance(vec![0.5, 0.5]);
        let d = validate_layout(&inst, &[r(0.0, 0.5, 1.0, 0.5), r(0.5, 0.0, 1.0, 0.5)]);
        assert_eq!(d.outside, vec![1]);
    }

    #[test]
    fn count_mismatch_short_circuits() {
        let inst = unit_instance(vec![0.5, 0.5]);
        let d = validate_layout(&inst, &[r(0.0, 0.0, 1.0, 1.0)]);
        assert_eq!(d.count_mismatch, Some((2, 1)));
    }

    fn halves_tree() -> LayoutTree {
        LayoutTree::Internal {
            rect: r(0.0, 0.0, 1.0, 1.0),
            cut: Cut::Horizontal,
            left: Box::new(LayoutTree::Leaf {
                index: 0,
                rect: r(0.0, 0.5, 1.0, 0.5),
            }),
            right: Box::new(LayoutTree::Leaf {
                index: 1,
                rect: r(0.0, 0.0, 1.0, 0.5),
            }),
        }
    }

    #[test]
    fn flatten_is_preorder() {
        let nodes = halves_tree().flatten();
        assert_eq!(nodes.len(), 3);
        assert_eq!(
            nodes[0].kind,
            NodeKind::Internal {
                cut: Cut::Horizontal,
                left: 1,
                right: 2
            }
        );
        assert_eq!(nodes[2].parent, Some(0));
    }

    #[test]
    fn layout_from_tree_orders_by_index() {
        let layout = Layout::from_tree(halves_tree()).unwrap();
        assert_eq!(layout.rects()[0], r(0.0, 0.5, 1.0, 0.5));
        assert_eq!(layout.total_half_perimeter(), 3.0);
        assert!(layout.tree().check(2).is_ok());
    }

    #[test]
    fn check_rejects_duplicates_and_bad_tiling() {
        let mut tree = halves_tree();
        if let LayoutTree::Internal { right, .. } = &mut tree {
            **right = LayoutTree::Leaf {
                index: 0,
                rect: r(0.0, 0.0, 1.0, 0.5),
            };
        }
        assert!(tree.check(2).is_err());
        assert!(Layout::from_tree(tree).is_err());

        let gap = LayoutTree::Internal {
            rect: r(0.0, 0.0, 1.0, 1.0),
            cut: Cut::Horizontal,
            left: Box::new(LayoutTree::Leaf {
                index: 0,
                rect: r(0.0, 0.6, 1.0, 0.4),
            }),
            right: Box::new(LayoutTree::Leaf {
                index: 1,
                rect: r(0.0, 0.0, 1.0, 0.5),
            }),
        };
        assert!(matches!(gap.check(2), Err(Error::MalformedTree(_))));
    }

    #[test]
    fn recover_finds_guillotine_structure() {
        let container = r(0.0, 0.0, 1.0, 1.0);
        let rects = [
            r(0.0, 0.5, 1.0, 0.5),
            r(0.0, 0.0, 0.5, 0.5),
            r(0.5, 0.0, 0.5, 0.5),
        ];
        let tree = LayoutTree::recover(&container, &rects).unwrap();
        assert!(tree.check(3).is_ok());
        match &tree {
            LayoutTree::Internal { cut, left, .. } => {
                assert_eq!(*cut, Cut::Horizontal);
                assert!(matches!(**left, LayoutTree::Leaf { index: 0, .. }));
            }
            _ => panic!("expected an internal root"),
        }
    }

    #[test]
    fn recover_rejects_pinwheel() {
        let container = r(0.0, 0.0, 3.0, 3.0);
        let rects = [
            r(0.0, 0.0, 2.0, 1.0),
            r(2.0, 0.0, 1.0, 2.0),
            r(1.0, 2.0, 2.0, 1.0),
            r(0.0, 1.0, 1.0, 2.0),
            r(1.0, 1.0, 1.0, 1.0),
        ];
        assert!(LayoutTree::recover(&container, &rects).is_none());
    }

    #[test]
    fn tree_json_uses_kind_tag() {
        let json = serde_json::to_string(&halves_tree()).unwrap();
        assert!(json.starts_with(r#"{"kind":"internal""#), "{json}");
        let back: LayoutTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, halves_tree());
    }
}
