//! Exhaustive search over guillotine partitions for small instances.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Cut, Rect};
use crate::instance::Instance;
use crate::layout::{Layout, LayoutTree};

pub const DEFAULT_MAX_N: usize = 8;

/// A value rounded to 12 significant digits, as (mantissa, exponent).
type Rounded = (i64, i32);

fn round12(x: f64) -> Rounded {
    let exp = x.abs().log10().floor() as i32 - 11;
    let mantissa = (x / 10f64.powi(exp)).round() as i64;
    (mantissa, exp)
}

/// Areas (sorted) and region extents with `w >= h`; transposed regions have
/// the same optimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    areas: Vec<Rounded>,
    long: Rounded,
    short: Rounded,
}

impl Key {
    fn new(areas: &[f64], w: f64, h: f64) -> Key {
        Key {
            areas: areas.iter().map(|&a| round12(a)).collect(),
            long: round12(w.max(h)),
            short: round12(w.min(h)),
        }
    }
}

/// One way to cut a region: the areas going to the first piece (selected by
/// `mask` over positions), and the cut orientation.
#[derive(Debug, Clone, Copy)]
struct Choice {
    mask: u32,
    cut: Cut,
}

struct Search {
    memo: HashMap<Key, f64>,
}

/// Splits `areas` into the group selected by `mask` and the rest.
fn split_by_mask(areas: &[f64], mask: u32) -> (Vec<f64>, Vec<f64>) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (i, &a) in areas.iter().enumerate() {
        if mask & (1 << i) != 0 {
            first.push(a);
        } else {
            second.push(a);
        }
    }
    (first, second)
}

/// Children extents for cutting a `w x h` region into areas `a1` and `a2`.
fn child_extents(w: f64, h: f64, a1: f64, a2: f64, cut: Cut) -> ((f64, f64), (f64, f64)) {
    match cut {
        Cut::Vertical => ((a1 / h, h), (a2 / h, h)),
        Cut::Horizontal => ((w, a1 / w), (w, a2 / w)),
    }
}

impl Search {
    /// Every bipartition with position 0 in the first group, in increasing
    /// mask order, each with a vertical then a horizontal cut.
    fn choices(len: usize) -> impl Iterator<Item = Choice> {
        let full = (1u32 << len) - 1;
        (0..1u32 << (len - 1))
            .map(|bits| (bits << 1) | 1)
            .filter(move |&mask| mask != full)
            .flat_map(|mask| {
                [Cut::Vertical, Cut::Horizontal]
                    .into_iter()
                    .map(move |cut| Choice { mask, cut })
            })
    }

    fn value_of(&mut self, areas: &[f64], w: f64, h: f64, choice: Choice) -> f64 {
        let (first, second) = split_by_mask(areas, choice.mask);
        let a1: f64 = first.iter().sum();
        let a2: f64 = second.iter().sum();
        let ((w1, h1), (w2, h2)) = child_extents(w, h, a1, a2, choice.cut);
        self.solve(&first, w1, h1) + self.solve(&second, w2, h2)
    }

    /// Minimum total half-perimeter of `areas` (non-increasing) in a `w x h`
    /// region.
    fn solve(&mut self, areas: &[f64], w: f64, h: f64) -> f64 {
        if areas.len() == 1 {
            return w + h;
        }
        let key = Key::new(areas, w, h);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (_, best) = self.best_choice(areas, w, h);
        self.memo.insert(key, best);
        best
    }

    fn best_choice(&mut self, areas: &[f64], w: f64, h: f64) -> (Choice, f64) {
        let mut best: Option<(Choice, f64)> = None;
        for choice in Self::choices(areas.len()) {
            let v = self.value_of(areas, w, h, choice);
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((choice, v));
            }
        }
        best.expect("at least one bipartition for two or more areas")
    }

    /// Rebuilds a witness tree; `items` pairs original indices with areas in
    /// non-increasing order.
    fn witness(&mut self, rect: Rect, items: &[(usize, f64)]) -> Result<LayoutTree> {
        if let [(index, _)] = items {
            return Ok(LayoutTree::Leaf {
                index: *index,
                rect,
            });
        }
        let areas: Vec<f64> = items.iter().map(|&(_, a)| a).collect();
        let (choice, _) = self.best_choice(&areas, rect.width(), rect.height());
        let (first, second): (Vec<_>, Vec<_>) = items
            .iter()
            .enumerate()
            .partition(|(i, _)| choice.mask & (1 << i) != 0);
        let first: Vec<(usize, f64)> = first.into_iter().map(|(_, &it)| it).collect();
        let second: Vec<(usize, f64)> = second.into_iter().map(|(_, &it)| it).collect();
        let a1: f64 = first.iter().map(|&(_, a)| a).sum();
        let a2: f64 = second.iter().map(|&(_, a)| a).sum();
        let (p1, p2) = place(&rect, a1, a2, choice.cut)?;
        let left = self.witness(p1, &first)?;
        let right = self.witness(p2, &second)?;
        Ok(LayoutTree::Internal {
            rect,
            cut: choice.cut,
            left: Box::new(left),
            right: Box::new(right),
        })
    }
}

/// Cuts `rect` with the given orientation regardless of its shape; the
/// first piece goes left or on top.
fn place(rect: &Rect, a1: f64, a2: f64, cut: Cut) -> Result<(Rect, Rect)> {
    Ok(match cut {
        Cut::Vertical => {
            let w1 = a1 / rect.height();
            (
                Rect::new(rect.x(), rect.y(), w1, rect.height())?,
                Rect::new(rect.x() + w1, rect.y(), a2 / rect.height(), rect.height())?,
            )
        }
        Cut::Horizontal => {
            let h1 = a1 / rect.width();
            (
                Rect::new(rect.x(), rect.top() - h1, rect.width(), h1)?,
                Rect::new(rect.x(), rect.y(), rect.width(), a2 / rect.width())?,
            )
        }
    })
}

/// Minimum total half-perimeter over all guillotine partitions, with one
/// optimal layout. Refuses instances with more than `max_n` areas.
///
/// Ties keep the first candidate in enumeration order: smallest group mask,
/// vertical before horizontal.
pub fn optimal_guillotine(inst: &Instance, max_n: usize) -> Result<(f64, Layout)> {
    let n = inst.len();
    if n > max_n || n > 31 {
        return Err(Error::OracleTooLarge {
            n,
            max: max_n.min(31),
        });
    }
    let (sorted, perm) = crate::dc::sort_descending(inst.areas());
    let items: Vec<(usize, f64)> = perm.into_iter().zip(sorted.iter().copied()).collect();
    let container = *inst.container();
    let mut search = Search {
        memo: HashMap::new(),
    };
    let value = search.solve(&sorted, container.width(), container.height());
    let tree = search.witness(container, &items)?;
    Ok((value, Layout::from_tree(tree)?))
}
