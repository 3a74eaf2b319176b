//! Axis-aligned rectangles and the metrics the partitioners optimize.
//!
//! Coordinates follow the mathematical convention: `y` grows upward, so the
//! "top" piece of a horizontal cut is the one with the larger `y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orientation of a guillotine cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    /// A vertical line; the first piece is on the left.
    Vertical,
    /// A horizontal line; the first piece is on top.
    Horizontal,
}

impl Cut {
    /// The cut the partitioners apply to `r`: vertical when strictly wider
    /// than tall, horizontal otherwise (squares included).
    pub fn for_rect(r: &Rect) -> Cut {
        if r.w > r.h {
            Cut::Vertical
        } else {
            Cut::Horizontal
        }
    }
}

/// An axis-aligned rectangle given by its lower-left corner and extents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectRepr", into = "RectRepr")]
pub struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

#[derive(Serialize, Deserialize)]
struct RectRepr {
    x: f64,
    y: f64,
    width: f64,
    height: f64,
}

impl TryFrom<RectRepr> for Rect {
    type Error = Error;

    fn try_from(r: RectRepr) -> Result<Self> {
        Rect::new(r.x, r.y, r.width, r.height)
    }
}

impl From<Rect> for RectRepr {
    fn from(r: Rect) -> Self {
        RectRepr {
            x: r.x,
            y: r.y,
            width: r.w,
            height: r.h,
        }
    }
}

impl Rect {
    /// Creates a rectangle; extents must be positive and every field finite.
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Result<Rect> {
        if !(x.is_finite() && y.is_finite() && w.is_finite() && h.is_finite()) {
            return Err(Error::InvalidRect(format!(
                "non-finite field in ({x}, {y}, {w}, {h})"
            )));
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(Error::InvalidRect(format!(
                "extents must be positive, got {w} x {h}"
            )));
        }
        Ok(Rect { x, y, w, h })
    }

    /// A rectangle anchored at the origin.
    pub fn with_size(w: f64, h: f64) -> Result<Rect> {
        Rect::new(0.0, 0.0, w, h)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn width(&self) -> f64 {
        self.w
    }

    pub fn height(&self) -> f64 {
        self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn top(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + 0.5 * self.w, self.y + 0.5 * self.h)
    }

    /// The same rectangle mirrored across the line `y = x`.
    pub fn transpose(&self) -> Rect {
        Rect {
            x: self.y,
            y: self.x,
            w: self.h,
            h: self.w,
        }
    }

    /// Area of the intersection with `other` (zero when interiors are disjoint).
    pub fn overlap_area(&self, other: &Rect) -> f64 {
        let dx = self.right().min(other.right()) - self.x.max(other.x);
        let dy = self.top().min(other.top()) - self.y.max(other.y);
        if dx > 0.0 && dy > 0.0 {
            dx * dy
        } else {
            0.0
        }
    }

    /// True when `self` lies inside `outer`, allowing `tol` slack on each side.
    pub fn within(&self, outer: &Rect, tol: f64) -> bool {
        self.x >= outer.x - tol
            && self.y >= outer.y - tol
            && self.right() <= outer.right() + tol
            && self.top() <= outer.top() + tol
    }
}

/// Half-perimeter `w + h`, the per-piece objective.
pub fn half_perimeter(r: &Rect) -> f64 {
    r.w + r.h
}

/// `max(w/h, h/w)`; always at least one.
pub fn aspect_ratio(r: &Rect) -> f64 {
    (r.w / r.h).max(r.h / r.w)
}

/// Cuts `q` into a piece of area `a1` and the remainder.
///
/// A rectangle strictly wider than tall is cut vertically and the first piece
/// is the left one, of width `a1 / h`. Otherwise the cut is horizontal and the
/// first piece is the top one, of height `a1 / w`. The pieces tile `q`.
pub fn split_rect(q: &Rect, a1: f64) -> Result<(Rect, Rect)> {
    let area = q.area();
    if !(a1 > 0.0 && a1 < area) {
        return Err(Error::SplitOutOfRange { a1, area });
    }
    let pieces = match Cut::for_rect(q) {
        Cut::Vertical => {
            let w1 = a1 / q.h;
            (
                Rect::new(q.x, q.y, w1, q.h)?,
                Rect::new(q.x + w1, q.y, q.w - w1, q.h)?,
            )
        }
        Cut::Horizontal => {
            let h1 = a1 / q.w;
            let h2 = q.h - h1;
            (
                Rect::new(q.x, q.y + h2, q.w, h1)?,
                Rect::new(q.x, q.y, q.w, h2)?,
            )
        }
    };
    Ok(pieces)
}

/// Cuts `q` into pieces whose areas are `a1` and `a2`, each extent derived
/// from its own target rather than as a remainder.
///
/// Used by the recursive partitioners: a remainder inherits the absolute
/// rounding error of its parent, which swamps tiny areas after a long chain
/// of cuts. Deriving both extents from the targets keeps every piece's area
/// relatively exact, at the cost of a seam that is off by a few ulps.
pub fn split_rect_areas(q: &Rect, a1: f64, a2: f64) -> Result<(Rect, Rect)> {
    if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(Error::SplitOutOfRange { a1, area: q.area() });
    }
    let pieces = match Cut::for_rect(q) {
        Cut::Vertical => {
            let w1 = a1 / q.h;
            let w2 = a2 / q.h;
            (
                Rect::new(q.x, q.y, w1, q.h)?,
                Rect::new(q.x + w1, q.y, w2, q.h)?,
            )
        }
        Cut::Horizontal => {
            let h1 = a1 / q.w;
            let h2 = a2 / q.w;
            (
                Rect::new(q.x, q.top() - h1, q.w, h1)?,
                Rect::new(q.x, q.y, q.w, h2)?,
            )
        }
    };
    Ok(pieces)
}
