//! Constructive descriptions of planar regions as they appear in scene files.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convex::ConvexBody;
use crate::error::{Error, Result};
use crate::numeric::{fmt_q, qserde, Point, Q};
use crate::plancx::ClosedBox;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    #[default]
    Closed,
    Open,
}

impl Closure {
    fn admits(self, lo: &Q, v: &Q) -> bool {
        match self {
            Closure::Closed => lo <= v,
            Closure::Open => lo < v,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideFlags {
    #[serde(default)]
    pub left: Closure,
    #[serde(default)]
    pub right: Closure,
    #[serde(default)]
    pub bottom: Closure,
    #[serde(default)]
    pub top: Closure,
}

impl SideFlags {
    pub fn all_closed(&self) -> bool {
        *self == SideFlags::default()
    }
}

fn default_true() -> bool {
    true
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

/// Region CSG. Boxes and segments carry per-side / per-end closure flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Region {
    Box {
        min: Point,
        max: Point,
        #[serde(default, skip_serializing_if = "is_default")]
        side_flags: SideFlags,
    },
    Segment {
        a: Point,
        b: Point,
        #[serde(default, skip_serializing_if = "is_default")]
        end_flags: [Closure; 2],
    },
    Polygon {
        vertices: Vec<Point>,
        #[serde(default, skip_serializing_if = "is_default")]
        closure: Closure,
    },
    Disc {
        center: Point,
        #[serde(with = "qserde")]
        radius: Q,
    },
    Diff {
        outer: Box<Region>,
        holes: Vec<Region>,
    },
    Union {
        parts: Vec<Region>,
        #[serde(default = "default_true")]
        disjoint: bool,
    },
}

impl Region {
    pub fn closed_box(min: Point, max: Point) -> Region {
        Region::Box { min, max, side_flags: SideFlags::default() }
    }

    pub fn segment(a: Point, b: Point) -> Region {
        Region::Segment { a, b, end_flags: [Closure::Closed; 2] }
    }

    pub fn disc(center: Point, radius: Q) -> Region {
        Region::Disc { center, radius }
    }

    pub fn diff(outer: Region, holes: Vec<Region>) -> Region {
        Region::Diff { outer: Box::new(outer), holes }
    }

    /// Structural validation (ordered corners, nonnegative radii, ...).
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidRegion(m));
        match self {
            Region::Box { min, max, .. } => {
                if min.x > max.x || min.y > max.y {
                    return bad("box min exceeds max".into());
                }
            }
            Region::Segment { .. } => {}
            Region::Polygon { vertices, .. } => {
                if vertices.is_empty() {
                    return bad("polygon without vertices".into());
                }
                ConvexBody::polygon(vertices.clone())?;
            }
            Region::Disc { radius, .. } => {
                if radius.is_negative() {
                    return bad(format!("negative disc radius {}", fmt_q(radius)));
                }
            }
            Region::Diff { outer, holes } => {
                outer.validate()?;
                for h in holes {
                    h.validate()?;
                }
            }
            Region::Union { parts, .. } => {
                for p in parts {
                    p.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Exact point membership.
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Region::Box { min, max, side_flags: s } => {
                s.left.admits(&min.x, &p.x)
                    && s.right.admits(&p.x, &max.x)
                    && s.bottom.admits(&min.y, &p.y)
                    && s.top.admits(&p.y, &max.y)
            }
            Region::Segment { a, b, end_flags } => {
                if a == b {
                    return p == a && end_flags.iter().all(|f| *f == Closure::Closed);
                }
                let cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                if !cr.is_zero() {
                    return false;
                }
                let t = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
                let len = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
                end_flags[0].admits(&Q::zero(), &t) && end_flags[1].admits(&t, &len)
            }
            Region::Polygon { vertices, closure } => match ConvexBody::polygon(vertices.clone()) {
                Ok(body) => match closure {
                    Closure::Closed => body.contains(p),
                    Closure::Open => body.interior_contains(p),
                },
                Err(_) => false,
            },
            Region::Disc { center, radius } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                dx * dx + dy * dy <= radius * radius
            }
            Region::Diff { outer, holes } => outer.contains(p) && !holes.iter().any(|h| h.contains(p)),
            Region::Union { parts, .. } => parts.iter().any(|r| r.contains(p)),
        }
    }

    /// Bounding box of the closure.
    pub fn bbox(&self) -> Option<ClosedBox> {
        let pts = |ps: &[Point]| {
            let mut it = ps.iter();
            let first = *it.next()?;
            Some(it.fold(ClosedBox { min: first, max: first }, |b, p| ClosedBox {
                min: Point::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                max: Point::new(b.max.x.max(p.x), b.max.y.max(p.y)),
            }))
        };
        match self {
            Region::Box { min, max, .. } => Some(ClosedBox { min: *min, max: *max }),
            Region::Segment { a, b, .. } => pts(&[*a, *b]),
            Region::Polygon { vertices, .. } => pts(vertices),
            Region::Disc { center, radius } => Some(ClosedBox {
                min: Point::new(center.x - radius, center.y - radius),
                max: Point::new(center.x + radius, center.y + radius),
            }),
            Region::Diff { outer, .. } => outer.bbox(),
            Region::Union { parts, .. } => {
                let corners: Vec<Point> = parts
                    .iter()
                    .filter_map(Region::bbox)
                    .flat_map(|b| [b.min, b.max])
                    .collect();
                pts(&corners)
            }
        }
    }

    /// Grid cut coordinates needed to represent the region exactly.
    pub fn cuts(&self, xs: &mut Vec<Q>, ys: &mut Vec<Q>) -> Result<()> {
        match self {
            Region::Box { min, max, .. } => {
                xs.extend([min.x, max.x]);
                ys.extend([min.y, max.y]);
            }
            Region::Segment { a, b, .. } => {
                if a.x != b.x && a.y != b.y {
                    return Err(Error::NotRectilinear("diagonal segment".into()));
                }
                xs.extend([a.x, b.x]);
                ys.extend([a.y, b.y]);
            }
            Region::Polygon { vertices, .. } => {
                let b = self.bbox().expect("validated polygon");
                let corners = [b.min, Point::new(b.max.x, b.min.y), b.max, Point::new(b.min.x, b.max.y)];
                if vertices.len() != 4 || !corners.iter().all(|c| vertices.contains(c)) {
                    return Err(Error::NotRectilinear("polygon is not an axis-aligned rectangle".into()));
                }
                xs.extend([b.min.x, b.max.x]);
                ys.extend([b.min.y, b.max.y]);
            }
            Region::Disc { .. } => return Err(Error::NotRectilinear("disc".into())),
            Region::Diff { outer, holes } => {
                outer.cuts(xs, ys)?;
                for h in holes {
                    h.cuts(xs, ys)?;
                }
            }
            Region::Union { parts, .. } => {
                for p in parts {
                    p.cuts(xs, ys)?;
                }
            }
        }
        Ok(())
    }

    /// The region as a union of closed axis-aligned boxes (boxes with all
    /// sides closed, axis-aligned closed segments, and unions of these).
    pub fn closed_boxes(&self) -> Result<Vec<ClosedBox>> {
        match self {
            Region::Box { min, max, side_flags } if side_flags.all_closed() => {
                Ok(vec![ClosedBox { min: *min, max: *max }])
            }
            Region::Segment { a, b, end_flags }
                if (a.x == b.x || a.y == b.y) && end_flags.iter().all(|f| *f == Closure::Closed) =>
            {
                Ok(vec![ClosedBox {
                    min: Point::new(a.x.min(b.x), a.y.min(b.y)),
                    max: Point::new(a.x.max(b.x), a.y.max(b.y)),
                }])
            }
            Region::Union { parts, .. } => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.closed_boxes()?);
                }
                Ok(out)
            }
            other => Err(Error::NotRectilinear(format!("{other:?}"))),
        }
    }

    /// A compact convex body, if the region is one.
    pub fn as_convex_body(&self) -> Result<ConvexBody> {
        let not = |what: &str| Err(Error::InvalidRegion(format!("{what} is not a compact convex body")));
        match self {
            Region::Box { min, max, side_flags } => {
                if !side_flags.all_closed() {
                    return not("box with open sides");
                }
                ConvexBody::polygon(vec![
                    *min,
                    Point::new(max.x, min.y),
                    *max,
                    Point::new(min.x, max.y),
                ])
            }
            Region::Segment { a, b, end_flags } => {
                if end_flags.iter().any(|f| *f == Closure::Open) {
                    return not("segment with open ends");
                }
                ConvexBody::polygon(vec![*a, *b])
            }
            Region::Polygon { vertices, closure } => {
                if *closure == Closure::Open {
                    return not("open polygon");
                }
                ConvexBody::polygon(vertices.clone())
            }
            Region::Disc { center, radius } => ConvexBody::disc(*center, *radius),
            _ => not("composite region"),
        }
    }
}
