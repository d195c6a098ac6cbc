//! Compact convex bodies with exact predicates: rational polygons (possibly
//! degenerate to a segment or a point) and discs with rational center and
//! radius.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{q, Point, Quad, Q};
use crate::plancx::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L2,
    Linf,
}

impl Norm {
    /// Support function of the unit ball at the integer direction `d`,
    /// i.e. `max_{|u| <= 1} u.d`.
    pub fn support(&self, d: Direction) -> Quad {
        match self {
            Norm::L2 => Quad::sqrt(d.norm_sq()),
            Norm::Linf => Quad::rational(q(d.l1())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexBody {
    /// Counterclockwise hull vertices, no three collinear; one or two
    /// vertices for a point or segment.
    Polygon(Vec<Point>),
    Disc { center: Point, radius: Q },
}

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn dist2(a: &Point, b: &Point) -> Q {
    (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)
}

fn seg_dist2(p: &Point, a: &Point, b: &Point) -> Q {
    let len = dist2(a, b);
    if len.is_zero() {
        return dist2(p, a);
    }
    let t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len;
    let t = t.max(Q::zero()).min(q(1));
    dist2(p, &a.lerp(b, t))
}

/// Strict convex hull (Andrew's monotone chain).
fn hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn axes(poly: &[Point]) -> Vec<(Q, Q)> {
    let n = poly.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let pairs = if n == 2 { 1 } else { n };
    for i in 0..pairs {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        out.push((-dy, dx));
        out.push((dx, dy));
    }
    out
}

fn project(poly: &[Point], axis: (Q, Q)) -> (Q, Q) {
    let vals = poly.iter().map(|p| p.x * axis.0 + p.y * axis.1);
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for v in vals {
        lo = Some(lo.map_or(v, |l| l.min(v)));
        hi = Some(hi.map_or(v, |h| h.max(v)));
    }
    (lo.unwrap(), hi.unwrap())
}

/// Separating-axis test for two closed convex polygons.
fn polys_intersect(a: &[Point], b: &[Point]) -> bool {
    let mut all = axes(a);
    all.extend(axes(b));
    if all.is_empty() {
        return a[0] == b[0];
    }
    all.into_iter().all(|ax| {
        let (alo, ahi) = project(a, ax);
        let (blo, bhi) = project(b, ax);
        !(ahi < blo || bhi < alo)
    })
}

fn box_poly(c: &Point, r: Q) -> Vec<Point> {
    if r.is_zero() {
        return vec![*c];
    }
    vec![
        Point::new(c.x - r, c.y - r),
        Point::new(c.x + r, c.y - r),
        Point::new(c.x + r, c.y + r),
        Point::new(c.x - r, c.y + r),
    ]
}

impl ConvexBody {
    /// A closed convex polygon from its vertices in either cyclic order.
    /// Rejects vertex lists that are not in convex position.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidRegion("empty polygon".into()));
        }
        let n = vertices.len();
        if n >= 3 {
            let signs: Vec<Q> = (0..n)
                .map(|k| cross(&vertices[k], &vertices[(k + 1) % n], &vertices[(k + 2) % n]))
                .collect();
            let pos = signs.iter().any(|s| s.is_positive());
            let neg = signs.iter().any(|s| s.is_negative());
            if pos && neg {
                return Err(Error::InvalidRegion("polygon vertices are not in convex position".into()));
            }
        }
        Ok(ConvexBody::Polygon(hull(vertices)))
    }

    pub fn disc(center: Point, radius: Q) -> Result<Self> {
        if radius.is_negative() {
            return Err(Error::InvalidRegion("negative radius".into()));
        }
        Ok(ConvexBody::Disc { center, radius })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            ConvexBody::Polygon(vs) => Self::polygon_dist2(vs, p).is_zero(),
            ConvexBody::Disc { center, radius } => dist2(p, center) <= radius * radius,
        }
    }

    pub fn interior_contains(&self, p: &Point) -> bool {
        match self {
            ConvexBody::Polygon(vs) if vs.len() >= 3 => {
                let n = vs.len();
                (0..n).all(|k| cross(&vs[k], &vs[(k + 1) % n], p).is_positive())
            }
            ConvexBody::Polygon(_) => false,
            ConvexBody::Disc { center, radius } => dist2(p, center) < radius * radius,
        }
    }

    /// Squared Euclidean distance from `p` to a polygon (zero inside).
    fn polygon_dist2(vs: &[Point], p: &Point) -> Q {
        let n = vs.len();
        if n >= 3 && (0..n).all(|k| !cross(&vs[k], &vs[(k + 1) % n], p).is_negative()) {
            return Q::zero();
        }
        match n {
            1 => dist2(p, &vs[0]),
            2 => seg_dist2(p, &vs[0], &vs[1]),
            _ => (0..n).map(|k| seg_dist2(p, &vs[k], &vs[(k + 1) % n])).min().unwrap(),
        }
    }

    /// Whether the body meets the closed ball of radius `r` around `x`.
    pub fn meets_ball(&self, x: &Point, r: Q, norm: Norm) -> bool {
        debug_assert!(!r.is_negative());
        match (self, norm) {
            (ConvexBody::Polygon(vs), Norm::L2) => Self::polygon_dist2(vs, x) <= r * r,
            (ConvexBody::Polygon(vs), Norm::Linf) => polys_intersect(vs, &box_poly(x, r)),
            (ConvexBody::Disc { center, radius }, Norm::L2) => {
                let s = *radius + r;
                dist2(x, center) <= s * s
            }
            (ConvexBody::Disc { center, radius }, Norm::Linf) => {
                let clamp = Point::new(center.x.max(x.x - r).min(x.x + r), center.y.max(x.y - r).min(x.y + r));
                dist2(&clamp, center) <= radius * radius
            }
        }
    }

    /// `min_{x in body} x.d` in scaled coordinates.
    pub fn support_min(&self, d: Direction) -> Quad {
        match self {
            ConvexBody::Polygon(vs) => Quad::rational(vs.iter().map(|v| v.dot(d.pair())).min().unwrap()),
            ConvexBody::Disc { center, radius } => {
                Quad::rational(center.dot(d.pair())) - Quad::sqrt(d.norm_sq()).scale(*radius)
            }
        }
    }

    pub fn intersects(&self, other: &ConvexBody) -> bool {
        match (self, other) {
            (ConvexBody::Polygon(a), ConvexBody::Polygon(b)) => polys_intersect(a, b),
            (ConvexBody::Polygon(_), ConvexBody::Disc { center, radius }) => {
                self.meets_ball(center, *radius, Norm::L2)
            }
            (ConvexBody::Disc { .. }, ConvexBody::Polygon(_)) => other.intersects(self),
            (ConvexBody::Disc { center: c1, radius: r1 }, ConvexBody::Disc { center: c2, radius: r2 }) => {
                let s = *r1 + *r2;
                dist2(c1, c2) <= s * s
            }
        }
    }

    /// Whether `self` is contained in `outer`.
    pub fn within(&self, outer: &ConvexBody) -> bool {
        match (self, outer) {
            (ConvexBody::Polygon(vs), _) => vs.iter().all(|v| outer.contains(v)),
            (ConvexBody::Disc { center, radius }, ConvexBody::Polygon(vs)) => {
                let n = vs.len();
                if n < 3 {
                    return radius.is_zero() && outer.contains(center);
                }
                (0..n).all(|k| {
                    let (a, b) = (vs[k], vs[(k + 1) % n]);
                    let c = cross(&a, &b, center);
                    !c.is_negative() && c * c >= radius * radius * dist2(&a, &b)
                })
            }
            (ConvexBody::Disc { center: c1, radius: r1 }, ConvexBody::Disc { center: c2, radius: r2 }) => {
                r1 <= r2 && dist2(c1, c2) <= (*r2 - *r1) * (*r2 - *r1)
            }
        }
    }

    pub fn bbox(&self) -> (Point, Point) {
        match self {
            ConvexBody::Polygon(vs) => {
                let xmin = vs.iter().map(|v| v.x).min().unwrap();
                let xmax = vs.iter().map(|v| v.x).max().unwrap();
                let ymin = vs.iter().map(|v| v.y).min().unwrap();
                let ymax = vs.iter().map(|v| v.y).max().unwrap();
                (Point::new(xmin, ymin), Point::new(xmax, ymax))
            }
            ConvexBody::Disc { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::qf;

    fn square() -> ConvexBody {
        ConvexBody::polygon(vec![Point::ints(-1, -1), Point::ints(1, -1), Point::ints(1, 1), Point::ints(-1, 1)])
            .unwrap()
    }

    #[test]
    fn polygon_normalizes_orientation() {
        let cw = ConvexBody::polygon(vec![Point::ints(0, 0), Point::ints(0, 1), Point::ints(1, 0)]).unwrap();
        let ccw = ConvexBody::polygon(vec![Point::ints(0, 0), Point::ints(1, 0), Point::ints(0, 1)]).unwrap();
        assert_eq!(cw, ccw);
        let bad = ConvexBody::polygon(vec![
            Point::ints(0, 0),
            Point::ints(2, 0),
            Point::new(q(1), qf(1, 2)),
            Point::ints(1, 2),
            Point::ints(0, 2),
        ]);
        assert!(bad.is_err());
    }

    #[test]
    fn ball_predicates() {
        let s = square();
        assert!(s.meets_ball(&Point::ints(2, 2), q(1), Norm::Linf));
        assert!(!s.meets_ball(&Point::ints(2, 2), q(1), Norm::L2));
        assert!(s.meets_ball(&Point::ints(2, 0), q(1), Norm::L2));
        let seg = ConvexBody::polygon(vec![Point::ints(-1, 1), Point::ints(1, 1)]).unwrap();
        assert!(seg.meets_ball(&Point::ints(0, 0), q(1), Norm::L2));
        assert!(!seg.meets_ball(&Point::ints(0, 0), qf(1, 2), Norm::Linf));
        let disc = ConvexBody::disc(Point::ints(0, 0), q(1)).unwrap();
        assert!(disc.meets_ball(&Point::ints(2, 0), q(1), Norm::L2));
        assert!(!disc.meets_ball(&Point::ints(2, 2), q(1), Norm::Linf));
        assert!(disc.meets_ball(&Point::ints(2, 1), q(1), Norm::Linf));
    }

    #[test]
    fn support_minimum() {
        let d = Direction::new(1, 1).unwrap();
        assert_eq!(square().support_min(d), Quad::rational(q(-2)));
        let disc = ConvexBody::disc(Point::ints(0, 0), q(1)).unwrap();
        assert_eq!(disc.support_min(d), -Quad::sqrt(2));
    }

    #[test]
    fn containment_and_overlap() {
        let seg = ConvexBody::polygon(vec![Point::ints(-1, 1), Point::ints(1, 1)]).unwrap();
        assert!(seg.within(&square()));
        let small = ConvexBody::disc(Point::ints(0, 0), qf(1, 2)).unwrap();
        assert!(small.within(&square()));
        assert!(!ConvexBody::disc(Point::ints(0, 0), q(2)).unwrap().within(&square()));
        let seg2 = ConvexBody::polygon(vec![Point::ints(-1, -1), Point::ints(1, -1)]).unwrap();
        assert!(!seg.intersects(&seg2));
        assert!(seg.intersects(&square()));
    }
}
