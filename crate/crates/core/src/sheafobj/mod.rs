//! Sheaf objects: finite sums of shifted indicator sheaves, their stalks,
//! restriction to subsets, the distinguished triangle of a closed subset,
//! and convolution with ball kernels.

mod field;

pub use field::StalkField;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomc::{self, Cohomology, GradedDims, InducedMap};
use crate::convex::{ConvexBody, Norm};
use crate::error::{Error, Result};
use crate::fieldla::FieldPrime;
use crate::numeric::{fmt_q, Point, Quad, Q};
use crate::plancx::{build_grid, CellSet, Direction, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Grid,
    Convex,
}

/// A ball kernel. Negative radii denote the open ball of radius `|a|`
/// shifted into degree `-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub norm: Norm,
    pub radius: Q,
}

impl BallSpec {
    pub fn linf(radius: Q) -> Self {
        BallSpec { norm: Norm::Linf, radius }
    }

    pub fn l2(radius: Q) -> Self {
        BallSpec { norm: Norm::L2, radius }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSpec {
    /// `{(x, y, t) : x.y <= t}`
    RadonA,
    /// `{(x, y, t) : x.y <= t + a}`
    RadonAa(Q),
    /// `{(x, x') : |x - x'| <= a}`
    Delta(Q, Norm),
    /// `{(x, x', t) : |x - x'| <= t + a}`-type thickening kernel.
    Zt(Q, Norm),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChiKind {
    K,
    Delta,
    Z,
    L,
}

/// The canonical morphism `chi_{a,b}: K_a -> K_b` for `a >= b >= 0`,
/// induced by restriction from the larger ball to the smaller one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChiArrow {
    pub kind: ChiKind,
    pub a: Q,
    pub b: Q,
}

impl ChiArrow {
    pub fn new(kind: ChiKind, a: Q, b: Q) -> Result<Self> {
        if a < b || b.is_negative() {
            return Err(Error::Inconsistent(format!(
                "chi_{{{},{}}} needs a >= b >= 0",
                fmt_q(&a),
                fmt_q(&b)
            )));
        }
        Ok(ChiArrow { kind, a, b })
    }

    pub fn identity(kind: ChiKind, a: Q) -> Result<Self> {
        Self::new(kind, a, a)
    }

    /// `then o self`; requires `self.b == then.a`.
    pub fn then(&self, then: &ChiArrow) -> Result<ChiArrow> {
        if self.kind != then.kind || self.b != then.a {
            return Err(Error::Inconsistent("arrows are not composable".into()));
        }
        ChiArrow::new(self.kind, self.a, then.b)
    }

    /// `K_c * chi_{a,b} = chi_{a+c, b+c}`.
    pub fn convolve_by(&self, c: Q) -> Result<ChiArrow> {
        ChiArrow::new(self.kind, self.a + c, self.b + c)
    }

    pub fn is_identity(&self) -> bool {
        self.a == self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridGenerator {
    pub cells: CellSet,
    pub degree: i32,
    pub mult: usize,
}

/// Indicator sums over locally closed cell sets of a rectilinear grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSheaf {
    grid: Grid,
    field: FieldPrime,
    generators: Vec<GridGenerator>,
}

impl GridSheaf {
    pub fn new(grid: Grid, field: FieldPrime, generators: Vec<GridGenerator>) -> Result<Self> {
        for (index, g) in generators.iter().enumerate() {
            if let Some(c) = g.cells.iter().find(|&&c| c >= grid.complex().n_cells()) {
                return Err(Error::Generator { index, reason: format!("cell {c} is not in the grid") });
            }
            if let Some((lower, middle, upper)) = grid.complex().locally_closed_violation(&g.cells) {
                return Err(Error::Generator {
                    index,
                    reason: format!("not locally closed: {lower} <= {middle} <= {upper}, {middle} missing"),
                });
            }
            if g.mult == 0 {
                return Err(Error::Generator { index, reason: "multiplicity must be positive".into() });
            }
        }
        Ok(GridSheaf { grid, field, generators })
    }

    /// Single indicator `k_Z` in degree 0.
    pub fn indicator(grid: Grid, field: FieldPrime, cells: CellSet) -> Result<Self> {
        Self::new(grid, field, vec![GridGenerator { cells, degree: 0, mult: 1 }])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn generators(&self) -> &[GridGenerator] {
        &self.generators
    }

    /// Union of the generator cell sets.
    pub fn support(&self) -> CellSet {
        self.generators.iter().fold(CellSet::empty(), |acc, g| acc.union(&g.cells))
    }

    /// Bounding box of the closure of the support.
    pub fn support_bbox(&self) -> Option<(Point, Point)> {
        let cx = self.grid.complex();
        let pts: Vec<Point> = self
            .support()
            .iter()
            .flat_map(|&c| cx.closure_vertices(c))
            .map(|v| cx.vertex(v))
            .collect();
        bbox_of(&pts)
    }

    /// The same sheaf on a grid whose cuts refine ours.
    pub fn transfer(&self, finer: &Grid) -> Result<GridSheaf> {
        let gens = self
            .generators
            .iter()
            .map(|g| GridGenerator { cells: self.grid.transfer(&g.cells, finer), ..g.clone() })
            .collect();
        GridSheaf::new(finer.clone(), self.field, gens)
    }
}

pub(crate) fn bbox_of(pts: &[Point]) -> Option<(Point, Point)> {
    let first = *pts.first()?;
    Some(pts.iter().fold((first, first), |(lo, hi), p| {
        (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y)))
    }))
}

/// `C` minus pairwise disjoint holes `D_i` inside it, optionally thickened
/// by a ball: `K_a * k_{C \ U D_i}` is represented symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexDiffRegion {
    outer: ConvexBody,
    holes: Vec<ConvexBody>,
    thickening: Option<(Norm, Q)>,
}

/// `H^*_c((C \ U D_i) cap B)` for convex `C`, `D_i`, `B` with `e0 = [C meets B]`
/// and `c` holes meeting `B`.
pub fn les_rank_rule(e0: bool, c: usize) -> GradedDims {
    let mut g = GradedDims::zero();
    if e0 {
        g.add_at(0, usize::from(c == 0));
        g.add_at(1, c.saturating_sub(1));
    }
    g
}

fn body_meets(body: &ConvexBody, x: &Point, r: Q, norm: Norm) -> bool {
    if r.is_zero() {
        body.contains(x)
    } else {
        body.meets_ball(x, r, norm)
    }
}

impl ConvexDiffRegion {
    pub fn new(outer: ConvexBody, holes: Vec<ConvexBody>) -> Result<Self> {
        for (i, h) in holes.iter().enumerate() {
            if !h.within(&outer) {
                return Err(Error::InvalidRegion(format!("hole {i} is not contained in the outer body")));
            }
            for (j, other) in holes.iter().enumerate().skip(i + 1) {
                if h.intersects(other) {
                    return Err(Error::InvalidRegion(format!("holes {i} and {j} meet")));
                }
            }
        }
        Ok(ConvexDiffRegion { outer, holes, thickening: None })
    }

    pub fn outer(&self) -> &ConvexBody {
        &self.outer
    }

    pub fn holes(&self) -> &[ConvexBody] {
        &self.holes
    }

    pub fn thickening(&self) -> Option<(Norm, Q)> {
        self.thickening
    }

    /// `K_a * (this)`, `a >= 0`.
    pub fn thickened(&self, norm: Norm, a: Q) -> Result<Self> {
        if a.is_negative() {
            return Err(Error::Backend("convex backend supports only nonnegative radii".into()));
        }
        let thickening = match self.thickening {
            None => Some((norm, a)),
            Some((_, t)) if t.is_zero() => Some((norm, a)),
            Some((n, t)) if n == norm || a.is_zero() => Some((n, t + a)),
            Some(_) => return Err(Error::Backend("cannot compose thickenings in different norms".into())),
        };
        Ok(ConvexDiffRegion { thickening, ..self.clone() })
    }

    /// Which pieces the ball `(x, r, norm)` meets, after thickening.
    fn pieces_met(&self, x: &Point, r: Q, norm: Norm) -> Result<(bool, usize)> {
        let (norm, r) = match self.thickening {
            None => (norm, r),
            Some((_, t)) if t.is_zero() => (norm, r),
            Some((n, t)) if r.is_zero() => (n, t),
            Some((n, t)) if n == norm => (n, t + r),
            Some(_) => return Err(Error::Backend("mixed norms between thickening and query ball".into())),
        };
        let e0 = body_meets(&self.outer, x, r, norm);
        let c = self.holes.iter().filter(|h| body_meets(h, x, r, norm)).count();
        Ok((e0, c))
    }

    /// Cohomology of `region cap ball(x, r)` (the stalk of `K_r * region`).
    pub fn ball_cohomology(&self, x: &Point, r: Q, norm: Norm) -> Result<GradedDims> {
        let (e0, c) = self.pieces_met(x, r, norm)?;
        Ok(les_rank_rule(e0, c))
    }

    /// `min x.d` over the outer body and over each hole, after thickening.
    pub fn support_minima(&self, d: Direction) -> (Quad, Vec<Quad>) {
        let shift = match self.thickening {
            Some((n, t)) => n.support(d).scale(t),
            None => Quad::zero(),
        };
        (
            self.outer.support_min(d) - shift,
            self.holes.iter().map(|h| h.support_min(d) - shift).collect(),
        )
    }

    /// Bounding box of the thickened outer body.
    pub fn bbox(&self) -> (Point, Point) {
        let (lo, hi) = self.outer.bbox();
        let t = self.thickening.map_or(Q::zero(), |(_, t)| t);
        (Point::new(lo.x - t, lo.y - t), Point::new(hi.x + t, hi.y + t))
    }

    /// Number of pieces (outer body plus holes) that are nonempty.
    pub fn euler_c(&self) -> i64 {
        1 - self.holes.len() as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexGenerator {
    pub region: ConvexDiffRegion,
    pub degree: i32,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexSheaf {
    window: (Point, Point),
    field: FieldPrime,
    generators: Vec<ConvexGenerator>,
}

impl ConvexSheaf {
    pub fn new(window: (Point, Point), field: FieldPrime, generators: Vec<ConvexGenerator>) -> Result<Self> {
        for (index, g) in generators.iter().enumerate() {
            if g.mult == 0 {
                return Err(Error::Generator { index, reason: "multiplicity must be positive".into() });
            }
        }
        Ok(ConvexSheaf { window, field, generators })
    }

    pub fn window(&self) -> (Point, Point) {
        self.window
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn generators(&self) -> &[ConvexGenerator] {
        &self.generators
    }

    pub fn support_bbox(&self) -> Option<(Point, Point)> {
        let pts: Vec<Point> = self
            .generators
            .iter()
            .flat_map(|g| {
                let (lo, hi) = g.region.bbox();
                [lo, hi]
            })
            .collect();
        bbox_of(&pts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafObject {
    Grid(GridSheaf),
    Convex(ConvexSheaf),
}

/// The triangle `k_{Z \ Z'} -> k_Z -> k_{Z'}` with its maps on cohomology.
#[derive(Clone, Debug)]
pub struct TriangleSplit {
    pub open_part: GridSheaf,
    pub whole: GridSheaf,
    pub closed_part: GridSheaf,
    pub extension: InducedMap,
    pub restriction: InducedMap,
}

/// Splits `k_Z` along a subset `Z'` closed in `Z`.
pub fn triangle_split(grid: &Grid, field: FieldPrime, z: &CellSet, zp: &CellSet) -> Result<TriangleSplit> {
    let cx = grid.complex();
    cx.ensure_locally_closed(z)?;
    if !cx.is_closed_in(zp, z) {
        return Err(Error::BadSubset { expected: "closed" });
    }
    let u = z.difference(zp);
    Ok(TriangleSplit {
        extension: cohomc::extension_from_open(cx, z, &u, field)?,
        restriction: cohomc::restriction_to_closed(cx, z, zp, field)?,
        open_part: GridSheaf::indicator(grid.clone(), field, u)?,
        whole: GridSheaf::indicator(grid.clone(), field, z.clone())?,
        closed_part: GridSheaf::indicator(grid.clone(), field, zp.clone())?,
    })
}

/// Cuts of `base` strictly inside `(lo, hi)`, plus `lo`, `hi` and any
/// extra values inside `[lo, hi]`.
pub(crate) fn local_cuts(base: &[Q], lo: Q, hi: Q, extra: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = base.iter().copied().filter(|c| lo < *c && *c < hi).collect();
    v.extend([lo, hi]);
    v.extend(extra.iter().copied().filter(|c| lo <= *c && *c <= hi));
    v.sort();
    v.dedup();
    v
}

/// Cells of `local` lying in `z` (cells of `grid`) and satisfying `keep`.
pub(crate) fn local_cells(grid: &Grid, z: &CellSet, local: &Grid, keep: impl Fn(&Point) -> bool) -> CellSet {
    local.cells_where(|p| keep(p) && grid.locate(p).is_some_and(|c| z.contains(c)))
}

pub(crate) fn in_closed_box(p: &Point, x: &Point, r: Q) -> bool {
    (p.x - x.x).abs() <= r && (p.y - x.y).abs() <= r
}

pub(crate) fn in_open_box(p: &Point, x: &Point, r: Q) -> bool {
    (p.x - x.x).abs() < r && (p.y - x.y).abs() < r
}

/// `H^*_c(z cap box(x, r))` on a local grid; the box is closed, or open
/// when `open` is set. Requires `r > 0`.
pub(crate) fn box_cohomology(grid: &Grid, z: &CellSet, x: &Point, r: Q, open: bool, field: FieldPrime) -> GradedDims {
    let xs = local_cuts(grid.xs(), x.x - r, x.x + r, &[]);
    let ys = local_cuts(grid.ys(), x.y - r, x.y + r, &[]);
    let local = build_grid(&xs, &ys).expect("local cuts are increasing");
    let cells = if open {
        local_cells(grid, z, &local, |p| in_open_box(p, x, r))
    } else {
        local_cells(grid, z, &local, |_| true)
    };
    Cohomology::new(cohomc::ccochain(local.complex(), &cells, field).expect("intersection is locally closed"))
        .dims()
}

impl SheafObject {
    pub fn backend(&self) -> Backend {
        match self {
            SheafObject::Grid(_) => Backend::Grid,
            SheafObject::Convex(_) => Backend::Convex,
        }
    }

    pub fn field(&self) -> FieldPrime {
        match self {
            SheafObject::Grid(g) => g.field,
            SheafObject::Convex(c) => c.field,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SheafObject::Grid(g) => g.generators.iter().all(|gen| gen.cells.is_empty()),
            SheafObject::Convex(c) => c.generators.is_empty(),
        }
    }

    pub fn support_bbox(&self) -> Option<(Point, Point)> {
        match self {
            SheafObject::Grid(g) => g.support_bbox(),
            SheafObject::Convex(c) => c.support_bbox(),
        }
    }

    fn window(&self) -> (Point, Point) {
        match self {
            SheafObject::Grid(g) => g.grid.window(),
            SheafObject::Convex(c) => c.window,
        }
    }

    fn check_window(&self, x: &Point) -> Result<()> {
        let (lo, hi) = self.window();
        if lo.x <= x.x && x.x <= hi.x && lo.y <= x.y && x.y <= hi.y {
            Ok(())
        } else {
            Err(Error::OutsideWindow(format!("({}, {})", fmt_q(&x.x), fmt_q(&x.y))))
        }
    }

    /// Graded stalk dimensions at `x`.
    pub fn stalk(&self, x: &Point) -> Result<GradedDims> {
        self.check_window(x)?;
        match self {
            SheafObject::Grid(g) => {
                let cell = g.grid.locate(x).expect("point lies in the window");
                let mut out = GradedDims::zero();
                for gen in g.generators.iter().filter(|gen| gen.cells.contains(cell)) {
                    out.add_at(gen.degree, gen.mult);
                }
                Ok(out)
            }
            SheafObject::Convex(_) => self.convolve_stalk(&BallSpec::linf(Q::zero()), x),
        }
    }

    /// Generator-wise intersection with `zp`, a cell set of the same grid.
    pub fn tensor_restrict(&self, zp: &CellSet) -> Result<SheafObject> {
        let SheafObject::Grid(g) = self else {
            return Err(Error::Backend("restriction to cell sets needs the grid backend".into()));
        };
        let gens: Vec<GridGenerator> = g
            .generators
            .iter()
            .map(|gen| GridGenerator { cells: gen.cells.intersection(zp), ..gen.clone() })
            .collect();
        Ok(SheafObject::Grid(GridSheaf::new(g.grid.clone(), g.field, gens)?))
    }

    /// `(K_a * F)_x`.
    pub fn convolve_stalk(&self, ball: &BallSpec, x: &Point) -> Result<GradedDims> {
        self.check_window(x)?;
        match self {
            SheafObject::Grid(g) => {
                if ball.norm != Norm::Linf {
                    return Err(Error::Backend("grid backend needs the L-infinity ball".into()));
                }
                let a = ball.radius;
                if a.is_zero() {
                    return self.stalk(x);
                }
                let mut out = GradedDims::zero();
                for gen in &g.generators {
                    let h = box_cohomology(&g.grid, &gen.cells, x, a.abs(), a.is_negative(), g.field);
                    let shift = if a.is_negative() { gen.degree - 2 } else { gen.degree };
                    out.add(&h.shifted(shift, gen.mult));
                }
                Ok(out)
            }
            SheafObject::Convex(c) => {
                if ball.radius.is_negative() {
                    return Err(Error::Backend("convex backend supports only nonnegative radii".into()));
                }
                let mut out = GradedDims::zero();
                for gen in &c.generators {
                    let h = gen.region.ball_cohomology(x, ball.radius, ball.norm)?;
                    out.add(&h.shifted(gen.degree, gen.mult));
                }
                Ok(out)
            }
        }
    }

    /// `(k_{Delta_a} o F)_x`, evaluated by restricting `F` to the closed ball
    /// on a globally refined grid and taking global cohomology.
    pub fn compose_kernel_stalk(&self, kernel: &KernelSpec, x: &Point) -> Result<GradedDims> {
        self.check_window(x)?;
        let (a, norm) = match kernel {
            KernelSpec::Delta(a, norm) => (*a, *norm),
            _ => return Err(Error::Backend("only the diagonal-thickening kernel is evaluated stalkwise".into())),
        };
        let SheafObject::Grid(g) = self else {
            return Err(Error::Backend("kernel composition is evaluated on the grid backend".into()));
        };
        if norm != Norm::Linf || a.is_negative() {
            return Err(Error::Backend("kernel composition needs a closed L-infinity ball".into()));
        }
        let fine = g.grid.with_cuts(&[x.x - a, x.x + a], &[x.y - a, x.y + a]);
        let restricted = SheafObject::Grid(g.transfer(&fine)?);
        let ball = fine.cells_where(|p| in_closed_box(p, x, a));
        let SheafObject::Grid(r) = restricted.tensor_restrict(&ball)? else { unreachable!() };
        let mut out = GradedDims::zero();
        for gen in &r.generators {
            out.add(&cohomc::hcc(fine.complex(), &gen.cells, r.field)?.shifted(gen.degree, gen.mult));
        }
        Ok(out)
    }

    /// `K_a * F` as a stalk field (grid backend, L-infinity ball).
    pub fn convolve_grid(&self, a: Q) -> Result<StalkField> {
        match self {
            SheafObject::Grid(g) => field::convolve(g, a),
            SheafObject::Convex(_) => Err(Error::Backend("stalk fields need the grid backend".into())),
        }
    }

    /// `K_a * F` as a sheaf object. On the grid backend each cohomology
    /// sheaf must be recognized as an indicator; the result is their sum.
    pub fn convolve_object(&self, ball: &BallSpec) -> Result<SheafObject> {
        match self {
            SheafObject::Grid(g) => {
                if ball.norm != Norm::Linf {
                    return Err(Error::Backend("grid backend needs the L-infinity ball".into()));
                }
                let sf = field::convolve(g, ball.radius)?;
                let mut gens = Vec::new();
                for degree in sf.degrees() {
                    let cells = sf.recognize_indicator(degree).map_err(|reason| {
                        Error::Inconsistent(format!("degree {degree} of the convolution: {reason}"))
                    })?;
                    gens.push(GridGenerator { cells, degree, mult: 1 });
                }
                Ok(SheafObject::Grid(GridSheaf::new(sf.grid().clone(), g.field, gens)?))
            }
            SheafObject::Convex(c) => {
                let gens = c
                    .generators
                    .iter()
                    .map(|gen| {
                        Ok(ConvexGenerator { region: gen.region.thickened(ball.norm, ball.radius)?, ..gen.clone() })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let t = ball.radius;
                let (lo, hi) = c.window;
                let window = (Point::new(lo.x - t, lo.y - t), Point::new(hi.x + t, hi.y + t));
                Ok(SheafObject::Convex(ConvexSheaf::new(window, c.field, gens)?))
            }
        }
    }
}

#[cfg(test)]
mod tests;
