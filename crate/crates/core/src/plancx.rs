//! Exact-rational planar regular cell complexes.
//!
//! Cells are indexed in one flat range: vertices first, then edges, then
//! faces. Edges are oriented from the lexicographically smaller endpoint to
//! the larger one; faces are convex polygons traversed counterclockwise, and
//! the face/edge incidence is `+1` when the edge orientation agrees with that
//! traversal.

use std::collections::{BTreeSet, HashMap};

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{q, Point, Q};
use crate::region::Region;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarComplex {
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<usize>>,
    face_edges: Vec<Vec<(usize, i8)>>,
    cofacets: Vec<Vec<usize>>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Q {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

impl PlanarComplex {
    /// Assembles a complex from vertices, undirected edges and counterclockwise
    /// face cycles. Validates convexity, orientation and that every boundary
    /// step is an edge.
    pub fn from_parts(
        vertices: Vec<Point>,
        edges: Vec<(usize, usize)>,
        faces: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidRegion(m);
        let edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if vertices[a] <= vertices[b] { (a, b) } else { (b, a) })
            .collect();
        let mut lookup = HashMap::new();
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a == b || a >= vertices.len() || b >= vertices.len() {
                return Err(bad(format!("edge {i} is malformed")));
            }
            if lookup.insert((a.min(b), a.max(b)), i).is_some() {
                return Err(bad(format!("edge {i} is duplicated")));
            }
        }
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, cyc) in faces.iter().enumerate() {
            if cyc.len() < 3 {
                return Err(bad(format!("face {fi} has fewer than 3 vertices")));
            }
            let n = cyc.len();
            let mut area = Q::zero();
            let mut signed = Vec::with_capacity(n);
            for k in 0..n {
                let (a, b, c) = (cyc[k], cyc[(k + 1) % n], cyc[(k + 2) % n]);
                if cross(&vertices[a], &vertices[b], &vertices[c]).is_negative() {
                    return Err(bad(format!("face {fi} is not convex counterclockwise")));
                }
                area += cross(&vertices[cyc[0]], &vertices[a], &vertices[b]);
                let e = *lookup
                    .get(&(a.min(b), a.max(b)))
                    .ok_or_else(|| bad(format!("face {fi} uses a missing edge {a}-{b}")))?;
                signed.push((e, if edges[e].0 == a { 1 } else { -1 }));
            }
            if !area.is_positive() {
                return Err(bad(format!("face {fi} is degenerate")));
            }
            face_edges.push(signed);
        }
        let mut cx = PlanarComplex { vertices, edges, faces, face_edges, cofacets: Vec::new() };
        let mut cof = vec![Vec::new(); cx.n_cells()];
        for c in 0..cx.n_cells() {
            for (f, _) in cx.facets(c) {
                cof[f].push(c);
            }
        }
        cx.cofacets = cof;
        Ok(cx)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_cells(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_cell(&self, v: usize) -> usize {
        v
    }

    pub fn edge_cell(&self, e: usize) -> usize {
        self.vertices.len() + e
    }

    pub fn face_cell(&self, f: usize) -> usize {
        self.vertices.len() + self.edges.len() + f
    }

    pub fn dim(&self, cell: usize) -> usize {
        let (nv, ne) = (self.vertices.len(), self.edges.len());
        if cell < nv {
            0
        } else if cell < nv + ne {
            1
        } else {
            2
        }
    }

    /// Codimension-one faces of `cell` with their incidence numbers.
    pub fn facets(&self, cell: usize) -> Vec<(usize, i8)> {
        let (nv, ne) = (self.vertices.len(), self.edges.len());
        match self.dim(cell) {
            0 => Vec::new(),
            1 => {
                let (t, h) = self.edges[cell - nv];
                vec![(t, -1), (h, 1)]
            }
            _ => self.face_edges[cell - nv - ne]
                .iter()
                .map(|&(e, s)| (nv + e, s))
                .collect(),
        }
    }

    pub fn cofacets(&self, cell: usize) -> &[usize] {
        &self.cofacets[cell]
    }

    pub fn incidence(&self, upper: usize, lower: usize) -> i8 {
        self.facets(upper).into_iter().find(|&(c, _)| c == lower).map_or(0, |(_, s)| s)
    }

    /// Vertex indices of the closure of `cell`.
    pub fn closure_vertices(&self, cell: usize) -> Vec<usize> {
        let (nv, ne) = (self.vertices.len(), self.edges.len());
        match self.dim(cell) {
            0 => vec![cell],
            1 => {
                let (a, b) = self.edges[cell - nv];
                vec![a, b]
            }
            _ => self.faces[cell - nv - ne].clone(),
        }
    }

    /// All cells in the closure of `cell`, including itself.
    pub fn cell_closure(&self, cell: usize) -> Vec<usize> {
        let mut out = vec![cell];
        for (f, _) in self.facets(cell) {
            out.push(f);
            for (g, _) in self.facets(f) {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// A point in the relative interior of the cell (vertex average).
    pub fn representative(&self, cell: usize) -> Point {
        let vs = self.closure_vertices(cell);
        let n = q(vs.len() as i128);
        let (sx, sy) = vs.iter().fold((Q::zero(), Q::zero()), |(x, y), &v| {
            (x + self.vertices[v].x, y + self.vertices[v].y)
        });
        Point::new(sx / n, sy / n)
    }

    /// Exact point membership in the open cell.
    pub fn cell_contains(&self, cell: usize, p: &Point) -> bool {
        let vs = self.closure_vertices(cell);
        match vs.len() {
            1 => self.vertices[vs[0]] == *p,
            2 => {
                let (a, b) = (self.vertices[vs[0]], self.vertices[vs[1]]);
                if !cross(&a, &b, p).is_zero() {
                    return false;
                }
                let t = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
                let len = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
                t.is_positive() && t < len
            }
            n => (0..n).all(|k| {
                cross(&self.vertices[vs[k]], &self.vertices[vs[(k + 1) % n]], p).is_positive()
            }),
        }
    }

    /// Regular-CW and `dd = 0` checks.
    pub fn check(&self) -> Result<()> {
        for f in 0..self.faces.len() {
            let fc = self.face_cell(f);
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (e, s) in self.facets(fc) {
                for (v, t) in self.facets(e) {
                    *acc.entry(v).or_default() += (s * t) as i64;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Err(Error::InvalidRegion(format!("boundary of boundary of face {f} is nonzero")));
            }
        }
        Ok(())
    }

    /// Euler characteristic of the whole complex.
    pub fn euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn all_cells(&self) -> CellSet {
        CellSet::from_iter(0..self.n_cells())
    }

    // ---- cell-set predicates ----

    /// Order-convexity in the face poset; on failure reports the chain
    /// `lower <= middle <= upper` whose middle cell is missing.
    pub fn locally_closed_violation(&self, z: &CellSet) -> Option<(usize, usize, usize)> {
        for &upper in z.iter().filter(|&&c| self.dim(c) == 2) {
            for (middle, _) in self.facets(upper) {
                if z.contains(middle) {
                    continue;
                }
                if let Some((lower, _)) = self.facets(middle).into_iter().find(|(v, _)| z.contains(*v)) {
                    return Some((lower, middle, upper));
                }
            }
        }
        None
    }

    pub fn is_locally_closed(&self, z: &CellSet) -> bool {
        self.locally_closed_violation(z).is_none()
    }

    pub fn ensure_locally_closed(&self, z: &CellSet) -> Result<()> {
        match self.locally_closed_violation(z) {
            None => Ok(()),
            Some((lower, middle, upper)) => Err(Error::NotLocallyClosed { lower, middle, upper }),
        }
    }

    /// Down-closure.
    pub fn closure(&self, z: &CellSet) -> CellSet {
        let mut out = BTreeSet::new();
        for c in z.iter() {
            out.extend(self.cell_closure(*c));
        }
        CellSet { members: out }
    }

    pub fn is_closed(&self, z: &CellSet) -> bool {
        z.iter().all(|&c| self.facets(c).iter().all(|(f, _)| z.contains(*f)))
    }

    pub fn is_open(&self, z: &CellSet) -> bool {
        z.iter().all(|&c| self.cofacets(c).iter().all(|f| z.contains(*f)))
    }

    /// `a` is a subset of `z` and down-closed within `z`.
    pub fn is_closed_in(&self, a: &CellSet, z: &CellSet) -> bool {
        a.is_subset(z)
            && a.iter().all(|&c| {
                self.cell_closure(c).into_iter().all(|f| !z.contains(f) || a.contains(f))
            })
    }

    /// `u` is a subset of `z` and up-closed within `z`.
    pub fn is_open_in(&self, u: &CellSet, z: &CellSet) -> bool {
        let rest = z.difference(u);
        u.is_subset(z) && self.is_closed_in(&rest, z)
    }

    /// Cells contained in the closed half-plane `x.d <= s` (or `x.d >= s`
    /// when `closed_side` is false). The complex must already be refined
    /// along the line.
    pub fn halfplane_cells(&self, d: Direction, s: Q, closed_side: bool) -> Result<CellSet> {
        let mut out = BTreeSet::new();
        for c in 0..self.n_cells() {
            let (mut below, mut above) = (false, false);
            for v in self.closure_vertices(c) {
                let h = self.vertices[v].dot(d.pair()) - s;
                below |= h.is_negative();
                above |= h.is_positive();
            }
            if below && above {
                return Err(Error::NotRefined(crate::numeric::fmt_q(&s)));
            }
            let inside = if closed_side { !above } else { !below };
            if inside {
                out.insert(c);
            }
        }
        Ok(CellSet { members: out })
    }

    /// The subcomplex on a down-closed set of cells, with the map from new
    /// cell indices back to old ones.
    pub fn subcomplex(&self, closed: &CellSet) -> Result<(PlanarComplex, Vec<usize>)> {
        if !self.is_closed(closed) {
            return Err(Error::BadSubset { expected: "closed" });
        }
        let nv = self.vertices.len();
        let ne = self.edges.len();
        let mut vmap = HashMap::new();
        let mut verts = Vec::new();
        let mut back = Vec::new();
        for &c in closed.iter().filter(|&&c| c < nv) {
            vmap.insert(c, verts.len());
            verts.push(self.vertices[c]);
            back.push(c);
        }
        let mut edges = Vec::new();
        let mut ecells = Vec::new();
        for &c in closed.iter().filter(|&&c| c >= nv && c < nv + ne) {
            let (a, b) = self.edges[c - nv];
            edges.push((vmap[&a], vmap[&b]));
            ecells.push(c);
        }
        let mut faces = Vec::new();
        let mut fcells = Vec::new();
        for &c in closed.iter().filter(|&&c| c >= nv + ne) {
            faces.push(self.faces[c - nv - ne].iter().map(|v| vmap[v]).collect());
            fcells.push(c);
        }
        back.extend(ecells);
        back.extend(fcells);
        Ok((PlanarComplex::from_parts(verts, edges, faces)?, back))
    }

    /// Splits every cell crossed by the line `x.d = s`. Returns the refined
    /// complex and, for each old cell, the new cells partitioning it.
    pub fn refine_by_line(&self, d: Direction, s: Q) -> (PlanarComplex, Vec<Vec<usize>>) {
        let side = |p: &Point| {
            let h = p.dot(d.pair()) - s;
            if h.is_positive() {
                1
            } else if h.is_negative() {
                -1
            } else {
                0
            }
        };
        let mut verts = self.vertices.clone();
        let mut vside: Vec<i32> = verts.iter().map(side).collect();
        let mut edges = Vec::new();
        // old edge -> (new edge ids, optional split vertex)
        let mut edge_img: Vec<(Vec<usize>, Option<usize>)> = Vec::with_capacity(self.edges.len());
        let mut split_vertex: HashMap<(usize, usize), usize> = HashMap::new();
        for &(a, b) in &self.edges {
            if vside[a] * vside[b] == -1 {
                let (pa, pb) = (self.vertices[a], self.vertices[b]);
                let ha = pa.dot(d.pair()) - s;
                let hb = pb.dot(d.pair()) - s;
                let m = verts.len();
                verts.push(pa.lerp(&pb, ha / (ha - hb)));
                vside.push(0);
                split_vertex.insert((a.min(b), a.max(b)), m);
                edges.push((a, m));
                edges.push((m, b));
                edge_img.push((vec![edges.len() - 2, edges.len() - 1], Some(m)));
            } else {
                edges.push((a, b));
                edge_img.push((vec![edges.len() - 1], None));
            }
        }
        let mut faces = Vec::new();
        let mut face_img: Vec<(Vec<usize>, Option<usize>)> = Vec::with_capacity(self.faces.len());
        for cyc in &self.faces {
            let n = cyc.len();
            let mut ext = Vec::with_capacity(n + 2);
            for k in 0..n {
                let (a, b) = (cyc[k], cyc[(k + 1) % n]);
                ext.push(a);
                if let Some(&m) = split_vertex.get(&(a.min(b), a.max(b))) {
                    ext.push(m);
                }
            }
            let pos = ext.iter().any(|&v| vside[v] > 0);
            let neg = ext.iter().any(|&v| vside[v] < 0);
            if pos && neg {
                let zeros: Vec<usize> = (0..ext.len()).filter(|&k| vside[ext[k]] == 0).collect();
                debug_assert_eq!(zeros.len(), 2, "convex face meets a line in two boundary points");
                let (i, j) = (zeros[0], zeros[1]);
                let first: Vec<usize> = ext[i..=j].to_vec();
                let mut second: Vec<usize> = ext[j..].to_vec();
                second.extend_from_slice(&ext[..=i]);
                edges.push((ext[i], ext[j]));
                let chord = edges.len() - 1;
                faces.push(first);
                faces.push(second);
                face_img.push((vec![faces.len() - 2, faces.len() - 1], Some(chord)));
            } else {
                faces.push(ext);
                face_img.push((vec![faces.len() - 1], None));
            }
        }
        let cx = PlanarComplex::from_parts(verts, edges, faces)
            .expect("refinement of a valid complex is valid");
        let mut map = Vec::with_capacity(self.n_cells());
        for v in 0..self.vertices.len() {
            map.push(vec![cx.vertex_cell(v)]);
        }
        for (es, m) in &edge_img {
            let mut img: Vec<usize> = es.iter().map(|&e| cx.edge_cell(e)).collect();
            img.extend(m.map(|v| cx.vertex_cell(v)));
            map.push(img);
        }
        for (fs, chord) in &face_img {
            let mut img: Vec<usize> = fs.iter().map(|&f| cx.face_cell(f)).collect();
            img.extend(chord.map(|e| cx.edge_cell(e)));
            map.push(img);
        }
        (cx, map)
    }
}

/// Pushes a cell set through a refinement map.
pub fn map_cellset(z: &CellSet, cell_map: &[Vec<usize>]) -> CellSet {
    CellSet::from_iter(z.iter().flat_map(|&c| cell_map[c].iter().copied()))
}

/// Composes two refinement maps (old -> mid, mid -> new).
pub fn compose_maps(first: &[Vec<usize>], second: &[Vec<usize>]) -> Vec<Vec<usize>> {
    first
        .iter()
        .map(|img| img.iter().flat_map(|&c| second[c].iter().copied()).collect())
        .collect()
}

/// A set of cells of some complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellSet {
    members: BTreeSet<usize>,
}

impl FromIterator<usize> for CellSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        CellSet { members: iter.into_iter().collect() }
    }
}

impl CellSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members.contains(&c)
    }

    pub fn insert(&mut self, c: usize) {
        self.members.insert(c);
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &usize> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        CellSet { members: self.members.intersection(&other.members).copied().collect() }
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet { members: self.members.union(&other.members).copied().collect() }
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        CellSet { members: self.members.difference(&other.members).copied().collect() }
    }
}

/// A primitive integer direction `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Direction {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if (p, q) == (0, 0) || gcd(p, q) != 1 {
            return Err(Error::Parse(format!("({p},{q}) is not a primitive direction")));
        }
        Ok(Direction { p, q })
    }

    pub fn pair(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `p^2 + q^2`.
    pub fn norm_sq(&self) -> i128 {
        (self.p as i128).pow(2) + (self.q as i128).pow(2)
    }

    /// `|p| + |q|`, the support function of the unit L-infinity ball.
    pub fn l1(&self) -> i128 {
        (self.p.abs() + self.q.abs()) as i128
    }

    pub fn unit(&self) -> (f64, f64) {
        let n = (self.norm_sq() as f64).sqrt();
        (self.p as f64 / n, self.q as f64 / n)
    }

    pub fn angle(&self) -> f64 {
        (self.q as f64).atan2(self.p as f64)
    }

    /// `count` primitive directions spread over the circle: all primitive
    /// vectors of sup-norm height at most `h` (smallest `h` giving enough),
    /// sorted by angle and subsampled evenly.
    pub fn spread(count: usize) -> Vec<Direction> {
        if count == 0 {
            return Vec::new();
        }
        let mut h = 1;
        loop {
            let mut all: Vec<Direction> = Vec::new();
            for p in -h..=h {
                for q in -h..=h {
                    if let Ok(d) = Direction::new(p, q) {
                        all.push(d);
                    }
                }
            }
            if all.len() >= count {
                all.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).unwrap());
                return (0..count).map(|i| all[i * all.len() / count]).collect();
            }
            h += 1;
        }
    }
}

/// A rectilinear grid complex on the window `[xs0, xs_last] x [ys0, ys_last]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    xs: Vec<Q>,
    ys: Vec<Q>,
    complex: PlanarComplex,
}

fn validate_cuts(cuts: &[Q], axis: &str) -> Result<()> {
    if cuts.len() < 2 {
        return Err(Error::InvalidCuts(format!("{axis}: at least two cuts required")));
    }
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidCuts(format!("{axis}: cuts must be strictly increasing")));
    }
    Ok(())
}

/// Rectilinear complex with `(m-1)(n-1)` faces on the given cuts.
pub fn build_grid(xs: &[Q], ys: &[Q]) -> Result<Grid> {
    validate_cuts(xs, "x")?;
    validate_cuts(ys, "y")?;
    let (nx, ny) = (xs.len(), ys.len());
    let vid = |i: usize, j: usize| i * ny + j;
    let mut verts = Vec::with_capacity(nx * ny);
    for x in xs {
        for y in ys {
            verts.push(Point::new(*x, *y));
        }
    }
    let mut edges = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..ny {
            edges.push((vid(i, j), vid(i + 1, j)));
        }
    }
    for i in 0..nx {
        for j in 0..ny - 1 {
            edges.push((vid(i, j), vid(i, j + 1)));
        }
    }
    let mut faces = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..ny - 1 {
            faces.push(vec![vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    let complex = PlanarComplex::from_parts(verts, edges, faces)?;
    Ok(Grid { xs: xs.to_vec(), ys: ys.to_vec(), complex })
}

/// Where a coordinate falls among sorted cuts.
enum Slot {
    On(usize),
    Between(usize),
}

fn slot(cuts: &[Q], v: &Q) -> Option<Slot> {
    match cuts.binary_search(v) {
        Ok(i) => Some(Slot::On(i)),
        Err(0) => None,
        Err(i) if i == cuts.len() => None,
        Err(i) => Some(Slot::Between(i - 1)),
    }
}

impl Grid {
    pub fn xs(&self) -> &[Q] {
        &self.xs
    }

    pub fn ys(&self) -> &[Q] {
        &self.ys
    }

    pub fn complex(&self) -> &PlanarComplex {
        &self.complex
    }

    pub fn window(&self) -> (Point, Point) {
        (
            Point::new(self.xs[0], self.ys[0]),
            Point::new(*self.xs.last().unwrap(), *self.ys.last().unwrap()),
        )
    }

    pub fn in_window(&self, p: &Point) -> bool {
        let (lo, hi) = self.window();
        lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y
    }

    /// The open cell containing `p`, if `p` lies in the window.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let nv = nx * ny;
        let nh = (nx - 1) * ny;
        let nvert = nx * (ny - 1);
        Some(match (slot(&self.xs, &p.x)?, slot(&self.ys, &p.y)?) {
            (Slot::On(i), Slot::On(j)) => i * ny + j,
            (Slot::Between(i), Slot::On(j)) => nv + i * ny + j,
            (Slot::On(i), Slot::Between(j)) => nv + nh + i * (ny - 1) + j,
            (Slot::Between(i), Slot::Between(j)) => nv + nh + nvert + i * (ny - 1) + j,
        })
    }

    /// Cells whose representative point satisfies `pred`.
    pub fn cells_where(&self, pred: impl Fn(&Point) -> bool) -> CellSet {
        (0..self.complex.n_cells())
            .filter(|&c| pred(&self.complex.representative(c)))
            .collect()
    }

    /// Re-expresses a cell set of `self` on a grid whose cuts refine ours.
    pub fn transfer(&self, z: &CellSet, finer: &Grid) -> CellSet {
        finer.cells_where(|p| self.locate(p).is_some_and(|c| z.contains(c)))
    }

    /// The grid with the extra cuts merged in, clipped to the window.
    pub fn with_cuts(&self, extra_x: &[Q], extra_y: &[Q]) -> Grid {
        let merge = |base: &[Q], extra: &[Q]| {
            let (lo, hi) = (base[0], *base.last().unwrap());
            let mut all: Vec<Q> = base.to_vec();
            all.extend(extra.iter().copied().filter(|v| lo <= *v && *v <= hi));
            all.sort();
            all.dedup();
            all
        };
        build_grid(&merge(&self.xs, extra_x), &merge(&self.ys, extra_y))
            .expect("merged cuts are valid")
    }
}

/// A closed axis-aligned box `[min.x, max.x] x [min.y, max.y]`; segments and
/// points are degenerate boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedBox {
    pub min: Point,
    pub max: Point,
}

impl ClosedBox {
    pub fn contains(&self, p: &Point) -> bool {
        self.min.x <= p.x && p.x <= self.max.x && self.min.y <= p.y && p.y <= self.max.y
    }
}

/// Minkowski sum of a rectilinear closed region with the closed
/// L-infinity ball of radius `a`.
pub fn linf_dilate(region: &Region, a: Q) -> Result<Vec<ClosedBox>> {
    if a.is_negative() {
        return Err(Error::InvalidRegion("dilation radius must be nonnegative".into()));
    }
    let boxes = region.closed_boxes()?;
    Ok(boxes
        .into_iter()
        .map(|b| ClosedBox {
            min: Point::new(b.min.x - a, b.min.y - a),
            max: Point::new(b.max.x + a, b.max.y + a),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::qf;

    fn unit_grid() -> Grid {
        build_grid(&[q(0), q(1)], &[q(0), q(1)]).unwrap()
    }

    #[test]
    fn grid_counts() {
        let g = unit_grid();
        let c = g.complex();
        assert_eq!((c.n_vertices(), c.n_edges(), c.n_faces()), (4, 4, 1));
        let g = build_grid(&[q(-1), q(0), q(1)], &[q(-1), q(0), q(1)]).unwrap();
        let c = g.complex();
        assert_eq!((c.n_vertices(), c.n_edges(), c.n_faces()), (9, 12, 4));
        assert_eq!(c.euler(), 1);
        c.check().unwrap();
        assert!(build_grid(&[q(1), q(0)], &[q(0), q(1)]).is_err());
        assert!(build_grid(&[q(0), q(0)], &[q(0), q(1)]).is_err());
        assert!(build_grid(&[q(0)], &[q(0), q(1)]).is_err());
    }

    #[test]
    fn locate_matches_cells() {
        let g = build_grid(&[q(-1), q(0), q(2)], &[q(0), q(1), q(3)]).unwrap();
        let c = g.complex();
        for cell in 0..c.n_cells() {
            let r = c.representative(cell);
            assert_eq!(g.locate(&r), Some(cell));
            assert!(c.cell_contains(cell, &r));
        }
        assert_eq!(g.locate(&Point::ints(5, 0)), None);
    }

    #[test]
    fn diagonal_split_of_unit_square() {
        let g = unit_grid();
        let d = Direction::new(1, -1).unwrap();
        let (r, map) = g.complex().refine_by_line(d, q(0));
        r.check().unwrap();
        assert_eq!(r.n_faces(), 2);
        assert_eq!(r.n_edges(), 5);
        let face = g.complex().face_cell(0);
        assert_eq!(map[face].len(), 3);
    }

    #[test]
    fn vertical_line_on_cut_is_identity() {
        let g = build_grid(&[q(-1), q(0), q(1)], &[q(0), q(1)]).unwrap();
        let (r, map) = g.complex().refine_by_line(Direction::new(1, 0).unwrap(), q(0));
        assert_eq!(r.n_cells(), g.complex().n_cells());
        assert!(map.iter().all(|img| img.len() == 1));
    }

    #[test]
    fn local_closedness_examples() {
        let g = unit_grid();
        let c = g.complex();
        assert!(c.is_locally_closed(&c.all_cells()));
        let face = c.face_cell(0);
        assert!(c.is_locally_closed(&CellSet::from_iter([face])));
        let bad = CellSet::from_iter([face, 0]);
        assert!(!c.is_locally_closed(&bad));
        let (lower, middle, upper) = c.locally_closed_violation(&bad).unwrap();
        assert_eq!((lower, upper), (0, face));
        assert_eq!(c.dim(middle), 1);
    }

    #[test]
    fn closure_is_idempotent_and_closed() {
        let g = unit_grid();
        let c = g.complex();
        let z = CellSet::from_iter([c.face_cell(0)]);
        let cl = c.closure(&z);
        assert_eq!(cl.len(), 9);
        assert_eq!(c.closure(&cl), cl);
        assert!(c.is_closed(&cl));
        assert!(c.is_open(&z));
    }

    #[test]
    fn halfplane_requires_refinement() {
        let g = unit_grid();
        let d = Direction::new(1, 1).unwrap();
        assert!(g.complex().halfplane_cells(d, q(1), true).is_err());
        let (r, _) = g.complex().refine_by_line(d, q(1));
        let h = r.halfplane_cells(d, q(1), true).unwrap();
        // lower-left triangle: 3 vertices, 3 edges, 1 face
        assert_eq!(h.len(), 7);
    }

    #[test]
    fn dilate_boxes() {
        let sq = Region::closed_box(Point::ints(-1, -1), Point::ints(1, 1));
        let out = linf_dilate(&sq, q(1)).unwrap();
        assert_eq!(out, vec![ClosedBox { min: Point::ints(-2, -2), max: Point::ints(2, 2) }]);
        let seg = Region::segment(Point::ints(-1, 1), Point::ints(1, 1));
        let out = linf_dilate(&seg, q(1)).unwrap();
        assert_eq!(out, vec![ClosedBox { min: Point::ints(-2, 0), max: Point::ints(2, 2) }]);
        let out = linf_dilate(&sq, q(0)).unwrap();
        assert_eq!(out[0].min, Point::ints(-1, -1));
        let disc = Region::disc(Point::ints(0, 0), qf(1, 1));
        assert!(linf_dilate(&disc, q(1)).is_err());
    }

    #[test]
    fn spread_directions() {
        let ds = Direction::spread(64);
        assert_eq!(ds.len(), 64);
        let mut sorted = ds.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 64);
        assert!(Direction::new(2, 4).is_err());
    }
}
