//! Compactly supported cellular cohomology of locally closed cell sets.
//!
//! For a locally closed union of open cells `Z`, the cochain complex has one
//! generator per cell of `Z` and differential given by the ambient
//! incidence numbers restricted to `Z`. Restriction to a closed part is the
//! quotient deleting the other cells; extension from an open part is the
//! inclusion of the subcomplex.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fieldla::{FieldPrime, FpMatrix};
use crate::plancx::{CellSet, PlanarComplex};

/// Finitely supported map degree -> dimension; zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedDims(BTreeMap<i32, usize>);

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        write!(f, "}}")
    }
}

impl GradedDims {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(i32, usize)]) -> Self {
        let mut g = Self::zero();
        for &(k, v) in pairs {
            g.add_at(k, v);
        }
        g
    }

    pub fn get(&self, degree: i32) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, degree: i32, v: usize) {
        if v > 0 {
            *self.0.entry(degree).or_default() += v;
        }
    }

    pub fn add(&mut self, other: &GradedDims) {
        for (&k, &v) in &other.0 {
            self.add_at(k, v);
        }
    }

    /// Places degree `i` at `i + by`, multiplying dimensions by `mult`.
    pub fn shifted(&self, by: i32, mult: usize) -> GradedDims {
        let mut g = GradedDims::zero();
        for (&k, &v) in &self.0 {
            g.add_at(k + by, v * mult);
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn euler(&self) -> i64 {
        self.0.iter().map(|(&k, &v)| if k.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) }).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_dim(&self) -> usize {
        self.0.values().copied().max().unwrap_or(0)
    }
}

/// Cochain complex computing `H^*_c(Z; F_p)`.
#[derive(Clone, Debug)]
pub struct CcComplex {
    field: FieldPrime,
    cells: [Vec<usize>; 3],
    /// `diff[k]`: rows are `(k+1)`-cells, columns are `k`-cells.
    diff: [FpMatrix; 2],
}

pub fn ccochain(cx: &PlanarComplex, z: &CellSet, field: FieldPrime) -> Result<CcComplex> {
    cx.ensure_locally_closed(z)?;
    Ok(ccochain_unchecked(cx, z, field))
}

fn ccochain_unchecked(cx: &PlanarComplex, z: &CellSet, field: FieldPrime) -> CcComplex {
    let mut cells: [Vec<usize>; 3] = Default::default();
    for &c in z.iter() {
        cells[cx.dim(c)].push(c);
    }
    let diff = [0, 1].map(|k| {
        let (lo, hi) = (&cells[k], &cells[k + 1]);
        let mut m = FpMatrix::zeros(field, hi.len(), lo.len());
        let index: BTreeMap<usize, usize> = lo.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        for (r, &up) in hi.iter().enumerate() {
            for (f, s) in cx.facets(up) {
                if let Some(&col) = index.get(&f) {
                    m.set(r, col, s as i64);
                }
            }
        }
        m
    });
    CcComplex { field, cells, diff }
}

impl CcComplex {
    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn cells(&self, k: usize) -> &[usize] {
        &self.cells[k]
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.cells[0].len(), self.cells[1].len(), self.cells[2].len()]
    }

    /// Differential out of degree `k` (`None` for `k = 2`).
    pub fn differential(&self, k: usize) -> Option<&FpMatrix> {
        self.diff.get(k)
    }

    /// `d o d = 0`.
    pub fn is_complex(&self) -> bool {
        self.diff[1].mul(&self.diff[0]).is_zero()
    }

    fn rank_out(&self, k: usize) -> usize {
        self.diff.get(k).map_or(0, FpMatrix::rank)
    }

    pub fn cohomology_dims(&self) -> GradedDims {
        let mut g = GradedDims::zero();
        for k in 0..3 {
            let in_rank = if k == 0 { 0 } else { self.rank_out(k - 1) };
            g.add_at(k as i32, self.cells[k].len() - self.rank_out(k) - in_rank);
        }
        g
    }
}

/// Graded dimensions of `H^*_c(Z)`.
pub fn hcc(cx: &PlanarComplex, z: &CellSet, field: FieldPrime) -> Result<GradedDims> {
    Ok(ccochain(cx, z, field)?.cohomology_dims())
}

/// `sum_{c in Z} (-1)^{dim c}`.
pub fn euler_c(cx: &PlanarComplex, z: &CellSet) -> i64 {
    z.iter().map(|&c| if cx.dim(c) == 1 { -1 } else { 1 }).sum()
}

struct DegreeBasis {
    reps: Vec<Vec<u32>>,
    /// columns: coboundary basis followed by the representatives
    solver: FpMatrix,
    n_boundary: usize,
}

/// Cohomology with chosen cocycle representatives, for computing induced maps.
pub struct Cohomology {
    complex: CcComplex,
    degrees: Vec<DegreeBasis>,
}

impl Cohomology {
    pub fn new(complex: CcComplex) -> Self {
        let field = complex.field;
        let degrees = (0..3)
            .map(|k| {
                let n = complex.cells[k].len();
                let cocycles = match complex.diff.get(k) {
                    Some(d) => d.kernel_basis(),
                    None => (0..n).map(|i| unit(n, i)).collect(),
                };
                let boundary: Vec<Vec<u32>> = if k == 0 {
                    Vec::new()
                } else {
                    let d = &complex.diff[k - 1];
                    let (_, piv) = d.rref();
                    piv.iter().map(|&c| d.column(c)).collect()
                };
                let stacked = FpMatrix::from_columns(
                    field,
                    n,
                    &boundary.iter().chain(cocycles.iter()).cloned().collect::<Vec<_>>(),
                );
                let (_, pivots) = stacked.rref();
                let reps: Vec<Vec<u32>> = pivots
                    .into_iter()
                    .filter(|&c| c >= boundary.len())
                    .map(|c| cocycles[c - boundary.len()].clone())
                    .collect();
                let solver = FpMatrix::from_columns(
                    field,
                    n,
                    &boundary.iter().chain(reps.iter()).cloned().collect::<Vec<_>>(),
                );
                DegreeBasis { reps, solver, n_boundary: boundary.len() }
            })
            .collect();
        Cohomology { complex, degrees }
    }

    pub fn complex(&self) -> &CcComplex {
        &self.complex
    }

    pub fn dim(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |d| d.reps.len())
    }

    pub fn dims(&self) -> GradedDims {
        let mut g = GradedDims::zero();
        for k in 0..3 {
            g.add_at(k as i32, self.dim(k));
        }
        g
    }

    /// Coordinates of a cocycle class in the chosen basis.
    pub fn coords(&self, k: usize, cocycle: &[u32]) -> Vec<u32> {
        let deg = &self.degrees[k];
        let x = deg
            .solver
            .solve(cocycle)
            .expect("argument must be a cocycle of this complex");
        x[deg.n_boundary..].to_vec()
    }

    /// Coordinates of several cocycle classes at once.
    pub fn coords_many(&self, k: usize, cocycles: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let deg = &self.degrees[k];
        let n = deg.solver.cols();
        let rhs = FpMatrix::from_columns(self.complex.field, deg.solver.rows(), cocycles);
        let (r, pivots) = deg.solver.hstack(&rhs).rref();
        assert!(pivots.iter().all(|&p| p < n), "arguments must be cocycles of this complex");
        (0..cocycles.len())
            .map(|j| {
                let mut x = vec![0u32; n];
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = r.get(i, n + j);
                }
                x[deg.n_boundary..].to_vec()
            })
            .collect()
    }

    /// Matrix of the map `H^k(self) -> H^k(target)` induced by the cochain
    /// map that keeps the value on shared cells and sets the rest to zero.
    /// Valid for restriction to a closed part and extension from an open part.
    pub fn map_to(&self, target: &Cohomology, k: usize) -> FpMatrix {
        let field = self.complex.field;
        let src_cells = &self.complex.cells[k];
        let dst_cells = &target.complex.cells[k];
        let pos: BTreeMap<usize, usize> = src_cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let images: Vec<Vec<u32>> = self.degrees[k]
            .reps
            .iter()
            .map(|rep| dst_cells.iter().map(|c| pos.get(c).map_or(0, |&i| rep[i])).collect())
            .collect();
        let cols = if images.is_empty() { Vec::new() } else { target.coords_many(k, &images) };
        FpMatrix::from_columns(field, target.dim(k), &cols)
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Per-degree matrices of a map on cohomology.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub degrees: [FpMatrix; 3],
}

impl InducedMap {
    pub fn ranks(&self) -> GradedDims {
        let mut g = GradedDims::zero();
        for k in 0..3 {
            g.add_at(k as i32, self.degrees[k].rank());
        }
        g
    }
}

fn induced(src: &Cohomology, dst: &Cohomology) -> InducedMap {
    InducedMap { degrees: [0, 1, 2].map(|k| src.map_to(dst, k)) }
}

/// `H^*_c(Z) -> H^*_c(A)` for `A` closed in `Z`.
pub fn restriction_to_closed(
    cx: &PlanarComplex,
    z: &CellSet,
    a: &CellSet,
    field: FieldPrime,
) -> Result<InducedMap> {
    if !cx.is_closed_in(a, z) {
        return Err(Error::BadSubset { expected: "closed" });
    }
    let hz = Cohomology::new(ccochain(cx, z, field)?);
    let ha = Cohomology::new(ccochain(cx, a, field)?);
    Ok(induced(&hz, &ha))
}

/// `H^*_c(U) -> H^*_c(Z)` for `U` open in `Z`.
pub fn extension_from_open(
    cx: &PlanarComplex,
    z: &CellSet,
    u: &CellSet,
    field: FieldPrime,
) -> Result<InducedMap> {
    if !cx.is_open_in(u, z) {
        return Err(Error::BadSubset { expected: "open" });
    }
    let hu = Cohomology::new(ccochain(cx, u, field)?);
    let hz = Cohomology::new(ccochain(cx, z, field)?);
    Ok(induced(&hu, &hz))
}

/// Connecting maps `H^k_c(A) -> H^{k+1}_c(Z \ A)` for `k = 0, 1`, by the
/// zig-zag: extend a cocycle of `A` by zero, apply the differential of `Z`,
/// and read it as a cocycle of `Z \ A`.
fn connecting(cx: &PlanarComplex, z: &CellSet, a: &CellSet, field: FieldPrime) -> Result<[FpMatrix; 2]> {
    let u = z.difference(a);
    let cz = ccochain(cx, z, field)?;
    let ha = Cohomology::new(ccochain(cx, a, field)?);
    let hu = Cohomology::new(ccochain(cx, &u, field)?);
    Ok([0usize, 1].map(|k| {
        let zk = cz.cells(k);
        let zk1 = cz.cells(k + 1);
        let a_pos: BTreeMap<usize, usize> =
            ha.complex().cells(k).iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let cols: Vec<Vec<u32>> = ha.degrees[k]
            .reps
            .iter()
            .map(|rep| {
                let lifted: Vec<u32> = zk.iter().map(|c| a_pos.get(c).map_or(0, |&i| rep[i])).collect();
                let image = cz.diff[k].apply(&lifted);
                let on_u: Vec<u32> = hu
                    .complex()
                    .cells(k + 1)
                    .iter()
                    .map(|c| zk1.iter().position(|x| x == c).map_or(0, |i| image[i]))
                    .collect();
                hu.coords(k + 1, &on_u)
            })
            .collect();
        FpMatrix::from_columns(field, hu.dim(k + 1), &cols)
    }))
}

/// Checks exactness of the long exact sequence of the pair `(Z, A)`, `A`
/// closed in `Z`, at every node. Returns the nodes where it fails.
pub fn les_failures(cx: &PlanarComplex, z: &CellSet, a: &CellSet, field: FieldPrime) -> Result<Vec<String>> {
    let u = z.difference(a);
    let ext = extension_from_open(cx, z, &u, field)?;
    let res = restriction_to_closed(cx, z, a, field)?;
    let conn = connecting(cx, z, a, field)?;
    let hu = Cohomology::new(ccochain(cx, &u, field)?);
    let hz = Cohomology::new(ccochain(cx, z, field)?);
    let ha = Cohomology::new(ccochain(cx, a, field)?);
    let mut failures = Vec::new();
    let mut check = |name: String, f: Option<&FpMatrix>, g: Option<&FpMatrix>, dim: usize| {
        let rf = f.map_or(0, FpMatrix::rank);
        let rg = g.map_or(0, FpMatrix::rank);
        let composite_zero = match (f, g) {
            (Some(f), Some(g)) => g.mul(f).is_zero(),
            _ => true,
        };
        if !composite_zero || rf + rg != dim {
            failures.push(name);
        }
    };
    for k in 0..3usize {
        let incoming_u = if k == 0 { None } else { Some(&conn[k - 1]) };
        check(format!("H^{k}(Z\\A)"), incoming_u, Some(&ext.degrees[k]), hu.dim(k));
        check(format!("H^{k}(Z)"), Some(&ext.degrees[k]), Some(&res.degrees[k]), hz.dim(k));
        let outgoing_a = conn.get(k);
        check(format!("H^{k}(A)"), Some(&res.degrees[k]), outgoing_a, ha.dim(k));
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;
    use crate::plancx::build_grid;

    fn f2() -> FieldPrime {
        FieldPrime::default()
    }

    fn unit_square() -> PlanarComplex {
        build_grid(&[q(0), q(1)], &[q(0), q(1)]).unwrap().complex().clone()
    }

    #[test]
    fn cochain_dims() {
        let cx = unit_square();
        let all = cx.all_cells();
        let cc = ccochain(&cx, &all, f2()).unwrap();
        assert_eq!(cc.dims(), [4, 4, 1]);
        assert!(cc.is_complex());
        let face = CellSet::from_iter([cx.face_cell(0)]);
        let cc = ccochain(&cx, &face, f2()).unwrap();
        assert_eq!(cc.dims(), [0, 0, 1]);
        let e = cx.edge_cell(0);
        let (tail, _) = (cx.facets(e)[0].0, 0);
        let half = CellSet::from_iter([e, tail]);
        let cc = ccochain(&cx, &half, f2()).unwrap();
        assert_eq!(cc.dims(), [1, 1, 0]);
        assert_eq!(cc.differential(0).unwrap().rank(), 1);
    }

    #[test]
    fn hcc_examples() {
        let cx = unit_square();
        let all = cx.all_cells();
        assert_eq!(hcc(&cx, &all, f2()).unwrap(), GradedDims::from_pairs(&[(0, 1)]));
        let face = CellSet::from_iter([cx.face_cell(0)]);
        assert_eq!(hcc(&cx, &face, f2()).unwrap(), GradedDims::from_pairs(&[(2, 1)]));
        let circle = all.difference(&face);
        assert_eq!(hcc(&cx, &circle, f2()).unwrap(), GradedDims::from_pairs(&[(0, 1), (1, 1)]));
        let bad = CellSet::from_iter([cx.face_cell(0), 0]);
        assert!(matches!(hcc(&cx, &bad, f2()), Err(Error::NotLocallyClosed { .. })));
    }

    #[test]
    fn euler_examples() {
        let cx = unit_square();
        assert_eq!(euler_c(&cx, &cx.all_cells()), 1);
        assert_eq!(euler_c(&cx, &CellSet::from_iter([cx.face_cell(0)])), 1);
        let e = cx.edge_cell(0);
        assert_eq!(euler_c(&cx, &CellSet::from_iter([e, cx.facets(e)[0].0])), 0);
    }

    #[test]
    fn restriction_examples() {
        let cx = unit_square();
        let all = cx.all_cells();
        let id = restriction_to_closed(&cx, &all, &all, f2()).unwrap();
        assert_eq!(id.degrees[0], FpMatrix::identity(f2(), 1));
        // closed edge, restrict to one endpoint
        let e = cx.edge_cell(0);
        let (v0, v1) = (cx.facets(e)[0].0, cx.facets(e)[1].0);
        let seg = CellSet::from_iter([e, v0, v1]);
        let pt = CellSet::from_iter([v0]);
        let m = restriction_to_closed(&cx, &seg, &pt, f2()).unwrap();
        assert_eq!(m.degrees[0].rank(), 1);
        // an open endpoint is not closed in the segment
        let open = CellSet::from_iter([e]);
        assert!(restriction_to_closed(&cx, &seg, &open, f2()).is_err());
    }

    #[test]
    fn two_boxes_projection() {
        let g = build_grid(&[q(0), q(1), q(2), q(3)], &[q(0), q(1)]).unwrap();
        let cx = g.complex();
        let left = cx.closure(&CellSet::from_iter([cx.face_cell(0)]));
        let right = cx.closure(&CellSet::from_iter([cx.face_cell(2)]));
        let both = left.union(&right);
        assert_eq!(hcc(cx, &both, f2()).unwrap(), GradedDims::from_pairs(&[(0, 2)]));
        let m = restriction_to_closed(cx, &both, &left, f2()).unwrap();
        assert_eq!((m.degrees[0].rows(), m.degrees[0].cols()), (1, 2));
        assert_eq!(m.degrees[0].rank(), 1);
    }

    #[test]
    fn extension_examples() {
        let cx = unit_square();
        let all = cx.all_cells();
        let id = extension_from_open(&cx, &all, &all, f2()).unwrap();
        assert_eq!(id.ranks(), GradedDims::from_pairs(&[(0, 1)]));
        let e = cx.edge_cell(0);
        let (v0, v1) = (cx.facets(e)[0].0, cx.facets(e)[1].0);
        let seg = CellSet::from_iter([e, v0, v1]);
        let open = CellSet::from_iter([e]);
        let m = extension_from_open(&cx, &seg, &open, f2()).unwrap();
        assert_eq!((m.degrees[1].rows(), m.degrees[1].cols()), (0, 1));
        let face = CellSet::from_iter([cx.face_cell(0)]);
        let m = extension_from_open(&cx, &all, &face, f2()).unwrap();
        assert_eq!((m.degrees[2].rows(), m.degrees[2].cols()), (0, 1));
        assert!(extension_from_open(&cx, &seg, &CellSet::from_iter([v0]), f2()).is_err());
    }

    #[test]
    fn les_on_box_minus_boundary() {
        let cx = unit_square();
        let all = cx.all_cells();
        let boundary = all.difference(&CellSet::from_iter([cx.face_cell(0)]));
        for p in [2, 3, 5] {
            let f = FieldPrime::new(p).unwrap();
            assert!(les_failures(&cx, &all, &boundary, f).unwrap().is_empty());
        }
    }
}
