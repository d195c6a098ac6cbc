//! Convolution of grid sheaves evaluated on a refined grid, one stalk per
//! cell, with ranks of the generization maps between incident cells.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use rayon::prelude::*;

use super::{box_cohomology, in_closed_box, in_open_box, local_cells, local_cuts, GridSheaf};
use crate::cohomc::{self, Cohomology, GradedDims};
use crate::error::{Error, Result};
use crate::fieldla::FieldPrime;
use crate::numeric::{fmt_q, q, Point, Q};
use crate::plancx::{build_grid, CellSet, Grid};

/// Stalks of a derived sheaf on the cells of a grid, with generization
/// ranks for each pair `(lower, upper)` where `lower` lies in the closure of
/// `upper`.
#[derive(Clone, Debug)]
pub struct StalkField {
    grid: Grid,
    dims: Vec<GradedDims>,
    ranks: BTreeMap<(usize, usize), GradedDims>,
}

impl StalkField {
    pub fn new(grid: Grid, dims: Vec<GradedDims>, ranks: BTreeMap<(usize, usize), GradedDims>) -> Result<Self> {
        if dims.len() != grid.complex().n_cells() {
            return Err(Error::Inconsistent("one stalk per cell is required".into()));
        }
        for (&(lo, up), r) in &ranks {
            for (k, v) in r.degrees() {
                if v > dims[lo].get(k).min(dims[up].get(k)) {
                    return Err(Error::Inconsistent(format!("rank exceeds stalk dimension at ({lo}, {up})")));
                }
            }
        }
        Ok(StalkField { grid, dims, ranks })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dims(&self, cell: usize) -> &GradedDims {
        &self.dims[cell]
    }

    pub fn dims_at(&self, p: &Point) -> Option<&GradedDims> {
        self.grid.locate(p).map(|c| &self.dims[c])
    }

    pub fn generization_rank(&self, lower: usize, upper: usize) -> GradedDims {
        self.ranks.get(&(lower, upper)).cloned().unwrap_or_default()
    }

    pub fn rank_pairs(&self) -> impl Iterator<Item = (&(usize, usize), &GradedDims)> {
        self.ranks.iter()
    }

    /// Degrees with a nonzero stalk somewhere.
    pub fn degrees(&self) -> Vec<i32> {
        let set: BTreeSet<i32> = self.dims.iter().flat_map(|d| d.degrees().map(|(k, _)| k)).collect();
        set.into_iter().collect()
    }

    pub fn support(&self, degree: i32) -> CellSet {
        (0..self.dims.len()).filter(|&c| self.dims[c].get(degree) > 0).collect()
    }

    /// The support of degree `degree`, if that cohomology sheaf is the
    /// indicator of a locally closed set.
    pub fn recognize_indicator(&self, degree: i32) -> std::result::Result<CellSet, String> {
        if let Some(c) = (0..self.dims.len()).find(|&c| self.dims[c].get(degree) > 1) {
            return Err(format!("stalk of dimension {} at cell {c}", self.dims[c].get(degree)));
        }
        for (&(lo, up), r) in &self.ranks {
            let want = self.dims[lo].get(degree).min(self.dims[up].get(degree));
            if r.get(degree) != want {
                return Err(format!("generization {lo} -> {up} has rank {} instead of {want}", r.get(degree)));
            }
        }
        let support = self.support(degree);
        if let Some((a, b, c)) = self.grid.complex().locally_closed_violation(&support) {
            return Err(format!("support is not locally closed: {a} <= {b} <= {c}"));
        }
        Ok(support)
    }

    /// First point of the common refinement where the stalks differ.
    pub fn first_difference(&self, other: &StalkField) -> Option<Point> {
        let common = self.grid.with_cuts(other.grid.xs(), other.grid.ys());
        (0..common.complex().n_cells())
            .map(|c| common.complex().representative(c))
            .find(|p| self.dims_at(p) != other.dims_at(p))
    }
}

/// Cuts of the refined grid: every cut `c` together with `c - a`, `c + a`.
fn refined_cuts(cuts: &[Q], a: Q) -> Vec<Q> {
    cuts.iter().flat_map(|&c| [c - a, c, c + a]).collect()
}

/// Smallest positive gap among the values.
fn min_gap(mut vals: Vec<Q>) -> Option<Q> {
    vals.sort();
    vals.dedup();
    vals.windows(2).map(|w| w[1] - w[0]).min()
}

pub(super) fn convolve(g: &GridSheaf, a: Q) -> Result<StalkField> {
    if let Some((lo, hi)) = g.support_bbox() {
        let (wlo, whi) = g.grid.window();
        let r = a.abs();
        if lo.x - r < wlo.x || lo.y - r < wlo.y || hi.x + r > whi.x || hi.y + r > whi.y {
            let margin = [lo.x - wlo.x, lo.y - wlo.y, whi.x - hi.x, whi.y - hi.y].into_iter().min().unwrap();
            return Err(Error::Margin { margin: fmt_q(&margin), radius: fmt_q(&r) });
        }
    }
    let grid = if a.is_zero() {
        g.grid.clone()
    } else {
        g.grid.with_cuts(&refined_cuts(g.grid.xs(), a), &refined_cuts(g.grid.ys(), a))
    };
    let cx = grid.complex();
    let n = cx.n_cells();
    let dims: Vec<GradedDims> = (0..n)
        .into_par_iter()
        .map(|c| stalk_at(g, &cx.representative(c), a))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|up| cx.cell_closure(up).into_iter().filter(move |&lo| lo != up).map(move |lo| (lo, up)))
        .filter(|&(lo, up)| dims[lo].degrees().any(|(k, _)| dims[up].get(k) > 0))
        .collect();
    let ranks: BTreeMap<(usize, usize), GradedDims> = pairs
        .par_iter()
        .map(|&(lo, up)| {
            let x = cx.representative(lo);
            let y = cx.representative(up);
            ((lo, up), generization(g, &x, &y, a))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    StalkField::new(grid, dims, ranks)
}

fn stalk_at(g: &GridSheaf, x: &Point, a: Q) -> GradedDims {
    let mut out = GradedDims::zero();
    let cell = g.grid.locate(x);
    for gen in &g.generators {
        if a.is_zero() {
            if cell.is_some_and(|c| gen.cells.contains(c)) {
                out.add_at(gen.degree, gen.mult);
            }
            continue;
        }
        let h = box_cohomology(&g.grid, &gen.cells, x, a.abs(), a.is_negative(), g.field);
        let shift = if a.is_negative() { gen.degree - 2 } else { gen.degree };
        out.add(&h.shifted(shift, gen.mult));
    }
    out
}

/// Rank of the generization map from the stalk at `x` to the stalk at a
/// point of the open cell represented by `y`, with `x` in its closure.
fn generization(g: &GridSheaf, x: &Point, y: &Point, a: Q) -> GradedDims {
    let r = a.abs();
    let gap = |cuts: &[Q], c: Q| {
        let mut vals = cuts.to_vec();
        if !r.is_zero() {
            vals.extend([c - r, c + r]);
        }
        min_gap(vals)
    };
    let mut eps = [gap(g.grid.xs(), x.x), gap(g.grid.ys(), x.y)].into_iter().flatten().min().unwrap_or(q(1)) / q(4);
    if !r.is_zero() {
        eps = eps.min(r / q(2));
    }
    let spread = (y.x - x.x).abs().max((y.y - x.y).abs());
    let delta = (eps / q(2)) / spread;
    let xp = Point::new(x.x + delta * (y.x - x.x), x.y + delta * (y.y - x.y));

    let mut out = GradedDims::zero();
    for gen in &g.generators {
        let ranks = if r.is_zero() {
            let both = [x, &xp].iter().all(|p| g.grid.locate(p).is_some_and(|c| gen.cells.contains(c)));
            let mut h = GradedDims::zero();
            h.add_at(0, usize::from(both));
            h
        } else if a.is_positive() {
            // restriction from box(x, a + eps) to box(x', a)
            let outer = r + eps;
            let local = build_grid(
                &local_cuts(g.grid.xs(), x.x - outer, x.x + outer, &[xp.x - r, xp.x + r]),
                &local_cuts(g.grid.ys(), x.y - outer, x.y + outer, &[xp.y - r, xp.y + r]),
            )
            .expect("local cuts are increasing");
            let big = local_cells(&g.grid, &gen.cells, &local, |_| true);
            let small = local_cells(&g.grid, &gen.cells, &local, |p| in_closed_box(p, &xp, r));
            map_ranks(&local, &big, &small, g.field)
        } else {
            // extension from the open box(x, r - eps) to the open box(x', r)
            let inner = r - eps;
            let local = build_grid(
                &local_cuts(g.grid.xs(), xp.x - r, xp.x + r, &[x.x - inner, x.x + inner]),
                &local_cuts(g.grid.ys(), xp.y - r, xp.y + r, &[x.y - inner, x.y + inner]),
            )
            .expect("local cuts are increasing");
            let small = local_cells(&g.grid, &gen.cells, &local, |p| in_open_box(p, x, inner));
            let big = local_cells(&g.grid, &gen.cells, &local, |p| in_open_box(p, &xp, r));
            map_ranks(&local, &small, &big, g.field)
        };
        let shift = if a.is_negative() { gen.degree - 2 } else { gen.degree };
        out.add(&ranks.shifted(shift, gen.mult));
    }
    out
}

/// Ranks of the map `H^*_c(src) -> H^*_c(dst)` that keeps shared cells.
fn map_ranks(local: &Grid, src: &CellSet, dst: &CellSet, field: FieldPrime) -> GradedDims {
    let cx = local.complex();
    let hs = Cohomology::new(cohomc::ccochain(cx, src, field).expect("locally closed"));
    let hd = Cohomology::new(cohomc::ccochain(cx, dst, field).expect("locally closed"));
    let mut out = GradedDims::zero();
    for k in 0..3 {
        out.add_at(k as i32, hs.map_to(&hd, k).rank());
    }
    out
}
