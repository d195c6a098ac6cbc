use super::*;
use crate::numeric::{q, qf};
use crate::plancx::{linf_dilate, ClosedBox};
use crate::region::Region;

fn f2() -> FieldPrime {
    FieldPrime::default()
}

fn grid() -> Grid {
    let cuts = [q(-4), q(-1), q(1), q(4)];
    build_grid(&cuts, &cuts).unwrap()
}

fn abs_le(v: Q, r: i128) -> bool {
    v.abs() <= q(r)
}

/// `Z = [-1,1]^2` minus the top and bottom edges.
fn z_cells(g: &Grid) -> CellSet {
    g.cells_where(|p| abs_le(p.x, 1) && p.y.abs() < q(1))
}

fn s_cells(g: &Grid) -> CellSet {
    g.cells_where(|p| abs_le(p.x, 1) && abs_le(p.y, 1))
}

fn grid_obj(cells: CellSet) -> SheafObject {
    SheafObject::Grid(GridSheaf::indicator(grid(), f2(), cells).unwrap())
}

fn ex55_convex() -> SheafObject {
    let s = ConvexBody::polygon(vec![Point::ints(-1, -1), Point::ints(1, -1), Point::ints(1, 1), Point::ints(-1, 1)])
        .unwrap();
    let i = ConvexBody::polygon(vec![Point::ints(-1, 1), Point::ints(1, 1)]).unwrap();
    let j = ConvexBody::polygon(vec![Point::ints(-1, -1), Point::ints(1, -1)]).unwrap();
    let region = ConvexDiffRegion::new(s, vec![i, j]).unwrap();
    SheafObject::Convex(
        ConvexSheaf::new(
            (Point::ints(-4, -4), Point::ints(4, 4)),
            f2(),
            vec![ConvexGenerator { region, degree: 0, mult: 1 }],
        )
        .unwrap(),
    )
}

fn dims(pairs: &[(i32, usize)]) -> GradedDims {
    GradedDims::from_pairs(pairs)
}

#[test]
fn stalk_examples() {
    let g = grid();
    let f = grid_obj(z_cells(&g));
    assert_eq!(f.stalk(&Point::ints(0, 0)).unwrap(), dims(&[(0, 1)]));
    assert_eq!(f.stalk(&Point::ints(0, 1)).unwrap(), dims(&[]));
    let shifted = SheafObject::Grid(
        GridSheaf::new(g.clone(), f2(), vec![GridGenerator { cells: z_cells(&g), degree: 1, mult: 1 }]).unwrap(),
    );
    assert_eq!(shifted.stalk(&Point::ints(0, 0)).unwrap(), dims(&[(1, 1)]));
    assert!(matches!(f.stalk(&Point::ints(9, 0)), Err(Error::OutsideWindow(_))));
    let c = ex55_convex();
    assert_eq!(c.stalk(&Point::ints(0, 0)).unwrap(), dims(&[(0, 1)]));
    assert_eq!(c.stalk(&Point::ints(0, 1)).unwrap(), dims(&[]));
}

#[test]
fn rejects_non_locally_closed() {
    let g = grid();
    let cx = g.complex();
    let bad = CellSet::from_iter([cx.face_cell(4), cx.vertex_cell(5)]);
    assert!(matches!(
        GridSheaf::indicator(g.clone(), f2(), bad),
        Err(Error::Generator { index: 0, .. })
    ));
}

#[test]
fn tensor_restrict_examples() {
    let g = grid();
    let f = grid_obj(s_cells(&g));
    assert_eq!(f.tensor_restrict(&g.complex().all_cells()).unwrap(), f);
    let t = s_cells(&g).difference(&z_cells(&g));
    assert_eq!(f.tensor_restrict(&t).unwrap(), grid_obj(t.clone()));
    // keeping the corner (1,1) but not the top edge breaks local closedness
    let bad = g.cells_where(|p| abs_le(p.x, 1) && abs_le(p.y, 1) && p.y != q(1) || p == &Point::ints(1, 1));
    assert!(grid_obj(s_cells(&g)).tensor_restrict(&bad).is_err());
}

#[test]
fn triangle_examples() {
    let g = grid();
    let s = s_cells(&g);
    let z = z_cells(&g);
    let t = s.difference(&z);
    let tri = triangle_split(&g, f2(), &s, &t).unwrap();
    assert_eq!(tri.open_part.generators()[0].cells, z);
    assert_eq!(tri.closed_part.generators()[0].cells, t);
    // H^0(S) -> H^0(I u J) has rank 1
    assert_eq!(tri.restriction.ranks(), dims(&[(0, 1)]));
    let empty = triangle_split(&g, f2(), &z, &CellSet::empty()).unwrap();
    assert!(empty.closed_part.support().is_empty());
    let full = triangle_split(&g, f2(), &z, &z).unwrap();
    assert!(full.open_part.support().is_empty());
    assert!(triangle_split(&g, f2(), &s, &z).is_err());
}

#[test]
fn convex_convolution_thresholds() {
    let c = ex55_convex();
    let o = Point::ints(0, 0);
    assert_eq!(c.convolve_stalk(&BallSpec::l2(qf(3, 2)), &o).unwrap(), dims(&[(1, 1)]));
    assert_eq!(c.convolve_stalk(&BallSpec::l2(qf(1, 2)), &o).unwrap(), dims(&[(0, 1)]));
    for x in [o, Point::ints(0, 1), Point::new(qf(1, 2), qf(-3, 4)), Point::ints(3, 3)] {
        assert_eq!(c.convolve_stalk(&BallSpec::l2(Q::zero()), &x).unwrap(), c.stalk(&x).unwrap());
    }
    assert!(c.convolve_stalk(&BallSpec::l2(qf(-1, 2)), &o).is_err());
}

#[test]
fn grid_convolution_rejects_l2() {
    let g = grid();
    let f = grid_obj(s_cells(&g));
    assert!(f.convolve_stalk(&BallSpec::l2(q(1)), &Point::ints(0, 0)).is_err());
}

#[test]
fn compose_kernel_examples() {
    let g = grid();
    let f = grid_obj(s_cells(&g));
    let k = KernelSpec::Delta(q(1), Norm::Linf);
    assert_eq!(f.compose_kernel_stalk(&k, &Point::ints(2, 2)).unwrap(), dims(&[(0, 1)]));
    assert_eq!(
        f.convolve_stalk(&BallSpec::linf(q(1)), &Point::ints(2, 2)).unwrap(),
        dims(&[(0, 1)])
    );
    let k0 = KernelSpec::Delta(Q::zero(), Norm::Linf);
    for x in [Point::ints(0, 0), Point::ints(1, 1), Point::ints(2, 0)] {
        assert_eq!(f.compose_kernel_stalk(&k0, &x).unwrap(), f.stalk(&x).unwrap());
    }
    let z = grid_obj(z_cells(&g));
    for x in [Point::ints(0, 0), Point::new(qf(1, 2), q(2)), Point::ints(0, 2)] {
        let a = KernelSpec::Delta(qf(3, 2), Norm::Linf);
        assert_eq!(
            z.compose_kernel_stalk(&a, &x).unwrap(),
            z.convolve_stalk(&BallSpec::linf(qf(3, 2)), &x).unwrap()
        );
    }
}

#[test]
fn convolve_square_matches_dilation() {
    let g = grid();
    let f = grid_obj(s_cells(&g));
    let sf = f.convolve_grid(q(1)).unwrap();
    assert_eq!(sf.degrees(), vec![0]);
    let support = sf.recognize_indicator(0).unwrap();
    let dil = linf_dilate(&Region::closed_box(Point::ints(-1, -1), Point::ints(1, 1)), q(1)).unwrap();
    let expect = sf.grid().cells_where(|p| dil.iter().any(|b: &ClosedBox| b.contains(p)));
    assert_eq!(support, expect);
}

#[test]
fn ex55_linf_thresholds() {
    let g = grid();
    let f = grid_obj(z_cells(&g));
    let sf = f.convolve_grid(qf(1, 2)).unwrap();
    assert_eq!(sf.degrees(), vec![0]);
    let h0 = sf.recognize_indicator(0).unwrap();
    let want = sf.grid().cells_where(|p| p.x.abs() <= qf(3, 2) && p.y.abs() < qf(1, 2));
    assert_eq!(h0, want);

    let sf = f.convolve_grid(qf(3, 2)).unwrap();
    assert_eq!(sf.degrees(), vec![1]);
    let h1 = sf.recognize_indicator(1).unwrap();
    let want = sf.grid().cells_where(|p| p.x.abs() <= qf(5, 2) && p.y.abs() <= qf(1, 2));
    assert_eq!(h1, want);
}

#[test]
fn negative_radius_erodes() {
    let g = grid();
    let f = grid_obj(z_cells(&g));
    let sf = f.convolve_grid(qf(-1, 2)).unwrap();
    assert_eq!(sf.degrees(), vec![0]);
    let h0 = sf.recognize_indicator(0).unwrap();
    let want = sf.grid().cells_where(|p| p.x.abs() <= qf(1, 2) && p.y.abs() < qf(3, 2));
    assert_eq!(h0, want);
}

#[test]
fn two_dimensional_stalk_is_not_an_indicator() {
    let g = grid();
    let s = s_cells(&g);
    let f = SheafObject::Grid(
        GridSheaf::new(g, f2(), vec![GridGenerator { cells: s, degree: 0, mult: 2 }]).unwrap(),
    );
    let sf = f.convolve_grid(Q::zero()).unwrap();
    assert!(sf.recognize_indicator(0).is_err());
}

#[test]
fn monoid_law_on_square() {
    let g = grid();
    let f = grid_obj(z_cells(&g));
    let half = BallSpec::linf(qf(1, 2));
    let twice = f.convolve_object(&half).unwrap().convolve_grid(qf(1, 2)).unwrap();
    let once = f.convolve_grid(q(1)).unwrap();
    assert_eq!(twice.first_difference(&once), None);
    let unit = f.convolve_grid(Q::zero()).unwrap();
    for c in 0..g.complex().n_cells() {
        let p = g.complex().representative(c);
        assert_eq!(unit.dims_at(&p).unwrap(), &f.stalk(&p).unwrap());
    }
}

#[test]
fn margin_is_enforced() {
    let g = grid();
    let f = grid_obj(s_cells(&g));
    assert!(matches!(f.convolve_grid(q(4)), Err(Error::Margin { .. })));
}

#[test]
fn chi_arrows() {
    let a = ChiArrow::new(ChiKind::K, q(2), q(1)).unwrap();
    let b = ChiArrow::new(ChiKind::K, q(1), q(0)).unwrap();
    assert_eq!(a.then(&b).unwrap(), ChiArrow::new(ChiKind::K, q(2), q(0)).unwrap());
    assert!(b.then(&a).is_err());
    assert_eq!(b.convolve_by(q(1)).unwrap(), a);
    assert!(ChiArrow::new(ChiKind::K, q(0), q(1)).is_err());
}

#[test]
fn convex_holes_validated() {
    let s = ConvexBody::polygon(vec![Point::ints(0, 0), Point::ints(2, 0), Point::ints(2, 2), Point::ints(0, 2)])
        .unwrap();
    let a = ConvexBody::polygon(vec![Point::ints(0, 0), Point::ints(1, 0)]).unwrap();
    let b = ConvexBody::polygon(vec![Point::ints(1, 0), Point::ints(2, 0)]).unwrap();
    assert!(ConvexDiffRegion::new(s.clone(), vec![a, b]).is_err());
    let out = ConvexBody::disc(Point::ints(5, 5), q(1)).unwrap();
    assert!(ConvexDiffRegion::new(s, vec![out]).is_err());
}
