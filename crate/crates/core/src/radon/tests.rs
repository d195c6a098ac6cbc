use super::*;
use num::Zero;
use crate::scene::{disc_scene, edgeless_square, mixed_grid_scene, square_scene};
use crate::sheafobj::Backend;

fn rat(v: Q) -> Quad {
    Quad::rational(v)
}

fn dir(p: i64, qq: i64) -> Direction {
    Direction::new(p, qq).unwrap()
}

fn half_infinite(degree: i32, at: Quad) -> DecoratedBarcode {
    DecoratedBarcode::new([Bar::new(degree, Birth::At(at), Death::PosInf)])
}

#[test]
fn critical_level_examples() {
    let sq = square_scene(Backend::Grid).compile().unwrap();
    assert_eq!(critical_levels(&sq, dir(1, 0)), vec![rat(q(-1)), rat(q(1))]);
    let disc = disc_scene(q(1)).compile().unwrap();
    assert_eq!(critical_levels(&disc, dir(1, 0)), vec![rat(q(-1))]);
    let d = dir(2, 1);
    let lv = critical_levels(&disc, d);
    assert_eq!(lv.len(), 1);
    assert_eq!(normalize(lv[0], d, Norm::L2), rat(q(-1)));
    for backend in [Backend::Grid, Backend::Convex] {
        let f = edgeless_square(backend).compile().unwrap();
        let lv = critical_levels(&f, dir(0, 1));
        assert!(lv.contains(&rat(q(-1))) && lv.contains(&rat(q(1))));
    }
}

#[test]
fn disc_profile_and_bar() {
    let disc = disc_scene(q(1)).compile().unwrap();
    for d in [dir(1, 0), dir(1, 1), dir(-3, 2)] {
        let p = profile(&disc, d).unwrap();
        p.check().unwrap();
        let s = p.levels()[0];
        assert!(p.dims(p.stratum_of(s - rat(qf(1, 8)))).is_zero());
        assert_eq!(p.dims(p.stratum_of(s)).get(0), 1);
        assert_eq!(p.rank_at(s, s + rat(q(5))).get(0), 1);
        assert_eq!(decompose(&p).unwrap(), half_infinite(0, s));
        assert_eq!(normalize(s, d, Norm::L2), rat(q(-1)));
    }
}

#[test]
fn edgeless_square_profile() {
    for backend in [Backend::Grid, Backend::Convex] {
        let f = edgeless_square(backend).compile().unwrap();
        let p = profile(&f, dir(0, 1)).unwrap();
        p.check().unwrap();
        for t in [-2, -1, 0] {
            assert!(p.dims(p.stratum_of(rat(q(t)))).is_zero(), "{backend:?} t={t}");
        }
        assert!(p.dims(p.stratum_of(rat(qf(99, 100)))).is_zero());
        for t in [1, 2] {
            assert_eq!(p.dims(p.stratum_of(rat(q(t)))), &GradedDims::from_pairs(&[(1, 1)]));
        }
        assert_eq!(decompose(&p).unwrap(), half_infinite(1, rat(q(1))));
    }
}

#[test]
fn zero_profile() {
    let f = crate::scene::Scene::new(Backend::Grid, q(1), Vec::new()).compile().unwrap();
    let p = profile(&f, dir(1, 0)).unwrap();
    assert_eq!(p.n_strata(), 1);
    assert!(decompose(&p).unwrap().is_empty());
}

#[test]
fn negative_multiplicity_is_reported() {
    let mut p = profile(&disc_scene(q(1)).compile().unwrap(), dir(1, 0)).unwrap();
    // a rank function that is not realizable by any module
    p.ranks[2][1] = GradedDims::zero();
    p.ranks[2][0] = GradedDims::zero();
    p.dims[1] = GradedDims::from_pairs(&[(0, 1)]);
    p.ranks[1][1] = GradedDims::from_pairs(&[(0, 1)]);
    p.dims[2] = GradedDims::from_pairs(&[(0, 1)]);
    p.ranks[2][2] = GradedDims::from_pairs(&[(0, 1)]);
    p.ranks[2][1] = GradedDims::from_pairs(&[(0, 2)]);
    assert!(matches!(decompose(&p), Err(Error::Inconsistent(_))));
}

#[test]
fn epigraph_in_every_direction() {
    let f = edgeless_square(Backend::Convex).compile().unwrap();
    let dirs = Direction::spread(64);
    let s = radon_summary(&f, &dirs).unwrap();
    let phi = s.phi.expect("one degree-1 bar per direction");
    for (d, v) in dirs.iter().zip(phi) {
        assert_eq!(v, rat(q((d.q().abs() - d.p().abs()) as i128)));
        let (u1, u2) = d.unit();
        assert!((normalize(v, *d, Norm::L2).to_f64() - (u2.abs() - u1.abs())).abs() < 1e-9);
    }
    let disc = radon_summary(&disc_scene(q(1)).compile().unwrap(), &dirs).unwrap();
    assert!(disc.phi.is_none());
}

#[test]
fn square_bar_is_support_minimum() {
    let f = square_scene(Backend::Grid).compile().unwrap();
    for d in Direction::spread(16) {
        let b = decompose(&profile(&f, d).unwrap()).unwrap();
        assert_eq!(b, half_infinite(0, rat(q(-(d.l1())))));
    }
}

#[test]
fn shift_examples() {
    let f = edgeless_square(Backend::Convex).compile().unwrap();
    let r = shift_identity_check(&f, &BallSpec::l2(qf(1, 2)), dir(0, 1)).unwrap();
    assert!(r.ok, "{r:?}");
    assert_eq!(r.computed, half_infinite(1, rat(qf(1, 2))));
    let r = shift_identity_check(&f, &BallSpec::l2(Q::zero()), dir(2, 1)).unwrap();
    assert!(r.ok && r.computed == r.expected);

    let disc = disc_scene(q(1)).compile().unwrap();
    for a in [qf(1, 2), q(1)] {
        for d in [dir(1, 0), dir(1, 2)] {
            let r = shift_identity_check(&disc, &BallSpec::l2(a), d).unwrap();
            assert!(r.ok, "{r:?}");
            let bigger = disc_scene(q(1) + a).compile().unwrap();
            assert_eq!(r.computed, decompose(&profile(&bigger, d).unwrap()).unwrap());
        }
    }
}

#[test]
fn shift_on_grid_scenes() {
    for scene in [edgeless_square(Backend::Grid), mixed_grid_scene(), square_scene(Backend::Grid)] {
        let f = scene.compile().unwrap();
        for a in [qf(1, 2), q(1)] {
            for d in [dir(0, 1), dir(1, 1), dir(2, -1)] {
                let r = shift_identity_check(&f, &BallSpec::linf(a), d).unwrap();
                assert!(r.ok, "{r:?}");
            }
        }
    }
}

#[test]
fn halfplane_disc_examples() {
    let d = [dir(1, 0)];
    let r = halfplane_disc_verify(q(1), &d, &[q(0)], &[Point::ints(1, 0)]);
    assert!(r.counterexamples.is_empty());
    assert_eq!(r.boundary_cases, 1);
    let disc = ConvexBody::disc(Point::new(qf(3, 2), q(0)), q(1)).unwrap();
    assert!(disc.support_min(d[0]) > Quad::zero());
    let r = halfplane_disc_verify(q(1), &d, &[q(0)], &[Point::new(qf(3, 2), q(0)), Point::new(qf(1, 2), q(0))]);
    assert!(r.counterexamples.is_empty());
    assert_eq!(r.checked, 2);
}

#[test]
fn euler_conservation() {
    let dirs = Direction::spread(16);
    for backend in [Backend::Grid, Backend::Convex] {
        let r = chi_c_conservation(&edgeless_square(backend).compile().unwrap(), &dirs).unwrap();
        assert!(r.ok);
        assert_eq!(r.expected, -1);
    }
    let r = chi_c_conservation(&disc_scene(q(1)).compile().unwrap(), &dirs).unwrap();
    assert!(r.ok && r.expected == 1);
    let zero = crate::scene::Scene::new(Backend::Grid, q(1), Vec::new()).compile().unwrap();
    let r = chi_c_conservation(&zero, &dirs).unwrap();
    assert!(r.ok && r.expected == 0);
}

#[test]
fn spurious_levels_do_not_change_barcodes() {
    let f = mixed_grid_scene().compile().unwrap();
    for d in [dir(1, 0), dir(1, 2), dir(-1, 1)] {
        let plain = decompose(&profile(&f, d).unwrap()).unwrap();
        let extra = [rat(qf(1, 3)), rat(qf(-7, 5)), rat(q(9))];
        let p = profile_with_levels(&f, d, &extra).unwrap();
        p.check().unwrap();
        assert_eq!(decompose(&p).unwrap(), plain);
    }
}

#[test]
fn barcode_reproduces_dimensions() {
    let f = mixed_grid_scene().compile().unwrap();
    for d in Direction::spread(8) {
        let p = profile(&f, d).unwrap();
        let b = decompose(&p).unwrap();
        for t in p.sample_levels() {
            let dims = p.dims(p.stratum_of(t));
            for k in -1..4 {
                assert_eq!(b.dim_at(k, t), dims.get(k));
            }
        }
    }
}
