use super::*;
use crate::numeric::q;
use crate::scene::{disc_scene, edgeless_square, mixed_grid_scene, square_scene};
use crate::sheafobj::{Backend, BallSpec};
use proptest::prelude::*;

fn lv(n: i128, d: i128) -> Quad {
    Quad::rational(qf(n, d))
}

fn closed(b: i128, e: i128) -> Bar {
    Bar::new(0, Birth::At(lv(b, 1)), Death::At(lv(e, 1)))
}

fn ray(b: Q) -> Bar {
    Bar::new(0, Birth::At(Quad::rational(b)), Death::PosInf)
}

fn bc(bars: &[Bar]) -> DecoratedBarcode {
    DecoratedBarcode::new(bars.iter().copied())
}

fn dir(p: i64, qq: i64) -> Direction {
    Direction::new(p, qq).unwrap()
}

// ---- brute-force interleaving search on a sampled line ----

/// Interval of sample indices, ends inclusive, `None` for infinite.
#[derive(Clone, Copy, Debug)]
struct Iv {
    lo: Option<i64>,
    hi: Option<i64>,
}

impl Iv {
    fn has(&self, t: i64) -> bool {
        self.lo.is_none_or(|l| l <= t) && self.hi.is_none_or(|h| t <= h)
    }

    /// Structure map `M(t) -> M(s)` for `s <= t`.
    fn map(&self, t: i64, s: i64) -> bool {
        self.has(t) && self.has(s)
    }
}

const UNIT: i128 = 8;
const HALF_WINDOW: i64 = 64;

/// Sample units per level unit is `UNIT`; open ends move one sample inward.
fn sample(b: &Bar) -> Iv {
    let at = |v: Quad| {
        let r = v.as_rational().unwrap() * q(UNIT);
        assert!(r.is_integer());
        r.to_integer() as i64
    };
    let lo = match b.birth {
        Birth::NegInf => None,
        Birth::At(v) => Some(at(v)),
        Birth::After(v) => Some(at(v) + 1),
    };
    let hi = match b.death {
        Death::PosInf => None,
        Death::At(v) => Some(at(v)),
        Death::Before(v) => Some(at(v) - 1),
    };
    Iv { lo, hi }
}

fn find(parent: &mut Vec<usize>, x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Whether the contravariant interval modules `m`, `n` on the sampled line
/// are `a`-interleaved: morphisms `f_t: M(t+a) -> N(t)`, `g_t: N(t+a) -> M(t)`
/// with scalars in F_2, natural, composing to the `2a` structure maps.
fn interleaved(m: Iv, n: Iv, a: i64) -> bool {
    let l = HALF_WINDOW;
    let ts: Vec<i64> = (-l..=l - a).collect();
    let idx = |side: usize, t: i64| side * ts.len() + (t + l) as usize;
    let nv = 2 * ts.len();
    let mut parent: Vec<usize> = (0..nv).collect();
    let mut zero = vec![false; nv];
    // side 0: f (source m shifted, target n); side 1: g
    let pairs = [(m, n), (n, m)];
    for (side, (src, dst)) in pairs.iter().enumerate() {
        for &t in &ts {
            if !(src.has(t + a) && dst.has(t)) {
                zero[idx(side, t)] = true;
            }
            if t > -l {
                let lhs = dst.map(t, t - 1);
                let rhs = src.map(t + a, t - 1 + a);
                match (lhs, rhs) {
                    (true, true) => {
                        let (x, y) = (find(&mut parent, idx(side, t)), find(&mut parent, idx(side, t - 1)));
                        parent[x] = y;
                    }
                    (true, false) => zero[idx(side, t)] = true,
                    (false, true) => zero[idx(side, t - 1)] = true,
                    (false, false) => {}
                }
            }
        }
    }
    let mut forced = vec![false; nv];
    for v in 0..nv {
        if zero[v] {
            let r = find(&mut parent, v);
            forced[r] = true;
        }
    }
    let mut free: Vec<usize> = (0..nv).filter(|&v| find(&mut parent, v) == v && !forced[v]).collect();
    free.sort();
    assert!(free.len() <= 16, "too many components");
    let roots: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
    for bits in 0u32..(1 << free.len()) {
        let val = |v: usize| {
            let r = roots[v];
            !forced[r] && free.iter().position(|&x| x == r).is_some_and(|k| bits >> k & 1 == 1)
        };
        let ok = (-l..=l - 2 * a).all(|t| {
            (val(idx(1, t)) && val(idx(0, t + a))) == m.map(t + 2 * a, t)
                && (val(idx(0, t)) && val(idx(1, t + a))) == n.map(t + 2 * a, t)
        });
        if ok {
            return true;
        }
    }
    false
}

/// Largest `a` searched: `t + 2a` must stay inside the window for every
/// endpoint of the test bars (at most 3/2 in absolute value).
const MAX_A: i64 = 24;

/// Least sampled `a` (in samples) interleaving the two bars, if any up to `MAX_A`.
fn brute_cost(i: &Bar, j: Option<&Bar>) -> Option<i64> {
    let empty = Iv { lo: Some(1), hi: Some(0) };
    let (m, n) = (sample(i), j.map_or(empty, sample));
    (0..=MAX_A).find(|&a| interleaved(m, n, a))
}

fn cost_in_samples(c: Cost) -> Option<i64> {
    c.finite().map(|v| {
        let r = v.as_rational().unwrap() * q(UNIT);
        assert!(r.is_integer());
        r.to_integer() as i64
    })
}

fn oracle_bars() -> Vec<Bar> {
    let ends = [lv(-1, 1), lv(-1, 2), lv(0, 1), lv(1, 2), lv(3, 2)];
    let mut out = vec![Bar::new(0, Birth::NegInf, Death::PosInf)];
    for &b in &ends {
        out.push(Bar::new(0, Birth::At(b), Death::PosInf));
        out.push(Bar::new(0, Birth::After(b), Death::PosInf));
        out.push(Bar::new(0, Birth::NegInf, Death::At(b)));
        out.push(Bar::new(0, Birth::NegInf, Death::Before(b)));
        for &e in &ends {
            if b < e {
                out.push(Bar::new(0, Birth::At(b), Death::At(e)));
                out.push(Bar::new(0, Birth::After(b), Death::Before(e)));
                out.push(Bar::new(0, Birth::At(b), Death::Before(e)));
            } else if b == e {
                out.push(Bar::new(0, Birth::At(b), Death::At(e)));
            }
        }
    }
    out
}

fn all_closed(b: &Bar) -> bool {
    !matches!(b.birth, Birth::After(_)) && !matches!(b.death, Death::Before(_))
}

/// Formula value `w` against the sampled search `g`. Open ends sit one
/// sample inward, so the search can be off by one sample either way; with
/// closed ends only it can just miss an infimum that is not attained.
fn agrees(w: Option<i64>, g: Option<i64>, closed_only: bool) -> bool {
    match (w, g) {
        (None, None) => true,
        (Some(w), Some(g)) if closed_only => w <= g && g <= w + 1,
        (Some(w), Some(g)) => (g - w).abs() <= 1,
        _ => false,
    }
}

#[test]
fn interval_cost_matches_brute_force() {
    let bars = oracle_bars();
    for (k, i) in bars.iter().enumerate() {
        let want = cost_in_samples(deletion_cost(i));
        let got = brute_cost(i, None);
        assert!(agrees(want, got, all_closed(i)), "{i} vs zero: formula {want:?}, search {got:?}");
        for j in &bars[k..] {
            let want = cost_in_samples(interval_cost(i, j));
            let got = brute_cost(i, Some(j));
            let closed_only = all_closed(i) && all_closed(j);
            assert!(agrees(want, got, closed_only), "{i} vs {j}: formula {want:?}, search {got:?}");
        }
    }
}

#[test]
fn interval_cost_examples() {
    for a in [q(0), qf(1, 2), q(3)] {
        assert_eq!(interval_cost(&ray(q(0)), &ray(a)), a.into());
    }
    let i = Bar::new(1, Birth::After(lv(1, 3)), Death::At(lv(2, 1)));
    assert_eq!(interval_cost(&i, &i), Cost::zero());
    assert_eq!(deletion_cost(&closed(0, 2)), q(1).into());
    assert!(deletion_cost(&ray(q(0))).is_infinite());
    let mut j = i;
    j.degree = 0;
    assert_eq!(pair_cost(&i, &j), Cost::Infinite);
}

// ---- convolution action against the 1-D stalk oracle ----

/// `H^*_c([t-a, t+a] ∩ I)` as `(degree offset)` when nonzero.
fn stalk_1d(bar: &Bar, t: Quad, a: Quad) -> Option<i32> {
    let (lo, lo_open) = match bar.birth {
        Birth::NegInf => (t - a, false),
        Birth::At(b) => {
            if b > t - a {
                (b, false)
            } else {
                (t - a, false)
            }
        }
        Birth::After(b) => {
            if b >= t - a {
                (b, true)
            } else {
                (t - a, false)
            }
        }
    };
    let (hi, hi_open) = match bar.death {
        Death::PosInf => (t + a, false),
        Death::At(e) => {
            if e < t + a {
                (e, false)
            } else {
                (t + a, false)
            }
        }
        Death::Before(e) => {
            if e <= t + a {
                (e, true)
            } else {
                (t + a, false)
            }
        }
    };
    if lo > hi || (lo == hi && (lo_open || hi_open)) {
        return None;
    }
    match (lo_open, hi_open) {
        (false, false) => Some(0),
        (true, true) => Some(1),
        _ => None,
    }
}

#[test]
fn convolution_action_matches_stalk_oracle() {
    let radii = [q(0), qf(1, 4), qf(1, 2), q(1), qf(3, 2), q(2), q(3)];
    for bar in oracle_bars() {
        for &a in &radii {
            let a = Quad::rational(a);
            let out = convolution_action(&bc(&[bar]), a).unwrap();
            for k in -48..=48 {
                let t = lv(k, 8);
                for deg in [0, 1] {
                    let want = usize::from(stalk_1d(&bar, t, a) == Some(deg));
                    assert_eq!(out.dim_at(deg, t), want, "{bar} a={a} t={t} degree {deg}");
                }
            }
        }
    }
}

#[test]
fn convolution_action_examples() {
    let out = convolution_action(&bc(&[ray(q(0))]), lv(1, 1)).unwrap();
    assert_eq!(out, bc(&[ray(q(-1))]));
    let b = bc(&oracle_bars());
    assert_eq!(convolution_action(&b, Quad::zero()).unwrap(), b);
    let open = Bar::new(0, Birth::After(lv(0, 1)), Death::Before(lv(4, 1)));
    let out = convolution_action(&bc(&[open]), lv(3, 1)).unwrap();
    assert_eq!(out, bc(&[Bar::new(1, Birth::At(lv(1, 1)), Death::At(lv(3, 1)))]));
    assert!(convolution_action(&b, lv(-1, 1)).is_err());
}

// ---- bottleneck ----

#[test]
fn bottleneck_examples() {
    let r = bottleneck(&bc(&[ray(q(0))]), &bc(&[ray(q(1))]));
    assert_eq!(r.value, q(1).into());
    assert_eq!(r.kind, BoundKind::Exact);
    let r = bottleneck(&bc(&[ray(q(0))]), &bc(&[ray(q(1)), ray(q(5))]));
    assert_eq!(r.value, Cost::Infinite);
    let e = DecoratedBarcode::default();
    assert_eq!(bottleneck(&e, &e).value, Cost::zero());
    // a short bar is cheaper to delete than to match
    let r = bottleneck(&bc(&[ray(q(0)), closed(0, 1)]), &bc(&[ray(q(0)), closed(5, 9)]));
    assert_eq!(r.value, q(2).into());
    let Evidence::Matching(cert) = &r.evidence else { panic!() };
    assert_eq!(cert.deleted_left, vec![closed(0, 1)]);
}

#[test]
fn multiplicities_are_matched_individually() {
    let two = Bar { mult: 2, ..closed(0, 4) };
    let r = bottleneck(&bc(&[two]), &bc(&[closed(0, 4), closed(1, 5)]));
    assert_eq!(r.value, q(1).into());
    let Evidence::Matching(cert) = &r.evidence else { panic!() };
    assert!(cert.revalidate(&bc(&[two]), &bc(&[closed(0, 4), closed(1, 5)])));
    assert!(!cert.revalidate(&bc(&[two]), &bc(&[closed(0, 4)])));
}

fn arb_end() -> impl Strategy<Value = i128> {
    -8i128..=8
}

fn arb_bar() -> impl Strategy<Value = Bar> {
    (0i32..2, arb_end(), arb_end(), 0u8..4, 0u8..4, 1usize..3).prop_map(|(deg, x, y, bk, dk, mult)| {
        let (b, e) = (x.min(y), x.max(y));
        let (bl, el) = (lv(b, 2), lv(e, 2));
        let birth = match bk {
            0 => Birth::NegInf,
            1 if b < e => Birth::After(bl),
            _ => Birth::At(bl),
        };
        let death = match dk {
            0 => Death::PosInf,
            1 if b < e => Death::Before(el),
            _ => Death::At(el),
        };
        Bar { degree: deg, birth, death, mult }
    })
}

fn arb_barcode() -> impl Strategy<Value = DecoratedBarcode> {
    prop::collection::vec(arb_bar(), 0..5).prop_map(DecoratedBarcode::new)
}

fn add(x: Cost, y: Cost) -> Cost {
    match (x, y) {
        (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
        _ => Cost::Infinite,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bottleneck_is_a_pseudometric(x in arb_barcode(), y in arb_barcode(), z in arb_barcode()) {
        prop_assert_eq!(bottleneck(&x, &x).value, Cost::zero());
        let xy = bottleneck(&x, &y);
        prop_assert_eq!(xy.value, bottleneck(&y, &x).value);
        let xz = bottleneck(&x, &z).value;
        prop_assert!(xz <= add(xy.value, bottleneck(&y, &z).value));
        let Evidence::Matching(cert) = &xy.evidence else { unreachable!() };
        prop_assert!(cert.revalidate(&x, &y));
    }

    #[test]
    fn convolution_moves_by_at_most_a(x in arb_barcode(), k in 0i128..6) {
        let a = lv(k, 2);
        let moved = convolution_action(&x, a).unwrap();
        let r = bottleneck(&x, &moved);
        // degree changes of collapsed open bars are not matched across degrees
        let collapses = x.bars().iter().any(|b| matches!((b.birth, b.death),
            (Birth::After(s), Death::Before(e)) if e - s <= a + a));
        if !collapses {
            prop_assert!(r.value <= Cost::Finite(a));
        }
    }
}

// ---- directional distances on scenes ----

fn dirs() -> Vec<Direction> {
    vec![dir(1, 0), dir(0, 1), dir(1, 1), dir(-1, 2), dir(-3, -1)]
}

#[test]
fn disc_pair_pinches_to_one() {
    let d1 = disc_scene(q(1)).compile().unwrap();
    let d2 = disc_scene(q(2)).compile().unwrap();
    let s = sup_direction_distance(&d1, &d2, &dirs(), Norm::L2).unwrap();
    assert_eq!(s.report.kind, BoundKind::LowerBound);
    assert_eq!(s.report.value, q(1).into());
    assert!(s.per_direction.iter().all(|p| p.unit == q(1).into()));
    let same = sup_direction_distance(&d1, &d1, &dirs(), Norm::L2).unwrap();
    assert_eq!(same.report.value, Cost::zero());
}

#[test]
fn shift_pinches_on_scenes() {
    let scenes = [
        (edgeless_square(Backend::Grid), BallSpec::linf as fn(Q) -> BallSpec, Norm::Linf),
        (mixed_grid_scene(), BallSpec::linf, Norm::Linf),
        (edgeless_square(Backend::Convex), BallSpec::l2, Norm::L2),
        (square_scene(Backend::Convex), BallSpec::l2, Norm::L2),
    ];
    for (scene, ball, norm) in scenes {
        let f = scene.compile().unwrap();
        for a in [qf(1, 2), q(1)] {
            let k = f.convolve_object(&ball(a)).unwrap();
            let lower = sup_direction_distance(&f, &k, &dirs(), norm).unwrap();
            let upper = shift_upper_bound(a).unwrap();
            assert_eq!(lower.report.value, a.into());
            assert_eq!(upper.value, a.into());
            let loc = localized_bound_check(&f, &k, &dirs(), norm, Some(upper)).unwrap();
            assert!(loc.ok);
        }
    }
}

#[test]
fn shift_certificate() {
    let r = shift_upper_bound(q(1)).unwrap();
    assert_eq!(r.kind, BoundKind::UpperBound);
    let Evidence::Interleaving(c) = &r.evidence else { panic!() };
    assert!(c.verify());
    assert_eq!(c.g, ChiArrow::new(ChiKind::K, q(2), q(0)).unwrap());
    assert_eq!(shift_upper_bound(q(0)).unwrap().value, Cost::zero());
    assert!(shift_upper_bound(q(-1)).is_err());
    let bad = ShiftCertificate { g: ChiArrow::new(ChiKind::K, q(2), q(1)).unwrap(), ..c.clone() };
    assert!(!bad.verify());
}

#[test]
fn action_matches_profile_of_convolution() {
    for scene in [edgeless_square(Backend::Grid), mixed_grid_scene(), square_scene(Backend::Grid)] {
        let f = scene.compile().unwrap();
        for a in [qf(1, 2), q(1)] {
            let ball = BallSpec::linf(a);
            let k = f.convolve_object(&ball).unwrap();
            for d in [dir(1, 0), dir(1, 1), dir(2, -1)] {
                let h = Norm::Linf.support(d).scale(a);
                let bf = decompose(&profile(&f, d).unwrap()).unwrap();
                let bk = decompose(&profile(&k, d).unwrap()).unwrap();
                assert_eq!(convolution_action(&bf, h).unwrap(), bk, "direction {d:?} a={a}");
            }
        }
    }
}

#[test]
fn localized_strip_examples() {
    let full = Bar::new(0, Birth::NegInf, Death::PosInf);
    assert!(localized_strip(&bc(&[full])).is_empty());
    let mixed = bc(&[full, ray(q(0)), closed(0, 1), Bar::new(0, Birth::NegInf, Death::At(lv(1, 1)))]);
    assert_eq!(localized_strip(&mixed).total(), 3);
    let f = disc_scene(q(1)).compile().unwrap();
    for b in directional_barcodes(&f, &dirs()).unwrap() {
        assert_eq!(localized_strip(&b), b);
    }
}

#[test]
fn localized_check_on_identical_and_disc_pairs() {
    let d1 = disc_scene(q(1)).compile().unwrap();
    let d2 = disc_scene(q(2)).compile().unwrap();
    let r = localized_bound_check(&d1, &d1, &dirs(), Norm::L2, None).unwrap();
    assert!(r.ok);
    assert_eq!(r.localized.report.value, Cost::zero());
    let r = localized_bound_check(&d1, &d2, &dirs(), Norm::L2, Some(shift_upper_bound(q(1)).unwrap())).unwrap();
    assert!(r.ok);
    assert_eq!(r.localized.report.value, q(1).into());
}
