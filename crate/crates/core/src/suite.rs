//! The verification suite: worked computations reproduced exactly, plus
//! randomized property checks. Shared by the `verify` command and the
//! acceptance test target.

use std::fmt;
use std::time::{Duration, Instant};

use num::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cohomc::{hcc, les_failures};
use crate::convex::Norm;
use crate::error::Result;
use crate::fieldla::FieldPrime;
use crate::numeric::{q, qf, Point, Quad, Q};
use crate::persdist::{
    bottleneck, directional_barcodes, localized_bound_check, shift_upper_bound, sup_over_directions, Cost, Evidence,
};
use crate::plancx::{build_grid, map_cellset, CellSet, Direction, Grid};
use crate::radon::{
    decompose, epigraph_level, euler_c_of, halfplane_disc_verify, normalize, profile, radon_summary, Bar, Birth,
    DecoratedBarcode, Death,
};
use crate::scene::{disc_scene, edgeless_square, mixed_grid_scene, square_scene, suite_scenes, Scene};
use crate::sheafobj::{Backend, BallSpec, KernelSpec, SheafObject, StalkField};

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
    pub runtime: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: expected {}; computed {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.expected,
            self.computed,
            self.runtime.as_secs_f64()
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} criteria passed", self.criteria.len())
    }
}

/// Result of one criterion before timing.
pub struct Outcome {
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

impl Outcome {
    fn new(passed: bool, expected: impl Into<String>, computed: impl Into<String>) -> Outcome {
        Outcome { passed, expected: expected.into(), computed: computed.into() }
    }
}

pub type Criterion = fn() -> Result<Outcome>;

pub fn criteria() -> Vec<(usize, &'static str, Criterion)> {
    vec![
        (1, "disc barcodes", disc_barcodes),
        (2, "edgeless square thresholds", edgeless_thresholds),
        (3, "epigraph and its shifts", epigraph_shifts),
        (4, "half-plane against disc stalks", halfplane_disc_lattice),
        (5, "shift distance pinch", shift_pinch),
        (6, "convolution functor laws", functor_laws),
        (7, "property suites", property_suites),
        (8, "localized distance bound", localized_bound),
    ]
}

pub fn run_one(id: usize, name: &'static str, c: Criterion) -> CriterionReport {
    let start = Instant::now();
    let outcome = c().unwrap_or_else(|e| Outcome::new(false, "no error", format!("error: {e}")));
    CriterionReport {
        id,
        name,
        passed: outcome.passed,
        expected: outcome.expected,
        computed: outcome.computed,
        runtime: start.elapsed(),
    }
}

pub fn run_suite() -> SuiteReport {
    SuiteReport { criteria: criteria().into_iter().map(|(id, name, c)| run_one(id, name, c)).collect() }
}

fn rat(v: Q) -> Quad {
    Quad::rational(v)
}

fn half_infinite(degree: i32, at: Quad) -> DecoratedBarcode {
    DecoratedBarcode::new([Bar::new(degree, Birth::At(at), Death::PosInf)])
}

/// Ball shape used for a scene: sup-norm boxes on the grid backend,
/// Euclidean discs on the convex one.
pub fn scene_ball(scene: &Scene, a: Q) -> (BallSpec, Norm) {
    match scene.backend {
        Backend::Grid => (BallSpec::linf(a), Norm::Linf),
        Backend::Convex => (BallSpec::l2(a), Norm::L2),
    }
}

// ---- 1 ----

fn disc_barcodes() -> Result<Outcome> {
    let dirs = Direction::spread(64);
    let mut bad = Vec::new();
    for r in [qf(1, 2), q(1), q(2)] {
        let s = radon_summary(&disc_scene(r).compile()?, &dirs)?;
        for (d, b) in dirs.iter().zip(&s.barcodes) {
            let want = half_infinite(0, Quad::sqrt(d.norm_sq()).scale(-r));
            let unit_ok = b.bars().len() == 1
                && b.bars()[0].birth.level().map(|v| normalize(v, *d, Norm::L2)) == Some(rat(-r));
            if *b != want || !unit_ok {
                bad.push(format!("r={r} d={d:?}: {b}"));
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        "one degree-0 bar [-r, inf) per direction, r in {1/2, 1, 2}, 64 directions",
        if bad.is_empty() { "192/192 barcodes match".into() } else { bad.join(", ") },
    ))
}

// ---- 2 ----

/// Indicator support of `degree`, empty when the degree is absent.
fn indicator_support(sf: &StalkField, degree: i32) -> std::result::Result<CellSet, String> {
    if sf.support(degree).is_empty() {
        return Ok(CellSet::empty());
    }
    sf.recognize_indicator(degree)
}

fn dist2_to_box(x: Q, y: Q, hx: Q, y0: Q, hy: Q) -> Q {
    let dx = (x.abs() - hx).max(Q::zero());
    let dy = ((y - y0).abs() - hy).max(Q::zero());
    dx * dx + dy * dy
}

/// Exact Euclidean membership in `Z'_a` and `Z''_a` for the edgeless square.
fn l2_threshold_sets(p: &Point, a: Q) -> (bool, bool) {
    let a2 = a * a;
    let in_s = dist2_to_box(p.x, p.y, q(1), q(0), q(1)) <= a2;
    let in_i = dist2_to_box(p.x, p.y, q(1), q(1), q(0)) <= a2;
    let in_j = dist2_to_box(p.x, p.y, q(1), q(-1), q(0)) <= a2;
    (in_s && !in_i && !in_j, in_i && in_j)
}

fn edgeless_thresholds() -> Result<Outcome> {
    let mut bad = Vec::new();
    let f = edgeless_square(Backend::Grid).compile()?;
    for a in [q(0), qf(1, 2), q(1), qf(3, 2)] {
        let sf = f.convolve_grid(a)?;
        let g = sf.grid();
        let z1 = g.cells_where(|p| p.x.abs() <= q(1) + a && p.y.abs() < q(1) - a);
        let z2 = g.cells_where(|p| p.x.abs() <= q(1) + a && p.y.abs() <= a - q(1));
        if indicator_support(&sf, 0) != Ok(z1) {
            bad.push(format!("grid H0 at a={a}"));
        }
        if indicator_support(&sf, 1) != Ok(z2.clone()) {
            bad.push(format!("grid H1 at a={a}"));
        }
        if (a < q(1)) != z2.is_empty() {
            bad.push(format!("grid H1 threshold at a={a}"));
        }
        if sf.degrees().iter().any(|&k| k != 0 && k != 1) {
            bad.push(format!("grid extra degrees at a={a}"));
        }
    }
    let c = edgeless_square(Backend::Convex).compile()?;
    let coords: Vec<Q> = (0..41).map(|i| q(-3) + qf(3 * i, 20)).collect();
    let points: Vec<Point> = coords.iter().flat_map(|&x| coords.iter().map(move |&y| Point::new(x, y))).collect();
    for a in [q(0), qf(1, 2), q(1), qf(3, 2)] {
        let ball = BallSpec::l2(a);
        let misses: usize = points
            .par_iter()
            .map(|p| {
                let (h0, h1) = l2_threshold_sets(p, a);
                let want = crate::cohomc::GradedDims::from_pairs(&[(0, h0 as usize), (1, h1 as usize)]);
                usize::from(c.convolve_stalk(&ball, p).map_or(true, |s| s != want))
            })
            .sum();
        if misses > 0 {
            bad.push(format!("convex a={a}: {misses} of 1681 points"));
        }
        let h1_anywhere = points.iter().any(|p| l2_threshold_sets(p, a).1);
        if h1_anywhere != (a >= q(1)) {
            bad.push(format!("convex H1 threshold at a={a}"));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        "H0 = k_{Z'_a}, H1 = k_{Z''_a} exactly from a = 1 on, a in {0, 1/2, 1, 3/2}, both backends",
        if bad.is_empty() { "grid indicators and 4 x 1681 Euclidean stalks match".into() } else { bad.join(", ") },
    ))
}

// ---- 3 ----

fn epigraph_shifts() -> Result<Outcome> {
    let mut bad = Vec::new();
    let cases = [(edgeless_square(Backend::Convex), 64), (edgeless_square(Backend::Grid), 16)];
    for (scene, count) in cases {
        let dirs = Direction::spread(count);
        let f = scene.compile()?;
        let phi = radon_summary(&f, &dirs)?.phi;
        let Some(phi) = phi else {
            bad.push(format!("{:?}: not one degree-1 bar per direction", scene.backend));
            continue;
        };
        for (d, v) in dirs.iter().zip(&phi) {
            let (u1, u2) = d.unit();
            let unit = normalize(*v, *d, Norm::L2).to_f64();
            if *v != rat(q((d.q().abs() - d.p().abs()) as i128)) || (unit - (u2.abs() - u1.abs())).abs() > 1e-9 {
                bad.push(format!("phi at {d:?}"));
            }
        }
        for a in [qf(1, 2), q(1)] {
            let (ball, norm) = scene_ball(&scene, a);
            let k = f.convolve_object(&ball)?;
            let bk = directional_barcodes(&k, &dirs)?;
            for ((d, v), b) in dirs.iter().zip(&phi).zip(&bk) {
                let h = norm.support(*d).scale(a);
                let ok = epigraph_level(b) == Some(*v - h)
                    && normalize(*v - h, *d, norm) == normalize(*v, *d, norm) - rat(a);
                if !ok {
                    bad.push(format!("{:?} a={a} d={d:?}: {b}", scene.backend));
                }
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        "one degree-1 bar [|y2| - |y1|, inf), moved down by a under K_a",
        if bad.is_empty() { "64 Euclidean and 16 sup-norm directions, a in {1/2, 1}".into() } else { bad.join(", ") },
    ))
}

// ---- 4 ----

fn halfplane_disc_lattice() -> Result<Outcome> {
    let dirs = Direction::spread(16);
    let ts: Vec<Q> = (-12..=12).map(|k| qf(k, 4)).collect();
    let xs: Vec<Point> = (-12..=12).flat_map(|i| (-12..=12).map(move |j| Point::new(qf(i, 4), qf(j, 4)))).collect();
    let reports: Vec<_> = [qf(1, 2), q(1)].par_iter().map(|&a| halfplane_disc_verify(a, &dirs, &ts, &xs)).collect();
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let boundary: usize = reports.iter().map(|r| r.boundary_cases).sum();
    let counter: usize = reports.iter().map(|r| r.counterexamples.len()).sum();
    Ok(Outcome::new(
        counter == 0 && boundary > 0,
        "zero counterexamples, boundary cases included",
        format!("{counter} counterexamples in {checked} checks ({boundary} on the boundary)"),
    ))
}

// ---- 5 ----

fn shift_pinch() -> Result<Outcome> {
    let dirs = Direction::spread(16);
    let mut bad = Vec::new();
    let mut certificates = 0;
    for (name, scene) in suite_scenes() {
        let f = scene.compile()?;
        let bf = directional_barcodes(&f, &dirs)?;
        for a in [qf(1, 2), q(1)] {
            let (ball, norm) = scene_ball(&scene, a);
            let k = f.convolve_object(&ball)?;
            let bk = directional_barcodes(&k, &dirs)?;
            let lower = sup_over_directions(&dirs, &bf, &bk, norm)?;
            let upper = shift_upper_bound(a)?;
            let exact = lower.per_direction.iter().all(|p| p.unit == a.into());
            let float = (lower.report.value.to_f64() - crate::numeric::q_to_f64(&a)).abs() <= 1e-9;
            for (p, (l, r)) in lower.per_direction.iter().zip(bf.iter().zip(&bk)) {
                certificates += 1;
                if !p.matching.revalidate(l, r) {
                    bad.push(format!("{name} a={a}: certificate at {:?}", p.direction));
                }
            }
            let Evidence::Interleaving(cert) = &upper.evidence else { unreachable!() };
            if !(exact && float && upper.value == a.into() && cert.verify()) {
                bad.push(format!("{name} a={a}: lower {} upper {}", lower.report.value, upper.value));
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        "lower bound = upper bound = a for every suite scene, a in {1/2, 1}",
        if bad.is_empty() {
            format!("8 scenes x 2 radii pinched, {certificates} matchings re-validated")
        } else {
            bad.join(", ")
        },
    ))
}

// ---- 6 ----

fn same_field(a: &StalkField, b: &StalkField) -> bool {
    a.first_difference(b).is_none()
}

fn functor_laws() -> Result<Outcome> {
    let mut bad = Vec::new();
    for scene in [edgeless_square(Backend::Grid), mixed_grid_scene()] {
        let f = scene.compile()?;
        for (a, b) in [(qf(1, 2), qf(1, 2)), (q(1), qf(-1, 2))] {
            let twice = f.convolve_object(&BallSpec::linf(a))?.convolve_grid(b)?;
            if !same_field(&twice, &f.convolve_grid(a + b)?) {
                bad.push(format!("grid ({a}, {b})"));
            }
        }
        let unit = f.convolve_grid(Q::zero())?;
        let SheafObject::Grid(g) = &f else { unreachable!() };
        let cx = g.grid().complex();
        for c in 0..cx.n_cells() {
            let p = cx.representative(c);
            if unit.dims_at(&p) != Some(&f.stalk(&p)?) {
                bad.push(format!("K_0 at {p:?}"));
                break;
            }
        }
    }
    let c = edgeless_square(Backend::Convex).compile()?;
    let twice = c.convolve_object(&BallSpec::l2(qf(1, 2)))?.convolve_object(&BallSpec::l2(qf(1, 2)))?;
    let once = c.convolve_object(&BallSpec::l2(q(1)))?;
    let coords: Vec<Q> = (-12..=12).map(|k| qf(k, 4)).collect();
    for &x in &coords {
        for &y in &coords {
            let p = Point::new(x, y);
            if twice.stalk(&p)? != once.stalk(&p)? {
                bad.push(format!("convex (1/2, 1/2) at {p:?}"));
            }
            if c.convolve_stalk(&BallSpec::l2(Q::zero()), &p)? != c.stalk(&p)? {
                bad.push(format!("convex K_0 at {p:?}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let scenes = [edgeless_square(Backend::Grid), square_scene(Backend::Grid), mixed_grid_scene()];
    let objects: Vec<SheafObject> = scenes.iter().map(Scene::compile).collect::<Result<_>>()?;
    let triples: Vec<(usize, Q, Point)> = (0..200)
        .map(|_| {
            let i = rng.gen_range(0..scenes.len());
            let a = qf(rng.gen_range(0..=6), 4);
            let (lo, hi) = scenes[i].window();
            let mut coord = |l: Q, h: Q| {
                let steps = ((h - l - a - a) * q(4)).to_integer();
                l + a + qf(rng.gen_range(0..=steps), 4)
            };
            (i, a, Point::new(coord(lo.x, hi.x), coord(lo.y, hi.y)))
        })
        .collect();
    let mismatches: Vec<String> = triples
        .par_iter()
        .filter_map(|(i, a, x)| {
            let f = &objects[*i];
            let lhs = f.convolve_stalk(&BallSpec::linf(*a), x);
            let rhs = f.compose_kernel_stalk(&KernelSpec::Delta(*a, Norm::Linf), x);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => None,
                (l, r) => Some(format!("scene {i} a={a} x={x:?}: {l:?} vs {r:?}")),
            }
        })
        .collect();
    bad.extend(mismatches);
    Ok(Outcome::new(
        bad.is_empty(),
        "K_a K_b = K_(a+b) for (1/2, 1/2) and (1, -1/2), K_0 = id, ball convolution = kernel composition",
        if bad.is_empty() { "all stalk fields identical; 200/200 random triples agree".into() } else { bad.join(", ") },
    ))
}

// ---- 7 ----

fn random_grid(rng: &mut ChaCha8Rng) -> Result<Grid> {
    let (nx, ny) = (rng.gen_range(2..6), rng.gen_range(2..6));
    let mut cuts = |n: usize| {
        let mut v: Vec<Q> = (-6..=6).map(|k| qf(k, 2)).collect();
        v.shuffle(rng);
        v.truncate(n);
        v.sort();
        v
    };
    build_grid(&cuts(nx), &cuts(ny))
}

fn random_cells(rng: &mut ChaCha8Rng, n: usize, density: f64) -> CellSet {
    CellSet::from_iter((0..n).filter(|_| rng.gen_bool(density)))
}

/// Closed set minus a closed set: locally closed.
fn random_locally_closed(rng: &mut ChaCha8Rng, g: &Grid) -> CellSet {
    let cx = g.complex();
    let n = cx.n_cells();
    let outer = cx.closure(&random_cells(rng, n, 0.5));
    let cut = cx.closure(&random_cells(rng, n, 0.15));
    outer.difference(&cut)
}

fn random_barcode(rng: &mut ChaCha8Rng) -> DecoratedBarcode {
    let n = rng.gen_range(0..5);
    DecoratedBarcode::new((0..n).map(|_| {
        let (x, y) = (rng.gen_range(-8i128..=8), rng.gen_range(-8i128..=8));
        let (b, e) = (x.min(y), x.max(y));
        let (bl, el) = (rat(qf(b, 2)), rat(qf(e, 2)));
        let birth = match rng.gen_range(0..4) {
            0 => Birth::NegInf,
            1 if b < e => Birth::After(bl),
            _ => Birth::At(bl),
        };
        let death = match rng.gen_range(0..4) {
            0 => Death::PosInf,
            1 if b < e => Death::Before(el),
            _ => Death::At(el),
        };
        Bar { degree: rng.gen_range(0..2), birth, death, mult: rng.gen_range(1..3) }
    }))
}

fn add(x: Cost, y: Cost) -> Cost {
    match (x, y) {
        (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
        _ => Cost::Infinite,
    }
}

fn property_suites() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let primes = [2, 3, 5];

    let mut les_ok = 0;
    for i in 0..50 {
        let g = random_grid(&mut rng)?;
        let cx = g.complex();
        let z = random_locally_closed(&mut rng, &g);
        let a = z.intersection(&cx.closure(&random_cells(&mut rng, cx.n_cells(), 0.3)));
        let field = FieldPrime::new(primes[i % 3])?;
        match les_failures(cx, &z, &a, field) {
            Ok(f) if f.is_empty() => les_ok += 1,
            Ok(f) => bad.push(format!("LES pair {i}: {}", f.join("; "))),
            Err(e) => bad.push(format!("LES pair {i}: {e}")),
        }
    }

    let mut refine_ok = 0;
    for i in 0..50 {
        let g = random_grid(&mut rng)?;
        let z = random_locally_closed(&mut rng, &g);
        let field = FieldPrime::new(primes[i % 3])?;
        let before = hcc(g.complex(), &z, field)?;
        let d = loop {
            if let Ok(d) = Direction::new(rng.gen_range(-3..=3), rng.gen_range(1..=3)) {
                break d;
            }
        };
        let s = qf(rng.gen_range(-8..=8), 4);
        let (fine, map) = g.complex().refine_by_line(d, s);
        let slanted = hcc(&fine, &map_cellset(&z, &map), field)?;
        let finer = g.with_cuts(&[qf(rng.gen_range(-11..=11), 4)], &[qf(rng.gen_range(-11..=11), 4)]);
        let axis = hcc(finer.complex(), &g.transfer(&z, &finer), field)?;
        if before == slanted && before == axis {
            refine_ok += 1;
        } else {
            bad.push(format!("refinement pair {i}: {before:?} / {slanted:?} / {axis:?}"));
        }
    }

    let dirs = Direction::spread(16);
    let mut chi_values = Vec::new();
    let mut strata = 0;
    for (name, scene) in suite_scenes() {
        let f = scene.compile()?;
        let expected = euler_c_of(&f);
        chi_values.push(format!("{name} {expected}"));
        let issues: Vec<String> = dirs
            .par_iter()
            .map(|&d| -> Result<Vec<String>> {
                let p = profile(&f, d)?;
                p.check()?;
                let b = decompose(&p)?;
                let mut out = Vec::new();
                if p.dims(p.n_strata() - 1).euler() != expected {
                    out.push(format!("{name} {d:?}: chi"));
                }
                for t in p.sample_levels() {
                    let dims = p.dims(p.stratum_of(t));
                    let degrees: Vec<i32> = dims.degrees().map(|(k, _)| k).chain(b.degrees()).collect();
                    if degrees.iter().any(|&k| b.dim_at(k, t) != dims.get(k)) {
                        out.push(format!("{name} {d:?}: stratum at {t}"));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .concat();
        strata += dirs.len();
        bad.extend(issues);
        if name.starts_with("edgeless") && expected != -1 {
            bad.push(format!("{name}: chi {expected}, expected -1"));
        }
    }

    let mut metric_ok = 0;
    for i in 0..100 {
        let (x, y, z) = (random_barcode(&mut rng), random_barcode(&mut rng), random_barcode(&mut rng));
        let xy = bottleneck(&x, &y);
        let ok = bottleneck(&x, &x).value == Cost::zero()
            && xy.value == bottleneck(&y, &x).value
            && bottleneck(&x, &z).value <= add(xy.value, bottleneck(&y, &z).value)
            && matches!(&xy.evidence, Evidence::Matching(c) if c.revalidate(&x, &y));
        if ok {
            metric_ok += 1;
        } else {
            bad.push(format!("metric triple {i}"));
        }
    }

    Ok(Outcome::new(
        bad.is_empty(),
        "LES exact on 50 pairs, hcc refinement-invariant on 50, chi_c conserved (edgeless square -1), \
         barcodes stratum-consistent, pseudometric on 100 triples with valid certificates",
        if bad.is_empty() {
            format!(
                "LES {les_ok}/50, refinement {refine_ok}/50, {strata} profiles consistent, chi [{}], metric {metric_ok}/100",
                chi_values.join(", ")
            )
        } else {
            bad.join(", ")
        },
    ))
}

// ---- 8 ----

fn localized_bound() -> Result<Outcome> {
    let dirs = Direction::spread(16);
    let mut bad = Vec::new();
    let mut pairs = 0;
    let a = qf(1, 2);
    for (name, scene) in suite_scenes() {
        let f = scene.compile()?;
        let (ball, norm) = scene_ball(&scene, a);
        let k = f.convolve_object(&ball)?;
        for (label, g, upper) in [("itself", &f, shift_upper_bound(Q::zero())?), ("K_1/2", &k, shift_upper_bound(a)?)] {
            pairs += 1;
            let r = localized_bound_check(&f, g, &dirs, norm, Some(upper))?;
            if !r.ok {
                bad.push(format!("{name} vs {label}"));
            }
        }
    }
    for (r1, r2) in [(qf(1, 2), q(1)), (q(1), q(2))] {
        pairs += 1;
        let f = disc_scene(r1).compile()?;
        let g = disc_scene(r2).compile()?;
        let r = localized_bound_check(&f, &g, &dirs, Norm::L2, Some(shift_upper_bound(r2 - r1)?))?;
        if !r.ok || r.localized.report.value != (r2 - r1).into() {
            bad.push(format!("discs {r1}, {r2}"));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        "localized proxy <= distance on every suite pair",
        if bad.is_empty() { format!("{pairs} pairs, every direction and upper bound respected") } else { bad.join(", ") },
    ))
}
