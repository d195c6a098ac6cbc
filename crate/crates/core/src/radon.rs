//! Directional profiles `t -> H^*_c({x.d <= t}; F)`, their barcodes, and
//! the shift identities relating them to convolution.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::Signed;
use rayon::prelude::*;

use crate::cohomc::{self, Cohomology, GradedDims};
use crate::convex::{ConvexBody, Norm};
use crate::error::{Error, Result};
use crate::fieldla::FpMatrix;
use crate::numeric::{q, qf, Point, Quad, Q};
use crate::plancx::{map_cellset, CellSet, Direction, PlanarComplex};
use crate::sheafobj::{les_rank_rule, BallSpec, ConvexSheaf, GridSheaf, SheafObject};

/// Lower end of a bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Birth {
    NegInf,
    /// alive at the level itself
    At(Quad),
    /// alive just above the level
    After(Quad),
}

/// Upper end of a bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Death {
    /// alive at the level itself
    At(Quad),
    /// alive just below the level
    Before(Quad),
    PosInf,
}

impl Birth {
    pub fn level(&self) -> Option<Quad> {
        match self {
            Birth::NegInf => None,
            Birth::At(v) | Birth::After(v) => Some(*v),
        }
    }

    pub fn map(&self, f: impl Fn(Quad) -> Quad) -> Birth {
        match self {
            Birth::NegInf => Birth::NegInf,
            Birth::At(v) => Birth::At(f(*v)),
            Birth::After(v) => Birth::After(f(*v)),
        }
    }

    pub fn decoration(&self) -> &'static str {
        match self {
            Birth::NegInf => "-inf",
            Birth::At(_) => "at_point",
            Birth::After(_) => "just_after",
        }
    }
}

impl Death {
    pub fn level(&self) -> Option<Quad> {
        match self {
            Death::PosInf => None,
            Death::At(v) | Death::Before(v) => Some(*v),
        }
    }

    pub fn map(&self, f: impl Fn(Quad) -> Quad) -> Death {
        match self {
            Death::PosInf => Death::PosInf,
            Death::At(v) => Death::At(f(*v)),
            Death::Before(v) => Death::Before(f(*v)),
        }
    }

    pub fn decoration(&self) -> &'static str {
        match self {
            Death::PosInf => "+inf",
            Death::At(_) => "at_point",
            Death::Before(_) => "just_before",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub degree: i32,
    pub birth: Birth,
    pub death: Death,
    pub mult: usize,
}

impl Bar {
    pub fn new(degree: i32, birth: Birth, death: Death) -> Bar {
        Bar { degree, birth, death, mult: 1 }
    }

    /// Applies `f` to both end levels.
    pub fn map_levels(&self, f: impl Fn(Quad) -> Quad + Copy) -> Bar {
        Bar { birth: self.birth.map(f), death: self.death.map(f), ..*self }
    }

    /// Whether the bar is alive at level `t`.
    pub fn contains(&self, t: Quad) -> bool {
        let lo = match self.birth {
            Birth::NegInf => true,
            Birth::At(b) => b <= t,
            Birth::After(b) => b < t,
        };
        let hi = match self.death {
            Death::PosInf => true,
            Death::At(e) => t <= e,
            Death::Before(e) => t < e,
        };
        lo && hi
    }
}

fn fmt_birth(b: &Birth) -> String {
    match b {
        Birth::NegInf => "(-inf".into(),
        Birth::At(v) => format!("[{v}"),
        Birth::After(v) => format!("({v}"),
    }
}

fn fmt_death(d: &Death) -> String {
    match d {
        Death::PosInf => "+inf)".into(),
        Death::At(v) => format!("{v}]"),
        Death::Before(v) => format!("{v})"),
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{} {}, {}", self.degree, fmt_birth(&self.birth), fmt_death(&self.death))?;
        if self.mult > 1 {
            write!(f, " x{}", self.mult)?;
        }
        Ok(())
    }
}

/// A multiset of bars in canonical (sorted, merged) form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DecoratedBarcode {
    bars: Vec<Bar>,
}

impl DecoratedBarcode {
    pub fn new(bars: impl IntoIterator<Item = Bar>) -> Self {
        let mut merged: BTreeMap<(i32, Birth, Death), usize> = BTreeMap::new();
        for b in bars {
            if b.mult > 0 {
                *merged.entry((b.degree, b.birth, b.death)).or_default() += b.mult;
            }
        }
        DecoratedBarcode {
            bars: merged
                .into_iter()
                .map(|((degree, birth, death), mult)| Bar { degree, birth, death, mult })
                .collect(),
        }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn map_levels(&self, f: impl Fn(Quad) -> Quad + Copy) -> DecoratedBarcode {
        DecoratedBarcode::new(self.bars.iter().map(|b| b.map_levels(f)))
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.bars.iter().map(|b| b.degree).collect();
        d.dedup();
        d
    }

    /// Total multiplicity of bars of degree `degree` alive at `t`.
    pub fn dim_at(&self, degree: i32, t: Quad) -> usize {
        self.bars.iter().filter(|b| b.degree == degree && b.contains(t)).map(|b| b.mult).sum()
    }

    /// Number of bars counted with multiplicity.
    pub fn total(&self) -> usize {
        self.bars.iter().map(|b| b.mult).sum()
    }
}

impl fmt::Display for DecoratedBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bars.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.bars.iter().map(Bar::to_string).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// The profile in one direction on the strata `(-inf, s_1), {s_1}, (s_1, s_2),
/// ..., {s_m}, (s_m, inf)`, numbered `0..=2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionalProfile {
    direction: Direction,
    levels: Vec<Quad>,
    dims: Vec<GradedDims>,
    /// `ranks[i][j]` for `j <= i`: rank of `M(sigma_i) -> M(sigma_j)`.
    ranks: Vec<Vec<GradedDims>>,
}

impl DirectionalProfile {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn levels(&self) -> &[Quad] {
        &self.levels
    }

    pub fn n_strata(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self, stratum: usize) -> &GradedDims {
        &self.dims[stratum]
    }

    /// Rank of the structure map `M(sigma) -> M(sigma')`, `sigma' <= sigma`.
    pub fn rank(&self, lower: usize, upper: usize) -> &GradedDims {
        &self.ranks[upper][lower]
    }

    /// The stratum containing level `t`.
    pub fn stratum_of(&self, t: Quad) -> usize {
        let mut s = 0;
        for (k, v) in self.levels.iter().enumerate() {
            match t.cmp(v) {
                Ordering::Less => return s,
                Ordering::Equal => return 2 * k + 1,
                Ordering::Greater => s = 2 * k + 2,
            }
        }
        s
    }

    /// A level inside each stratum.
    pub fn sample_levels(&self) -> Vec<Quad> {
        let m = self.levels.len();
        if m == 0 {
            return vec![Quad::zero()];
        }
        let one = Quad::rational(q(1));
        let mut out = vec![self.levels[0] - one];
        for k in 0..m {
            out.push(self.levels[k]);
            if k + 1 < m {
                out.push((self.levels[k] + self.levels[k + 1]).scale(qf(1, 2)));
            }
        }
        out.push(self.levels[m - 1] + one);
        out
    }

    /// Rank function at levels `t' <= t`.
    pub fn rank_at(&self, lower: Quad, upper: Quad) -> &GradedDims {
        self.rank(self.stratum_of(lower), self.stratum_of(upper))
    }

    /// Checks the rank function: diagonal equals dims, monotone in both
    /// arguments.
    pub fn check(&self) -> Result<()> {
        let n = self.n_strata();
        let bad = |m: String| Err(Error::Inconsistent(m));
        for i in 0..n {
            if self.ranks[i][i] != self.dims[i] {
                return bad(format!("rank on the diagonal differs from the stalk at stratum {i}"));
            }
            for j in 0..=i {
                for k in 0..=j {
                    for (deg, v) in self.ranks[i][k].degrees() {
                        if v > self.ranks[j][k].get(deg) || v > self.ranks[i][j].get(deg) {
                            return bad(format!("rank function not monotone at ({k}, {j}, {i})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Vertex levels of the closed support (grid) or support-function minima
/// of every piece (convex).
pub fn critical_levels(f: &SheafObject, d: Direction) -> Vec<Quad> {
    let mut out: Vec<Quad> = match f {
        SheafObject::Grid(g) => {
            let cx = g.grid().complex();
            let closed = cx.closure(&g.support());
            closed
                .iter()
                .filter(|&&c| cx.dim(c) == 0)
                .map(|&c| Quad::rational(cx.vertex(c).dot(d.pair())))
                .collect()
        }
        SheafObject::Convex(c) => c
            .generators()
            .iter()
            .flat_map(|gen| {
                let (m, holes) = gen.region.support_minima(d);
                std::iter::once(m).chain(holes)
            })
            .collect(),
    };
    out.sort();
    out.dedup();
    out
}

fn check_compact(f: &SheafObject) -> Result<()> {
    if let SheafObject::Grid(g) = f {
        if let Some((lo, hi)) = g.support_bbox() {
            let (wlo, whi) = g.grid().window();
            if lo.x <= wlo.x || lo.y <= wlo.y || hi.x >= whi.x || hi.y >= whi.y {
                return Err(Error::Margin { margin: "0".into(), radius: "0".into() });
            }
        }
    }
    Ok(())
}

/// The profile of `f` in direction `d`.
pub fn profile(f: &SheafObject, d: Direction) -> Result<DirectionalProfile> {
    profile_with_levels(f, d, &[])
}

/// As [`profile`], with extra (possibly non-critical) levels added to the
/// stratification.
pub fn profile_with_levels(f: &SheafObject, d: Direction, extra: &[Quad]) -> Result<DirectionalProfile> {
    check_compact(f)?;
    let mut levels = critical_levels(f, d);
    levels.extend_from_slice(extra);
    levels.sort();
    levels.dedup();
    let (dims, ranks) = match f {
        SheafObject::Grid(g) => grid_profile(g, d, &levels)?,
        SheafObject::Convex(c) => convex_profile(c, d, &levels),
    };
    Ok(DirectionalProfile { direction: d, levels, dims, ranks })
}

type ProfileData = (Vec<GradedDims>, Vec<Vec<GradedDims>>);

fn empty_ranks(n: usize) -> Vec<Vec<GradedDims>> {
    (0..n).map(|i| vec![GradedDims::zero(); i + 1]).collect()
}

fn convex_profile(c: &ConvexSheaf, d: Direction, levels: &[Quad]) -> ProfileData {
    let n = 2 * levels.len() + 1;
    // level bounding the half-plane on each stratum (None below s_1)
    let bound = |s: usize| if s == 0 { None } else { Some(levels[(s - 1) / 2]) };
    let mut dims = vec![GradedDims::zero(); n];
    let mut ranks = empty_ranks(n);
    for gen in c.generators() {
        let (m, holes) = gen.region.support_minima(d);
        let per: Vec<GradedDims> = (0..n)
            .map(|s| match bound(s) {
                None => GradedDims::zero(),
                Some(t) => les_rank_rule(m <= t, holes.iter().filter(|h| **h <= t).count()),
            })
            .collect();
        for i in 0..n {
            dims[i].add(&per[i].shifted(gen.degree, gen.mult));
            for j in 0..=i {
                // the structure maps of each piece are surjective in degree 1
                // and isomorphisms in degree 0 where both sides are nonzero
                let mut r = GradedDims::zero();
                for k in 0..2 {
                    r.add_at(k, per[i].get(k).min(per[j].get(k)));
                }
                ranks[i][j].add(&r.shifted(gen.degree, gen.mult));
            }
        }
    }
    (dims, ranks)
}

fn grid_profile(g: &GridSheaf, d: Direction, levels: &[Quad]) -> Result<ProfileData> {
    let n = 2 * levels.len() + 1;
    let mut dims = vec![GradedDims::zero(); n];
    let mut ranks = empty_ranks(n);
    if levels.is_empty() {
        return Ok((dims, ranks));
    }
    let rational: Vec<Q> = levels
        .iter()
        .map(|l| l.as_rational().ok_or_else(|| Error::Inconsistent("grid levels are rational".into())))
        .collect::<Result<_>>()?;
    // cut levels: s_1, mid, s_2, ..., s_m; the top stratum uses the whole support
    let mut cuts = Vec::with_capacity(2 * rational.len());
    for k in 0..rational.len() {
        cuts.push(rational[k]);
        if k + 1 < rational.len() {
            cuts.push((rational[k] + rational[k + 1]) / q(2));
        }
    }
    let cx = g.grid().complex();
    let closed = cx.closure(&g.support());
    let (sub, back) = cx.subcomplex(&closed)?;
    let mut to_sub = vec![Vec::new(); cx.n_cells()];
    for (new, &old) in back.iter().enumerate() {
        to_sub[old] = vec![new];
    }
    let mut complex: PlanarComplex = sub;
    let mut gens: Vec<CellSet> = g.generators().iter().map(|gen| map_cellset(&gen.cells, &to_sub)).collect();
    for &s in &cuts {
        let (refined, map) = complex.refine_by_line(d, s);
        gens = gens.iter().map(|z| map_cellset(z, &map)).collect();
        complex = refined;
    }
    let halfplanes: Vec<CellSet> = cuts
        .iter()
        .map(|&s| complex.halfplane_cells(d, s, true))
        .collect::<Result<_>>()?;
    for (gen, z) in g.generators().iter().zip(&gens) {
        // cohomology on strata 1..n-1 (stratum 0 is empty)
        let pieces: Vec<Cohomology> = halfplanes
            .iter()
            .map(|h| z.intersection(h))
            .chain(std::iter::once(z.clone()))
            .map(|piece| Ok(Cohomology::new(cohomc::ccochain(&complex, &piece, g.field())?)))
            .collect::<Result<_>>()?;
        let steps: Vec<[FpMatrix; 3]> =
            (1..pieces.len()).map(|k| [0, 1, 2].map(|deg| pieces[k].map_to(&pieces[k - 1], deg))).collect();
        for i in 1..n {
            let hi = &pieces[i - 1];
            dims[i].add(&hi.dims().shifted(gen.degree, gen.mult));
            for deg in 0..3usize {
                let mut acc = FpMatrix::identity(g.field(), hi.dim(deg));
                let mut j = i;
                loop {
                    let mut r = GradedDims::zero();
                    r.add_at(deg as i32, acc.rank());
                    ranks[i][j].add(&r.shifted(gen.degree, gen.mult));
                    if j == 1 {
                        break;
                    }
                    acc = steps[j - 2][deg].mul(&acc);
                    j -= 1;
                }
            }
        }
    }
    Ok((dims, ranks))
}

/// Interval decomposition of the profile.
pub fn decompose(p: &DirectionalProfile) -> Result<DecoratedBarcode> {
    let n = p.n_strata();
    let degrees: Vec<i32> = {
        let mut v: Vec<i32> = p.dims.iter().flat_map(|d| d.degrees().map(|(k, _)| k)).collect();
        v.sort();
        v.dedup();
        v
    };
    // chain index j = n - 1 - sigma makes the structure maps covariant
    let r = |deg: i32, a: isize, b: isize| -> i64 {
        if a < 0 || b >= n as isize || a > b {
            return 0;
        }
        let (hi, lo) = (n - 1 - a as usize, n - 1 - b as usize);
        p.ranks[hi][lo].get(deg) as i64
    };
    let mut bars = Vec::new();
    for deg in degrees {
        for a in 0..n as isize {
            for b in a..n as isize {
                let m = r(deg, a, b) - r(deg, a - 1, b) - r(deg, a, b + 1) + r(deg, a - 1, b + 1);
                if m < 0 {
                    return Err(Error::Inconsistent(format!(
                        "negative multiplicity {m} in degree {deg} on chain interval [{a}, {b}]"
                    )));
                }
                if m > 0 {
                    let lo = n - 1 - b as usize;
                    let hi = n - 1 - a as usize;
                    bars.push(Bar {
                        degree: deg,
                        birth: birth_of(&p.levels, lo),
                        death: death_of(&p.levels, hi, n),
                        mult: m as usize,
                    });
                }
            }
        }
    }
    Ok(DecoratedBarcode::new(bars))
}

fn birth_of(levels: &[Quad], s: usize) -> Birth {
    if s == 0 {
        Birth::NegInf
    } else if s % 2 == 1 {
        Birth::At(levels[(s - 1) / 2])
    } else {
        Birth::After(levels[s / 2 - 1])
    }
}

fn death_of(levels: &[Quad], s: usize, n: usize) -> Death {
    if s == n - 1 {
        Death::PosInf
    } else if s % 2 == 1 {
        Death::At(levels[(s - 1) / 2])
    } else {
        Death::Before(levels[s / 2])
    }
}

/// Level divided by the support function of the unit ball of `norm` at `d`.
pub fn normalize(level: Quad, d: Direction, norm: Norm) -> Quad {
    match norm {
        Norm::L2 => level.div_sqrt(d.norm_sq()),
        Norm::Linf => level.scale(Q::new(1, d.l1())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonSummary {
    pub directions: Vec<Direction>,
    pub barcodes: Vec<DecoratedBarcode>,
    /// Scaled birth level of the single degree-1 half-infinite bar, when
    /// every direction has exactly that shape.
    pub phi: Option<Vec<Quad>>,
}

/// Birth of the unique bar when the barcode is one closed-birth,
/// half-infinite degree-1 bar of multiplicity one.
pub fn epigraph_level(b: &DecoratedBarcode) -> Option<Quad> {
    match b.bars() {
        [Bar { degree: 1, birth: Birth::At(v), death: Death::PosInf, mult: 1 }] => Some(*v),
        _ => None,
    }
}

pub fn radon_summary(f: &SheafObject, directions: &[Direction]) -> Result<RadonSummary> {
    if directions.is_empty() {
        return Err(Error::Parse("at least one direction is required".into()));
    }
    let barcodes: Vec<DecoratedBarcode> = directions
        .par_iter()
        .map(|&d| decompose(&profile(f, d)?))
        .collect::<Result<_>>()?;
    let phi = barcodes.iter().map(epigraph_level).collect::<Option<Vec<_>>>();
    Ok(RadonSummary { directions: directions.to_vec(), barcodes, phi })
}

#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub ok: bool,
    pub expected: DecoratedBarcode,
    pub computed: DecoratedBarcode,
    pub rank_mismatches: usize,
}

/// Checks that the barcode of `K_a * F` in direction `d` is that of `F`
/// moved down by `a h(d)`, and that the rank functions correspond under the
/// same translation.
pub fn shift_identity_check(f: &SheafObject, ball: &BallSpec, d: Direction) -> Result<ShiftReport> {
    if ball.radius.is_negative() {
        return Err(Error::Backend("the shift identity is checked for nonnegative radii".into()));
    }
    let h = ball.norm.support(d).scale(ball.radius);
    let k = f.convolve_object(ball)?;
    let pf = profile(f, d)?;
    let pk = profile(&k, d)?;
    let expected = decompose(&pf)?.map_levels(|v| v - h);
    let computed = decompose(&pk)?;
    let samples = pk.sample_levels();
    let mut rank_mismatches = 0;
    for (i, &t) in samples.iter().enumerate() {
        for &tp in &samples[..=i] {
            if pk.rank_at(tp, t) != pf.rank_at(tp + h, t + h) {
                rank_mismatches += 1;
            }
        }
    }
    Ok(ShiftReport { ok: expected == computed && rank_mismatches == 0, expected, computed, rank_mismatches })
}

#[derive(Clone, Debug, Default)]
pub struct HalfplaneDiscReport {
    pub checked: usize,
    pub boundary_cases: usize,
    pub counterexamples: Vec<(Direction, Q, Point, Q)>,
}

/// Compares the stalk of the composed kernel at `(d, t, x)`, i.e. the
/// compactly supported cohomology of the closed half-plane `{x'.u <= t}`
/// (`u` the unit vector along `d`) cut with the closed disc `B(x, a)`,
/// against the indicator of `x.u <= t + a`.
pub fn halfplane_disc_verify(a: Q, directions: &[Direction], ts: &[Q], xs: &[Point]) -> HalfplaneDiscReport {
    let mut report = HalfplaneDiscReport::default();
    for &d in directions {
        let root = Quad::sqrt(d.norm_sq());
        for &t in ts {
            let bound = root.scale(t);
            for x in xs {
                let disc = ConvexBody::disc(*x, a).expect("nonnegative radius");
                let stalk = les_rank_rule(disc.support_min(d) <= bound, 0);
                // x.d / |d| <= t + a, compared after multiplying by |d|
                let lhs = Quad::rational(x.dot(d.pair()));
                let rhs = root.scale(t + a);
                let indicator = lhs <= rhs;
                report.checked += 1;
                if lhs == rhs {
                    report.boundary_cases += 1;
                }
                if (stalk.get(0) == 1) != indicator || stalk.degrees().any(|(k, _)| k != 0) {
                    report.counterexamples.push((d, t, *x, a));
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct ChiReport {
    pub ok: bool,
    pub expected: i64,
    pub per_direction: Vec<i64>,
}

/// Compactly supported Euler characteristic of the support data of `f`.
pub fn euler_c_of(f: &SheafObject) -> i64 {
    let sign = |n: i32| if n.rem_euclid(2) == 0 { 1 } else { -1 };
    match f {
        SheafObject::Grid(g) => g
            .generators()
            .iter()
            .map(|gen| sign(gen.degree) * gen.mult as i64 * cohomc::euler_c(g.grid().complex(), &gen.cells))
            .sum(),
        SheafObject::Convex(c) => c
            .generators()
            .iter()
            .map(|gen| sign(gen.degree) * gen.mult as i64 * gen.region.euler_c())
            .sum(),
    }
}

/// The Euler characteristic of the top stratum is the same in every
/// direction and equals that of the support data.
pub fn chi_c_conservation(f: &SheafObject, directions: &[Direction]) -> Result<ChiReport> {
    let expected = euler_c_of(f);
    let per_direction: Vec<i64> = directions
        .par_iter()
        .map(|&d| {
            let p = profile(f, d)?;
            Ok(p.dims(p.n_strata() - 1).euler())
        })
        .collect::<Result<_>>()?;
    Ok(ChiReport { ok: per_direction.iter().all(|&v| v == expected), expected, per_direction })
}

#[cfg(test)]
mod tests;
