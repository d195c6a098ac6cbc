//! Distances between decorated barcodes: single-interval interleaving
//! costs, bottleneck matchings with certificates, per-direction bounds and
//! the localized proxy.
//!
//! Barcodes are read as contravariant persistence modules on the line and
//! distances are module interleaving distances, not derived ones.

use std::fmt;

use num::Signed;
use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};
use rayon::prelude::*;

use crate::convex::Norm;
use crate::error::{Error, Result};
use crate::numeric::{qf, Quad, Q};
use crate::plancx::Direction;
use crate::radon::{decompose, normalize, profile, Bar, Birth, DecoratedBarcode, Death};
use crate::sheafobj::{ChiArrow, ChiKind, SheafObject};

/// A nonnegative value or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cost {
    Finite(Quad),
    Infinite,
}

impl Cost {
    pub fn zero() -> Cost {
        Cost::Finite(Quad::zero())
    }

    pub fn finite(&self) -> Option<Quad> {
        match self {
            Cost::Finite(v) => Some(*v),
            Cost::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Cost::Finite(v) => v.to_f64(),
            Cost::Infinite => f64::INFINITY,
        }
    }

    pub fn map(&self, f: impl Fn(Quad) -> Quad) -> Cost {
        match self {
            Cost::Finite(v) => Cost::Finite(f(*v)),
            Cost::Infinite => Cost::Infinite,
        }
    }
}

impl From<Q> for Cost {
    fn from(v: Q) -> Cost {
        Cost::Finite(Quad::rational(v))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

fn abs_diff(x: Quad, y: Quad) -> Quad {
    if x >= y {
        x - y
    } else {
        y - x
    }
}

/// Distance between two ends on the same side; infinite ends only match each other.
fn end_gap(x: Option<Quad>, y: Option<Quad>) -> Cost {
    match (x, y) {
        (None, None) => Cost::zero(),
        (Some(x), Some(y)) => Cost::Finite(abs_diff(x, y)),
        _ => Cost::Infinite,
    }
}

/// Cost of matching `i` with `j`: `max(|b - b'|, |e - e'|)`, infinite across degrees.
pub fn pair_cost(i: &Bar, j: &Bar) -> Cost {
    if i.degree != j.degree {
        return Cost::Infinite;
    }
    end_gap(i.birth.level(), j.birth.level()).max(end_gap(i.death.level(), j.death.level()))
}

/// Cost of interleaving `i` with zero: half the length, infinite for unbounded bars.
pub fn deletion_cost(i: &Bar) -> Cost {
    match (i.birth.level(), i.death.level()) {
        (Some(b), Some(e)) => Cost::Finite((e - b).scale(qf(1, 2))),
        _ => Cost::Infinite,
    }
}

/// Interleaving distance between the two single-interval modules: either
/// move one interval onto the other or send both to zero.
pub fn interval_cost(i: &Bar, j: &Bar) -> Cost {
    pair_cost(i, j).min(deletion_cost(i).max(deletion_cost(j)))
}

/// Effect of `K_a *` on each bar: closed ends move outward by `a`, open
/// ends inward; an open bounded bar no longer than `2a` turns into the
/// closed bar `[e-a, b+a]` one degree up.
pub fn convolution_action(b: &DecoratedBarcode, a: Quad) -> Result<DecoratedBarcode> {
    if a.signum() < 0 {
        return Err(Error::Inconsistent(format!("convolution action needs a >= 0, got {a}")));
    }
    let bars = b.bars().iter().map(|bar| match (bar.birth, bar.death) {
        (Birth::After(s), Death::Before(e)) if e - s <= a + a => {
            Bar { degree: bar.degree + 1, birth: Birth::At(e - a), death: Death::At(s + a), mult: bar.mult }
        }
        _ => {
            let birth = match bar.birth {
                Birth::NegInf => Birth::NegInf,
                Birth::At(s) => Birth::At(s - a),
                Birth::After(s) => Birth::After(s + a),
            };
            let death = match bar.death {
                Death::PosInf => Death::PosInf,
                Death::At(e) => Death::At(e + a),
                Death::Before(e) => Death::Before(e - a),
            };
            Bar { birth, death, ..*bar }
        }
    });
    Ok(DecoratedBarcode::new(bars))
}

/// Bars with multiplicity expanded into single copies.
fn expand(b: &DecoratedBarcode) -> Vec<Bar> {
    b.bars().iter().flat_map(|bar| std::iter::repeat(Bar { mult: 1, ..*bar }).take(bar.mult)).collect()
}

/// A partial matching witnessing that two barcodes are within `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingCertificate {
    pub value: Cost,
    pub pairs: Vec<(Bar, Bar)>,
    pub deleted_left: Vec<Bar>,
    pub deleted_right: Vec<Bar>,
}

impl MatchingCertificate {
    /// Checks costs against `value` and that the matching covers both barcodes exactly.
    pub fn revalidate(&self, left: &DecoratedBarcode, right: &DecoratedBarcode) -> bool {
        let costs_ok = self.pairs.iter().all(|(i, j)| pair_cost(i, j) <= self.value)
            && self.deleted_left.iter().chain(&self.deleted_right).all(|i| deletion_cost(i) <= self.value);
        let l = DecoratedBarcode::new(self.pairs.iter().map(|p| p.0).chain(self.deleted_left.iter().copied()));
        let r = DecoratedBarcode::new(self.pairs.iter().map(|p| p.1).chain(self.deleted_right.iter().copied()));
        costs_ok && &l == left && &r == right
    }
}

/// Perfect matching in the usual bipartite graph with diagonal copies, if
/// one exists using only edges of cost at most `bound`.
fn matching_within(left: &[Bar], right: &[Bar], bound: Cost) -> Option<MatchingCertificate> {
    let (n, m) = (left.len(), right.len());
    // nodes: left 0..n, right-diagonal n..n+m on one side; right, left-diagonal on the other
    let mut g: UnGraph<(), ()> = UnGraph::with_capacity(2 * (n + m), 0);
    let nodes: Vec<NodeIndex> = (0..2 * (n + m)).map(|_| g.add_node(())).collect();
    let (l, ld, r, rd) = (0, n, n + m, n + m + m);
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if pair_cost(a, b) <= bound {
                g.add_edge(nodes[l + i], nodes[r + j], ());
            }
        }
        if deletion_cost(a) <= bound {
            g.add_edge(nodes[l + i], nodes[rd + i], ());
        }
    }
    for (j, b) in right.iter().enumerate() {
        if deletion_cost(b) <= bound {
            g.add_edge(nodes[ld + j], nodes[r + j], ());
        }
        for i in 0..n {
            g.add_edge(nodes[ld + j], nodes[rd + i], ());
        }
    }
    let matching = maximum_matching(&g);
    if matching.len() != n + m {
        return None;
    }
    let mut cert = MatchingCertificate { value: bound, pairs: Vec::new(), deleted_left: Vec::new(), deleted_right: Vec::new() };
    for (i, a) in left.iter().enumerate() {
        let k = matching.mate(nodes[l + i]).expect("perfect matching").index();
        if k >= rd {
            cert.deleted_left.push(*a);
        } else {
            cert.pairs.push((*a, right[k - r]));
        }
    }
    for (j, b) in right.iter().enumerate() {
        let k = matching.mate(nodes[r + j]).expect("perfect matching").index();
        if (ld..r).contains(&k) {
            cert.deleted_right.push(*b);
        }
    }
    Some(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    LowerBound,
    UpperBound,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Exact => "exact",
            BoundKind::LowerBound => "lower_bound",
            BoundKind::UpperBound => "upper_bound",
        })
    }
}

/// The pair `f = id`, `g = chi_{2a,0}` exhibiting an `a`-interleaving of
/// `F` with `K_a * F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftCertificate {
    pub a: Q,
    pub f: ChiArrow,
    pub g: ChiArrow,
}

impl ShiftCertificate {
    pub fn new(a: Q) -> Result<ShiftCertificate> {
        Ok(ShiftCertificate {
            a,
            f: ChiArrow::identity(ChiKind::K, a)?,
            g: ChiArrow::new(ChiKind::K, a + a, Q::from(0))?,
        })
    }

    /// Both triangles: `g o K_a f = chi_{2a,0}` on `F` and
    /// `f o K_a g = chi_{2a,0} * K_a` on `K_a * F`.
    pub fn verify(&self) -> bool {
        let a = self.a;
        let check = || -> Result<bool> {
            let target = ChiArrow::new(ChiKind::K, a + a, Q::from(0))?;
            let first = self.f.convolve_by(a)?.then(&self.g)?;
            let second = self.g.convolve_by(a)?.then(&self.f)?;
            Ok(first == target && second == target.convolve_by(a)?)
        };
        check().unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Matching(MatchingCertificate),
    Direction { direction: Direction, matching: MatchingCertificate },
    Interleaving(ShiftCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub value: Cost,
    pub kind: BoundKind,
    pub evidence: Evidence,
}

/// Bottleneck distance: the least candidate cost admitting a perfect matching.
pub fn bottleneck(b1: &DecoratedBarcode, b2: &DecoratedBarcode) -> DistanceReport {
    let (left, right) = (expand(b1), expand(b2));
    let mut candidates: Vec<Quad> = vec![Quad::zero()];
    for a in &left {
        candidates.extend(right.iter().filter_map(|b| pair_cost(a, b).finite()));
    }
    candidates.extend(left.iter().chain(&right).filter_map(|a| deletion_cost(a).finite()));
    candidates.sort();
    candidates.dedup();
    // feasibility is monotone in the bound
    let (mut lo, mut hi) = (0, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_within(&left, &right, Cost::Finite(candidates[mid])).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let bound = candidates.get(lo).map_or(Cost::Infinite, |&v| Cost::Finite(v));
    let cert = matching_within(&left, &right, bound).expect("the infinite bound is always feasible");
    DistanceReport { value: bound, kind: BoundKind::Exact, evidence: Evidence::Matching(cert) }
}

/// Distances in one direction, before and after unit normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionDistance {
    pub direction: Direction,
    pub scaled: Cost,
    pub unit: Cost,
    pub matching: MatchingCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupDistance {
    pub report: DistanceReport,
    pub per_direction: Vec<DirectionDistance>,
}

/// Barcodes of `f` in each direction.
pub fn directional_barcodes(f: &SheafObject, directions: &[Direction]) -> Result<Vec<DecoratedBarcode>> {
    directions.par_iter().map(|&d| decompose(&profile(f, d)?)).collect()
}

/// Maximum over directions of the bottleneck distance of the given
/// barcodes. Unit values of different directions live in different
/// quadratic fields, so the maximum is taken in floating point; each
/// per-direction value stays exact.
pub fn sup_over_directions(
    directions: &[Direction],
    left: &[DecoratedBarcode],
    right: &[DecoratedBarcode],
    norm: Norm,
) -> Result<SupDistance> {
    if directions.is_empty() || left.len() != directions.len() || right.len() != directions.len() {
        return Err(Error::Inconsistent("one barcode per direction is required on both sides".into()));
    }
    let per_direction: Vec<DirectionDistance> = directions
        .par_iter()
        .zip(left.par_iter().zip(right.par_iter()))
        .map(|(&d, (l, r))| {
            let rep = bottleneck(l, r);
            let Evidence::Matching(matching) = rep.evidence else { unreachable!() };
            DirectionDistance { direction: d, scaled: rep.value, unit: rep.value.map(|v| normalize(v, d, norm)), matching }
        })
        .collect();
    let best = per_direction
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.unit.to_f64().total_cmp(&y.unit.to_f64()).then(j.cmp(i)))
        .map(|(_, w)| w)
        .expect("nonempty");
    let report = DistanceReport {
        value: best.unit,
        kind: BoundKind::LowerBound,
        evidence: Evidence::Direction { direction: best.direction, matching: best.matching.clone() },
    };
    Ok(SupDistance { report, per_direction })
}

/// Lower bound for the distance of the transforms of `f` and `g`: an
/// interleaving restricts to every direction.
pub fn sup_direction_distance(
    f: &SheafObject,
    g: &SheafObject,
    directions: &[Direction],
    norm: Norm,
) -> Result<SupDistance> {
    let bf = directional_barcodes(f, directions)?;
    let bg = directional_barcodes(g, directions)?;
    sup_over_directions(directions, &bf, &bg, norm)
}

/// Upper bound `a` for the distance between `F` and `K_a * F`, certified by
/// the interleaving `(id, chi_{2a,0})`.
pub fn shift_upper_bound(a: Q) -> Result<DistanceReport> {
    if a.is_negative() {
        return Err(Error::Inconsistent(format!("shift bound needs a >= 0, got {a}")));
    }
    let cert = ShiftCertificate::new(a)?;
    if !cert.verify() {
        return Err(Error::Inconsistent("interleaving triangles do not commute".into()));
    }
    Ok(DistanceReport { value: a.into(), kind: BoundKind::UpperBound, evidence: Evidence::Interleaving(cert) })
}

/// Drops the bars alive on the whole line.
pub fn localized_strip(b: &DecoratedBarcode) -> DecoratedBarcode {
    DecoratedBarcode::new(
        b.bars().iter().filter(|bar| !(bar.birth == Birth::NegInf && bar.death == Death::PosInf)).copied(),
    )
}

#[derive(Clone, Debug)]
pub struct LocalizedReport {
    pub localized: SupDistance,
    pub distance: SupDistance,
    pub upper: Option<DistanceReport>,
    pub ok: bool,
}

/// Compares the localized proxy with the plain distance: direction by
/// direction (exact) and against an upper bound when one is supplied.
pub fn localized_bound_check(
    f: &SheafObject,
    g: &SheafObject,
    directions: &[Direction],
    norm: Norm,
    upper: Option<DistanceReport>,
) -> Result<LocalizedReport> {
    let bf = directional_barcodes(f, directions)?;
    let bg = directional_barcodes(g, directions)?;
    let distance = sup_over_directions(directions, &bf, &bg, norm)?;
    let sf: Vec<_> = bf.iter().map(localized_strip).collect();
    let sg: Vec<_> = bg.iter().map(localized_strip).collect();
    let localized = sup_over_directions(directions, &sf, &sg, norm)?;
    let mut ok = localized.per_direction.iter().zip(&distance.per_direction).all(|(l, d)| l.scaled <= d.scaled);
    if let Some(u) = &upper {
        if let (Some(l), Some(u)) = (localized.report.value.finite(), u.value.finite()) {
            ok &= if l.compatible(&u) { l <= u } else { l.to_f64() <= u.to_f64() + 1e-12 };
        } else {
            ok &= u.value.is_infinite();
        }
    }
    Ok(LocalizedReport { localized, distance, upper, ok })
}

#[cfg(test)]
mod tests;
