//! CSV and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use sheaf_radon::cohomc::GradedDims;
use sheaf_radon::convex::Norm;
use sheaf_radon::numeric::{fmt_q, q_to_f64, Point, Q};
use sheaf_radon::persdist::directional_barcodes;
use sheaf_radon::plancx::Direction;
use sheaf_radon::radon::{normalize, RadonSummary};
use sheaf_radon::scene::Scene;
use sheaf_radon::sheafobj::{BallSpec, SheafObject};

const BARCODE_HEADER: [&str; 11] = [
    "dir_index",
    "dx",
    "dy",
    "degree",
    "birth_scaled",
    "birth_unit",
    "birth_dec",
    "death_scaled",
    "death_unit",
    "death_dec",
    "mult",
];

fn csv_string(rows: Vec<Vec<String>>, header: &[&str]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn barcode_csv(s: &RadonSummary, norm: Norm) -> anyhow::Result<String> {
    let mut rows = Vec::new();
    for (i, (d, b)) in s.directions.iter().zip(&s.barcodes).enumerate() {
        for bar in b.bars() {
            let end = |level: Option<sheaf_radon::numeric::Quad>, inf: &str| match level {
                Some(v) => (v.to_string(), normalize(v, *d, norm).to_f64().to_string()),
                None => (inf.to_string(), inf.to_string()),
            };
            let (bs, bu) = end(bar.birth.level(), "-inf");
            let (ds, du) = end(bar.death.level(), "+inf");
            rows.push(vec![
                i.to_string(),
                d.p().to_string(),
                d.q().to_string(),
                bar.degree.to_string(),
                bs,
                bu,
                bar.birth.decoration().to_string(),
                ds,
                du,
                bar.death.decoration().to_string(),
                bar.mult.to_string(),
            ]);
        }
    }
    csv_string(rows, &BARCODE_HEADER)
}

const PALETTE: [&str; 4] = ["#3b6ea8", "#d9822b", "#5a9e4b", "#8e5ba8"];

fn color(degree: i32) -> &'static str {
    PALETTE[degree.rem_euclid(PALETTE.len() as i32) as usize]
}

/// Bars drawn as vertical strokes over the circle of directions, ordered by
/// angle, in unit-normalized levels; half-infinite bars run off the panel.
pub fn barcode_svg(s: &RadonSummary, norm: Norm) -> String {
    let (w, h, pad) = (720.0, 480.0, 40.0);
    let unit = |d: &Direction, v: sheaf_radon::numeric::Quad| normalize(v, *d, norm).to_f64();
    let finite: Vec<f64> = s
        .directions
        .iter()
        .zip(&s.barcodes)
        .flat_map(|(d, b)| b.bars().iter().flat_map(move |bar| [bar.birth.level(), bar.death.level()].map(|l| l.map(|v| unit(d, v)))))
        .flatten()
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min).min(0.0) - 1.0;
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(0.0) + 1.0;
    let y = |t: f64| pad + (hi - t.clamp(lo, hi)) / (hi - lo) * (h - 2.0 * pad);
    let mut order: Vec<usize> = (0..s.directions.len()).collect();
    order.sort_by(|&i, &j| s.directions[i].angle().total_cmp(&s.directions[j].angle()));
    let step = (w - 2.0 * pad) / order.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    for (k, &i) in order.iter().enumerate() {
        let d = &s.directions[i];
        let x = pad + (k as f64 + 0.5) * step;
        for bar in s.barcodes[i].bars() {
            let top = bar.death.level().map_or(hi, |v| unit(d, v));
            let bottom = bar.birth.level().map_or(lo, |v| unit(d, v));
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{}" stroke-width="{:.2}" stroke-opacity="0.8"/>"#,
                y(bottom),
                y(top),
                color(bar.degree),
                step.max(1.0)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<line x1="{pad}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="0.5"/>"#,
        y(0.0),
        w - pad,
        y(0.0)
    );
    let _ = writeln!(out, r#"<text x="{pad}" y="{:.0}" font-size="12">direction angle</text>"#, h - 12.0);
    let _ = writeln!(out, r#"<text x="4" y="{:.0}" font-size="12">t</text>"#, pad - 8.0);
    out.push_str("</svg>\n");
    out
}

pub struct Picture {
    pub csv: String,
    pub svg: String,
    pub support_counts: BTreeMap<i32, usize>,
    pub unit: &'static str,
}

struct Canvas {
    lo: Point,
    hi: Point,
    size: f64,
    body: String,
}

impl Canvas {
    fn new(lo: Point, hi: Point) -> Canvas {
        Canvas { lo, hi, size: 600.0, body: String::new() }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let (x0, y0) = (q_to_f64(&self.lo.x), q_to_f64(&self.lo.y));
        let span = q_to_f64(&(self.hi.x - self.lo.x)).max(q_to_f64(&(self.hi.y - self.lo.y)));
        let s = self.size / span;
        ((q_to_f64(&p.x) - x0) * s, self.size - (q_to_f64(&p.y) - y0) * s)
    }

    fn finish(self) -> String {
        let n = self.size;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{n}\" height=\"{n}\" viewBox=\"0 0 {n} {n}\">\n\
             <rect width=\"{n}\" height=\"{n}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn degree_color(dims: &GradedDims) -> &'static str {
    match dims.degrees().next() {
        Some((k, _)) if dims.degrees().count() == 1 => color(k),
        _ => "#555555",
    }
}

/// Stalks of `K_a * f`: the exact stalk field on grid scenes, a sampled
/// lattice on convex ones.
pub fn convolved(f: &SheafObject, scene: &Scene, a: Q, norm: Norm, samples: usize) -> anyhow::Result<Picture> {
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    let (lo, hi) = scene.window();
    let mut canvas = Canvas::new(lo, hi);
    let header = ["kind", "cell", "upper_cell", "x", "y", "degree", "value"];
    let mut rows = Vec::new();
    match f {
        SheafObject::Grid(_) => {
            let sf = f.convolve_grid(a)?;
            let cx = sf.grid().complex();
            for c in 0..cx.n_cells() {
                let dims = sf.dims(c);
                if dims.is_zero() {
                    continue;
                }
                let p = cx.representative(c);
                for (k, v) in dims.degrees() {
                    *counts.entry(k).or_default() += 1;
                    rows.push(vec![
                        "stalk".into(),
                        c.to_string(),
                        String::new(),
                        fmt_q(&p.x),
                        fmt_q(&p.y),
                        k.to_string(),
                        v.to_string(),
                    ]);
                }
                let verts: Vec<(f64, f64)> = cx.closure_vertices(c).iter().map(|&v| canvas.map(&cx.vertex(v))).collect();
                let (x0, x1) = verts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
                let (y0, y1) = verts.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
                let col = degree_color(dims);
                let _ = match cx.dim(c) {
                    2 => writeln!(
                        canvas.body,
                        r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{col}" fill-opacity="0.45"/>"#,
                        x1 - x0,
                        y1 - y0
                    ),
                    1 => writeln!(
                        canvas.body,
                        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{col}" stroke-width="3"/>"#
                    ),
                    _ => writeln!(canvas.body, r#"<circle cx="{x0:.2}" cy="{y0:.2}" r="3.5" fill="{col}"/>"#),
                };
            }
            for (&(lower, upper), r) in sf.rank_pairs() {
                let p = cx.representative(lower);
                for (k, v) in r.degrees() {
                    rows.push(vec![
                        "rank".into(),
                        lower.to_string(),
                        upper.to_string(),
                        fmt_q(&p.x),
                        fmt_q(&p.y),
                        k.to_string(),
                        v.to_string(),
                    ]);
                }
            }
            Ok(Picture { csv: csv_string(rows, &header)?, svg: canvas.finish(), support_counts: counts, unit: "cells" })
        }
        SheafObject::Convex(_) => {
            let n = samples.max(2) as i128;
            let coord = |l: Q, h: Q, i: i128| l + (h - l) * Q::new(i, n - 1);
            let points: Vec<Point> = (0..n)
                .flat_map(|j| (0..n).map(move |i| (i, j)))
                .map(|(i, j)| Point::new(coord(lo.x, hi.x, i), coord(lo.y, hi.y, j)))
                .collect();
            let ball = BallSpec { norm, radius: a };
            let stalks: Vec<GradedDims> =
                points.par_iter().map(|p| f.convolve_stalk(&ball, p)).collect::<sheaf_radon::error::Result<_>>()?;
            let radius = canvas.size / (2.0 * n as f64);
            for (p, dims) in points.iter().zip(&stalks) {
                if dims.is_zero() {
                    continue;
                }
                for (k, v) in dims.degrees() {
                    *counts.entry(k).or_default() += 1;
                    rows.push(vec![
                        "stalk".into(),
                        String::new(),
                        String::new(),
                        fmt_q(&p.x),
                        fmt_q(&p.y),
                        k.to_string(),
                        v.to_string(),
                    ]);
                }
                let (x, y) = canvas.map(p);
                let _ = writeln!(canvas.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius:.2}" fill="{}"/>"#, degree_color(dims));
            }
            Ok(Picture { csv: csv_string(rows, &header)?, svg: canvas.finish(), support_counts: counts, unit: "sample points" })
        }
    }
}

fn bars_equal(x: &SheafObject, y: &SheafObject, dirs: &[Direction]) -> anyhow::Result<bool> {
    Ok(directional_barcodes(x, dirs)? == directional_barcodes(y, dirs)?)
}

/// Whether two objects agree: exactly (stalk fields on a common grid) for
/// grid objects, otherwise on barcodes in `dirs` and stalks on a lattice.
pub fn same_object(x: &SheafObject, y: &SheafObject, dirs: &[Direction]) -> anyhow::Result<Option<&'static str>> {
    if let (SheafObject::Grid(_), SheafObject::Grid(_)) = (x, y) {
        let (fx, fy) = (x.convolve_grid(Q::from(0))?, y.convolve_grid(Q::from(0))?);
        return Ok((fx.first_difference(&fy).is_none()).then_some("exactly"));
    }
    if !bars_equal(x, y, dirs)? {
        return Ok(None);
    }
    let boxes: Vec<(Point, Point)> = [x.support_bbox(), y.support_bbox()].into_iter().flatten().collect();
    let Some(&(mut lo, mut hi)) = boxes.first() else { return Ok(Some("on sampled stalks and barcodes")) };
    for (l, h) in &boxes {
        lo = Point::new(lo.x.min(l.x), lo.y.min(l.y));
        hi = Point::new(hi.x.max(h.x), hi.y.max(h.y));
    }
    let n = 61i128;
    let one = Q::from(1);
    let coord = |l: Q, h: Q, i: i128| l - one + (h - l + one + one) * Q::new(i, n - 1);
    let same = (0..n * n).into_par_iter().try_fold(
        || true,
        |acc, k| -> anyhow::Result<bool> {
            let p = Point::new(coord(lo.x, hi.x, k % n), coord(lo.y, hi.y, k / n));
            Ok(acc && stalk_or_zero(x, &p)? == stalk_or_zero(y, &p)?)
        },
    );
    let all: Vec<bool> = same.collect::<anyhow::Result<_>>()?;
    Ok(all.into_iter().all(|b| b).then_some("on sampled stalks and barcodes"))
}

fn stalk_or_zero(f: &SheafObject, p: &Point) -> anyhow::Result<GradedDims> {
    match f.stalk(p) {
        Ok(s) => Ok(s),
        Err(sheaf_radon::error::Error::OutsideWindow(_)) => Ok(GradedDims::zero()),
        Err(e) => Err(e.into()),
    }
}
