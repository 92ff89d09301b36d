//! SVG rendering of triangle patches.
//!
//! Coordinates are written doubled so that side midpoints, where the
//! arrowheads sit, stay integral. The y axis is flipped by a group
//! transform.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::geometry::{Direction8, LatticePoint};
use crate::rules::{classify_crossing, crossing_at, CrossingClass, LegalCrossingTable};
use crate::tiles::{Patch, TileColor};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SvgOptions {
    /// Label interior vertices with their crossing class.
    pub labels: bool,
    /// Draw runs of collinear, equally colored and equally oriented arrows
    /// as one long arrow.
    pub coalesce: bool,
}

fn fill(c: TileColor) -> &'static str {
    match c {
        TileColor::Red => "#f2a7a0",
        TileColor::Green => "#a9dba0",
    }
}

fn stroke(c: TileColor) -> &'static str {
    match c {
        TileColor::Red => "#c0261b",
        TileColor::Green => "#1f7a12",
    }
}

fn marker_id(c: TileColor) -> &'static str {
    match c {
        TileColor::Red => "arrow-r",
        TileColor::Green => "arrow-g",
    }
}

/// One drawn arrow from `tail` to `head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Arrow {
    tail: LatticePoint,
    head: LatticePoint,
    color: TileColor,
}

fn arrows(p: &Patch) -> Vec<Arrow> {
    let mut seen = BTreeSet::new();
    for t in p.tiles() {
        for s in t.sides() {
            let (tail, head) = s.arrow();
            seen.insert(Arrow { tail, head, color: s.decoration.color });
        }
    }
    seen.into_iter().collect()
}

/// Joins arrows that continue one another in the same direction and color.
fn coalesced(list: Vec<Arrow>) -> Vec<Arrow> {
    let mut by_tail: BTreeMap<(LatticePoint, Direction8, TileColor), Arrow> = BTreeMap::new();
    let mut has_pred = BTreeSet::new();
    let dir = |a: &Arrow| Direction8::of_vector(a.head - a.tail).expect("lattice side").0;
    for a in &list {
        by_tail.insert((a.tail, dir(a), a.color), *a);
    }
    for a in &list {
        if by_tail.contains_key(&(a.head, dir(a), a.color)) {
            has_pred.insert((a.head, dir(a), a.color));
        }
    }
    let mut out = Vec::new();
    for a in &list {
        let key = (a.tail, dir(a), a.color);
        if has_pred.contains(&key) {
            continue;
        }
        let mut end = *a;
        while let Some(next) = by_tail.get(&(end.head, dir(a), a.color)) {
            end = *next;
        }
        out.push(Arrow { tail: a.tail, head: end.head, color: a.color });
    }
    out.sort();
    out
}

pub fn render_svg(p: &Patch, options: &SvgOptions) -> String {
    let mut s = String::new();
    let vs: Vec<LatticePoint> = p.vertices().collect();
    let (lo, hi) = match vs.first() {
        Some(&f) => vs.iter().fold((f, f), |(lo, hi), v| {
            (LatticePoint::new(lo.x.min(v.x), lo.y.min(v.y)), LatticePoint::new(hi.x.max(v.x), hi.y.max(v.y)))
        }),
        None => (LatticePoint::ORIGIN, LatticePoint::ORIGIN),
    };
    let (lo, hi) = (lo * 2, hi * 2);
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(2);
    let pad = extent / 20 + 1;
    let unit = p.tiles().first().map_or(2, |t| 2 * t.leg_steps());
    let width = (unit as f64 / 40.0).max(0.05);
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"800\">",
        lo.x - pad,
        -hi.y - pad,
        hi.x - lo.x + 2 * pad,
        hi.y - lo.y + 2 * pad
    );
    let _ = writeln!(s, "<defs>");
    for c in [TileColor::Red, TileColor::Green] {
        let _ = writeln!(
            s,
            "<marker id=\"{}\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"4\" markerHeight=\"4\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"{}\"/></marker>",
            marker_id(c),
            stroke(c)
        );
    }
    let _ = writeln!(s, "</defs>");
    let _ = writeln!(s, "<g transform=\"scale(1,-1)\">");
    for t in p.tiles() {
        let [r, a, b] = t.vertices().map(|v| v * 2);
        let _ = writeln!(
            s,
            "<polygon points=\"{},{} {},{} {},{}\" fill=\"{}\" stroke=\"#555\" stroke-width=\"{width}\"/>",
            r.x,
            r.y,
            a.x,
            a.y,
            b.x,
            b.y,
            fill(t.body())
        );
    }
    let list = if options.coalesce { coalesced(arrows(p)) } else { arrows(p) };
    for a in list {
        let (t, h) = (a.tail * 2, a.head * 2);
        let m = LatticePoint::new((t.x + h.x) / 2, (t.y + h.y) / 2);
        let _ = writeln!(
            s,
            "<path d=\"M{},{} L{},{} L{},{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" marker-mid=\"url(#{})\"/>",
            t.x,
            t.y,
            m.x,
            m.y,
            h.x,
            h.y,
            stroke(a.color),
            width * 2.0,
            marker_id(a.color)
        );
    }
    let _ = writeln!(s, "</g>");
    if options.labels {
        let table = LegalCrossingTable::builtin();
        for v in p.interior_vertices() {
            let c = crossing_at(p, v).expect("patch vertex");
            let label = match classify_crossing(&c, &table, false) {
                CrossingClass::C4 => "4",
                CrossingClass::C8 => "8",
                _ => "!",
            };
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\">{label}</text>",
                2 * v.x,
                -2 * v.y,
                unit / 3 + 1
            );
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}
