//! The local matching rules for triangle tilings.
//!
//! 1. Shared sides carry the same color and the same arrow.
//! 2. Tiles sharing a side have different body colors.
//! 3. Every interior vertex is a legal crossing, `C4` or `C8`.
//! 4. Walking into a `C4` center along a perpendicular arrow, the red
//!    tile is on the left and the green one on the right.
//!
//! Legal crossings are kept in a [`LegalCrossingTable`] of germ sets
//! canonicalized up to rotation. The table is harvested from the interior of
//! deep supertiles and every entry is checked against the structural
//! constraints in [`check_c4_structure`] and [`check_c8_structure`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TilingError};
use crate::geometry::{Direction8, LatticePoint};
use crate::tiles::{Corner, Patch, SideKind, TileColor, TriangleTile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arrow {
    Inward,
    Outward,
}

/// What one side contributes to a crossing, seen from the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    pub kind: SideKind,
    pub arrow: Arrow,
    pub color: TileColor,
}

impl Germ {
    fn code(self) -> u8 {
        let k = matches!(self.kind, SideKind::Hypotenuse) as u8;
        let a = matches!(self.arrow, Arrow::Outward) as u8;
        let c = matches!(self.color, TileColor::Green) as u8;
        1 + (k << 2 | a << 1 | c)
    }

    fn from_code(code: u8) -> Option<Germ> {
        if !(1..=8).contains(&code) {
            return None;
        }
        let v = code - 1;
        Some(Germ {
            kind: if v & 4 != 0 { SideKind::Hypotenuse } else { SideKind::Leg },
            arrow: if v & 2 != 0 { Arrow::Outward } else { Arrow::Inward },
            color: if v & 1 != 0 { TileColor::Green } else { TileColor::Red },
        })
    }
}

/// A germ placed at a center along a ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeGerm {
    pub center: LatticePoint,
    pub ray: Direction8,
    pub kind: SideKind,
    pub arrow: Arrow,
    pub color: TileColor,
}

/// Germ codes by ray; 0 marks an empty ray.
pub type GermCode = [u8; 8];

fn rotate_code(code: &GermCode, k: i64) -> GermCode {
    let mut out = [0u8; 8];
    for d in 0..8 {
        out[Direction8::new(d as i64 + k).index()] = code[d];
    }
    out
}

fn canonical_code(code: &GermCode) -> (GermCode, i64) {
    (0..8).map(|k| (rotate_code(code, k), k)).min_by(|x, y| x.0.cmp(&y.0)).expect("eight rotations")
}

/// The decorated side germs and tile corners around one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub center: LatticePoint,
    germs: [Option<Germ>; 8],
    corners: Vec<Corner>,
    conflict: bool,
}

impl Crossing {
    pub fn germ(&self, ray: Direction8) -> Option<Germ> {
        self.germs[ray.index()]
    }

    pub fn germs(&self) -> impl Iterator<Item = EdgeGerm> + '_ {
        Direction8::all().filter_map(move |ray| {
            self.germ(ray).map(|g| EdgeGerm { center: self.center, ray, kind: g.kind, arrow: g.arrow, color: g.color })
        })
    }

    pub fn germ_count(&self) -> usize {
        self.germs.iter().flatten().count()
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    /// Whether two tiles disagree about a side at this vertex.
    pub fn has_conflict(&self) -> bool {
        self.conflict
    }

    /// Total corner angle in eighths of a turn.
    pub fn angle_units(&self) -> u32 {
        self.corners.iter().map(|c| c.span as u32).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.angle_units() == 8
    }

    pub fn code(&self) -> GermCode {
        let mut code = [0u8; 8];
        for (i, g) in self.germs.iter().enumerate() {
            code[i] = g.map_or(0, Germ::code);
        }
        code
    }

    /// Germ code minimized over the eight rotations, with the rotation used.
    pub fn canonical_code(&self) -> (GermCode, i64) {
        canonical_code(&self.code())
    }

    /// Body color of the tile covering each eighth-turn sector.
    pub fn sector_bodies(&self) -> [Option<TileColor>; 8] {
        let mut out = [None; 8];
        for c in &self.corners {
            for s in c.sectors() {
                out[s] = Some(c.body);
            }
        }
        out
    }

    pub fn corner_starting_at(&self, ray: Direction8) -> Option<&Corner> {
        self.corners.iter().find(|c| c.start == ray)
    }

    /// The same crossing turned by `k`·45° about its center.
    pub fn rotated(&self, k: i64) -> Crossing {
        let mut germs = [None; 8];
        for d in Direction8::all() {
            germs[d.rotated(k).index()] = self.germs[d.index()];
        }
        let mut corners: Vec<Corner> =
            self.corners.iter().map(|c| Corner { start: c.start.rotated(k), ..*c }).collect();
        corners.sort();
        Crossing { center: self.center, germs, corners, conflict: self.conflict }
    }

    /// Outgoing rays `d` of through-axes: an outward germ at `d` continued by
    /// an inward germ of the same color and kind at `d + 4`.
    pub fn axis_candidates(&self) -> Vec<Direction8> {
        Direction8::all()
            .filter(|&d| match (self.germ(d), self.germ(d.opposite())) {
                (Some(o), Some(i)) => {
                    o.arrow == Arrow::Outward && i.arrow == Arrow::Inward && o.color == i.color && o.kind == i.kind
                }
                _ => false,
            })
            .collect()
    }

    /// The unique through-axis, reported by its outgoing ray.
    pub fn axis(&self) -> Option<Direction8> {
        match self.axis_candidates().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }
}

/// Collects every side germ and tile corner at `v`.
pub fn crossing_at(p: &Patch, v: LatticePoint) -> Result<Crossing> {
    if !p.is_vertex(v) {
        return Err(TilingError::NotAVertex(v));
    }
    Ok(crossing_of_tiles(v, p.tiles_at(v)))
}

pub(crate) fn crossing_of_tiles<'a>(v: LatticePoint, tiles: impl Iterator<Item = &'a TriangleTile>) -> Crossing {
    let mut germs: [Option<Germ>; 8] = [None; 8];
    let mut corners = Vec::new();
    let mut conflict = false;
    for t in tiles {
        if let Some(c) = t.corner_at(v) {
            corners.push(c);
        }
        for s in t.sides_at(v) {
            let other = if s.from == v { s.to } else { s.from };
            let ray = Direction8::of_vector(other - v).expect("lattice side").0;
            let (_, head) = s.arrow();
            let g = Germ {
                kind: s.kind(),
                arrow: if head == v { Arrow::Inward } else { Arrow::Outward },
                color: s.decoration.color,
            };
            match germs[ray.index()] {
                None => germs[ray.index()] = Some(g),
                Some(prev) if prev != g => conflict = true,
                Some(_) => {}
            }
        }
    }
    corners.sort();
    Crossing { center: v, germs, corners, conflict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingKind {
    C4,
    C8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingClass {
    C4,
    C8,
    BoundaryHalf,
    Illegal,
}

impl fmt::Display for CrossingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CrossingClass::C4 => "C4",
            CrossingClass::C8 => "C8",
            CrossingClass::BoundaryHalf => "boundary-half",
            CrossingClass::Illegal => "illegal",
        };
        f.write_str(s)
    }
}

/// Rule 4 on a complete or partial C4-shaped crossing: for every inward
/// germ perpendicular to the axis, the tile on the walker's left is red and
/// the one on the right is green. Missing tiles are not checked.
pub fn c4_chirality_holds(c: &Crossing) -> bool {
    let Some(axis) = c.axis() else { return false };
    for q in [axis.rotated(2), axis.rotated(-2)] {
        let Some(g) = c.germ(q) else { continue };
        if g.arrow != Arrow::Inward {
            return false;
        }
        if let Some(left) = c.corner_starting_at(q.rotated(-2)) {
            if left.body != TileColor::Red {
                return false;
            }
        }
        if let Some(right) = c.corner_starting_at(q) {
            if right.body != TileColor::Green {
                return false;
            }
        }
    }
    true
}

fn perpendiculars_ok(c: &Crossing, axis: Direction8) -> std::result::Result<(), String> {
    let (p, q) = (c.germ(axis.rotated(2)), c.germ(axis.rotated(-2)));
    match (p, q) {
        (Some(p), Some(q)) => {
            if p.arrow != Arrow::Inward || q.arrow != Arrow::Inward {
                return Err("perpendicular arrows must both enter the center".into());
            }
            if p.color == q.color {
                return Err("perpendicular arrows must have different colors".into());
            }
            Ok(())
        }
        _ => Err("missing perpendicular arrow".into()),
    }
}

/// Structural constraints on a complete C4: four right-angle corners, a
/// through-axis, two inward perpendicular arrows of different colors,
/// nothing else, and rule-4 chirality.
pub fn check_c4_structure(c: &Crossing) -> std::result::Result<(), String> {
    if c.conflict {
        return Err("conflicting side decorations".into());
    }
    if c.corners.len() != 4 || c.corners.iter().any(|k| k.span != 2) || !c.is_complete() {
        return Err("a C4 center must be the right-angle vertex of four tiles".into());
    }
    if c.germ_count() != 4 {
        return Err(format!("a C4 has 4 arrows, found {}", c.germ_count()));
    }
    let axis = c.axis().ok_or("no unique through-axis")?;
    perpendiculars_ok(c, axis)?;
    if !c4_chirality_holds(c) {
        return Err("rule 4 chirality fails (red must be left of each entering perpendicular)".into());
    }
    Ok(())
}

/// For each inward perpendicular, the outward diagonal flanking it on the
/// walker's right is green and on the left is red.
pub fn c8_flanking_rule_holds(c: &Crossing, axis: Direction8) -> bool {
    [axis.rotated(2), axis.rotated(-2)].into_iter().all(|q| {
        let right = c.germ(q.rotated(1));
        let left = c.germ(q.rotated(-1));
        matches!(right, Some(g) if g.color == TileColor::Green) && matches!(left, Some(g) if g.color == TileColor::Red)
    })
}

/// Competing reading of the same sentence: facing along the axis arrow, the
/// green perpendicular arrow arrives from the right and the red one from the
/// left.
pub fn perpendicular_reading_holds(c: &Crossing, axis: Direction8) -> bool {
    matches!(c.germ(axis.rotated(-2)), Some(g) if g.color == TileColor::Green)
        && matches!(c.germ(axis.rotated(2)), Some(g) if g.color == TileColor::Red)
}

/// Structural constraints on a complete C8.
pub fn check_c8_structure(c: &Crossing) -> std::result::Result<(), String> {
    if c.conflict {
        return Err("conflicting side decorations".into());
    }
    if c.corners.len() != 8 || c.corners.iter().any(|k| k.span != 1) {
        return Err("a C8 center must be an acute vertex of eight tiles".into());
    }
    if c.germ_count() != 8 {
        return Err(format!("a C8 has 8 arrows, found {}", c.germ_count()));
    }
    let axis = c.axis().ok_or("no unique through-axis")?;
    perpendiculars_ok(c, axis)?;
    for k in [1, 3, 5, 7] {
        let g = c.germ(axis.rotated(k)).expect("eight germs");
        if g.arrow != Arrow::Outward {
            return Err("diagonal arrows must leave the center".into());
        }
    }
    if !c8_flanking_rule_holds(c, axis) {
        return Err("green diagonal must be right and red left of each entering perpendicular".into());
    }
    // outgoing arrows at right angles to each other differ in color
    for d in Direction8::all() {
        if let (Some(x), Some(y)) = (c.germ(d), c.germ(d.rotated(2))) {
            if x.arrow == Arrow::Outward && y.arrow == Arrow::Outward && x.color == y.color {
                return Err(format!("orthogonal outgoing arrows at {d} and {} share a color", d.rotated(2)));
            }
        }
    }
    for d in Direction8::all() {
        let (x, y) = (c.germ(d).unwrap(), c.germ(d.rotated(1)).unwrap());
        if x.kind == y.kind {
            return Err("side kinds must alternate around a C8".into());
        }
    }
    let bodies = c.sector_bodies();
    for s in 0..8 {
        if bodies[s] == bodies[(s + 1) % 8] {
            return Err("tile colors must alternate around a C8".into());
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct TableEntry {
    kind: CrossingKind,
    /// For C4 entries: expected body of the corner starting at each ray.
    bodies: [Option<TileColor>; 8],
}

/// Canonical legal germ sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalCrossingTable {
    oracle_level: u32,
    entries: BTreeMap<GermCode, TableEntry>,
}

pub const TABLE_FORMAT_VERSION: u32 = 1;

const BUILTIN_TABLE: &str = include_str!("../data/crossing_table.json");

impl LegalCrossingTable {
    fn new(oracle_level: u32) -> Self {
        LegalCrossingTable { oracle_level, entries: BTreeMap::new() }
    }

    /// The table shipped with the crate; regenerate with
    /// `tritile tables derive --level 8 --out crates/core/data/crossing_table.json`.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_TABLE).expect("bundled crossing table is valid")
    }

    pub fn oracle_level(&self) -> u32 {
        self.oracle_level
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, kind: CrossingKind) -> usize {
        self.entries.values().filter(|e| e.kind == kind).count()
    }

    /// Canonical codes with their kind.
    pub fn entries(&self) -> impl Iterator<Item = (&GermCode, CrossingKind)> + '_ {
        self.entries.iter().map(|(k, e)| (k, e.kind))
    }

    /// Same entries, ignoring the oracle level the table came from.
    pub fn same_entries(&self, other: &LegalCrossingTable) -> bool {
        self.entries == other.entries
    }

    fn insert(&mut self, c: &Crossing, kind: CrossingKind) {
        let (code, k) = c.canonical_code();
        let mut bodies = [None; 8];
        if kind == CrossingKind::C4 {
            for corner in c.rotated(k).corners() {
                bodies[corner.start.index()] = Some(corner.body);
            }
        }
        self.entries.insert(code, TableEntry { kind, bodies });
    }

    pub fn lookup(&self, c: &Crossing) -> Option<CrossingKind> {
        self.entries.get(&c.canonical_code().0).map(|e| e.kind)
    }

    /// Entry as a reconstructed crossing, centered at the origin.
    pub fn entry_crossing(&self, code: &GermCode) -> Option<Crossing> {
        let e = self.entries.get(code)?;
        let mut germs = [None; 8];
        for d in 0..8 {
            germs[d] = Germ::from_code(code[d]);
        }
        let mut corners = Vec::new();
        let role = crate::tiles::VertexRole::R;
        match e.kind {
            CrossingKind::C4 => {
                for d in Direction8::all() {
                    if let Some(body) = e.bodies[d.index()] {
                        corners.push(Corner { start: d, span: 2, role, body });
                    }
                }
            }
            CrossingKind::C8 => {}
        }
        Some(Crossing { center: LatticePoint::ORIGIN, germs, corners, conflict: false })
    }

    fn half_matches(&self, c: &Crossing) -> bool {
        if c.conflict || c.corners.is_empty() {
            return false;
        }
        let sectors = c.sector_bodies();
        let in_half_plane = (0..8).any(|h| (0..8).all(|s| sectors[s].is_none() || (s + 8 - h) % 8 < 4));
        if !in_half_plane {
            return false;
        }
        let code = c.code();
        self.entries.iter().any(|(entry_code, entry)| {
            (0..8).any(|k| {
                let rc = rotate_code(entry_code, k);
                let germs_fit = (0..8).all(|d| code[d] == 0 || code[d] == rc[d]);
                if !germs_fit {
                    return false;
                }
                let want_span = match entry.kind {
                    CrossingKind::C4 => 2,
                    CrossingKind::C8 => 1,
                };
                c.corners.iter().all(|corner| {
                    if corner.span != want_span || rc[corner.start.index()] == 0 || rc[corner.end().index()] == 0 {
                        return false;
                    }
                    match entry.kind {
                        CrossingKind::C4 => {
                            let frame_start = corner.start.rotated(-k);
                            entry.bodies[frame_start.index()] == Some(corner.body)
                        }
                        CrossingKind::C8 => true,
                    }
                })
            })
        })
    }

    pub fn to_json(&self) -> String {
        let doc = TableDocument {
            format_version: TABLE_FORMAT_VERSION,
            oracle_level: self.oracle_level,
            entries: self
                .entries
                .iter()
                .map(|(code, e)| EntryDocument {
                    class: e.kind,
                    germs: (0..8)
                        .filter_map(|d| {
                            Germ::from_code(code[d]).map(|g| GermDocument {
                                ray: d as u8,
                                kind: g.kind,
                                arrow: g.arrow,
                                color: g.color.letter().to_string(),
                            })
                        })
                        .collect(),
                    corner_bodies: match e.kind {
                        CrossingKind::C4 => Some(
                            (0..8)
                                .filter_map(|d| {
                                    e.bodies[d].map(|b| CornerDocument { start: d as u8, body: b.letter().to_string() })
                                })
                                .collect(),
                        ),
                        CrossingKind::C8 => None,
                    },
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDocument = serde_json::from_str(text).map_err(|e| TilingError::Schema(e.to_string()))?;
        if doc.format_version != TABLE_FORMAT_VERSION {
            return Err(TilingError::Schema(format!("unsupported table format_version {}", doc.format_version)));
        }
        let color = |s: &str| {
            s.chars()
                .next()
                .and_then(TileColor::from_letter)
                .filter(|_| s.chars().count() == 1)
                .ok_or_else(|| TilingError::Schema(format!("bad color {s:?}")))
        };
        let mut table = LegalCrossingTable::new(doc.oracle_level);
        for (i, e) in doc.entries.iter().enumerate() {
            let mut code = [0u8; 8];
            for g in &e.germs {
                if g.ray > 7 {
                    return Err(TilingError::Schema(format!("entries[{i}]: ray {} out of range", g.ray)));
                }
                code[g.ray as usize] = Germ { kind: g.kind, arrow: g.arrow, color: color(&g.color)? }.code();
            }
            let mut bodies = [None; 8];
            for cb in e.corner_bodies.iter().flatten() {
                if cb.start > 7 {
                    return Err(TilingError::Schema(format!("entries[{i}]: corner start out of range")));
                }
                bodies[cb.start as usize] = Some(color(&cb.body)?);
            }
            if canonical_code(&code).0 != code {
                return Err(TilingError::Schema(format!("entries[{i}]: germ set is not in canonical rotation")));
            }
            table.entries.insert(code, TableEntry { kind: e.class, bodies });
        }
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct TableDocument {
    format_version: u32,
    oracle_level: u32,
    entries: Vec<EntryDocument>,
}

#[derive(Serialize, Deserialize)]
struct EntryDocument {
    class: CrossingKind,
    germs: Vec<GermDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    corner_bodies: Option<Vec<CornerDocument>>,
}

#[derive(Serialize, Deserialize)]
struct GermDocument {
    ray: u8,
    kind: SideKind,
    arrow: Arrow,
    color: String,
}

#[derive(Serialize, Deserialize)]
struct CornerDocument {
    start: u8,
    body: String,
}

/// Classifies a crossing against the table. Complete crossings can only be
/// `C4` or `C8`; incomplete ones at the boundary may be `BoundaryHalf`.
pub fn classify_crossing(c: &Crossing, table: &LegalCrossingTable, at_boundary: bool) -> CrossingClass {
    if c.conflict {
        return CrossingClass::Illegal;
    }
    if c.is_complete() {
        return match table.lookup(c) {
            Some(CrossingKind::C4)
                if c.corners.len() == 4 && c.corners.iter().all(|k| k.span == 2) && c4_chirality_holds(c) =>
            {
                CrossingClass::C4
            }
            Some(CrossingKind::C8) if c.corners.len() == 8 && c.corners.iter().all(|k| k.span == 1) => {
                CrossingClass::C8
            }
            _ => CrossingClass::Illegal,
        };
    }
    if at_boundary && table.half_matches(c) {
        CrossingClass::BoundaryHalf
    } else {
        CrossingClass::Illegal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValidationMode {
    /// Rules 3 and 4 at interior vertices only.
    PlaneInterior,
    /// Additionally, every non-extreme boundary vertex must be half of a
    /// legal crossing.
    SupertileBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EdgeViolation {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ColorViolation {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub color: TileColor,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CrossingViolation {
    pub vertex: LatticePoint,
    pub on_boundary: bool,
    pub class: CrossingClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub tiles: usize,
    pub interior_vertices: usize,
    pub boundary_vertices: usize,
    pub edge_violations: Vec<EdgeViolation>,
    pub color_violations: Vec<ColorViolation>,
    pub crossing_violations: Vec<CrossingViolation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn violation_count(&self) -> usize {
        self.edge_violations.len() + self.color_violations.len() + self.crossing_violations.len()
    }
}

/// Rule 1, plus any contact that is not edge-to-edge.
pub fn check_edges(p: &Patch) -> Vec<EdgeViolation> {
    let mut out = Vec::new();
    for (key, ids) in p.edges() {
        let push =
            |out: &mut Vec<EdgeViolation>, reason: String| out.push(EdgeViolation { from: key.0, to: key.1, reason });
        if ids.len() > 2 {
            push(&mut out, format!("{} tiles share one side", ids.len()));
            continue;
        }
        if let [i, j] = ids {
            let side = |t: &TriangleTile| *t.sides().iter().find(|s| s.key() == *key).expect("indexed side");
            let (s, u) = (side(&p.tiles()[*i]), side(&p.tiles()[*j]));
            if s.decoration.color != u.decoration.color {
                push(&mut out, "shared side colors differ".into());
            } else if s.arrow() != u.arrow() {
                push(&mut out, "shared side arrows point opposite ways".into());
            }
        }
        // lattice points strictly inside this side must not be vertices
        let Some((dir, n)) = Direction8::of_vector(key.1 - key.0) else { continue };
        for i in 1..n {
            let x = key.0 + dir.step() * i;
            if p.is_vertex(x) {
                push(&mut out, format!("non edge-to-edge contact at {x}"));
                break;
            }
        }
    }
    out.sort();
    out
}

/// Rule 2.
pub fn check_colors(p: &Patch) -> Vec<ColorViolation> {
    let mut out: Vec<ColorViolation> = p
        .edges()
        .filter_map(|(key, ids)| match ids {
            [i, j] if p.tiles()[*i].body() == p.tiles()[*j].body() => {
                Some(ColorViolation { from: key.0, to: key.1, color: p.tiles()[*i].body() })
            }
            _ => None,
        })
        .collect();
    out.sort();
    out
}

pub fn validate(p: &Patch, table: &LegalCrossingTable, mode: ValidationMode) -> ValidationReport {
    let mut crossing_violations = Vec::new();
    let (mut interior, mut boundary) = (0, 0);
    for v in p.vertices() {
        let c = crossing_at(p, v).expect("patch vertex");
        let units = c.angle_units();
        if units == 8 {
            interior += 1;
            let class = classify_crossing(&c, table, false);
            if !matches!(class, CrossingClass::C4 | CrossingClass::C8) {
                crossing_violations.push(CrossingViolation { vertex: v, on_boundary: false, class });
            }
        } else {
            boundary += 1;
            if mode == ValidationMode::SupertileBoundary && units >= 4 {
                let class = classify_crossing(&c, table, true);
                if class != CrossingClass::BoundaryHalf {
                    crossing_violations.push(CrossingViolation { vertex: v, on_boundary: true, class });
                }
            }
        }
    }
    ValidationReport {
        mode,
        tiles: p.len(),
        interior_vertices: interior,
        boundary_vertices: boundary,
        edge_violations: check_edges(p),
        color_violations: check_colors(p),
        crossing_violations,
    }
}

/// Outcome of harvesting legal crossings from supertiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableDerivation {
    #[serde(skip)]
    pub table: LegalCrossingTable,
    pub oracle_level: u32,
    pub harvested_crossings: usize,
    pub c4_classes: usize,
    pub c8_classes: usize,
    /// C8 classes meeting the flanking-diagonal reading (enforced).
    pub flanking_reading_holds: usize,
    /// C8 classes meeting the perpendicular-arrow reading (reported only).
    pub perpendicular_reading_holds: usize,
}

/// Harvests all interior crossings of level-`oracle_level` supertiles grown
/// from both seed body colors and checks each against the structural
/// constraints.
pub fn derive_crossing_table(oracle_level: u32) -> Result<TableDerivation> {
    if oracle_level < 8 {
        return Err(TilingError::OracleTooShallow(oracle_level));
    }
    let mut table = LegalCrossingTable::new(oracle_level);
    let mut harvested = 0;
    let mut flank = BTreeMap::new();
    let mut perp = BTreeMap::new();
    for body in [TileColor::Red, TileColor::Green] {
        let spec =
            crate::substitution::SupertileSpec::new(oracle_level, crate::substitution::Seed::default_with_body(body));
        let s = crate::substitution::supertile(&spec)?;
        for v in s.interior_vertices() {
            let c = crossing_at(&s, v)?;
            harvested += 1;
            let violation = |reason: String| TilingError::ProseConstraintViolation { at: v, reason };
            let kind = match c.corners.len() {
                4 => {
                    check_c4_structure(&c).map_err(violation)?;
                    CrossingKind::C4
                }
                8 => {
                    check_c8_structure(&c).map_err(violation)?;
                    let axis = c.axis().expect("checked");
                    let code = c.canonical_code().0;
                    flank.insert(code, c8_flanking_rule_holds(&c, axis));
                    perp.insert(code, perpendicular_reading_holds(&c, axis));
                    CrossingKind::C8
                }
                n => return Err(violation(format!("{n} tiles meet at an interior vertex"))),
            };
            table.insert(&c, kind);
        }
    }
    Ok(TableDerivation {
        c4_classes: table.count(CrossingKind::C4),
        c8_classes: table.count(CrossingKind::C8),
        flanking_reading_holds: flank.values().filter(|&&b| b).count(),
        perpendicular_reading_holds: perp.values().filter(|&&b| b).count(),
        harvested_crossings: harvested,
        oracle_level,
        table,
    })
}
