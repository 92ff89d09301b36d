//! Censuses and scans over finite patches: tile classes, crossings, crowns
//! and their behavior under decomposition, `C8` filling types, and
//! translation periods.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Result, TilingError};
use crate::geometry::{Direction8, LatticePoint};
use crate::rules::{classify_crossing, crossing_at, Crossing, CrossingClass, GermCode, LegalCrossingTable};
use crate::squares::Equivalence;
use crate::substitution::{decompose, scaled};
use crate::tiles::{Patch, Sense, Side, SideDecoration, SideKind, TileColor, TriangleTile, VertexRole};

/// A tile modulo translation, or modulo translation and rotation when
/// `direction` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TileClass {
    pub direction: Option<u8>,
    pub body: TileColor,
    pub leg_a: SideDecoration,
    pub leg_b: SideDecoration,
    pub hyp: SideDecoration,
}

impl TileClass {
    pub fn of(t: &TriangleTile, up_to: Equivalence) -> TileClass {
        let direction = match up_to {
            Equivalence::Translation => Some(t.leg_direction().index() as u8),
            Equivalence::TranslationRotation => None,
        };
        TileClass { direction, body: t.body(), leg_a: t.leg_a(), leg_b: t.leg_b(), hyp: t.hyp() }
    }
}

impl fmt::Display for TileClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.body.letter(), self.leg_a, self.leg_b, self.hyp)?;
        if let Some(d) = self.direction {
            write!(f, "@{d}")?;
        }
        Ok(())
    }
}

pub fn tile_census(p: &Patch, up_to: Equivalence) -> BTreeMap<TileClass, usize> {
    let mut out = BTreeMap::new();
    for t in p.tiles() {
        *out.entry(TileClass::of(t, up_to)).or_default() += 1;
    }
    out
}

/// Interior crossings by class and canonical germ code.
pub fn crossing_census(p: &Patch, table: &LegalCrossingTable) -> BTreeMap<(CrossingClass, GermCode), usize> {
    let mut out = BTreeMap::new();
    for v in p.interior_vertices() {
        let c = crossing_at(p, v).expect("patch vertex");
        *out.entry((classify_crossing(&c, table, false), c.canonical_code().0)).or_default() += 1;
    }
    out
}

/// The four ways to fill a `C8`, read counterclockwise from the outgoing
/// axis ray: the body color of the first sector and the side kind on the
/// axis ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FillingType {
    /// Red first, leg first.
    Type1,
    /// Red first, hypotenuse first.
    Type2,
    /// Green first, leg first.
    Type3,
    /// Green first, hypotenuse first.
    Type4,
}

impl FillingType {
    pub fn number(self) -> u8 {
        match self {
            FillingType::Type1 => 1,
            FillingType::Type2 => 2,
            FillingType::Type3 => 3,
            FillingType::Type4 => 4,
        }
    }

    /// Filling type of a complete crossing of eight acute corners with a
    /// unique axis.
    pub fn of(c: &Crossing) -> Option<FillingType> {
        if !c.is_complete() || c.corners().len() != 8 {
            return None;
        }
        let axis = c.axis()?;
        let kind = c.germ(axis)?.kind;
        let color = c.sector_bodies()[axis.index()]?;
        Some(match (color, kind) {
            (TileColor::Red, SideKind::Leg) => FillingType::Type1,
            (TileColor::Red, SideKind::Hypotenuse) => FillingType::Type2,
            (TileColor::Green, SideKind::Leg) => FillingType::Type3,
            (TileColor::Green, SideKind::Hypotenuse) => FillingType::Type4,
        })
    }
}

impl fmt::Display for FillingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}", self.number())
    }
}

pub fn c8_filling_at(p: &Patch, v: LatticePoint) -> Result<Option<FillingType>> {
    Ok(FillingType::of(&crossing_at(p, v)?))
}

/// Counts of the filling types over interior `C8` crossings; all four types
/// are present as keys.
pub fn c8_filling_census(p: &Patch) -> BTreeMap<FillingType, usize> {
    let mut out: BTreeMap<FillingType, usize> =
        [FillingType::Type1, FillingType::Type2, FillingType::Type3, FillingType::Type4]
            .into_iter()
            .map(|t| (t, 0))
            .collect();
    for v in p.interior_vertices() {
        if let Some(t) = FillingType::of(&crossing_at(p, v).expect("patch vertex")) {
            *out.get_mut(&t).expect("all types present") += 1;
        }
    }
    out
}

/// One tile of a crown, seen from the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrownTile {
    pub start: u8,
    pub span: u8,
    pub role: VertexRole,
    pub body: TileColor,
    /// Decorations of `leg_a`, `leg_b`, hypotenuse; the outer side is
    /// `None` when masked.
    pub sides: [Option<SideDecoration>; 3],
}

/// Tile count and, for eight-tile crowns, the filling type of the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrownFamily {
    pub tiles: usize,
    pub filling: Option<FillingType>,
}

impl fmt::Display for CrownFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.filling {
            Some(t) => write!(f, "{}-tile {}", self.tiles, t),
            None => write!(f, "{}-tile", self.tiles),
        }
    }
}

/// Tiles around a vertex, modulo translation and rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrownClass {
    pub masked: bool,
    pub family: CrownFamily,
    pub tiles: Vec<CrownTile>,
}

fn outer_side(role: VertexRole) -> Side {
    role.opposite_side()
}

fn crown_tiles(c: &Crossing, tiles: &[TriangleTile], mask_outer: bool, k: i64) -> Vec<CrownTile> {
    let mut out: Vec<CrownTile> = tiles
        .iter()
        .map(|t| {
            let corner = t.corner_at(c.center).expect("tile contains the center");
            let mut sides = Side::ALL.map(|s| Some(t.decoration(s)));
            if mask_outer {
                let o = outer_side(corner.role);
                sides[Side::ALL.iter().position(|&s| s == o).expect("side")] = None;
            }
            CrownTile {
                start: corner.start.rotated(k).index() as u8,
                span: corner.span,
                role: corner.role,
                body: corner.body,
                sides,
            }
        })
        .collect();
    out.sort();
    out
}

pub fn crown_at(p: &Patch, v: LatticePoint, mask_outer: bool) -> Result<CrownClass> {
    let c = crossing_at(p, v)?;
    if !c.is_complete() {
        return Err(TilingError::IncompleteCrown(v));
    }
    let tiles: Vec<TriangleTile> = p.tiles_at(v).copied().collect();
    let best = (0..8).map(|k| crown_tiles(&c, &tiles, mask_outer, k)).min().expect("eight rotations");
    let family = CrownFamily { tiles: tiles.len(), filling: FillingType::of(&c) };
    Ok(CrownClass { masked: mask_outer, family, tiles: best })
}

/// Crown classes over all interior vertices.
pub fn crown_census(p: &Patch, mask_outer: bool) -> BTreeMap<CrownClass, usize> {
    let mut out = BTreeMap::new();
    for v in p.interior_vertices() {
        *out.entry(crown_at(p, v, mask_outer).expect("interior vertex")).or_default() += 1;
    }
    out
}

/// Crown at the image of `v` after each of `1..=steps` decompositions of
/// the crown at `v`.
pub fn crown_sigma_chain(p: &Patch, v: LatticePoint, steps: u32, mask_outer: bool) -> Result<Vec<CrownClass>> {
    crown_at(p, v, mask_outer)?;
    let k = steps.div_ceil(2);
    let crown = Patch::from_tiles(p.tiles_at(v).copied())?;
    let mut q = scaled(&crown, k);
    let center = v * (1i64 << k);
    let mut out = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        q = decompose(&q)?;
        let c = crown_at(&q, center, mask_outer)?;
        q = Patch::from_tiles(q.tiles_at(center).copied())?;
        out.push(c);
    }
    Ok(out)
}

/// Smallest `(start, period)` with `seq[i] == seq[i + period]` for every
/// `i ≥ start` inside the sequence, requiring at least one full repeat.
pub fn eventual_period<T: PartialEq>(seq: &[T]) -> Option<(usize, usize)> {
    let n = seq.len();
    (0..n)
        .flat_map(|start| (1..n).map(move |period| (start, period)))
        .filter(|&(start, period)| start + 2 * period <= n)
        .find(|&(start, period)| (start..n - period).all(|i| seq[i] == seq[i + period]))
}

/// Translation vectors under which the core of a patch reappears.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    /// Twice the center of the bounding box.
    pub center_doubled: LatticePoint,
    pub diameter: i64,
    pub core_radius: i64,
    pub max_shift: i64,
    pub core_tiles: usize,
    pub shifts_tested: usize,
    pub survivors: Vec<LatticePoint>,
}

fn isqrt(n: i64) -> i64 {
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Bounding-box center, doubled.
pub fn patch_center_doubled(p: &Patch) -> Option<LatticePoint> {
    let mut vs = p.vertices();
    let first = vs.next()?;
    let (mut lo, mut hi) = (first, first);
    for v in vs {
        lo = LatticePoint::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = LatticePoint::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    Some(lo + hi)
}

/// Largest distance between the extreme vertices in the eight lattice
/// directions, rounded down.
pub fn patch_diameter(p: &Patch) -> i64 {
    let extremes: BTreeSet<LatticePoint> =
        Direction8::all().filter_map(|d| p.vertices().max_by_key(|v| (v.dot(d.step()), *v))).collect();
    let pts: Vec<LatticePoint> = extremes.into_iter().collect();
    let mut best = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max((pts[i] - pts[j]).norm2());
        }
    }
    isqrt(best)
}

/// Tests every nonzero lattice vector of length at most `max_shift`
/// against the tiles lying within `core_radius` of the patch center.
pub fn period_scan(p: &Patch, core_radius: i64, max_shift: i64) -> Result<PeriodReport> {
    let center2 = patch_center_doubled(p).ok_or(TilingError::EmptyCore)?;
    let r2 = 4 * core_radius * core_radius;
    let core: Vec<&TriangleTile> =
        p.tiles().iter().filter(|t| t.vertices().iter().all(|v| (*v * 2 - center2).norm2() <= r2)).collect();
    if core.is_empty() {
        return Err(TilingError::EmptyCore);
    }
    let mut survivors = Vec::new();
    let mut tested = 0;
    for dx in -max_shift..=max_shift {
        for dy in -max_shift..=max_shift {
            let t = LatticePoint::new(dx, dy);
            if t == LatticePoint::ORIGIN || t.norm2() > max_shift * max_shift {
                continue;
            }
            tested += 1;
            let ok =
                core.iter().all(|u| p.find(u.r() + t, u.a() + t, u.b() + t).is_some_and(|w| same_decorations(u, w)));
            if ok {
                survivors.push(t);
            }
        }
    }
    Ok(PeriodReport {
        center_doubled: center2,
        diameter: patch_diameter(p),
        core_radius,
        max_shift,
        core_tiles: core.len(),
        shifts_tested: tested,
        survivors,
    })
}

fn same_decorations(u: &TriangleTile, w: &TriangleTile) -> bool {
    u.body() == w.body() && u.leg_a() == w.leg_a() && u.leg_b() == w.leg_b() && u.hyp() == w.hyp()
}

/// A rule-free patch of `reps × reps` blocks, each block 2×2 squares of
/// side 2 with distinct decorations. Returns the patch and its primitive
/// periods.
pub fn periodic_test_patch(reps: i64) -> (Patch, [LatticePoint; 2]) {
    use TileColor::*;
    let decs = SideDecoration::all();
    let mut tiles = Vec::new();
    for bx in 0..reps {
        for by in 0..reps {
            for (i, (sx, sy)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
                let center = LatticePoint::new(4 * bx + 2 * sx + 1, 4 * by + 2 * sy + 1);
                for q in 0..4 {
                    let d = Direction8::new(2 * q + 1).step();
                    let body = if (q + i as i64) % 2 == 0 { Red } else { Green };
                    let dec = decs[(q as usize + i) % 4];
                    let hyp = SideDecoration::new(dec.color.other(), Sense::Backward);
                    tiles.push(
                        TriangleTile::new(center, center + d, center + d.rot90ccw(), body, dec, decs[i], hyp)
                            .expect("positive frame"),
                    );
                }
            }
        }
    }
    (Patch::from_tiles(tiles).expect("disjoint squares"), [LatticePoint::new(4, 0), LatticePoint::new(0, 4)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{supertile, Seed, SupertileSpec};

    fn s(n: u32) -> Patch {
        supertile(&SupertileSpec::new(n, Seed::default())).unwrap()
    }

    #[test]
    fn one_tile_one_class() {
        assert_eq!(tile_census(&s(0), Equivalence::Translation).len(), 1);
    }

    #[test]
    fn census_is_translation_invariant() {
        let p = s(8);
        let q = p.mapped(&crate::geometry::SimilarityMap::translation(LatticePoint::new(7, -3))).unwrap();
        assert_eq!(tile_census(&p, Equivalence::Translation), tile_census(&q, Equivalence::Translation));
        assert_eq!(crown_census(&p, true), crown_census(&q, true));
    }

    #[test]
    fn rotation_census_is_rotation_invariant() {
        let p = s(8);
        let q = p.mapped(&crate::geometry::SimilarityMap::new(2, 0, LatticePoint::ORIGIN)).unwrap();
        assert_eq!(
            tile_census(&p, Equivalence::TranslationRotation),
            tile_census(&q, Equivalence::TranslationRotation)
        );
    }

    #[test]
    fn crowns_in_s6() {
        let p = s(6);
        let mut seen = BTreeSet::new();
        for v in p.interior_vertices() {
            seen.insert(crown_at(&p, v, false).unwrap().tiles.len());
        }
        assert_eq!(seen, BTreeSet::from([4, 8]));
        assert_eq!(crown_at(&p, LatticePoint::ORIGIN, false), Err(TilingError::IncompleteCrown(LatticePoint::ORIGIN)));
    }

    #[test]
    fn c4_crown_decomposes_to_eight() {
        let p = s(6);
        let v = p.interior_vertices().find(|&v| crown_at(&p, v, false).unwrap().tiles.len() == 4).unwrap();
        let chain = crown_sigma_chain(&p, v, 1, false).unwrap();
        assert_eq!(chain[0].family.tiles, 8);
    }

    #[test]
    fn filling_total_matches_acute_vertices() {
        let p = s(8);
        let total: usize = c8_filling_census(&p).values().sum();
        let acute = p.interior_vertices().filter(|&v| p.tiles_at(v).count() == 8).count();
        assert_eq!(total, acute);
    }

    #[test]
    fn eventual_period_examples() {
        assert_eq!(eventual_period(&[1, 2, 3, 4, 3, 4, 3]), Some((2, 2)));
        assert_eq!(eventual_period(&[5, 5, 5]), Some((0, 1)));
        assert_eq!(eventual_period(&[1, 2, 3]), None);
    }

    #[test]
    fn periodic_patch_survivors() {
        let (p, periods) = periodic_test_patch(8);
        let rep = period_scan(&p, 6, 8).unwrap();
        for t in periods {
            assert!(rep.survivors.contains(&t));
        }
        assert!(rep.survivors.iter().all(|t| t.x % 4 == 0 && t.y % 4 == 0));
        assert!(period_scan(&p, 6, 0).unwrap().survivors.is_empty());
    }

    #[test]
    fn empty_core_is_an_error() {
        assert_eq!(period_scan(&Patch::new(), 4, 4), Err(TilingError::EmptyCore));
        assert_eq!(period_scan(&s(6), 0, 4), Err(TilingError::EmptyCore));
    }

    #[test]
    fn diameter_of_a_supertile() {
        // legs of length 8 meet at the origin; the hypotenuse is the diameter
        assert_eq!(patch_diameter(&s(6)), isqrt(128));
    }
}
