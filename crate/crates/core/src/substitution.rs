//! The substitution: every tile is cut by its height into a red left child
//! and a green right child; composition merges sibling pairs back.
//!
//! Decomposition does not rescale. Children have half the area of their
//! parent and live on the same lattice, so a patch has to be scaled up
//! (see [`SupertileSpec`]) before it can be decomposed repeatedly. Tilings at
//! different levels are compared with [`similar_eq`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, TilingError};
use crate::geometry::{midpoint, rotate90ccw_about, rotate90cw_about, LatticePoint, SimilarityMap};
use crate::rules::{classify_crossing, crossing_at, CrossingClass, LegalCrossingTable};
use crate::tiles::{Patch, PatchBuilder, Sense, SideDecoration, TileColor, TriangleTile};

/// The two halves of a tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChildPair {
    /// Red, containing the parent's `b`.
    pub left: TriangleTile,
    /// Green, containing the parent's `a`.
    pub right: TriangleTile,
}

pub fn decompose_tile(t: &TriangleTile) -> Result<ChildPair> {
    let m = midpoint(t.a(), t.b())?;
    // arrow from the right-angle vertex to the hypotenuse; canonical side is m→r
    let height = SideDecoration::new(t.body(), Sense::Backward);
    let right = TriangleTile::new(m, t.r(), t.a(), TileColor::Green, height, t.hyp().flipped(), t.leg_a())?;
    let left = TriangleTile::new(m, t.b(), t.r(), TileColor::Red, t.hyp(), height, t.leg_b().flipped())?;
    Ok(ChildPair { left, right })
}

pub fn decompose(p: &Patch) -> Result<Patch> {
    let mut b = PatchBuilder::new();
    for t in p.tiles() {
        let pair = decompose_tile(t)?;
        b.insert(pair.left)?;
        b.insert(pair.right)?;
    }
    Ok(b.build())
}

/// Position and body color of a tile's sibling; side decorations are not
/// determined by the tile alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SiblingPlacement {
    pub r: LatticePoint,
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub body: TileColor,
}

impl SiblingPlacement {
    pub fn matches(&self, t: &TriangleTile) -> bool {
        t.r() == self.r && t.a() == self.a && t.b() == self.b && t.body() == self.body
    }
}

/// A red tile's sibling is its quarter turn counterclockwise about the
/// right-angle vertex; a green tile's is the clockwise quarter turn.
pub fn sibling_of(t: &TriangleTile) -> SiblingPlacement {
    let turn = match t.body() {
        TileColor::Red => rotate90ccw_about,
        TileColor::Green => rotate90cw_about,
    };
    SiblingPlacement { r: t.r(), a: turn(t.a(), t.r()), b: turn(t.b(), t.r()), body: t.body().other() }
}

fn not_composable(at: LatticePoint, reason: impl Into<String>) -> TilingError {
    TilingError::NotComposable { at, reason: reason.into() }
}

/// Merges a red left child and its green sibling back into their parent.
fn merge(left: &TriangleTile, right: &TriangleTile) -> Result<TriangleTile> {
    let m = left.r();
    if left.leg_b() != right.leg_a() {
        return Err(not_composable(m, "siblings disagree on their shared leg"));
    }
    if left.leg_b().sense != Sense::Backward {
        return Err(not_composable(m, "shared leg does not point from the right-angle vertex to the hypotenuse"));
    }
    // the two hypotenuse halves must form one through-arrow
    if left.leg_a().color != right.leg_b().color || left.leg_a().sense == right.leg_b().sense {
        return Err(not_composable(m, "axis arrows disagree"));
    }
    TriangleTile::new(
        left.b(),
        right.b(),
        left.a(),
        left.leg_b().color,
        right.hyp(),
        left.hyp().flipped(),
        left.leg_a(),
    )
}

/// Inverse of [`decompose`]. Every red tile is merged with its green
/// sibling; interior right-angle vertices must be legal `C4` crossings.
pub fn compose(p: &Patch, table: &LegalCrossingTable) -> Result<Patch> {
    let mut used = vec![false; p.len()];
    let mut out = PatchBuilder::new();
    for (i, t) in p.tiles().iter().enumerate() {
        if t.body() != TileColor::Red {
            continue;
        }
        let sib = sibling_of(t);
        let j = p
            .find(sib.r, sib.a, sib.b)
            .filter(|u| sib.matches(u))
            .and_then(|u| p.position(u))
            .ok_or_else(|| not_composable(t.r(), "red tile has no green sibling"))?;
        let c = crossing_at(p, t.r())?;
        if c.is_complete() && classify_crossing(&c, table, false) != CrossingClass::C4 {
            return Err(not_composable(t.r(), "right-angle vertex is not a legal C4 crossing"));
        }
        let parent = merge(t, &p.tiles()[j])?;
        used[i] = true;
        used[j] = true;
        out.insert(parent).map_err(|e| not_composable(t.r(), format!("merged tiles collide: {e}")))?;
    }
    if let Some(k) = used.iter().position(|u| !u) {
        return Err(not_composable(p.tiles()[k].r(), "green tile has no red sibling"));
    }
    Ok(out.build())
}

/// Body color and the three side decorations of the tile a supertile is
/// grown from. Written as seven characters: body, then color and sense of
/// `leg_a`, `leg_b` and the hypotenuse, e.g. `GG+R-G-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    pub body: TileColor,
    pub leg_a: SideDecoration,
    pub leg_b: SideDecoration,
    pub hyp: SideDecoration,
}

/// The default seed. It occurs as an inner tile of large supertiles, so every
/// tile grown from it is an inner tile of some larger supertile.
pub const DEFAULT_SEED: &str = "GG-G+G-";

/// Red-bodied companion of [`DEFAULT_SEED`], also an inner tile.
pub const DEFAULT_RED_SEED: &str = "RR+R-R+";

impl Default for Seed {
    fn default() -> Self {
        DEFAULT_SEED.parse().expect("valid default seed")
    }
}

impl Seed {
    pub fn default_with_body(body: TileColor) -> Seed {
        match body {
            TileColor::Green => Seed::default(),
            TileColor::Red => DEFAULT_RED_SEED.parse().expect("valid default seed"),
        }
    }

    /// All 128 seeds.
    pub fn all() -> impl Iterator<Item = Seed> {
        [TileColor::Red, TileColor::Green].into_iter().flat_map(|body| {
            SideDecoration::all().into_iter().flat_map(move |leg_a| {
                SideDecoration::all().into_iter().flat_map(move |leg_b| {
                    SideDecoration::all().into_iter().map(move |hyp| Seed { body, leg_a, leg_b, hyp })
                })
            })
        })
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.body.letter(), self.leg_a, self.leg_b, self.hyp)
    }
}

impl FromStr for Seed {
    type Err = TilingError;

    fn from_str(s: &str) -> Result<Seed> {
        let chars: Vec<char> = s.chars().collect();
        let bad = || TilingError::Schema(format!("seed {s:?} must look like GG+R-G-"));
        if chars.len() != 7 {
            return Err(bad());
        }
        let color = |c: char| TileColor::from_letter(c).ok_or_else(bad);
        let sense = |c: char| match c {
            '+' => Ok(Sense::Forward),
            '-' | '−' => Ok(Sense::Backward),
            _ => Err(bad()),
        };
        let dec =
            |i: usize| -> Result<SideDecoration> { Ok(SideDecoration::new(color(chars[i])?, sense(chars[i + 1])?)) };
        Ok(Seed { body: color(chars[0])?, leg_a: dec(1)?, leg_b: dec(3)?, hyp: dec(5)? })
    }
}

/// A level-`level` supertile grown from `seed`, placed with the right angle
/// at the origin and `a` on the positive x-axis, scaled by `2^⌈level/2⌉` so
/// every midpoint along the way is a lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupertileSpec {
    pub level: u32,
    pub seed: Seed,
}

impl SupertileSpec {
    pub fn new(level: u32, seed: Seed) -> Self {
        SupertileSpec { level, seed }
    }

    pub fn seed_leg(&self) -> i64 {
        1i64 << self.level.div_ceil(2)
    }

    pub fn seed_tile(&self) -> TriangleTile {
        let l = self.seed_leg();
        TriangleTile::new(
            LatticePoint::ORIGIN,
            LatticePoint::new(l, 0),
            LatticePoint::new(0, l),
            self.seed.body,
            self.seed.leg_a,
            self.seed.leg_b,
            self.seed.hyp,
        )
        .expect("canonical placement")
    }
}

pub fn supertile(spec: &SupertileSpec) -> Result<Patch> {
    let mut tiles = vec![spec.seed_tile()];
    for _ in 0..spec.level {
        let mut next = Vec::with_capacity(tiles.len() * 2);
        for t in &tiles {
            let pair = decompose_tile(t)?;
            next.push(pair.left);
            next.push(pair.right);
        }
        tiles = next;
    }
    Patch::from_tiles(tiles)
}

/// Searches for a similarity carrying `p` onto `q` tile for tile, with all
/// decorations equal.
pub fn similar_eq(p: &Patch, q: &Patch) -> Option<SimilarityMap> {
    if p.len() != q.len() {
        return None;
    }
    let (Some(np), Some(nq)) = (p.leg_norm2(), q.leg_norm2()) else {
        return Some(SimilarityMap::IDENTITY);
    };
    // squared leg lengths differ by a power of two
    let (big, small, sign) = if nq >= np { (nq, np, 1) } else { (np, nq, -1) };
    if big % small != 0 || !((big / small) as u64).is_power_of_two() {
        return None;
    }
    let scale = sign * (big / small).trailing_zeros() as i32;
    for k in 0..8 {
        let linear = SimilarityMap::new(k, scale, LatticePoint::ORIGIN);
        if !linear.is_integral() {
            continue;
        }
        let Ok(mut image) = p.tiles().iter().map(|t| t.mapped(&linear)).collect::<Result<Vec<_>>>() else {
            continue;
        };
        image.sort();
        let t = q.tiles()[0].r() - image[0].r();
        let shift = SimilarityMap::translation(t);
        let all_equal = image.iter().zip(q.tiles()).all(|(x, y)| x.mapped(&shift).map(|z| z == *y).unwrap_or(false));
        if all_equal {
            return Some(SimilarityMap::new(k, scale, t));
        }
    }
    None
}

/// `p` scaled by `2^k` about the origin.
pub fn scaled(p: &Patch, k: u32) -> Patch {
    p.mapped(&SimilarityMap::doubling(k)).expect("integer scaling is always integral")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{check_colors, validate, ValidationMode};
    use TileColor::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn green_unit() -> TriangleTile {
        let seed: Seed = "GR+G-R+".parse().unwrap();
        TriangleTile::new(pt(0, 0), pt(2, 0), pt(0, 2), Green, seed.leg_a, seed.leg_b, seed.hyp).unwrap()
    }

    #[test]
    fn decompose_tile_example() {
        let t = green_unit();
        let pair = decompose_tile(&t).unwrap();
        assert_eq!((pair.right.r(), pair.right.a(), pair.right.b()), (pt(1, 1), pt(0, 0), pt(2, 0)));
        assert_eq!(pair.right.body(), Green);
        assert_eq!((pair.left.r(), pair.left.a(), pair.left.b()), (pt(1, 1), pt(0, 2), pt(0, 0)));
        assert_eq!(pair.left.body(), Red);
        // shared leg colored like the parent, arrow from (0,0) to (1,1)
        let shared = pair.right.side(crate::tiles::Side::LegA);
        assert_eq!(shared.decoration.color, Green);
        assert_eq!(shared.arrow(), (pt(0, 0), pt(1, 1)));
        assert_eq!(pair.left.side(crate::tiles::Side::LegB).arrow(), (pt(0, 0), pt(1, 1)));
        // halves of the hypotenuse keep its color and absolute direction
        let hyp_arrow = t.side(crate::tiles::Side::Hyp).arrow();
        let d = hyp_arrow.1 - hyp_arrow.0;
        for s in [pair.right.side(crate::tiles::Side::LegB), pair.left.side(crate::tiles::Side::LegA)] {
            let (tail, head) = s.arrow();
            assert_eq!((head - tail) * 2, d);
            assert_eq!(s.decoration.color, t.hyp().color);
        }
        assert_eq!(pair.left.leg_norm2() * 2, t.leg_norm2());
        assert_eq!(pair.right.leg_norm2() * 2, t.leg_norm2());
    }

    #[test]
    fn left_child_is_left_of_the_height() {
        let t = green_unit();
        let pair = decompose_tile(&t).unwrap();
        let h = pair.left.r() - t.r();
        assert!(h.cross(pair.left.centroid_times_three() - t.r() * 3) > 0);
        assert!(h.cross(pair.right.centroid_times_three() - t.r() * 3) < 0);
    }

    #[test]
    fn decompose_needs_resolution() {
        let t = TriangleTile::new(
            pt(0, 0),
            pt(1, 0),
            pt(0, 1),
            Red,
            green_unit().leg_a(),
            green_unit().leg_b(),
            green_unit().hyp(),
        )
        .unwrap();
        assert!(matches!(decompose_tile(&t), Err(TilingError::Resolution { .. })));
    }

    #[test]
    fn decomposed_pair_alternates_colors() {
        let p = decompose(&Patch::from_tiles([green_unit()]).unwrap()).unwrap();
        assert_eq!(p.len(), 2);
        assert!(check_colors(&p).is_empty());
    }

    #[test]
    fn sibling_examples() {
        let red = TriangleTile::new(
            pt(1, 1),
            pt(0, 2),
            pt(0, 0),
            Red,
            green_unit().leg_a(),
            green_unit().leg_b(),
            green_unit().hyp(),
        )
        .unwrap();
        let s = sibling_of(&red);
        assert_eq!((s.r, s.a, s.b, s.body), (pt(1, 1), pt(0, 0), pt(2, 0), Green));
        let back = sibling_of(&TriangleTile::new(s.r, s.a, s.b, s.body, red.leg_a(), red.leg_b(), red.hyp()).unwrap());
        assert_eq!((back.r, back.a, back.b), (red.r(), red.a(), red.b()));
    }

    #[test]
    fn supertile_sizes() {
        for level in 0..=8 {
            let s = supertile(&SupertileSpec::new(level, Seed::default())).unwrap();
            assert_eq!(s.len(), 1 << level);
            let seed = SupertileSpec::new(level, Seed::default()).seed_tile();
            assert_eq!(s.area2(), seed.leg_norm2());
        }
    }

    #[test]
    fn compose_single_tile_fails() {
        let table = LegalCrossingTable::builtin();
        let p = Patch::from_tiles([green_unit()]).unwrap();
        assert!(matches!(compose(&p, &table), Err(TilingError::NotComposable { .. })));
        let red = Patch::from_tiles([green_unit().with_body(Red)]).unwrap();
        assert!(matches!(compose(&red, &table), Err(TilingError::NotComposable { .. })));
    }

    #[test]
    fn compose_inverts_decompose_on_one_tile() {
        let table = LegalCrossingTable::builtin();
        let p = Patch::from_tiles([green_unit()]).unwrap();
        assert_eq!(compose(&decompose(&p).unwrap(), &table).unwrap(), p);
    }

    #[test]
    fn compose_rejects_a_reversed_height() {
        let table = LegalCrossingTable::builtin();
        let pair = decompose_tile(&green_unit()).unwrap();
        let flipped = pair.left.with_decoration(crate::tiles::Side::LegB, pair.left.leg_b().flipped());
        let right = pair.right.with_decoration(crate::tiles::Side::LegA, pair.right.leg_a().flipped());
        let p = Patch::from_tiles([flipped, right]).unwrap();
        assert!(matches!(compose(&p, &table), Err(TilingError::NotComposable { .. })));
    }

    #[test]
    fn similar_eq_examples() {
        let s4 = supertile(&SupertileSpec::new(4, Seed::default())).unwrap();
        assert_eq!(similar_eq(&s4, &s4), Some(SimilarityMap::IDENTITY));
        let quarter = SimilarityMap::new(2, 0, pt(5, -3));
        let turned = s4.mapped(&quarter).unwrap();
        assert_eq!(similar_eq(&s4, &turned), Some(quarter));
        let eighth = SimilarityMap::new(1, 1, pt(0, 0));
        let stretched = s4.mapped(&eighth).unwrap();
        assert_eq!(similar_eq(&s4, &stretched), Some(eighth));
        assert_eq!(similar_eq(&stretched, &s4).map(|m| m.scale_exponent), Some(-1));
        let table = LegalCrossingTable::builtin();
        let big = scaled(&s4, 1);
        let round = compose(&decompose(&big).unwrap(), &table).unwrap();
        assert_eq!(similar_eq(&round, &big), Some(SimilarityMap::IDENTITY));
        let other = supertile(&SupertileSpec::new(4, Seed::default_with_body(Red))).unwrap();
        assert_eq!(similar_eq(&s4, &other), None);
    }

    #[test]
    fn seed_strings() {
        let s: Seed = "GG+R-G-".parse().unwrap();
        assert_eq!(s.to_string(), "GG+R-G-");
        assert_eq!("GG+R−G−".parse::<Seed>().unwrap(), s);
        assert!("GG+R-G".parse::<Seed>().is_err());
        assert!("XG+R-G-".parse::<Seed>().is_err());
        assert_eq!(Seed::all().count(), 128);
    }

    #[test]
    fn shared_leg_counterexample() {
        // right angle against acute angle along a shared leg
        let table = LegalCrossingTable::builtin();
        let d = SideDecoration::new(Red, Sense::Forward);
        let t1 = TriangleTile::new(pt(0, 0), pt(2, 0), pt(0, 2), Green, d, d, d).unwrap();
        let t2 = TriangleTile::new(pt(2, 0), pt(0, 0), pt(2, -2), Red, d.flipped(), d, d).unwrap();
        let p = Patch::from_tiles([t1, t2]).unwrap();
        assert!(validate(&p, &table, ValidationMode::SupertileBoundary).is_clean());
        let q = decompose(&p).unwrap();
        let report = validate(&q, &table, ValidationMode::SupertileBoundary);
        assert!(!report.is_clean());
        assert_eq!(report.color_violations.len(), 1);
    }
}
