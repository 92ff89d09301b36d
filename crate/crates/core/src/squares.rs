//! Square tiles as quadruples of triangles meeting at a `C4` center.
//!
//! A square's outer sides are the four hypotenuses and its diagonals are
//! made of the eight legs. Cutting is the identity on the stored quadruple;
//! grouping collects the four tiles whose right angles meet at a legal `C4`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Result, TilingError};
use crate::geometry::{Direction8, LatticePoint};
use crate::rules::{
    check_c4_structure, classify_crossing, crossing_at, crossing_of_tiles, validate, CrossingClass, LegalCrossingTable,
    ValidationMode, ValidationReport,
};
use crate::tiles::{Patch, Side, SideDecoration, TileColor, TriangleTile};

/// Four tiles with right angles at a common center, ordered by the ray of
/// their `leg_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareTile {
    center: LatticePoint,
    quarters: [TriangleTile; 4],
}

impl SquareTile {
    pub fn new(quarters: [TriangleTile; 4]) -> Result<SquareTile> {
        let center = quarters[0].r();
        let mut q = quarters;
        q.sort_by_key(|t| t.leg_direction());
        for t in &q {
            if t.r() != center {
                return Err(TilingError::Geometry(format!("quarter {t} has its right angle away from {center}")));
            }
            if t.leg_norm2() != q[0].leg_norm2() {
                return Err(TilingError::SizeMismatch { expected: q[0].leg_norm2(), found: t.leg_norm2() });
            }
        }
        for i in 0..4 {
            if q[i].b() != q[(i + 1) % 4].a() {
                return Err(TilingError::Geometry(format!("quarters at {center} do not close up into a square")));
            }
        }
        let c = crossing_of_tiles(center, q.iter());
        check_c4_structure(&c).map_err(|reason| TilingError::Geometry(format!("square at {center}: {reason}")))?;
        Ok(SquareTile { center, quarters: q })
    }

    pub fn center(&self) -> LatticePoint {
        self.center
    }

    pub fn quarters(&self) -> &[TriangleTile; 4] {
        &self.quarters
    }

    /// Ray of the first quarter's `leg_a`; 0 for upright half-diagonals,
    /// 1 for diagonal ones.
    pub fn orientation(&self) -> Direction8 {
        self.quarters[0].leg_direction()
    }

    /// Outer sides, counterclockwise, as `(from, to, decoration)` with the
    /// decoration relative to `from → to`.
    pub fn outer_sides(&self) -> [(LatticePoint, LatticePoint, SideDecoration); 4] {
        self.quarters.map(|t| {
            let s = t.side(Side::Hyp);
            (s.from, s.to, s.decoration)
        })
    }

    /// The eight leg decorations, two per half-diagonal, each relative to
    /// center-outward.
    pub fn half_diagonals(&self) -> [(Direction8, SideDecoration); 8] {
        let mut out = [(Direction8::new(0), self.quarters[0].leg_a()); 8];
        for (i, t) in self.quarters.iter().enumerate() {
            out[2 * i] = (t.leg_direction(), t.leg_a());
            out[2 * i + 1] = (t.leg_direction().rotated(2), t.leg_b());
        }
        out
    }

    pub fn bodies(&self) -> [TileColor; 4] {
        self.quarters.map(|t| t.body())
    }
}

/// The four triangles of a square.
pub fn cut_square(s: &SquareTile) -> [TriangleTile; 4] {
    s.quarters
}

/// Squares of a common size and orientation with disjoint interiors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquarePatch {
    squares: Vec<SquareTile>,
}

impl SquarePatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_squares<I: IntoIterator<Item = SquareTile>>(squares: I) -> Result<SquarePatch> {
        let mut squares: Vec<SquareTile> = squares.into_iter().collect();
        squares.sort();
        if let Some(first) = squares.first() {
            let parity = first.orientation().index() % 2;
            if let Some(s) = squares.iter().find(|s| s.orientation().index() % 2 != parity) {
                return Err(TilingError::Geometry(format!("square at {} is not aligned with the others", s.center)));
            }
        }
        Patch::from_tiles(squares.iter().flat_map(cut_square))?;
        Ok(SquarePatch { squares })
    }

    pub fn squares(&self) -> &[SquareTile] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// All quarters as one triangle patch.
    pub fn to_patch(&self) -> Patch {
        Patch::from_tiles(self.squares.iter().flat_map(cut_square)).expect("square interiors are disjoint")
    }
}

/// Groups every legal `C4` with four right angles at its center into a
/// square; the remaining tiles are returned as leftover.
pub fn group_into_squares(p: &Patch, table: &LegalCrossingTable) -> Result<(SquarePatch, Patch)> {
    let mut owner: Vec<Option<LatticePoint>> = vec![None; p.len()];
    let mut squares = Vec::new();
    for v in p.vertices() {
        let ids: Vec<usize> = p.tile_ids_at(v).iter().copied().filter(|&i| p.tiles()[i].r() == v).collect();
        if ids.len() != 4 {
            continue;
        }
        let c = crossing_at(p, v)?;
        if classify_crossing(&c, table, false) != CrossingClass::C4 {
            continue;
        }
        for &i in &ids {
            if owner[i].is_some() {
                return Err(TilingError::ConflictingGrouping { at: p.tiles()[i].r() });
            }
            owner[i] = Some(v);
        }
        let quarters = [ids[0], ids[1], ids[2], ids[3]].map(|i| p.tiles()[i]);
        squares.push(SquareTile::new(quarters)?);
    }
    let leftover = p.tiles().iter().zip(&owner).filter(|(_, o)| o.is_none()).map(|(t, _)| *t);
    Ok((SquarePatch::from_squares(squares)?, Patch::from_tiles(leftover)?))
}

/// Validates the cut triangle patch.
pub fn validate_squares(sp: &SquarePatch, table: &LegalCrossingTable, mode: ValidationMode) -> ValidationReport {
    validate(&sp.to_patch(), table, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Equivalence {
    Translation,
    TranslationRotation,
}

/// One quarter of a square class: body and the three side decorations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuarterClass {
    pub body: TileColor,
    pub leg_a: SideDecoration,
    pub leg_b: SideDecoration,
    pub hyp: SideDecoration,
}

/// Canonical form of a square. `orientation` is present only for the
/// translation-only census.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareClass {
    pub orientation: Option<u8>,
    pub quarters: [QuarterClass; 4],
}

impl SquareClass {
    pub fn of(s: &SquareTile, up_to: Equivalence) -> SquareClass {
        let q = s.quarters.map(|t| QuarterClass { body: t.body(), leg_a: t.leg_a(), leg_b: t.leg_b(), hyp: t.hyp() });
        match up_to {
            Equivalence::Translation => SquareClass { orientation: Some(s.orientation().index() as u8), quarters: q },
            Equivalence::TranslationRotation => {
                let best = (0..4)
                    .map(|k| [q[k], q[(k + 1) % 4], q[(k + 2) % 4], q[(k + 3) % 4]])
                    .min()
                    .expect("four rotations");
                SquareClass { orientation: None, quarters: best }
            }
        }
    }
}

pub fn square_census(sp: &SquarePatch, up_to: Equivalence) -> BTreeMap<SquareClass, usize> {
    let mut out = BTreeMap::new();
    for s in &sp.squares {
        *out.entry(SquareClass::of(s, up_to)).or_default() += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{decompose_tile, supertile, Seed, SupertileSpec};
    use crate::tiles::Sense;

    fn first_square(level: u32) -> SquareTile {
        let s = supertile(&SupertileSpec::new(level, Seed::default())).unwrap();
        let (sp, _) = group_into_squares(&s, &LegalCrossingTable::builtin()).unwrap();
        sp.squares()[0]
    }

    #[test]
    fn cut_then_group_round_trips() {
        let sq = first_square(6);
        let p = Patch::from_tiles(cut_square(&sq)).unwrap();
        let (sp, left) = group_into_squares(&p, &LegalCrossingTable::builtin()).unwrap();
        assert_eq!(sp.squares(), &[sq]);
        assert!(left.is_empty());
        assert_eq!(p.area2(), 4 * sq.quarters()[0].leg_norm2());
    }

    #[test]
    fn two_children_form_no_square() {
        let t = SupertileSpec::new(1, Seed::default()).seed_tile();
        let pair = decompose_tile(&t).unwrap();
        let p = Patch::from_tiles([pair.left, pair.right]).unwrap();
        let (sp, left) = group_into_squares(&p, &LegalCrossingTable::builtin()).unwrap();
        assert!(sp.is_empty());
        assert_eq!(left.len(), 2);
    }

    #[test]
    fn single_square_is_clean_and_one_class() {
        let sq = first_square(6);
        let sp = SquarePatch::from_squares([sq]).unwrap();
        let rep = validate_squares(&sp, &LegalCrossingTable::builtin(), ValidationMode::SupertileBoundary);
        assert!(rep.is_clean(), "{rep:?}");
        assert_eq!(square_census(&sp, Equivalence::Translation).len(), 1);
    }

    #[test]
    fn views_are_consistent() {
        let sq = first_square(6);
        let outer = sq.outer_sides();
        for i in 0..4 {
            assert_eq!(outer[i].1, outer[(i + 1) % 4].0);
        }
        let halves = sq.half_diagonals();
        for i in 0..4 {
            // adjacent quarters share a half-diagonal
            assert_eq!(halves[2 * i + 1].0, halves[(2 * i + 2) % 8].0);
            assert_eq!(halves[2 * i + 1].1.color, halves[(2 * i + 2) % 8].1.color);
        }
    }

    #[test]
    fn mismatched_side_is_rejected_or_reported() {
        let sq = first_square(6);
        let mut q = *sq.quarters();
        let d = q[0].leg_b();
        q[0] = q[0].with_decoration(Side::LegB, SideDecoration::new(d.color.other(), Sense::Forward));
        assert!(SquareTile::new(q).is_err());
    }

    #[test]
    fn rotation_census_merges_rotated_squares() {
        let sq = first_square(6);
        let rot = crate::geometry::SimilarityMap::new(2, 0, LatticePoint::ORIGIN);
        let other = SquareTile::new(sq.quarters().map(|t| t.mapped(&rot).unwrap())).unwrap();
        let a = SquareClass::of(&sq, Equivalence::TranslationRotation);
        let b = SquareClass::of(&other, Equivalence::TranslationRotation);
        assert_eq!(a, b);
        assert_ne!(SquareClass::of(&sq, Equivalence::Translation), SquareClass::of(&other, Equivalence::Translation));
    }
}
