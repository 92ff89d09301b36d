//! Decorated isosceles right triangles and the [`Patch`] container.
//!
//! A tile is stored by its right-angle vertex `r` and its two acute vertices
//! `a`, `b`, always with `b − r = rot90ccw(a − r)`. Mirror images are
//! therefore not representable. Each side carries a [`SideDecoration`]
//! relative to its canonical direction `r→a`, `r→b` or `a→b`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TilingError};
use crate::geometry::{Direction8, LatticePoint, SimilarityMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TileColor {
    Red,
    Green,
}

impl TileColor {
    pub fn other(self) -> Self {
        match self {
            TileColor::Red => TileColor::Green,
            TileColor::Green => TileColor::Red,
        }
    }

    pub fn letter(self) -> char {
        match self {
            TileColor::Red => 'R',
            TileColor::Green => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'R' => Some(TileColor::Red),
            'G' => Some(TileColor::Green),
            _ => None,
        }
    }
}

/// Whether a side's arrow runs along its canonical direction or against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sense {
    Forward,
    Backward,
}

impl Sense {
    pub fn flipped(self) -> Self {
        match self {
            Sense::Forward => Sense::Backward,
            Sense::Backward => Sense::Forward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideDecoration {
    pub color: TileColor,
    pub sense: Sense,
}

impl SideDecoration {
    pub const fn new(color: TileColor, sense: Sense) -> Self {
        SideDecoration { color, sense }
    }

    /// The same arrow described against the opposite canonical direction.
    pub fn flipped(self) -> Self {
        SideDecoration::new(self.color, self.sense.flipped())
    }

    /// All four decorations in a fixed order.
    pub fn all() -> [SideDecoration; 4] {
        use Sense::*;
        use TileColor::*;
        [
            SideDecoration::new(Red, Forward),
            SideDecoration::new(Red, Backward),
            SideDecoration::new(Green, Forward),
            SideDecoration::new(Green, Backward),
        ]
    }
}

impl fmt::Display for SideDecoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sense {
            Sense::Forward => '+',
            Sense::Backward => '-',
        };
        write!(f, "{}{}", self.color.letter(), s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SideKind {
    Leg,
    Hypotenuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    LegA,
    LegB,
    Hyp,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::LegA, Side::LegB, Side::Hyp];

    pub fn kind(self) -> SideKind {
        match self {
            Side::Hyp => SideKind::Hypotenuse,
            _ => SideKind::Leg,
        }
    }
}

/// Which vertex of a tile a point is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexRole {
    R,
    A,
    B,
}

impl VertexRole {
    /// The side not incident to this vertex.
    pub fn opposite_side(self) -> Side {
        match self {
            VertexRole::R => Side::Hyp,
            VertexRole::A => Side::LegB,
            VertexRole::B => Side::LegA,
        }
    }
}

/// The wedge a tile occupies at one of its vertices: from ray `start`
/// counterclockwise over `span` eighths of a turn (2 at the right angle,
/// 1 at the acute vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub start: Direction8,
    pub span: u8,
    pub role: VertexRole,
    pub body: TileColor,
}

impl Corner {
    pub fn end(&self) -> Direction8 {
        self.start.rotated(self.span as i64)
    }

    /// Indices of the eighth-turn sectors covered (sector `k` lies between
    /// rays `k` and `k + 1`).
    pub fn sectors(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.span as i64).map(move |i| self.start.rotated(i).index())
    }
}

/// A side of a placed tile with its canonical endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideView {
    pub side: Side,
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub decoration: SideDecoration,
}

impl SideView {
    pub fn kind(&self) -> SideKind {
        self.side.kind()
    }

    /// `(tail, head)` of the arrow the decoration denotes.
    pub fn arrow(&self) -> (LatticePoint, LatticePoint) {
        match self.decoration.sense {
            Sense::Forward => (self.from, self.to),
            Sense::Backward => (self.to, self.from),
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.from, self.to)
    }
}

/// Unordered segment between two lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey(pub LatticePoint, pub LatticePoint);

impl EdgeKey {
    pub fn new(p: LatticePoint, q: LatticePoint) -> Self {
        if p <= q {
            EdgeKey(p, q)
        } else {
            EdgeKey(q, p)
        }
    }
}

/// A placed, decorated isosceles right triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleTile {
    r: LatticePoint,
    a: LatticePoint,
    b: LatticePoint,
    body: TileColor,
    leg_a: SideDecoration,
    leg_b: SideDecoration,
    hyp: SideDecoration,
}

impl TriangleTile {
    pub fn new(
        r: LatticePoint,
        a: LatticePoint,
        b: LatticePoint,
        body: TileColor,
        leg_a: SideDecoration,
        leg_b: SideDecoration,
        hyp: SideDecoration,
    ) -> Result<Self> {
        let u = a - r;
        if u == LatticePoint::ORIGIN {
            return Err(TilingError::Geometry(format!("zero-size tile at {r}")));
        }
        if Direction8::of_vector(u).is_none() {
            return Err(TilingError::Geometry(format!("leg {r}→{a} is not along one of the eight lattice directions")));
        }
        let v = b - r;
        if v != u.rot90ccw() {
            let reason = if v == u.rot90cw() {
                "negatively oriented frame (reflected tile)"
            } else {
                "not an isosceles right triangle with right angle at r"
            };
            return Err(TilingError::Geometry(format!("{reason}: r={r}, a={a}, b={b}")));
        }
        Ok(TriangleTile { r, a, b, body, leg_a, leg_b, hyp })
    }

    pub fn r(&self) -> LatticePoint {
        self.r
    }
    pub fn a(&self) -> LatticePoint {
        self.a
    }
    pub fn b(&self) -> LatticePoint {
        self.b
    }
    pub fn body(&self) -> TileColor {
        self.body
    }
    pub fn leg_a(&self) -> SideDecoration {
        self.leg_a
    }
    pub fn leg_b(&self) -> SideDecoration {
        self.leg_b
    }
    pub fn hyp(&self) -> SideDecoration {
        self.hyp
    }

    pub fn decoration(&self, side: Side) -> SideDecoration {
        match side {
            Side::LegA => self.leg_a,
            Side::LegB => self.leg_b,
            Side::Hyp => self.hyp,
        }
    }

    /// Copy with one side decoration replaced.
    pub fn with_decoration(mut self, side: Side, d: SideDecoration) -> Self {
        match side {
            Side::LegA => self.leg_a = d,
            Side::LegB => self.leg_b = d,
            Side::Hyp => self.hyp = d,
        }
        self
    }

    pub fn with_body(mut self, body: TileColor) -> Self {
        self.body = body;
        self
    }

    pub fn vertices(&self) -> [LatticePoint; 3] {
        [self.r, self.a, self.b]
    }

    pub fn leg_vector(&self) -> LatticePoint {
        self.a - self.r
    }

    /// Direction of `a − r`.
    pub fn leg_direction(&self) -> Direction8 {
        Direction8::of_vector(self.leg_vector()).expect("constructor checked").0
    }

    /// Lattice steps along a leg: its length for axis-aligned legs, its
    /// length / √2 for diagonal legs.
    pub fn leg_steps(&self) -> i64 {
        Direction8::of_vector(self.leg_vector()).expect("constructor checked").1
    }

    /// Squared leg length, which is also twice the area.
    pub fn leg_norm2(&self) -> i64 {
        self.leg_vector().norm2()
    }

    pub fn side(&self, side: Side) -> SideView {
        let (from, to) = match side {
            Side::LegA => (self.r, self.a),
            Side::LegB => (self.r, self.b),
            Side::Hyp => (self.a, self.b),
        };
        SideView { side, from, to, decoration: self.decoration(side) }
    }

    pub fn sides(&self) -> [SideView; 3] {
        [self.side(Side::LegA), self.side(Side::LegB), self.side(Side::Hyp)]
    }

    pub fn role_of(&self, v: LatticePoint) -> Option<VertexRole> {
        if v == self.r {
            Some(VertexRole::R)
        } else if v == self.a {
            Some(VertexRole::A)
        } else if v == self.b {
            Some(VertexRole::B)
        } else {
            None
        }
    }

    pub fn corner_at(&self, v: LatticePoint) -> Option<Corner> {
        let role = self.role_of(v)?;
        let dir = |p: LatticePoint| Direction8::of_vector(p - v).expect("tile sides lie on lattice directions").0;
        let (start, span) = match role {
            VertexRole::R => (dir(self.a), 2),
            VertexRole::A => (dir(self.b), 1),
            VertexRole::B => (dir(self.r), 1),
        };
        Some(Corner { start, span, role, body: self.body })
    }

    /// Sides incident to `v`.
    pub fn sides_at(&self, v: LatticePoint) -> impl Iterator<Item = SideView> + '_ {
        self.sides().into_iter().filter(move |s| s.from == v || s.to == v)
    }

    /// Image under a similarity map; decorations are carried along with the
    /// frame, which similarities preserve.
    pub fn mapped(&self, m: &SimilarityMap) -> Result<TriangleTile> {
        TriangleTile::new(
            m.apply(self.r)?,
            m.apply(self.a)?,
            m.apply(self.b)?,
            self.body,
            self.leg_a,
            self.leg_b,
            self.hyp,
        )
    }

    /// Strict interior containment test for a point given in doubled
    /// coordinates.
    fn contains_doubled_strict(&self, p2: LatticePoint) -> bool {
        let vs = self.vertices();
        (0..3).all(|i| {
            let s = vs[i] * 2;
            let e = vs[(i + 1) % 3] * 2;
            (e - s).cross(p2 - s) > 0
        })
    }

    /// Whether the interiors of two tiles intersect.
    pub fn interiors_overlap(&self, other: &TriangleTile) -> bool {
        fn separated(t: &TriangleTile, u: &TriangleTile) -> bool {
            let vs = t.vertices();
            (0..3).any(|i| {
                let s = vs[i];
                let e = vs[(i + 1) % 3];
                u.vertices().iter().all(|&q| (e - s).cross(q - s) <= 0)
            })
        }
        !(separated(self, other) || separated(other, self))
    }

    fn bbox(&self) -> (LatticePoint, LatticePoint) {
        let vs = self.vertices();
        let lo = LatticePoint::new(vs.iter().map(|p| p.x).min().unwrap(), vs.iter().map(|p| p.y).min().unwrap());
        let hi = LatticePoint::new(vs.iter().map(|p| p.x).max().unwrap(), vs.iter().map(|p| p.y).max().unwrap());
        (lo, hi)
    }

    /// `r + a + b`, three times the centroid.
    pub fn centroid_times_three(&self) -> LatticePoint {
        self.r + self.a + self.b
    }
}

impl fmt::Display for TriangleTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} r={} a={} b={} legA={} legB={} hyp={}]",
            self.body.letter(),
            self.r,
            self.a,
            self.b,
            self.leg_a,
            self.leg_b,
            self.hyp
        )
    }
}

pub fn make_tile(
    r: LatticePoint,
    a: LatticePoint,
    b: LatticePoint,
    body: TileColor,
    dec_leg_a: SideDecoration,
    dec_leg_b: SideDecoration,
    dec_hyp: SideDecoration,
) -> Result<TriangleTile> {
    TriangleTile::new(r, a, b, body, dec_leg_a, dec_leg_b, dec_hyp)
}

type GridCell = (i64, i64);

/// Single-writer accumulator for patches; checks overlap and size on each
/// insertion using a uniform grid.
#[derive(Clone, Debug, Default)]
pub struct PatchBuilder {
    tiles: Vec<TriangleTile>,
    leg_norm2: Option<i64>,
    cell: i64,
    grid: HashMap<GridCell, Vec<usize>>,
}

impl PatchBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn cell_of(&self, t: &TriangleTile) -> GridCell {
        let (lo, _) = t.bbox();
        (lo.x.div_euclid(self.cell), lo.y.div_euclid(self.cell))
    }

    pub fn insert(&mut self, t: TriangleTile) -> Result<()> {
        match self.leg_norm2 {
            None => {
                self.leg_norm2 = Some(t.leg_norm2());
                self.cell = 2 * t.leg_steps();
            }
            Some(n) if n != t.leg_norm2() => {
                return Err(TilingError::SizeMismatch { expected: n, found: t.leg_norm2() });
            }
            Some(_) => {}
        }
        let (cx, cy) = self.cell_of(&t);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(cx + dx, cy + dy)) {
                    if ids.iter().any(|&i| self.tiles[i].interiors_overlap(&t)) {
                        return Err(TilingError::Overlap { at: t.r() });
                    }
                }
            }
        }
        self.grid.entry((cx, cy)).or_default().push(self.tiles.len());
        self.tiles.push(t);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn build(self) -> Patch {
        Patch::index(self.tiles, self.leg_norm2)
    }
}

/// A finite set of equally sized tiles with pairwise disjoint interiors,
/// kept in canonical `(r, a, b)` order, with vertex and edge indexes.
#[derive(Clone, Debug, Default)]
pub struct Patch {
    tiles: Vec<TriangleTile>,
    leg_norm2: Option<i64>,
    by_frame: HashMap<(LatticePoint, LatticePoint, LatticePoint), usize>,
    vertex_index: BTreeMap<LatticePoint, Vec<usize>>,
    edge_index: HashMap<EdgeKey, Vec<usize>>,
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        self.tiles == other.tiles
    }
}

impl Eq for Patch {}

impl Patch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tiles<I: IntoIterator<Item = TriangleTile>>(tiles: I) -> Result<Patch> {
        let mut b = PatchBuilder::new();
        for t in tiles {
            b.insert(t)?;
        }
        Ok(b.build())
    }

    fn index(mut tiles: Vec<TriangleTile>, leg_norm2: Option<i64>) -> Patch {
        tiles.sort();
        let mut by_frame = HashMap::with_capacity(tiles.len());
        let mut vertex_index: BTreeMap<LatticePoint, Vec<usize>> = BTreeMap::new();
        let mut edge_index: HashMap<EdgeKey, Vec<usize>> = HashMap::with_capacity(tiles.len() * 2);
        for (i, t) in tiles.iter().enumerate() {
            by_frame.insert((t.r(), t.a(), t.b()), i);
            for v in t.vertices() {
                vertex_index.entry(v).or_default().push(i);
            }
            for s in t.sides() {
                edge_index.entry(s.key()).or_default().push(i);
            }
        }
        Patch { tiles, leg_norm2, by_frame, vertex_index, edge_index }
    }

    /// New patch with `t` added.
    pub fn add_tile(&self, t: TriangleTile) -> Result<Patch> {
        let mut b = PatchBuilder::new();
        for &u in &self.tiles {
            b.insert(u)?;
        }
        b.insert(t)?;
        Ok(b.build())
    }

    pub fn tiles(&self) -> &[TriangleTile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Squared leg length shared by all tiles.
    pub fn leg_norm2(&self) -> Option<i64> {
        self.leg_norm2
    }

    pub fn find(&self, r: LatticePoint, a: LatticePoint, b: LatticePoint) -> Option<&TriangleTile> {
        self.by_frame.get(&(r, a, b)).map(|&i| &self.tiles[i])
    }

    pub fn position(&self, t: &TriangleTile) -> Option<usize> {
        self.by_frame.get(&(t.r(), t.a(), t.b())).copied()
    }

    /// All tile vertices in sorted order.
    pub fn vertices(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.vertex_index.keys().copied()
    }

    pub fn is_vertex(&self, v: LatticePoint) -> bool {
        self.vertex_index.contains_key(&v)
    }

    pub fn tiles_at(&self, v: LatticePoint) -> impl Iterator<Item = &TriangleTile> + '_ {
        self.vertex_index.get(&v).into_iter().flatten().map(move |&i| &self.tiles[i])
    }

    pub fn tile_ids_at(&self, v: LatticePoint) -> &[usize] {
        self.vertex_index.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, &[usize])> + '_ {
        self.edge_index.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn tiles_on_edge(&self, e: &EdgeKey) -> &[usize] {
        self.edge_index.get(e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sum of the tile corner angles at `v`, in eighths of a turn.
    pub fn angle_units_at(&self, v: LatticePoint) -> u32 {
        self.tiles_at(v).filter_map(|t| t.corner_at(v)).map(|c| c.span as u32).sum()
    }

    /// Vertices completely surrounded by tiles.
    pub fn is_interior_vertex(&self, v: LatticePoint) -> bool {
        self.angle_units_at(v) == 8
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.vertices().filter(move |&v| self.is_interior_vertex(v))
    }

    /// A tile is inner when none of its sides is on the patch boundary.
    pub fn is_inner_tile(&self, t: &TriangleTile) -> bool {
        t.sides().iter().all(|s| self.tiles_on_edge(&s.key()).len() == 2)
    }

    /// Twice the covered area.
    pub fn area2(&self) -> i64 {
        self.tiles.iter().map(TriangleTile::leg_norm2).sum()
    }

    pub fn mapped(&self, m: &SimilarityMap) -> Result<Patch> {
        let tiles: Vec<_> = self.tiles.iter().map(|t| t.mapped(m)).collect::<Result<_>>()?;
        let n = tiles.first().map(TriangleTile::leg_norm2);
        Ok(Patch::index(tiles, n))
    }

    /// Whether the union of the tiles is connected (tiles touching at a
    /// single vertex count as connected).
    pub fn is_connected(&self) -> bool {
        if self.tiles.is_empty() {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.tiles.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for ids in self.vertex_index.values() {
            for w in ids.windows(2) {
                let (x, y) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if x != y {
                    parent[x] = y;
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..self.tiles.len()).all(|i| find(&mut parent, i) == root)
    }

    /// Vertices on the topological boundary of the union, each flagged as
    /// extreme when the union's angle there is below a straight angle.
    pub fn boundary_vertices(&self) -> Result<Vec<BoundaryVertex>> {
        if !self.is_connected() {
            return Err(TilingError::DisconnectedPatch);
        }
        Ok(self
            .vertices()
            .filter_map(|v| {
                let units = self.angle_units_at(v);
                (units < 8).then_some(BoundaryVertex { point: v, angle_units: units, extreme: units < 4 })
            })
            .collect())
    }

    /// Whether `p` (doubled coordinates) lies strictly inside some tile.
    pub fn covers_doubled_strict(&self, p2: LatticePoint) -> bool {
        self.tiles.iter().any(|t| t.contains_doubled_strict(p2))
    }

    /// Sub-patch of the tiles accepted by `keep`.
    pub fn filtered<F: FnMut(&TriangleTile) -> bool>(&self, mut keep: F) -> Patch {
        let tiles: Vec<_> = self.tiles.iter().copied().filter(|t| keep(t)).collect();
        let n = tiles.first().map(TriangleTile::leg_norm2);
        Patch::index(tiles, n)
    }

    /// Distinct points that are vertices of the given tiles.
    pub fn vertex_set(tiles: &[TriangleTile]) -> HashSet<LatticePoint> {
        tiles.iter().flat_map(|t| t.vertices()).collect()
    }
}

/// A vertex on the boundary of a patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryVertex {
    pub point: LatticePoint,
    /// Interior angle of the union at the vertex, in eighths of a turn.
    pub angle_units: u32,
    pub extreme: bool,
}

pub fn add_tile(p: &Patch, t: TriangleTile) -> Result<Patch> {
    p.add_tile(t)
}

pub fn boundary_vertices(p: &Patch) -> Result<Vec<BoundaryVertex>> {
    p.boundary_vertices()
}

#[cfg(test)]
mod tests {
    use super::*;
    use TileColor::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    const RF: SideDecoration = SideDecoration::new(Red, Sense::Forward);
    const GB: SideDecoration = SideDecoration::new(Green, Sense::Backward);

    fn tile(r: (i64, i64), a: (i64, i64), b: (i64, i64), body: TileColor) -> Result<TriangleTile> {
        make_tile(pt(r.0, r.1), pt(a.0, a.1), pt(b.0, b.1), body, RF, GB, RF)
    }

    #[test]
    fn make_tile_examples() {
        assert!(tile((0, 0), (2, 0), (0, 2), Green).is_ok());
        assert!(matches!(tile((0, 0), (2, 0), (0, -2), Green), Err(TilingError::Geometry(_))));
        assert!(matches!(tile((0, 0), (2, 1), (-1, 2), Green), Err(TilingError::Geometry(_))));
        assert!(matches!(tile((0, 0), (0, 0), (0, 0), Green), Err(TilingError::Geometry(_))));
        assert!(tile((0, 0), (1, 1), (-1, 1), Red).is_ok());
    }

    #[test]
    fn add_tile_examples() {
        let t = tile((0, 0), (2, 0), (0, 2), Green).unwrap();
        let p = Patch::new().add_tile(t).unwrap();
        assert_eq!(p.len(), 1);
        assert!(matches!(p.add_tile(t), Err(TilingError::Overlap { .. })));
        let big = tile((10, 0), (14, 0), (10, 4), Red).unwrap();
        assert!(matches!(p.add_tile(big), Err(TilingError::SizeMismatch { .. })));
        // same-size tile overlapping partially
        let shifted = tile((1, 0), (3, 0), (1, 2), Red).unwrap();
        assert!(matches!(p.add_tile(shifted), Err(TilingError::Overlap { .. })));
        // the mirror across the hypotenuse only touches along a side
        let across = tile((2, 2), (0, 2), (2, 0), Red).unwrap();
        assert_eq!(p.add_tile(across).unwrap().len(), 2);
    }

    #[test]
    fn corners_cover_the_right_wedges() {
        let t = tile((0, 0), (2, 0), (0, 2), Green).unwrap();
        let c = t.corner_at(pt(0, 0)).unwrap();
        assert_eq!((c.start.index(), c.span), (0, 2));
        let c = t.corner_at(pt(2, 0)).unwrap();
        assert_eq!((c.start.index(), c.span), (3, 1));
        let c = t.corner_at(pt(0, 2)).unwrap();
        assert_eq!((c.start.index(), c.span), (6, 1));
        assert!(t.corner_at(pt(1, 1)).is_none());
    }

    #[test]
    fn single_tile_boundary_is_three_extreme_corners() {
        let p = Patch::from_tiles([tile((0, 0), (2, 0), (0, 2), Green).unwrap()]).unwrap();
        let bv = p.boundary_vertices().unwrap();
        assert_eq!(bv.len(), 3);
        assert!(bv.iter().all(|v| v.extreme));
    }

    #[test]
    fn shared_leg_boundary_angles() {
        // Mirror images across the shared leg: the union is a larger
        // triangle and the right-angle vertex sits on a straight side.
        let t1 = tile((0, 0), (2, 0), (0, 2), Green).unwrap();
        let t2 = tile((0, 0), (0, -2), (2, 0), Red).unwrap();
        let p = Patch::from_tiles([t1, t2]).unwrap();
        let bv = p.boundary_vertices().unwrap();
        assert_eq!(bv.len(), 4);
        let flag = |x, y| bv.iter().find(|v| v.point == pt(x, y)).unwrap().extreme;
        assert!(!flag(0, 0));
        assert!(flag(2, 0));
        // Right angle against an acute angle: a parallelogram, all four
        // corners below 180°.
        let t3 = tile((2, 0), (0, 0), (2, -2), Red).unwrap();
        let q = Patch::from_tiles([t1, t3]).unwrap();
        let bv = q.boundary_vertices().unwrap();
        assert_eq!(bv.len(), 4);
        assert!(bv.iter().all(|v| v.extreme));
        assert_eq!(bv.iter().find(|v| v.point == pt(0, 0)).unwrap().angle_units, 3);
    }

    #[test]
    fn disconnected_patch_is_rejected() {
        let t1 = tile((0, 0), (2, 0), (0, 2), Green).unwrap();
        let t2 = tile((10, 10), (12, 10), (10, 12), Green).unwrap();
        let p = Patch::from_tiles([t1, t2]).unwrap();
        assert_eq!(p.boundary_vertices(), Err(TilingError::DisconnectedPatch));
    }

    #[test]
    fn decoration_family_sizes() {
        // body × three sides × four decorations, then four quarter turns
        let mut family = HashSet::new();
        let base = [(pt(2, 0), pt(0, 2)), (pt(0, 2), pt(-2, 0)), (pt(-2, 0), pt(0, -2)), (pt(0, -2), pt(2, 0))];
        for (a, b) in base {
            for body in [Red, Green] {
                for la in SideDecoration::all() {
                    for lb in SideDecoration::all() {
                        for h in SideDecoration::all() {
                            family.insert(make_tile(pt(0, 0), a, b, body, la, lb, h).unwrap());
                        }
                    }
                }
            }
        }
        assert_eq!(family.len(), 512);
        assert_eq!(family.len() / 4, 2 * 4 * 4 * 4);
    }

    #[test]
    fn edge_index_is_consistent() {
        let t1 = tile((0, 0), (2, 0), (0, 2), Green).unwrap();
        let t2 = tile((2, 2), (0, 2), (2, 0), Red).unwrap();
        let p = Patch::from_tiles([t1, t2]).unwrap();
        for (key, ids) in p.edges() {
            for &i in ids {
                assert!(p.tiles()[i].sides().iter().any(|s| s.key() == *key));
            }
        }
        assert_eq!(p.tiles_on_edge(&EdgeKey::new(pt(2, 0), pt(0, 2))).len(), 2);
        assert!(p.tiles().iter().all(|t| t.b() - t.r() == (t.a() - t.r()).rot90ccw()));
    }
}
