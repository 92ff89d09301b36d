//! Exact integer-lattice geometry: points, the eight compass directions and
//! the similarity maps (rotations by multiples of 45° combined with powers of
//! √2) that keep lattice points on the lattice.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TilingError};

/// A point of the integer lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// Rotation by 90° counterclockwise about the origin.
    pub fn rot90ccw(self) -> Self {
        LatticePoint::new(-self.y, self.x)
    }

    pub fn rot90cw(self) -> Self {
        LatticePoint::new(self.y, -self.x)
    }

    pub fn dot(self, other: Self) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Self) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm2(self) -> i64 {
        self.dot(self)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl Mul<i64> for LatticePoint {
    type Output = LatticePoint;
    fn mul(self, k: i64) -> Self {
        LatticePoint::new(self.x * k, self.y * k)
    }
}

/// `center + rot90ccw(p - center)`.
pub fn rotate90ccw_about(p: LatticePoint, center: LatticePoint) -> LatticePoint {
    center + (p - center).rot90ccw()
}

pub fn rotate90cw_about(p: LatticePoint, center: LatticePoint) -> LatticePoint {
    center + (p - center).rot90cw()
}

/// Exact midpoint. Fails when a coordinate sum is odd, which means the patch
/// was not scaled up far enough before decomposing.
pub fn midpoint(p: LatticePoint, q: LatticePoint) -> Result<LatticePoint> {
    let s = p + q;
    if s.x % 2 != 0 || s.y % 2 != 0 {
        return Err(TilingError::Resolution { p, q });
    }
    Ok(LatticePoint::new(s.x / 2, s.y / 2))
}

/// One of the eight compass directions; `Direction8(d)` points at angle 45°·d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction8(u8);

const STEPS: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

impl Direction8 {
    pub const EAST: Direction8 = Direction8(0);

    pub fn new(d: i64) -> Self {
        Direction8(d.rem_euclid(8) as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Direction8> {
        (0..8).map(Direction8)
    }

    pub fn step(self) -> LatticePoint {
        let (x, y) = STEPS[self.index()];
        LatticePoint::new(x, y)
    }

    /// Rotation by `k`·45°.
    pub fn rotated(self, k: i64) -> Self {
        Direction8::new(self.0 as i64 + k)
    }

    pub fn opposite(self) -> Self {
        self.rotated(4)
    }

    pub fn is_diagonal(self) -> bool {
        self.0 % 2 == 1
    }

    /// Decomposes a nonzero vector lying on one of the eight lattice
    /// directions into its direction and its number of unit steps.
    pub fn of_vector(v: LatticePoint) -> Option<(Direction8, i64)> {
        if v == LatticePoint::ORIGIN {
            return None;
        }
        let on_line = v.x == 0 || v.y == 0 || v.x.abs() == v.y.abs();
        if !on_line {
            return None;
        }
        let n = v.x.abs().max(v.y.abs());
        let unit = LatticePoint::new(v.x / n, v.y / n);
        let d = STEPS.iter().position(|&(x, y)| x == unit.x && y == unit.y)?;
        Some((Direction8(d as u8), n))
    }
}

impl fmt::Display for Direction8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", 45 * self.0 as u32)
    }
}

/// `p ↦ A·p + translation`, where `A` rotates by 45°·`rotation45_steps` and
/// scales by √2^`scale_exponent`.
///
/// On the lattice, a 45° turn always comes with a √2 stretch through
/// `(x, y) ↦ (x − y, x + y)`, so the map only stays integral when
/// `rotation45_steps + scale_exponent` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimilarityMap {
    pub rotation45_steps: u8,
    pub scale_exponent: i32,
    pub translation: LatticePoint,
}

impl SimilarityMap {
    pub const IDENTITY: SimilarityMap =
        SimilarityMap { rotation45_steps: 0, scale_exponent: 0, translation: LatticePoint::ORIGIN };

    pub fn new(rotation45_steps: i64, scale_exponent: i32, translation: LatticePoint) -> Self {
        SimilarityMap { rotation45_steps: rotation45_steps.rem_euclid(8) as u8, scale_exponent, translation }
    }

    pub fn translation(t: LatticePoint) -> Self {
        SimilarityMap::new(0, 0, t)
    }

    /// Uniform integer scaling by `2^k` about the origin.
    pub fn doubling(k: u32) -> Self {
        SimilarityMap::new(0, 2 * k as i32, LatticePoint::ORIGIN)
    }

    pub fn is_integral(&self) -> bool {
        (self.rotation45_steps as i32 + self.scale_exponent) % 2 == 0
    }

    fn non_integral(&self) -> TilingError {
        TilingError::NonIntegralMap { rotation45_steps: self.rotation45_steps, scale_exponent: self.scale_exponent }
    }

    /// The linear part applied to `p`.
    pub fn apply_linear(&self, p: LatticePoint) -> Result<LatticePoint> {
        if !self.is_integral() {
            return Err(self.non_integral());
        }
        let k = self.rotation45_steps as i32;
        let mut q = p;
        if k % 2 == 1 {
            q = LatticePoint::new(q.x - q.y, q.x + q.y);
        }
        for _ in 0..k / 2 {
            q = q.rot90ccw();
        }
        let e = (self.scale_exponent - k % 2) / 2;
        if e >= 0 {
            Ok(q * (1i64 << e))
        } else {
            let d = 1i64 << (-e);
            if q.x % d != 0 || q.y % d != 0 {
                return Err(self.non_integral());
            }
            Ok(LatticePoint::new(q.x / d, q.y / d))
        }
    }

    pub fn apply(&self, p: LatticePoint) -> Result<LatticePoint> {
        Ok(self.apply_linear(p)? + self.translation)
    }

    /// Preimage of `q`; fails when `q` has no lattice preimage.
    pub fn apply_inverse(&self, q: LatticePoint) -> Result<LatticePoint> {
        if !self.is_integral() {
            return Err(self.non_integral());
        }
        let linear = SimilarityMap::new(-(self.rotation45_steps as i64), -self.scale_exponent, LatticePoint::ORIGIN);
        linear.apply_linear(q - self.translation)
    }

    /// The inverse map, when its translation is integral.
    pub fn inverse(&self) -> Result<SimilarityMap> {
        if !self.is_integral() {
            return Err(self.non_integral());
        }
        let linear = SimilarityMap::new(-(self.rotation45_steps as i64), -self.scale_exponent, LatticePoint::ORIGIN);
        let t = linear.apply_linear(-self.translation)?;
        Ok(SimilarityMap { translation: t, ..linear })
    }
}

pub fn apply_similarity(m: &SimilarityMap, p: LatticePoint) -> Result<LatticePoint> {
    m.apply(p)
}
