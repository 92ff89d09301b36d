use thiserror::Error;

use crate::geometry::LatticePoint;

pub type Result<T, E = TilingError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("midpoint of {p} and {q} is not a lattice point; scale the patch up before decomposing")]
    Resolution { p: LatticePoint, q: LatticePoint },

    #[error(
        "similarity map (rotation {rotation45_steps}·45°, scale √2^{scale_exponent}) does not preserve the lattice"
    )]
    NonIntegralMap { rotation45_steps: u8, scale_exponent: i32 },

    #[error("invalid tile geometry: {0}")]
    Geometry(String),

    #[error("tile with right angle at {at} overlaps an existing tile")]
    Overlap { at: LatticePoint },

    #[error("tile size mismatch: patch uses squared leg length {expected}, tile has {found}")]
    SizeMismatch { expected: i64, found: i64 },

    #[error("patch is not connected")]
    DisconnectedPatch,

    #[error("{0} is not a vertex of the patch")]
    NotAVertex(LatticePoint),

    #[error("harvested crossing at {at} breaks a legal-crossing constraint: {reason}")]
    ProseConstraintViolation { at: LatticePoint, reason: String },

    #[error("patch is not composable at {at}: {reason}")]
    NotComposable { at: LatticePoint, reason: String },

    #[error("tile with right angle at {at} would belong to two squares")]
    ConflictingGrouping { at: LatticePoint },

    #[error("crown at {0} is incomplete (vertex on the patch boundary)")]
    IncompleteCrown(LatticePoint),

    #[error("period scan core is empty")]
    EmptyCore,

    #[error("oracle level {0} is too shallow; at least 8 is required")]
    OracleTooShallow(u32),

    #[error("schema error: {0}")]
    Schema(String),
}
