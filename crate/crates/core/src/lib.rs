//! Exact-arithmetic kernel for a non-periodic family of tilings by decorated
//! isosceles right triangles and the square tiles they group into.
//!
//! Coordinates are integers throughout. The substitution halves tiles in
//! place; comparisons across levels go through [`geometry::SimilarityMap`].

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod io;
pub mod rules;
pub mod squares;
pub mod substitution;
pub mod svg;
pub mod tiles;

pub use analysis::{
    c8_filling_census, crown_at, crown_census, crown_sigma_chain, period_scan, tile_census, CrownClass, FillingType,
    PeriodReport, TileClass,
};
pub use error::{Result, TilingError};
pub use geometry::{Direction8, LatticePoint, SimilarityMap};
pub use io::{parse, serialize, DocumentError, PatchDocument};
pub use rules::{
    classify_crossing, crossing_at, derive_crossing_table, validate, Crossing, CrossingClass, LegalCrossingTable,
    ValidationMode, ValidationReport,
};
pub use squares::{
    cut_square, group_into_squares, square_census, validate_squares, Equivalence, SquarePatch, SquareTile,
};
pub use substitution::{compose, decompose, decompose_tile, scaled, similar_eq, supertile, Seed, SupertileSpec};
pub use svg::{render_svg, SvgOptions};
pub use tiles::{Patch, Sense, SideDecoration, TileColor, TriangleTile};
