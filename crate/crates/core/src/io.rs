//! JSON patch documents.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "triangles",
//!   "unit": 2,
//!   "tiles": [
//!     {"r":[0,0],"a":[2,0],"b":[0,2],"body":"G","sides":{"leg_a":{"color":"G","sense":"-"},...}}
//!   ]
//! }
//! ```
//!
//! Tiles are written one per line in canonical order. `unit` is the leg
//! length in lattice steps. Senses are written `+`/`-`; `−` is accepted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::TilingError;
use crate::geometry::LatticePoint;
use crate::squares::{SquarePatch, SquareTile};
use crate::tiles::{Patch, PatchBuilder, Sense, SideDecoration, TileColor, TriangleTile};

pub const FORMAT_VERSION: u32 = 1;

/// A failure to read a document, with where it happened.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{location}: {error}")]
pub struct DocumentError {
    pub location: String,
    pub error: TilingError,
}

fn at(location: impl Into<String>, error: TilingError) -> DocumentError {
    DocumentError { location: location.into(), error }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatchDocument {
    Triangles(Patch),
    Squares(SquarePatch),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u32,
    kind: String,
    unit: i64,
    tiles: Vec<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecorationRecord {
    color: String,
    sense: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SidesRecord {
    leg_a: DecorationRecord,
    leg_b: DecorationRecord,
    hyp: DecorationRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TileRecord {
    r: [i64; 2],
    a: [i64; 2],
    b: [i64; 2],
    body: String,
    sides: SidesRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareRecord {
    center: [i64; 2],
    quarters: Vec<TileRecord>,
}

fn decoration_record(d: SideDecoration) -> DecorationRecord {
    let sense = match d.sense {
        Sense::Forward => "+",
        Sense::Backward => "-",
    };
    DecorationRecord { color: d.color.letter().to_string(), sense: sense.to_string() }
}

fn tile_record(t: &TriangleTile) -> TileRecord {
    let xy = |p: LatticePoint| [p.x, p.y];
    TileRecord {
        r: xy(t.r()),
        a: xy(t.a()),
        b: xy(t.b()),
        body: t.body().letter().to_string(),
        sides: SidesRecord {
            leg_a: decoration_record(t.leg_a()),
            leg_b: decoration_record(t.leg_b()),
            hyp: decoration_record(t.hyp()),
        },
    }
}

fn write_document(kind: &str, unit: i64, records: Vec<String>) -> String {
    let mut s = format!(
        "{{\n  \"format_version\": {FORMAT_VERSION},\n  \"kind\": \"{kind}\",\n  \"unit\": {unit},\n  \"tiles\": ["
    );
    for (i, r) in records.iter().enumerate() {
        s.push_str(if i == 0 { "\n    " } else { ",\n    " });
        s.push_str(r);
    }
    if !records.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

pub fn serialize_patch(p: &Patch) -> String {
    let unit = p.tiles().first().map_or(0, TriangleTile::leg_steps);
    let records = p.tiles().iter().map(|t| serde_json::to_string(&tile_record(t)).expect("serializable")).collect();
    write_document("triangles", unit, records)
}

pub fn serialize_squares(sp: &SquarePatch) -> String {
    let unit = sp.squares().first().map_or(0, |s| s.quarters()[0].leg_steps());
    let records = sp
        .squares()
        .iter()
        .map(|s| {
            let rec = SquareRecord {
                center: [s.center().x, s.center().y],
                quarters: s.quarters().iter().map(tile_record).collect(),
            };
            serde_json::to_string(&rec).expect("serializable")
        })
        .collect();
    write_document("squares", unit, records)
}

pub fn serialize(doc: &PatchDocument) -> String {
    match doc {
        PatchDocument::Triangles(p) => serialize_patch(p),
        PatchDocument::Squares(sp) => serialize_squares(sp),
    }
}

fn schema(msg: impl Into<String>) -> TilingError {
    TilingError::Schema(msg.into())
}

fn parse_color(s: &str, loc: &str) -> Result<TileColor, DocumentError> {
    let mut cs = s.chars();
    match (cs.next().and_then(TileColor::from_letter), cs.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(at(loc, schema(format!("color must be \"R\" or \"G\", found {s:?}")))),
    }
}

fn parse_decoration(d: &DecorationRecord, loc: &str) -> Result<SideDecoration, DocumentError> {
    let color = parse_color(&d.color, &format!("{loc}.color"))?;
    let sense = match d.sense.as_str() {
        "+" => Sense::Forward,
        "-" | "\u{2212}" => Sense::Backward,
        other => {
            return Err(at(format!("{loc}.sense"), schema(format!("sense must be \"+\" or \"-\", found {other:?}"))))
        }
    };
    Ok(SideDecoration::new(color, sense))
}

fn parse_tile(rec: &TileRecord, loc: &str) -> Result<TriangleTile, DocumentError> {
    let pt = |v: [i64; 2]| LatticePoint::new(v[0], v[1]);
    let body = parse_color(&rec.body, &format!("{loc}.body"))?;
    let leg_a = parse_decoration(&rec.sides.leg_a, &format!("{loc}.sides.leg_a"))?;
    let leg_b = parse_decoration(&rec.sides.leg_b, &format!("{loc}.sides.leg_b"))?;
    let hyp = parse_decoration(&rec.sides.hyp, &format!("{loc}.sides.hyp"))?;
    TriangleTile::new(pt(rec.r), pt(rec.a), pt(rec.b), body, leg_a, leg_b, hyp).map_err(|e| at(loc, e))
}

fn record<T: for<'de> Deserialize<'de>>(v: &serde_json::Value, loc: &str) -> Result<T, DocumentError> {
    T::deserialize(v).map_err(|e| at(loc, schema(e.to_string())))
}

pub fn parse(text: &str) -> Result<PatchDocument, DocumentError> {
    let header: Header = serde_json::from_str(text)
        .map_err(|e| at(format!("line {} column {}", e.line(), e.column()), schema(e.to_string())))?;
    if header.format_version != FORMAT_VERSION {
        return Err(at("format_version", schema(format!("unsupported format_version {}", header.format_version))));
    }
    let check_unit = |t: &TriangleTile, loc: &str| {
        if t.leg_steps() != header.unit {
            Err(at(loc, schema(format!("leg of {} steps does not match unit {}", t.leg_steps(), header.unit))))
        } else {
            Ok(())
        }
    };
    match header.kind.as_str() {
        "triangles" => {
            let mut b = PatchBuilder::new();
            for (i, v) in header.tiles.iter().enumerate() {
                let loc = format!("tiles[{i}]");
                let t = parse_tile(&record(v, &loc)?, &loc)?;
                check_unit(&t, &loc)?;
                b.insert(t).map_err(|e| at(&loc, e))?;
            }
            Ok(PatchDocument::Triangles(b.build()))
        }
        "squares" => {
            let mut squares = Vec::with_capacity(header.tiles.len());
            let mut b = PatchBuilder::new();
            for (i, v) in header.tiles.iter().enumerate() {
                let loc = format!("tiles[{i}]");
                let rec: SquareRecord = record(v, &loc)?;
                if rec.quarters.len() != 4 {
                    return Err(at(format!("{loc}.quarters"), schema("a square has exactly 4 quarters")));
                }
                let mut q = Vec::with_capacity(4);
                for (j, tr) in rec.quarters.iter().enumerate() {
                    let qloc = format!("{loc}.quarters[{j}]");
                    let t = parse_tile(tr, &qloc)?;
                    check_unit(&t, &qloc)?;
                    b.insert(t).map_err(|e| at(&qloc, e))?;
                    q.push(t);
                }
                let s = SquareTile::new([q[0], q[1], q[2], q[3]]).map_err(|e| at(&loc, e))?;
                if s.center() != LatticePoint::new(rec.center[0], rec.center[1]) {
                    return Err(at(format!("{loc}.center"), schema("center is not the common right-angle vertex")));
                }
                squares.push(s);
            }
            SquarePatch::from_squares(squares).map(PatchDocument::Squares).map_err(|e| at("tiles", e))
        }
        other => Err(at("kind", schema(format!("kind must be \"triangles\" or \"squares\", found {other:?}")))),
    }
}

/// Parses a document that must hold triangles.
pub fn parse_patch(text: &str) -> Result<Patch, DocumentError> {
    match parse(text)? {
        PatchDocument::Triangles(p) => Ok(p),
        PatchDocument::Squares(_) => Err(at("kind", schema("expected a triangles document"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{supertile, Seed, SupertileSpec};

    fn s(n: u32) -> Patch {
        supertile(&SupertileSpec::new(n, Seed::default())).unwrap()
    }

    #[test]
    fn round_trip_is_byte_exact() {
        for n in [0, 1, 5] {
            let text = serialize_patch(&s(n));
            let p = parse_patch(&text).unwrap();
            assert_eq!(p, s(n));
            assert_eq!(serialize_patch(&p), text);
        }
    }

    #[test]
    fn single_tile_document() {
        let text = serialize_patch(&s(0));
        assert_eq!(text.lines().filter(|l| l.trim_start().starts_with("{\"r\"")).count(), 1);
        assert!(text.ends_with("]\n}\n"));
        assert!(text.contains("\"unit\": 1"));
    }

    #[test]
    fn empty_patch_round_trips() {
        let text = serialize_patch(&Patch::new());
        assert_eq!(parse_patch(&text).unwrap(), Patch::new());
    }

    #[test]
    fn unicode_minus_is_accepted() {
        let text = serialize_patch(&s(2)).replace("\"-\"", "\"\u{2212}\"");
        assert_eq!(parse_patch(&text).unwrap(), s(2));
    }

    #[test]
    fn overlap_is_located() {
        let p = s(1);
        let text = serialize_patch(&p);
        let line = text.lines().find(|l| l.contains("\"r\"")).unwrap().trim().trim_end_matches(',').to_string();
        let doubled = text.replacen(&line, &format!("{line},\n    {line}"), 1);
        let err = parse_patch(&doubled).unwrap_err();
        assert_eq!(err.location, "tiles[1]");
        assert!(matches!(err.error, TilingError::Overlap { .. }));
    }

    #[test]
    fn negative_frame_is_a_geometry_error() {
        let text = "{\"format_version\":1,\"kind\":\"triangles\",\"unit\":1,\"tiles\":[{\"r\":[0,0],\"a\":[0,1],\"b\":[1,0],\"body\":\"R\",\"sides\":{\"leg_a\":{\"color\":\"R\",\"sense\":\"+\"},\"leg_b\":{\"color\":\"R\",\"sense\":\"+\"},\"hyp\":{\"color\":\"R\",\"sense\":\"+\"}}}]}";
        let err = parse_patch(text).unwrap_err();
        assert_eq!(err.location, "tiles[0]");
        assert!(matches!(err.error, TilingError::Geometry(_)));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse("{\n  \"format_version\": 1,\n  oops\n}").unwrap_err();
        assert!(err.location.starts_with("line 3"), "{}", err.location);
        assert!(matches!(err.error, TilingError::Schema(_)));
    }

    #[test]
    fn squares_round_trip() {
        let (sp, _) = crate::squares::group_into_squares(&s(6), &crate::rules::LegalCrossingTable::builtin()).unwrap();
        let text = serialize_squares(&sp);
        let back = parse(&text).unwrap();
        assert_eq!(back, PatchDocument::Squares(sp));
        assert_eq!(serialize(&back), text);
    }
}
