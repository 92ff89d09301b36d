use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tritile::analysis::{crossing_census, CrownClass};
use tritile::io::{parse, parse_patch, serialize, serialize_patch, serialize_squares, PatchDocument};
use tritile::squares::SquareClass;
use tritile::substitution::scaled;
use tritile::{
    c8_filling_census, compose, crown_census, decompose, derive_crossing_table, group_into_squares, period_scan,
    render_svg, square_census, supertile, tile_census, validate, validate_squares, Equivalence, LegalCrossingTable,
    Patch, Seed, SupertileSpec, SvgOptions, TilingError, ValidationMode,
};

#[derive(Parser)]
#[command(name = "tritile", version, about = "Decorated right-triangle tilings: generate, check, transform, measure")]
struct Cli {
    /// Crossing table to use instead of the bundled one.
    #[arg(long, global = true, value_name = "FILE")]
    table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the supertile of the given level.
    Gen {
        #[arg(long)]
        level: u32,
        /// Body and side decorations, e.g. GG-G+G-.
        #[arg(long, default_value = tritile::substitution::DEFAULT_SEED)]
        seed: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the local rules; exits 1 on violations.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Supertile)]
        mode: Mode,
    },
    /// Cut every tile by its height.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Double all coordinates first if a midpoint is not a lattice point.
        #[arg(long)]
        rescale: bool,
    },
    /// Merge sibling pairs at C4 crossings.
    Compose {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count classes of tiles, crossings, crowns, squares or C8 fillings.
    Census {
        #[arg(value_enum)]
        what: CensusKind,
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = UpTo::Translation)]
        up_to: UpTo,
        /// Ignore decorations of sides away from the crown center.
        #[arg(long)]
        mask_outer: bool,
    },
    /// Look for translations that map the central core onto the patch.
    PeriodScan {
        file: PathBuf,
        #[arg(long)]
        core: i64,
        #[arg(long)]
        shift: i64,
    },
    /// Convert between triangle and square documents.
    Squares {
        #[arg(value_enum)]
        action: SquareAction,
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a patch as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        labels: bool,
        /// Draw runs of equal arrows as one long arrow.
        #[arg(long)]
        coalesce: bool,
    },
    /// Crossing table maintenance.
    Tables {
        #[command(subcommand)]
        action: TableAction,
    },
}

#[derive(Subcommand)]
enum TableAction {
    /// Harvest the legal crossings of deep supertiles.
    Derive {
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Interior,
    Supertile,
}

#[derive(Clone, Copy, ValueEnum)]
enum CensusKind {
    Tiles,
    Crossings,
    Crowns,
    Squares,
    C8,
}

#[derive(Clone, Copy, ValueEnum)]
enum UpTo {
    Translation,
    Rotation,
}

#[derive(Clone, Copy, ValueEnum)]
enum SquareAction {
    Group,
    Cut,
}

enum Failure {
    /// Bad input, unreadable file, or unwritable output.
    Usage(String),
    /// The kernel refused the patch.
    Rejected(String),
}

impl From<TilingError> for Failure {
    fn from(e: TilingError) -> Self {
        Failure::Rejected(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PatchDocument, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_patch(path: &Path) -> Result<Patch, Failure> {
    parse_patch(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_triangles(path: &Path) -> Result<Patch, Failure> {
    Ok(match load(path)? {
        PatchDocument::Triangles(p) => p,
        PatchDocument::Squares(sp) => sp.to_patch(),
    })
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn entries<K, F: Fn(&K) -> Value>(m: &std::collections::BTreeMap<K, usize>, key: F) -> Value {
    let total: usize = m.values().sum();
    let list: Vec<Value> = m.iter().map(|(k, n)| json!({ "class": key(k), "count": n })).collect();
    json!({ "total": total, "classes": m.len(), "entries": list })
}

fn equivalence(u: UpTo) -> Equivalence {
    match u {
        UpTo::Translation => Equivalence::Translation,
        UpTo::Rotation => Equivalence::TranslationRotation,
    }
}

fn run(cli: Cli) -> Outcome {
    let table = match &cli.table {
        Some(path) => LegalCrossingTable::from_json(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))?,
        None => LegalCrossingTable::builtin(),
    };
    match cli.command {
        Command::Gen { level, seed, out } => {
            let seed: Seed = seed.parse().map_err(|e: TilingError| Failure::Usage(e.to_string()))?;
            let p = supertile(&SupertileSpec::new(level, seed))?;
            write(&out, &serialize_patch(&p))?;
            eprintln!("wrote {} tiles to {}", p.len(), out.display());
            Ok(true)
        }
        Command::Validate { file, mode } => {
            let mode = match mode {
                Mode::Interior => ValidationMode::PlaneInterior,
                Mode::Supertile => ValidationMode::SupertileBoundary,
            };
            let report = match load(&file)? {
                PatchDocument::Triangles(p) => validate(&p, &table, mode),
                PatchDocument::Squares(sp) => validate_squares(&sp, &table, mode),
            };
            print(&serde_json::to_value(&report).expect("json"));
            Ok(report.is_clean())
        }
        Command::Decompose { file, out, rescale } => {
            let mut p = load_patch(&file)?;
            let mut q = decompose(&p);
            if rescale && matches!(q, Err(TilingError::Resolution { .. })) {
                p = scaled(&p, 1);
                q = decompose(&p);
            }
            write(&out, &serialize_patch(&q?))?;
            Ok(true)
        }
        Command::Compose { file, out } => {
            let p = load_patch(&file)?;
            write(&out, &serialize_patch(&compose(&p, &table)?))?;
            Ok(true)
        }
        Command::Census { what, file, up_to, mask_outer } => {
            let eq = equivalence(up_to);
            let v = match what {
                CensusKind::Tiles => entries(&tile_census(&load_triangles(&file)?, eq), |k| json!(k.to_string())),
                CensusKind::Crossings => entries(
                    &crossing_census(&load_triangles(&file)?, &table),
                    |(class, code)| json!({ "class": class.to_string(), "germs": code }),
                ),
                CensusKind::Crowns => {
                    entries(&crown_census(&load_triangles(&file)?, mask_outer), |k: &CrownClass| json!(k))
                }
                CensusKind::Squares => {
                    let sp = match load(&file)? {
                        PatchDocument::Squares(sp) => sp,
                        PatchDocument::Triangles(p) => group_into_squares(&p, &table)?.0,
                    };
                    entries(&square_census(&sp, eq), |k: &SquareClass| json!(k))
                }
                CensusKind::C8 => entries(&c8_filling_census(&load_triangles(&file)?), |k| json!(k.number())),
            };
            print(&v);
            Ok(true)
        }
        Command::PeriodScan { file, core, shift } => {
            let report = period_scan(&load_triangles(&file)?, core, shift)?;
            print(&serde_json::to_value(&report).expect("json"));
            Ok(true)
        }
        Command::Squares { action, file, out } => {
            match (action, load(&file)?) {
                (SquareAction::Group, PatchDocument::Triangles(p)) => {
                    let (sp, leftover) = group_into_squares(&p, &table)?;
                    write(&out, &serialize_squares(&sp))?;
                    eprintln!("{} squares, {} leftover tiles", sp.len(), leftover.len());
                }
                (SquareAction::Cut, PatchDocument::Squares(sp)) => {
                    write(&out, &serialize(&PatchDocument::Triangles(sp.to_patch())))?;
                }
                (SquareAction::Group, PatchDocument::Squares(_)) => {
                    return Err(Failure::Usage("group expects a triangles document".into()))
                }
                (SquareAction::Cut, PatchDocument::Triangles(_)) => {
                    return Err(Failure::Usage("cut expects a squares document".into()))
                }
            }
            Ok(true)
        }
        Command::Render { file, out, labels, coalesce } => {
            let p = load_triangles(&file)?;
            write(&out, &render_svg(&p, &SvgOptions { labels, coalesce }))?;
            Ok(true)
        }
        Command::Tables { action: TableAction::Derive { level, out } } => {
            let d = derive_crossing_table(level)?;
            write(&out, &d.table.to_json())?;
            print(&serde_json::to_value(&d).expect("json"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Rejected(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
