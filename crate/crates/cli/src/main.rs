//! Command-line front end: fusion products, structure-constant tables,
//! genus dimensions, oracle comparisons and verification suites with
//! deterministic text/JSON/CSV output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use fusion_rings::affine::{
    self, canonicalize, fuse_generic, fuse_rational, genus_dimension, structure_table,
    AffineSymbol, FusionTable, RationalLevel,
};
use fusion_rings::oracle::{calibrate_convention, fusion_oracle_with, verify_oracle};
use fusion_rings::ring::FormalSum;
use fusion_rings::virasoro::{verify_ds_epimorphism, DsMode};
use fusion_rings::SweepReport;

use fusion_rings_cli::report::{self, ProductReport, TableFile, VerifyReport, TABLE_FORMAT_VERSION};

#[derive(Parser)]
#[command(name = "fusion-rings", version, about = "Exact fusion rings of affine sl2: products, tables, genus dimensions and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse two symbols at a generic or rational level
    Fuse {
        /// "generic" or "p/q"
        #[arg(long)]
        level: String,
        /// First symbol, e.g. "(1,0;0)"
        a: String,
        /// Second symbol
        b: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure-constant table of a rational level
    Table {
        /// Level "p/q"
        #[arg(long)]
        level: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Load the table from this path if present, write it there otherwise
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Genus-g dimension with optional insertions
    Genus {
        /// Level "p/q"
        #[arg(long)]
        level: String,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Comma-separated symbols, e.g. "(1,0;0),(0,0;1)"
        #[arg(long)]
        insertions: Option<String>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Generic fusion product derived from the coinvariant line-intersection
    /// oracle
    Oracle {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// "generic" or "p/q" (suites over the generic ring ignore this)
        #[arg(long, default_value = "generic")]
        level: String,
        /// Index bound for generic sweeps
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Suite {
    Assoc,
    Comm,
    Factorization,
    Quotient,
    DsHom,
    Oracle,
    DimensionHom,
}

enum CliError {
    Usage(String),
    /// Verification failed; the report has already been printed.
    Failed,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Failed) => std::process::exit(1),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fuse { level, a, b, format, out } => cmd_fuse(&level, &a, &b, format, out),
        Command::Table { level, format, out, cache } => cmd_table(&level, format, out, cache),
        Command::Genus { level, genus, insertions, cache } => {
            cmd_genus(&level, genus, insertions.as_deref(), cache)
        }
        Command::Oracle { a, b, format, out } => cmd_oracle(&a, &b, format, out),
        Command::Verify { suite, level, bound, format } => {
            cmd_verify(suite, &level, bound, format)
        }
    }
}

enum LevelArg {
    Generic,
    Rational(RationalLevel),
}

fn parse_level(text: &str) -> Result<LevelArg, CliError> {
    if text == "generic" {
        return Ok(LevelArg::Generic);
    }
    text.parse::<RationalLevel>()
        .map(LevelArg::Rational)
        .map_err(CliError::Usage)
}

fn parse_rational_level(text: &str) -> Result<RationalLevel, CliError> {
    match parse_level(text)? {
        LevelArg::Rational(level) => Ok(level),
        LevelArg::Generic => usage("this command needs a rational level p/q"),
    }
}

fn parse_symbol(text: &str) -> Result<AffineSymbol, CliError> {
    text.parse::<AffineSymbol>().map_err(|e| CliError::Usage(e.to_string()))
}

fn class_of(level: RationalLevel, text: &str) -> Result<affine::AdmissibleClass, CliError> {
    let sym = parse_symbol(text)?;
    canonicalize(level, sym).map_err(|e| CliError::Usage(format!("symbol {sym}: {e}")))
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json_string<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

fn render_product(report: &ProductReport, format: Format) -> String {
    match format {
        Format::Text => format!("{}\n", report.render_text()),
        Format::Json => json_string(report),
        Format::Csv => report.render_csv(),
    }
}

fn cmd_fuse(
    level_text: &str,
    a: &str,
    b: &str,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let report = match parse_level(level_text)? {
        LevelArg::Generic => {
            let (a, b) = (parse_symbol(a)?, parse_symbol(b)?);
            ProductReport::new("generic".into(), vec![a, b], &fuse_generic(a, b))
        }
        LevelArg::Rational(level) => {
            let (ca, cb) = (class_of(level, a)?, class_of(level, b)?);
            let product = fuse_rational(&ca, &cb)
                .expect("classes share the level")
                .linear_map(|c| FormalSum::singleton(c.rep()));
            ProductReport::new(level.to_string(), vec![ca.rep(), cb.rep()], &product)
        }
    };
    write_output(out.as_deref(), &render_product(&report, format))
}

fn load_or_build_table(
    level: RationalLevel,
    cache: Option<&Path>,
) -> Result<FusionTable, CliError> {
    if let Some(path) = cache {
        if path.exists() {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read cache: {e}")))?;
            let file: TableFile = serde_json::from_str(&raw)
                .map_err(|e| CliError::Usage(format!("invalid cache file: {e}")))?;
            if file.format_version != TABLE_FORMAT_VERSION {
                return usage(format!(
                    "cache format version {} does not match {}",
                    file.format_version, TABLE_FORMAT_VERSION
                ));
            }
            if file.level != level.to_string() {
                return usage(format!(
                    "cache level {} does not match requested level {}",
                    file.level, level
                ));
            }
            return FusionTable::from_cells(level, file.tensor)
                .map_err(|e| CliError::Usage(format!("invalid cache file: {e}")));
        }
    }
    let table = structure_table(level);
    if let Some(path) = cache {
        let file = TableFile::from_table(&table);
        std::fs::write(path, json_string(&file))
            .map_err(|e| CliError::Usage(format!("cannot write cache: {e}")))?;
    }
    Ok(table)
}

fn cmd_table(
    level_text: &str,
    format: Format,
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
) -> Result<(), CliError> {
    let level = parse_rational_level(level_text)?;
    let table = load_or_build_table(level, cache.as_deref())?;
    let file = TableFile::from_table(&table);
    let content = match format {
        Format::Text => file.render_text(),
        Format::Json => json_string(&file),
        Format::Csv => file.render_csv(),
    };
    write_output(out.as_deref(), &content)
}

fn cmd_genus(
    level_text: &str,
    genus: u32,
    insertions: Option<&str>,
    cache: Option<PathBuf>,
) -> Result<(), CliError> {
    let level = parse_rational_level(level_text)?;
    let table = load_or_build_table(level, cache.as_deref())?;
    let mut indices = Vec::new();
    if let Some(list) = insertions {
        for text in report::split_symbol_list(list).map_err(CliError::Usage)? {
            let class = class_of(level, &text)?;
            let idx = table
                .class_index(class.rep())
                .expect("canonical class is listed");
            indices.push(idx);
        }
    }
    let dim = genus_dimension(&table, genus, &indices)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{dim}");
    Ok(())
}

fn cmd_oracle(
    a: &str,
    b: &str,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let (a, b) = (parse_symbol(a)?, parse_symbol(b)?);
    let conv = match calibrate_convention() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return Err(CliError::Failed);
        }
    };
    let support = match fusion_oracle_with(&conv, a, b) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return Err(CliError::Failed);
        }
    };
    let product = FormalSum::normalize(
        support.into_iter().map(|sym| (sym, fusion_rings::Int::from(1))),
    );
    let report = ProductReport::new("generic".into(), vec![a, b], &product);
    write_output(out.as_deref(), &render_product(&report, format))
}

struct SuiteOutcome {
    level: String,
    bound: Option<u32>,
    result: Result<SweepReport, String>,
}

fn run_suite(suite: Suite, level_text: &str, bound: Option<u32>) -> Result<SuiteOutcome, CliError> {
    let level = parse_level(level_text)?;
    let stringify = |r: Result<SweepReport, String>| r;
    let outcome = match (suite, level) {
        (Suite::Assoc, LevelArg::Generic) => {
            let bound = bound.unwrap_or(3);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: stringify(affine::verify_assoc_generic(bound).map_err(|e| e.to_string())),
            }
        }
        (Suite::Assoc, LevelArg::Rational(l)) => SuiteOutcome {
            level: l.to_string(),
            bound: None,
            result: affine::verify_assoc_rational(l).map_err(|e| e.to_string()),
        },
        (Suite::Comm, LevelArg::Generic) => {
            let bound = bound.unwrap_or(3);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: affine::verify_comm_generic(bound).map_err(|e| e.to_string()),
            }
        }
        (Suite::Comm, LevelArg::Rational(l)) => SuiteOutcome {
            level: l.to_string(),
            bound: None,
            result: affine::verify_comm_rational(l).map_err(|e| e.to_string()),
        },
        (Suite::Factorization, LevelArg::Generic) => {
            let bound = bound.unwrap_or(5);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: affine::verify_factorization(bound).map_err(|e| e.to_string()),
            }
        }
        (Suite::Factorization, LevelArg::Rational(_)) => {
            return usage("factorization is a generic-level suite; use --level generic")
        }
        (Suite::Quotient, LevelArg::Rational(l)) => {
            let result = affine::verify_representative_independence(l)
                .and_then(|first| {
                    affine::verify_quotient(l).map(|second| SweepReport {
                        checked: first.checked + second.checked,
                    })
                })
                .map_err(|e| e.to_string());
            SuiteOutcome { level: l.to_string(), bound: None, result }
        }
        (Suite::Quotient, LevelArg::Generic) => {
            return usage("quotient needs a rational level p/q")
        }
        (Suite::DsHom, LevelArg::Generic) => {
            let bound = bound.unwrap_or(3);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: verify_ds_epimorphism(DsMode::Generic { bound })
                    .map_err(|e| e.to_string()),
            }
        }
        (Suite::DsHom, LevelArg::Rational(l)) => SuiteOutcome {
            level: l.to_string(),
            bound: None,
            result: verify_ds_epimorphism(DsMode::Rational(l)).map_err(|e| e.to_string()),
        },
        (Suite::Oracle, LevelArg::Generic) => {
            let bound = bound.unwrap_or(3);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: verify_oracle(bound).map_err(|e| e.to_string()),
            }
        }
        (Suite::Oracle, LevelArg::Rational(_)) => {
            return usage("oracle is a generic-level suite; use --level generic")
        }
        (Suite::DimensionHom, LevelArg::Generic) => {
            let bound = bound.unwrap_or(5);
            SuiteOutcome {
                level: "generic".into(),
                bound: Some(bound),
                result: affine::verify_qdim_hom(bound).map_err(|e| e.to_string()),
            }
        }
        (Suite::DimensionHom, LevelArg::Rational(_)) => {
            return usage("dimension-hom is a generic-level suite; use --level generic")
        }
    };
    Ok(outcome)
}

fn cmd_verify(
    suite: Suite,
    level_text: &str,
    bound: Option<u32>,
    format: Format,
) -> Result<(), CliError> {
    let suite_name = match suite {
        Suite::Assoc => "assoc",
        Suite::Comm => "comm",
        Suite::Factorization => "factorization",
        Suite::Quotient => "quotient",
        Suite::DsHom => "ds-hom",
        Suite::Oracle => "oracle",
        Suite::DimensionHom => "dimension-hom",
    };
    let outcome = run_suite(suite, level_text, bound)?;
    let report = match &outcome.result {
        Ok(sweep) => VerifyReport {
            suite: suite_name.into(),
            level: outcome.level,
            bound: outcome.bound,
            pass: true,
            checked: sweep.checked,
            counterexample: None,
            version: env!("CARGO_PKG_VERSION").into(),
        },
        Err(msg) => VerifyReport {
            suite: suite_name.into(),
            level: outcome.level,
            bound: outcome.bound,
            pass: false,
            checked: 0,
            counterexample: Some(msg.clone()),
            version: env!("CARGO_PKG_VERSION").into(),
        },
    };
    let content = match format {
        Format::Json => json_string(&report),
        _ => format!("{}\n", report.render_text()),
    };
    print!("{content}");
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
