use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plfg_core::catalog::{catalog, lookup};
use plfg_core::cohomology::engine;
use plfg_core::fusion::{FusionDescriptor, Sylow};
use plfg_core::gf::{named_subgroup, MatrixGroup, Prime};
use plfg_core::graded::Algebra;
use plfg_core::invariants::{invariant_poincare_with, Convention};
use plfg_core::splitting::full_splitting;
use plfg_core::verify::{verify_group, VerifyReport};
use plfg_core::Error;
use serde_json::{json, Value};

mod output;

use output::{csv_field, Series};

#[derive(Parser)]
#[command(name = "plfg", version, about = "Cohomology and stable splittings of p-local finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog operations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Poincaré series of the invariants of a subgroup of GL2(F_p).
    Invariants {
        #[arg(long)]
        prime: u32,
        /// A subgroup label (D8, SD16, 3S3, U, SL2, <diag(2,1)>, ...) or a catalog id.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        #[arg(long)]
        max_degree: u32,
    },
    /// Cohomology dimensions of a catalog group.
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_degree: u32,
        /// Report the odd-degree table.
        #[arg(long)]
        odd: bool,
        /// Report the nilpotent table.
        #[arg(long)]
        nilpotent: bool,
    },
    /// Stable splitting of the classifying space.
    Splitting {
        #[arg(long)]
        group: String,
    },
    /// Check computed results against the stored expectations.
    Verify {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        group: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the shipped descriptors.
    List {
        #[arg(long)]
        prime: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    #[value(name = "BE")]
    Be,
    #[value(name = "BA")]
    Ba,
}

/// Failures mapped to exit codes.
enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let f = cli.format;
    match &cli.command {
        Command::Catalog { action: CatalogAction::List { prime } } => catalog_list(*prime, f),
        Command::Invariants { prime, group, algebra, max_degree } => invariants(*prime, group, *algebra, *max_degree, f),
        Command::Cohomology { group, max_degree, odd, nilpotent } => cohomology(group, *max_degree, *odd, *nilpotent, f),
        Command::Splitting { group } => splitting(group, f),
        Command::Verify { group, all } => verify(group.as_deref(), *all, f),
    }
}

fn sylow_name(s: Sylow) -> &'static str {
    match s {
        Sylow::E => "E",
        Sylow::A => "A",
    }
}

fn catalog_list(prime: Option<u32>, f: Format) -> Result<String, Failure> {
    if let Some(p) = prime {
        Prime::new(p)?;
    }
    let cat = catalog()?;
    let rows: Vec<&FusionDescriptor> =
        cat.descriptors().iter().filter(|d| prime.is_none_or(|p| d.prime.get() == p)).collect();
    let mut out = String::new();
    match f {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|d| {
                    json!({
                        "id": d.id,
                        "prime": d.prime.get(),
                        "sylow": sylow_name(d.sylow),
                        "weyl_order": d.weyl.order(),
                        "aliases": d.aliases,
                        "inferred": d.inferred,
                        "by_analogy": d.by_analogy,
                    })
                })
                .collect();
            out = output::json_line(&Value::Array(v));
        }
        Format::Csv => {
            out.push_str("id,prime,sylow,weyl_order,aliases\n");
            for d in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_field(&d.id),
                    d.prime,
                    sylow_name(d.sylow),
                    d.weyl.order(),
                    csv_field(&d.aliases.join(" "))
                );
            }
        }
        Format::Text => {
            for d in rows {
                let mut flags = Vec::new();
                if d.inferred {
                    flags.push("inferred");
                }
                if d.by_analogy {
                    flags.push("by analogy");
                }
                let _ = writeln!(
                    out,
                    "{:<14} p={:<3} {}  |W|={:<4}{}",
                    d.id,
                    d.prime,
                    sylow_name(d.sylow),
                    d.weyl.order(),
                    if flags.is_empty() { String::new() } else { format!(" ({})", flags.join(", ")) }
                );
            }
        }
    }
    Ok(out)
}

fn even_degree(d: u32) -> Result<(), Failure> {
    if d % 2 == 1 {
        return Err(Failure::Usage(format!("--max-degree {d} is odd; odd degrees need --odd")));
    }
    Ok(())
}

/// A subgroup label, or the Weyl group of a catalog descriptor at this prime.
fn resolve_subgroup(name: &str, p: Prime) -> Result<MatrixGroup, Failure> {
    match named_subgroup(name, p) {
        Ok(g) => Ok(g),
        Err(e) => match lookup(name) {
            Ok(d) if d.prime == p => Ok(d.weyl.clone()),
            _ => Err(e.into()),
        },
    }
}

fn invariants(prime: u32, group: &str, algebra: AlgebraArg, d_max: u32, f: Format) -> Result<String, Failure> {
    let p = Prime::new(prime)?;
    even_degree(d_max)?;
    let g = resolve_subgroup(group, p)?;
    let (alg, conv, tag) = match algebra {
        AlgebraArg::Be => (Algebra::BE(p), Convention::Module, "BE"),
        AlgebraArg::Ba => (Algebra::BA(p), Convention::Weyl, "BA"),
    };
    let dims = invariant_poincare_with(&g, alg, d_max, conv)?;
    let series = Series::even(group, prime, dims).with_part(tag);
    Ok(output::series(&[series], f))
}

fn cohomology(group: &str, d_max: u32, odd: bool, nilpotent: bool, f: Format) -> Result<String, Failure> {
    let desc = lookup(group)?;
    if !odd {
        even_degree(d_max)?;
    }
    let eng = engine(desc)?;
    let p = desc.prime.get();
    let mut parts = Vec::new();
    if odd {
        parts.push(Series::sparse(&desc.id, p, eng.odd_dims(d_max)?).with_part("odd"));
    }
    if nilpotent {
        parts.push(Series::sparse(&desc.id, p, eng.nilpotent_dims(d_max - d_max % 2)?).with_part("nilpotent"));
    }
    if parts.is_empty() {
        parts.push(Series::even(&desc.id, p, eng.poincare(d_max)?).with_part("even"));
    }
    Ok(output::series(&parts, f))
}

fn splitting(group: &str, f: Format) -> Result<String, Failure> {
    let desc = lookup(group)?;
    let table = full_splitting(desc)?;
    Ok(match f {
        Format::Text => format!("{}\n", table.render()),
        Format::Json => {
            let mut v = table.to_json();
            v["group"] = json!(desc.id);
            v["prime"] = json!(desc.prime.get());
            v["wedge"] = json!(table.render());
            output::json_line(&v)
        }
        Format::Csv => {
            let mut out = String::from("summand,q,k,multiplicity\n");
            let name = if table.tilde { "X~" } else { "X" };
            for (&(q, k), &n) in &table.dominant {
                let _ = writeln!(out, "{name},{q},{k},{n}");
            }
            for (&k, &m) in &table.l2 {
                let _ = writeln!(out, "L2,,{k},{m}");
            }
            for (&k, &m) in &table.l1 {
                let _ = writeln!(out, "L1,,{k},{m}");
            }
            out
        }
    })
}

fn verify(group: Option<&str>, all: bool, f: Format) -> Result<String, Failure> {
    let descs: Vec<&FusionDescriptor> = if all {
        catalog()?.descriptors().iter().filter(|d| d.expectations.is_some()).collect()
    } else {
        vec![lookup(group.unwrap_or_default())?]
    };
    let reports: Vec<VerifyReport> = descs.into_iter().map(verify_group).collect();
    let out = output::reports(&reports, f);
    if reports.iter().all(VerifyReport::passed) {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}
