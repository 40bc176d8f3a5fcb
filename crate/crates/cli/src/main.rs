//! `apnforge`: construct APN functions, verify tables, compute invariants and
//! keep a catalog of results.
//!
//! Exit status: 0 on success, 1 when a check comes out negative (not APN, a
//! reference-row mismatch), 2 on any error.

mod catalog;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use apnforge::families::{self, FamilyId, FamilyParams, Instance};
use apnforge::field::{parse_hex, FieldSpec, Gf};
use apnforge::reference::ExpectedTable;
use apnforge::vbf::{self, TableHeader, TruthTable};
use apnforge::{invariant_profile, poly, InvariantProfile, ProfileOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use catalog::{join, CatalogRecord};

#[derive(Parser)]
#[command(name = "apnforge", version, about = "Quadratic APN constructions and invariants")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Catalog file (JSON lines).
    #[arg(long, global = true, env = "APNFORGE_CATALOG", default_value = "apnforge-catalog.jsonl")]
    catalog: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member, write its table and add it to the catalog.
    Construct(ConstructArgs),
    /// Report differential uniformity of a table file; exit 0 iff APN.
    Verify {
        file: PathBuf,
        /// Width, when the file has no header sidecar.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Invariant profile of an APN table file.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Compare N_F of one member per family in dimension 12 with the reference rows.
    Table3 {
        /// Comma-separated family ids (default: every reference row).
        #[arg(long, value_delimiter = ',')]
        families: Vec<FamilyId>,
        /// Reference fixture to diff against instead of the built-in one.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Inspect or maintain the catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Drop records whose table hash was seen earlier in the file.
    Dedup,
    /// CSV, one row per record.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConstructArgs {
    /// f1, f2, gologlu-f1, gologlu-f2, lzlq, gold, known-2 … known-12.
    family: FamilyId,
    /// Degree of the coefficient field (n/2 for bivariate families).
    #[arg(long)]
    m: Option<u32>,
    /// Dimension of the function; alternative to --m.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Hex field element, or "auto" for the smallest good one.
    #[arg(long)]
    alpha: Option<String>,
    /// Shorthand for --param i=<value>.
    #[arg(long)]
    i: Option<u64>,
    /// Family-specific parameter, key=value (hex with 0x prefix allowed).
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, u64)>,
    /// Reduction polynomial of the coefficient field, hex.
    #[arg(long)]
    reduction: Option<String>,
    /// Table file; the header goes next to it with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the invariant profile (useful for n > 12).
    #[arg(long)]
    no_profile: bool,
    /// Do not append to the catalog.
    #[arg(long)]
    no_catalog: bool,
}

fn parse_kv(s: &str) -> Result<(String, u64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v = match v.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => v.parse(),
    }
    .map_err(|e| format!("{k}: {e}"))?;
    Ok((k.to_string(), v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` is a negative answer to the question a command asks.
fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring thread pool")?;
    }
    let fmt = cli.format;
    match cli.command {
        Command::Construct(args) => construct(args, &cli.catalog, fmt),
        Command::Verify { file, n } => verify(&file, n, fmt),
        Command::Invariants { file, max_dim, n } => invariants(&file, n, max_dim, fmt),
        Command::Table3 { families, expected } => table3(families, expected.as_deref(), fmt),
        Command::Catalog { action } => catalog_cmd(action, &cli.catalog, fmt),
    }
}

// ---------------------------------------------------------------------------
// construct

fn coefficient_degree(args: &ConstructArgs) -> Result<Option<u32>> {
    let bivariate = args.family.is_bivariate();
    match (args.m, args.n) {
        (Some(m), Some(n)) if (if bivariate { 2 * m } else { m }) != n => {
            bail!("--m {m} and --n {n} disagree for {}", args.family)
        }
        (Some(m), _) => Ok(Some(m)),
        (None, Some(n)) if bivariate => {
            if n % 2 != 0 {
                bail!("{} needs an even dimension, got n = {n}", args.family);
            }
            Ok(Some(n / 2))
        }
        (None, Some(n)) => Ok(Some(n)),
        (None, None) => Ok(None),
    }
}

fn construct_instance(args: &ConstructArgs) -> Result<(Instance, FieldSpec)> {
    let m = coefficient_degree(args)?;
    let explicit = args.k.is_some() || args.alpha.is_some() || args.i.is_some() || !args.params.is_empty();
    if let (FamilyId::Known(id), false, None) = (args.family, explicit, &args.reduction) {
        // no parameters given: first valid member
        let m = m.ok_or_else(|| anyhow!("{} needs --n or --m", args.family))?;
        let n = if args.family.is_bivariate() { 2 * m } else { m };
        let inst = families::known_family(id, n)?;
        return Ok((inst, FieldSpec::default_for(m)?));
    }
    let m = m.ok_or_else(|| anyhow!("{} needs --m or --n", args.family))?;
    let spec = match &args.reduction {
        Some(r) => FieldSpec::new(m, parse_hex(r)?)?,
        None => FieldSpec::default_for(m)?,
    };
    let field = Gf::new(spec);
    let mut params = FamilyParams::new(args.family, m);
    let k = match (args.family, args.k) {
        (FamilyId::F1 | FamilyId::GologluF1 | FamilyId::GologluF2, None) => Some(1),
        (_, k) => k,
    };
    if let Some(k) = k {
        params = params.with_k(k);
    }
    let wants_alpha = matches!(args.family, FamilyId::F1 | FamilyId::F2);
    match args.alpha.as_deref() {
        Some("auto") => {
            let good = poly::find_good_alphas(&field, k.unwrap_or(1))?;
            params = params.with_alpha(good[0]);
        }
        Some(hex) => params = params.with_alpha(parse_hex(hex)?),
        None if wants_alpha => {
            let good = poly::find_good_alphas(&field, k.unwrap_or(1))?;
            params = params.with_alpha(good[0]);
        }
        None => {}
    }
    if let Some(i) = args.i {
        params = params.with("i", i);
    }
    for (key, v) in &args.params {
        params = params.with(key, *v);
    }
    let check = families::validate_in(&params, &field);
    if !check.ok {
        bail!("invalid parameters ({params}): {}", check.reason);
    }
    Ok((families::build_in(&params, &field)?, spec))
}

fn construct(args: ConstructArgs, catalog_path: &Path, fmt: Format) -> Result<bool> {
    let (inst, field) = construct_instance(&args)?;
    let table = &inst.table;
    let summary = vbf::differential_uniformity(table);
    if summary.delta != 2 {
        eprintln!("{} is not APN (delta = {})", inst.params, summary.delta);
        return Ok(false);
    }
    let profile = if args.no_profile {
        None
    } else {
        Some(invariant_profile(table, ProfileOptions::default())?)
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}-n{}-{}.tt", inst.params.family, table.n(), table.hash_hex())));
    write_table(&out, table, &inst.params.to_string())?;
    let record = CatalogRecord {
        id: table.hash_hex(),
        params: inst.params.clone(),
        field,
        n: table.n(),
        profile,
        created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    if !args.no_catalog {
        catalog::append(catalog_path, &record)?;
    }
    print_records(std::slice::from_ref(&record), fmt)?;
    Ok(true)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn write_table(path: &Path, table: &TruthTable, source: &str) -> Result<()> {
    let mut bytes = Vec::with_capacity(table.len() * 2);
    table.write_words(&mut bytes)?;
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    let header = TableHeader::for_table(table, source);
    let head = sidecar(path);
    fs::write(&head, serde_json::to_string_pretty(&header)? + "\n")
        .with_context(|| format!("writing {}", head.display()))
}

/// Reads a table, checking it against its header sidecar when there is one.
fn read_table(path: &Path, n: Option<u32>) -> Result<TruthTable> {
    let head_path = sidecar(path);
    let header: Option<TableHeader> = if head_path.exists() && head_path != path {
        let text = fs::read_to_string(&head_path).with_context(|| format!("reading {}", head_path.display()))?;
        Some(serde_json::from_str(&text).with_context(|| format!("parse error in {}", head_path.display()))?)
    } else {
        None
    };
    let n = n.or(header.as_ref().map(|h| h.n));
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let table = TruthTable::read_words(io::BufReader::new(file), n)
        .with_context(|| format!("parse error in {}", path.display()))?;
    if let Some(h) = header {
        h.check(&table).with_context(|| format!("parse error in {}", path.display()))?;
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// verify / invariants

fn verify(path: &Path, n: Option<u32>, fmt: Format) -> Result<bool> {
    let table = read_table(path, n)?;
    let summary = vbf::differential_uniformity(&table);
    let apn = summary.delta == 2;
    let pairs = summary
        .worst_pairs
        .iter()
        .map(|(a, b)| format!("({a:#x},{b:#x})"))
        .collect::<Vec<_>>()
        .join(" ");
    print_kv(
        &summary,
        &[
            ("hash", table.hash_hex()),
            ("n", table.n().to_string()),
            ("delta", summary.delta.to_string()),
            ("apn", apn.to_string()),
            ("worst_pairs", pairs),
        ],
        fmt,
    )?;
    Ok(apn)
}

fn invariants(path: &Path, n: Option<u32>, max_dim: Option<usize>, fmt: Format) -> Result<bool> {
    let table = read_table(path, n)?;
    let profile = invariant_profile(&table, ProfileOptions { max_dim })?;
    print_kv(&profile, &profile_fields(&profile), fmt)?;
    Ok(true)
}

fn spectrum_name(p: &InvariantProfile) -> String {
    serde_json::to_value(p.spectrum)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn profile_fields(p: &InvariantProfile) -> Vec<(&'static str, String)> {
    vec![
        ("delta", p.delta.to_string()),
        ("nf", join(&p.nf, ";")),
        ("spectrum", spectrum_name(p)),
        ("three_to_one", p.three_to_one.to_string()),
        ("nb_size", p.nb_size.to_string()),
    ]
}

// ---------------------------------------------------------------------------
// table3

#[derive(Serialize)]
struct Table3Row {
    family: FamilyId,
    params: Option<String>,
    nf: Option<Vec<u64>>,
    expected: Vec<Vec<u64>>,
    status: &'static str,
    error: Option<String>,
}

fn table3(filter: Vec<FamilyId>, expected: Option<&Path>, fmt: Format) -> Result<bool> {
    let reference = match expected {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ExpectedTable::from_json(&text).with_context(|| format!("parse error in {}", p.display()))?
        }
        None => ExpectedTable::embedded(),
    };
    let families = if filter.is_empty() { reference.families() } else { filter };
    let rows: Vec<Table3Row> = families
        .into_iter()
        .map(|family| {
            let expected = reference.row(family).map(|r| r.accepted.clone()).unwrap_or_default();
            let computed = families::representative(family, reference.n)
                .map_err(|e| e.to_string())
                .and_then(|inst| {
                    invariant_profile(&inst.table, ProfileOptions::default())
                        .map(|p| (inst.params.to_string(), p.nf))
                        .map_err(|e| e.to_string())
                });
            match computed {
                Ok((params, nf)) => {
                    let status = match reference.matches(family, &nf) {
                        Some(true) => "match",
                        Some(false) => "mismatch",
                        None => "no-reference",
                    };
                    Table3Row { family, params: Some(params), nf: Some(nf), expected, status, error: None }
                }
                Err(e) => Table3Row { family, params: None, nf: None, expected, status: "error", error: Some(e) },
            }
        })
        .collect();

    let fmt_rows = |rs: &[Vec<u64>]| rs.iter().map(|r| format!("[{}]", join(r, ", "))).collect::<Vec<_>>().join(" or ");
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match fmt {
        Format::Json => serde_json::to_writer_pretty(&mut out, &rows).map(|_| writeln!(out))??,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["family", "params", "nf", "expected", "status"])?;
            for r in &rows {
                w.write_record([
                    r.family.to_string(),
                    r.params.clone().unwrap_or_default(),
                    r.nf.as_deref().map(|v| join(v, ";")).unwrap_or_default(),
                    r.expected.iter().map(|e| join(e, ";")).collect::<Vec<_>>().join("|"),
                    r.error.as_ref().map(|e| format!("error: {e}")).unwrap_or_else(|| r.status.to_string()),
                ])?;
            }
            w.flush()?;
        }
        Format::Md => {
            writeln!(out, "| family | parameters | N_F | expected | status |")?;
            writeln!(out, "|---|---|---|---|---|")?;
            for r in &rows {
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    r.family,
                    r.params.as_deref().unwrap_or("-"),
                    r.nf.as_deref().map(|v| format!("[{}]", join(v, ", "))).unwrap_or_else(|| "-".into()),
                    fmt_rows(&r.expected),
                    r.error.as_ref().map(|e| format!("error: {e}")).unwrap_or_else(|| r.status.to_string()),
                )?;
            }
        }
    }
    let bad = rows.iter().filter(|r| r.status != "match").count();
    if bad > 0 {
        eprintln!("{bad} of {} rows did not match", rows.len());
    }
    Ok(bad == 0)
}

// ---------------------------------------------------------------------------
// catalog

fn catalog_cmd(action: CatalogAction, path: &Path, fmt: Format) -> Result<bool> {
    let loaded = catalog::load(path)?;
    for (line, err) in &loaded.skipped {
        eprintln!("warning: {}:{line}: skipped corrupt record: {err}", path.display());
    }
    match action {
        CatalogAction::List => print_records(&loaded.records, fmt)?,
        CatalogAction::Dedup => {
            if !loaded.skipped.is_empty() {
                bail!(
                    "refusing to rewrite {} with {} corrupt line(s); fix or remove them first",
                    path.display(),
                    loaded.skipped.len()
                );
            }
            let (kept, removed) = catalog::dedup(loaded.records);
            if removed > 0 {
                catalog::rewrite(path, &kept)?;
            }
            eprintln!("kept {} record(s), removed {removed} duplicate(s)", kept.len());
        }
        CatalogAction::Export { out } => match out {
            Some(p) => {
                let f = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
                catalog::write_csv(f, &loaded.records)?;
            }
            None => catalog::write_csv(io::stdout().lock(), &loaded.records)?,
        },
    }
    if !loaded.skipped.is_empty() {
        eprintln!("{} corrupt line(s) skipped", loaded.skipped.len());
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// rendering

fn print_records(records: &[CatalogRecord], fmt: Format) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match fmt {
        Format::Json => {
            for r in records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => catalog::write_csv(out, records)?,
        Format::Md => {
            if records.is_empty() {
                return Ok(());
            }
            writeln!(out, "| id | parameters | n | N_F | spectrum | 3-to-1 |")?;
            writeln!(out, "|---|---|---|---|---|---|")?;
            for r in records {
                let (nf, spec, three) = match &r.profile {
                    Some(p) => (format!("[{}]", join(&p.nf, ", ")), spectrum_name(p), p.three_to_one.to_string()),
                    None => ("-".into(), "-".into(), "-".into()),
                };
                writeln!(out, "| {} | {} | {} | {nf} | {spec} | {three} |", r.id, r.params, r.n)?;
            }
        }
    }
    Ok(())
}

fn print_kv<T: Serialize>(value: &T, fields: &[(&str, String)], fmt: Format) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match fmt {
        Format::Json => writeln!(out, "{}", serde_json::to_string(value)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
            w.flush()?;
        }
        Format::Md => {
            writeln!(out, "| field | value |")?;
            writeln!(out, "|---|---|")?;
            for (k, v) in fields {
                writeln!(out, "| {k} | {v} |")?;
            }
        }
    }
    Ok(())
}
