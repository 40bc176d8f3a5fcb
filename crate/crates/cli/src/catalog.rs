//! Line-delimited JSON catalog of constructed functions.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{Context, Result};
use apnforge::families::FamilyParams;
use apnforge::{FieldSpec, InvariantProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    /// FNV-1a hash of the truth table, 16 hex digits.
    pub id: String,
    pub params: FamilyParams,
    pub field: FieldSpec,
    pub n: u32,
    pub profile: Option<InvariantProfile>,
    pub created_at: String,
    pub tool_version: String,
}

impl CatalogRecord {
    fn check(&self) -> Result<(), String> {
        if self.id.len() != 16 || !self.id.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("malformed id '{}'", self.id));
        }
        if self.params.n() != self.n {
            return Err(format!("n = {} disagrees with params ({})", self.n, self.params));
        }
        Ok(())
    }
}

/// Records read from a catalog, with the lines that failed to parse.
#[derive(Debug, Default)]
pub struct Loaded {
    pub records: Vec<CatalogRecord>,
    pub skipped: Vec<(usize, String)>,
}

/// Reads every line; a missing file is an empty catalog.
pub fn load(path: &Path) -> Result<Loaded> {
    let mut out = Loaded::default();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
    };
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<CatalogRecord>(&line)
            .map_err(|e| e.to_string())
            .and_then(|r| r.check().map(|_| r));
        match parsed {
            Ok(r) => out.records.push(r),
            Err(e) => out.skipped.push((idx + 1, e)),
        }
    }
    Ok(out)
}

/// Appends one record as a single write of one line.
pub fn append(path: &Path, record: &CatalogRecord) -> Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    file.write_all(line.as_bytes())
        .with_context(|| format!("appending to {}", path.display()))
}

/// Keeps the first record per id, in file order.
pub fn dedup(records: Vec<CatalogRecord>) -> (Vec<CatalogRecord>, usize) {
    let mut seen = std::collections::HashSet::new();
    let before = records.len();
    let kept: Vec<_> = records.into_iter().filter(|r| seen.insert(r.id.clone())).collect();
    let removed = before - kept.len();
    (kept, removed)
}

/// Replaces the catalog through a temporary file and a rename.
pub fn rewrite(path: &Path, records: &[CatalogRecord]) -> Result<()> {
    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut f = File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        for r in records {
            writeln!(f, "{}", serde_json::to_string(r)?)?;
        }
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))
}

/// Flat CSV view, one row per record.
pub fn write_csv<W: Write>(w: W, records: &[CatalogRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "id", "family", "params", "n", "field", "delta", "nf", "spectrum", "three_to_one",
        "nb_size", "created_at", "tool_version",
    ])?;
    for r in records {
        let p = r.profile.as_ref();
        let opt = |f: &dyn Fn(&InvariantProfile) -> String| p.map(f).unwrap_or_default();
        out.write_record([
            r.id.clone(),
            r.params.family.to_string(),
            r.params.to_string(),
            r.n.to_string(),
            r.field.to_string(),
            opt(&|p| p.delta.to_string()),
            opt(&|p| join(&p.nf, ";")),
            opt(&|p| serde_json::to_value(p.spectrum).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()),
            opt(&|p| p.three_to_one.to_string()),
            opt(&|p| p.nb_size.to_string()),
            r.created_at.clone(),
            r.tool_version.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn join(values: &[u64], sep: &str) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(sep)
}
