//! Results CSV and run manifests.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pcdec::harness::BerRecord;
use pcdec::product::OpCounters;

pub const CSV_HEADER: [&str; 10] =
    ["algorithm", "ebno_db", "iterations", "frames", "bit_errors", "frame_errors", "ber", "fer", "seed", "w"];

/// One CSV line. Field order is the file schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub algorithm: String,
    pub ebno_db: f64,
    pub iterations: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub seed: u64,
    /// Semicolon-separated weights, empty when unused.
    pub w: String,
}

impl From<&BerRecord> for CsvRow {
    fn from(r: &BerRecord) -> Self {
        Self {
            algorithm: r.algorithm.name().to_string(),
            ebno_db: r.ebno_db,
            iterations: r.iterations,
            frames: r.frames,
            bit_errors: r.bit_errors,
            frame_errors: r.frame_errors,
            ber: r.ber,
            fer: r.fer,
            seed: r.seed,
            w: r.w.as_ref().map(|w| join_weights(w)).unwrap_or_default(),
        }
    }
}

impl CsvRow {
    pub fn to_record(&self) -> Result<BerRecord> {
        let w = if self.w.is_empty() { None } else { Some(split_weights(&self.w)?) };
        Ok(BerRecord {
            algorithm: self.algorithm.parse()?,
            ebno_db: self.ebno_db,
            iterations: self.iterations,
            frames: self.frames,
            bit_errors: self.bit_errors,
            frame_errors: self.frame_errors,
            ber: self.ber,
            fer: self.fer,
            w,
            seed: self.seed,
            wall_time: Duration::ZERO,
            budget_exhausted: false,
            ops: OpCounters::default(),
        })
    }
}

pub fn join_weights(w: &[f64]) -> String {
    w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

pub fn split_weights(s: &str) -> Result<Vec<f64>> {
    s.split(';').map(|v| v.trim().parse::<f64>().with_context(|| format!("bad weight '{v}'"))).collect()
}

/// Streams rows to a CSV sink, flushing after each row.
pub struct ResultsWriter {
    inner: csv::Writer<Box<dyn Write>>,
}

impl ResultsWriter {
    /// Writes `# `-prefixed comment lines, then the header.
    pub fn new(mut sink: Box<dyn Write>, comments: &[String]) -> Result<Self> {
        for c in comments {
            writeln!(sink, "# {c}")?;
        }
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
        inner.write_record(CSV_HEADER)?;
        inner.flush()?;
        Ok(Self { inner })
    }

    pub fn create(path: Option<&Path>, comments: &[String]) -> Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
            None => Box::new(std::io::stdout()),
        };
        Self::new(sink, comments)
    }

    pub fn write(&mut self, rec: &BerRecord) -> Result<()> {
        self.inner.serialize(CsvRow::from(rec))?;
        self.inner.flush()?;
        Ok(())
    }
}

/// Comment lines (without the `# ` prefix) and rows of a results file.
pub fn read_results(path: &Path) -> Result<(Vec<String>, Vec<CsvRow>)> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut comments = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim_start().to_string());
        }
    }
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let rows = rdr.deserialize().collect::<Result<Vec<CsvRow>, _>>().context("malformed results row")?;
    Ok((comments, rows))
}

/// Everything needed to trace a results file back to its inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub id: String,
    pub command: String,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub master_seed: u64,
    pub outputs: Vec<String>,
    /// Effective configuration after merging files and overrides.
    pub config: String,
}

impl RunManifest {
    pub fn start(command: &str, master_seed: u64, outputs: Vec<String>, config: String) -> Self {
        let mut m = Self {
            id: String::new(),
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: chrono::Utc::now().to_rfc3339(),
            finished_at: None,
            master_seed,
            outputs,
            config,
        };
        m.id = m.digest();
        m
    }

    /// SHA-256 of the manifest with `id` and `finished_at` cleared.
    pub fn digest(&self) -> String {
        let mut m = self.clone();
        m.id.clear();
        m.finished_at = None;
        let json = serde_json::to_vec(&m).expect("manifest serializes");
        format!("{:x}", Sha256::digest(&json))
    }

    pub fn finish(&mut self) {
        self.finished_at = Some(chrono::Utc::now().to_rfc3339());
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Comment prefix carrying the manifest id.
pub const MANIFEST_COMMENT: &str = "manifest sha256=";

/// Comment prefix carrying the code parameters.
pub const CODE_COMMENT: &str = "code ";

pub fn code_comment(n: usize, k: usize, rate: f64) -> String {
    format!("{CODE_COMMENT}n={n} k={k} rate={rate}")
}

/// Rate recorded in a `code` comment line.
pub fn rate_from_comments(comments: &[String]) -> Option<f64> {
    comments
        .iter()
        .filter_map(|c| c.strip_prefix(CODE_COMMENT))
        .flat_map(|c| c.split_whitespace())
        .find_map(|kv| kv.strip_prefix("rate=")?.parse().ok())
}
