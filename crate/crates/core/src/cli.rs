//! Suite registry, configuration, execution and reports for the `verify`
//! binary.
//!
//! A structured report is two JSON documents separated by a newline: a
//! one-line header with the timings, then the body. The body depends only
//! on the configuration and the seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cybe::verify_classical;
use crate::fields::check_fields;
use crate::fundrep::verify_fundamental;
use crate::hopf::{
    adjudicate_antipode, twisted_table, undeformed_table, verify_closed_forms, verify_hopf_axioms, verify_twist, Algebra,
    AntipodeVariant, FormVariant,
};
use crate::report::{Check, CheckVerdict};
use crate::rtt::{check_classical_limit, check_constant_term, check_z_series, verify_rtt, ModeAlgebra};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Default certificate cache directory when `--cache` is absent.
pub const CACHE_ENV: &str = "TWISTED_YANGIAN_CACHE";

/// t-degree cutoff of the loop-algebra checks.
const LOOP_CUTOFF: i32 = 6;
/// Extra bracket indices allowed in RTT ideal multiples.
const RTT_MARGIN: u32 = 2;
/// Intertwining and closed forms stop at this ξ-order.
const CLOSED_FORM_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Twist,
    HopfAxioms,
    Cybe,
    Fundrep,
    RttQdet,
    Fields,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Twist, Suite::HopfAxioms, Suite::Cybe, Suite::Fundrep, Suite::RttQdet, Suite::Fields];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Twist => "twist",
            Suite::HopfAxioms => "hopf-axioms",
            Suite::Cybe => "cybe",
            Suite::Fundrep => "fundrep",
            Suite::RttQdet => "rtt-qdet",
            Suite::Fields => "fields",
        }
    }

    /// Suites named by `s`; `all` expands to the whole registry.
    pub fn parse(s: &str) -> Result<Vec<Suite>, ConfigError> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x]).ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }

    /// ξ-order, mode cutoff and degree bound used when the configuration
    /// leaves them open.
    pub fn defaults(self) -> (usize, usize, usize) {
        match self {
            Suite::Twist => (6, 0, 0),
            Suite::HopfAxioms => (4, 0, 5),
            Suite::Cybe | Suite::Fundrep => (0, 0, 0),
            Suite::RttQdet => (6, 3, 4),
            Suite::Fields => (2, 2, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("no suite given")]
    NoSuites,
    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub xi_order: Option<usize>,
    pub mode_order: Option<usize>,
    pub degree_bound: Option<usize>,
    pub workers: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suites: Vec<Suite>) -> SuiteConfig {
        SuiteConfig {
            suites,
            xi_order: None,
            mode_order: None,
            degree_bound: None,
            workers: 0,
            seed: 0,
            format: Format::Text,
            cache_dir: None,
        }
    }

    /// Sorted, deduplicated suites; rejects an empty list and cutoffs the
    /// checks cannot run at.
    pub fn validate(&self) -> Result<SuiteConfig, ConfigError> {
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuites);
        }
        let mut c = self.clone();
        c.suites.sort();
        c.suites.dedup();
        if c.suites.iter().any(|s| matches!(s, Suite::RttQdet | Suite::Fields)) && c.mode_order == Some(0) {
            return Err(ConfigError::TooSmall("mode order", 1));
        }
        if c.suites.contains(&Suite::Twist) && c.xi_order == Some(0) {
            return Err(ConfigError::TooSmall("xi order", 1));
        }
        if matches!(c.degree_bound, Some(d) if d < 2) {
            return Err(ConfigError::TooSmall("degree bound", 2));
        }
        Ok(c)
    }

    fn orders(&self, s: Suite) -> (usize, usize, usize) {
        let (x, m, d) = s.defaults();
        (self.xi_order.unwrap_or(x), self.mode_order.unwrap_or(m), self.degree_bound.unwrap_or(d))
    }
}

/// One check in a report. `certificates` holds content hashes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: Suite,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub corrected_pass: usize,
    pub inconclusive_at_bound: usize,
    pub fail: usize,
}

impl Summary {
    fn of(records: &[Record]) -> Summary {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.check.verdict {
                CheckVerdict::Pass => s.pass += 1,
                CheckVerdict::CorrectedPass => s.corrected_pass += 1,
                CheckVerdict::InconclusiveAtBound => s.inconclusive_at_bound += 1,
                CheckVerdict::Fail => s.fail += 1,
            }
        }
        s
    }

    pub fn passed(&self) -> usize {
        self.pass + self.corrected_pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub engine_version: String,
    pub started_unix_s: u64,
    pub elapsed_s: f64,
    /// Wall time per suite, in seconds.
    pub suite_elapsed_s: Vec<(Suite, f64)>,
    #[serde(default)]
    pub cache_warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Body {
    pub schema_version: u32,
    pub engine_version: String,
    pub config: SuiteConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub header: Header,
    pub body: Body,
}

impl Report {
    /// 0 when everything passed, 1 on any failure, 3 when the only
    /// shortfalls are inconclusive.
    pub fn exit_code(&self) -> i32 {
        let s = &self.body.summary;
        if s.fail > 0 {
            1
        } else if s.inconclusive_at_bound > 0 {
            3
        } else {
            0
        }
    }
}

fn run_one(suite: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    let (xi, mode, degree) = cfg.orders(suite);
    match suite {
        Suite::Twist => {
            let mut out = verify_twist(xi, CLOSED_FORM_ORDER);
            let algs = [Algebra::BMinus, Algebra::Sl2, Algebra::Yangian];
            out.extend(algs.par_iter().flat_map_iter(|&a| verify_closed_forms(a, xi.min(CLOSED_FORM_ORDER))).collect::<Vec<_>>());
            out
        }
        Suite::HopfAxioms => {
            let tables = [
                undeformed_table(Algebra::Yangian, FormVariant::Corrected, xi),
                twisted_table(Algebra::BMinus, FormVariant::Corrected, AntipodeVariant::TMinusOne, xi),
                twisted_table(Algebra::Sl2, FormVariant::Corrected, AntipodeVariant::TMinusOne, xi),
                twisted_table(Algebra::Yangian, FormVariant::Corrected, AntipodeVariant::TMinusOne, xi),
            ];
            let mut out: Vec<Check> = tables.par_iter().flat_map_iter(|t| verify_hopf_axioms(t, xi, degree)).collect();
            for a in [Algebra::Sl2, Algebra::Yangian] {
                out.extend(adjudicate_antipode(a, xi, degree));
            }
            out
        }
        Suite::Cybe => match verify_classical(LOOP_CUTOFF, cfg.seed) {
            Ok(c) => c,
            Err(e) => vec![Check::new("cybe/setup", "RS1", CheckVerdict::Fail).details(e.to_string())],
        },
        Suite::Fundrep => verify_fundamental(),
        Suite::RttQdet => {
            let mut out = Vec::new();
            for alg in [ModeAlgebra::undeformed(mode), ModeAlgebra::deformed(mode)] {
                out.extend(verify_rtt(&alg, degree, RTT_MARGIN));
            }
            out.extend(check_classical_limit(mode));
            out.extend(check_z_series(xi));
            out.extend(check_constant_term(xi.min(CLOSED_FORM_ORDER)));
            out
        }
        Suite::Fields => check_fields(mode, xi),
    }
}

fn hash_text(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// Writes `text` under its hash unless already present.
fn store_certificate(dir: &Path, hash: &str, text: &str) -> std::io::Result<()> {
    let path = dir.join(format!("{hash}.cert"));
    if path.exists() {
        return Ok(());
    }
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{hash}.tmp{}", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(tmp, path)
}

/// Reads a stored certificate back.
pub fn load_certificate(dir: &Path, hash: &str) -> std::io::Result<String> {
    std::fs::read_to_string(dir.join(format!("{hash}.cert")))
}

/// Runs the configured suites. Certificates are replaced by their hashes
/// and written to the cache directory when one is set; cache errors are
/// reported in the header and otherwise ignored.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, ConfigError> {
    let cfg = config.validate()?;
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let t0 = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build().expect("thread pool");
    let mut records = Vec::new();
    let mut timings = Vec::new();
    let mut warnings = Vec::new();
    for &suite in &cfg.suites {
        let t = Instant::now();
        let checks = pool.install(|| run_one(suite, &cfg));
        timings.push((suite, t.elapsed().as_secs_f64()));
        for mut c in checks {
            let texts = std::mem::take(&mut c.certificates);
            for text in texts {
                let h = hash_text(&text);
                if let Some(dir) = &cfg.cache_dir {
                    if let Err(e) = store_certificate(dir, &h, &text) {
                        if warnings.is_empty() {
                            warnings.push(format!("certificate cache bypassed: {e}"));
                        }
                    }
                }
                c.certificates.push(h);
            }
            records.push(Record { suite, check: c });
        }
    }
    records.sort_by(|a, b| (a.suite, &a.check.id).cmp(&(b.suite, &b.check.id)));
    let summary = Summary::of(&records);
    let mut cfg = cfg;
    cfg.cache_dir = None;
    Ok(Report {
        header: Header {
            engine_version: ENGINE_VERSION.to_string(),
            started_unix_s: started,
            elapsed_s: t0.elapsed().as_secs_f64(),
            suite_elapsed_s: timings,
            cache_warnings: warnings,
        },
        body: Body { schema_version: SCHEMA_VERSION, engine_version: ENGINE_VERSION.to_string(), config: cfg, records, summary },
    })
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string(&r.header).expect("header serializes");
            s.push('\n');
            s.push_str(&serde_json::to_string_pretty(&r.body).expect("body serializes"));
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => emit_text(r).into_bytes(),
    }
}

fn emit_text(r: &Report) -> String {
    let mut s = String::new();
    let b = &r.body;
    let suites: Vec<&str> = b.config.suites.iter().map(|x| x.name()).collect();
    writeln!(s, "twisted-yangian verify {} (schema {})", b.engine_version, b.schema_version).unwrap();
    writeln!(s, "suites: {}   elapsed: {:.2} s", suites.join(", "), r.header.elapsed_s).unwrap();
    for w in &r.header.cache_warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    let mut current = None;
    for rec in &b.records {
        if current != Some(rec.suite) {
            current = Some(rec.suite);
            let (xi, mode, degree) = b.config.orders(rec.suite);
            writeln!(s, "\n[{}] xi-order {xi}, mode-order {mode}, degree-bound {degree}", rec.suite.name()).unwrap();
        }
        let c = &rec.check;
        writeln!(s, "  {:<22} {:<7} {}", c.verdict.as_str(), c.tag, c.id).unwrap();
        if c.verdict != CheckVerdict::Pass {
            if let Some(d) = &c.details {
                writeln!(s, "      {d}").unwrap();
            }
            if let (Some(p), Some(o)) = (&c.paper_form, &c.oracle_form) {
                writeln!(s, "      printed: {p}").unwrap();
                writeln!(s, "      holds:   {o}").unwrap();
            }
        }
    }
    let m = &b.summary;
    writeln!(
        s,
        "\n{}/{} checks passed ({} pass, {} corrected-pass, {} inconclusive-at-bound, {} fail)",
        m.passed(),
        m.total,
        m.pass,
        m.corrected_pass,
        m.inconclusive_at_bound,
        m.fail
    )
    .unwrap();
    s
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Inverse of the structured format.
pub fn parse_report(bytes: &[u8]) -> Result<Report, ParseError> {
    let text = String::from_utf8_lossy(bytes);
    let (head, body) = text.split_once('\n').ok_or(ParseError::MissingHeader)?;
    Ok(Report { header: serde_json::from_str(head)?, body: serde_json::from_str(body)? })
}

/// The structured report without its header line.
pub fn body_bytes(structured: &[u8]) -> &[u8] {
    match structured.iter().position(|&b| b == b'\n') {
        Some(i) => &structured[i + 1..],
        None => structured,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        assert_eq!(Suite::parse("all").unwrap().len(), 6);
        assert_eq!(Suite::parse("rtt-qdet").unwrap(), vec![Suite::RttQdet]);
        assert!(matches!(Suite::parse("nope"), Err(ConfigError::UnknownSuite(_))));
        assert_eq!(SuiteConfig::new(vec![]).validate(), Err(ConfigError::NoSuites));
    }

    #[test]
    fn fundrep_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = SuiteConfig::new(vec![Suite::Fundrep, Suite::Fundrep]);
        cfg.cache_dir = Some(dir.path().to_path_buf());
        cfg.format = Format::Structured;
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.body.config.suites, vec![Suite::Fundrep]);
        let bytes = emit_report(&r, Format::Structured);
        assert_eq!(parse_report(&bytes).unwrap().body, r.body);
        let again = emit_report(&run_suite(&cfg).unwrap(), Format::Structured);
        assert_eq!(body_bytes(&bytes), body_bytes(&again));
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains(&format!("{}/{} checks passed", r.body.summary.passed(), r.body.summary.total)));
    }
}
