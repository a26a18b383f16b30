//! Versioned plain-text formats for every artifact the drivers exchange:
//! spectra, pole models, field tables, ratio and verdict reports, and a
//! per-field JSON cache.
//!
//! Every format opens with a `# weylcount <kind> format=1 ...` header line
//! carrying the metadata, followed by a column-name row and the data rows.
//! Floats are written with the shortest representation that parses back to
//! the same bits (the standard formatter), so write-then-read is exact and
//! re-serialization is byte-identical. Labels live in tab-separated formats
//! or header tails so they may contain commas; tabs and newlines inside
//! labels are rejected at write time.

use crate::chamber::{ChamberBasis, ChamberError, GeodesicClass, Provenance, Spectrum};
use crate::counting::{Normalizer, RatioReport, RatioRow};
use crate::dirichlet::{PoleModel, PoleTerm, SeriesError};
use crate::numberfield::{
    lambda_s, CubicPoly, FieldRecord, NumberFieldError, PrimeSetPolicy, UnitStatus,
};
use crate::tauberian::{VerdictReport, VerdictRow};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Format version stamped into every header this module writes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("header: {0}")]
    Header(String),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("label {0:?} contains a delimiter or newline")]
    BadLabel(String),
    #[error(transparent)]
    Chamber(#[from] ChamberError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Field(#[from] NumberFieldError),
    #[error("cache json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("value {0} does not fit the cache integer width")]
    IntegerWidth(i128),
}

fn fmt_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Format {
        line,
        msg: msg.into(),
    }
}

fn check_label(label: &str) -> Result<(), IoError> {
    if label.contains('\t') || label.contains('\n') || label.contains('\r') {
        return Err(IoError::BadLabel(label.to_string()));
    }
    Ok(())
}

fn parse_f64(tok: &str, line: usize, what: &str) -> Result<f64, IoError> {
    tok.parse::<f64>()
        .map_err(|_| fmt_err(line, format!("{what} {tok:?} is not a real number")))
}

fn parse_i64(tok: &str, line: usize, what: &str) -> Result<i64, IoError> {
    tok.parse::<i64>()
        .map_err(|_| fmt_err(line, format!("{what} {tok:?} is not an integer")))
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, IoError> {
    tok.parse::<usize>()
        .map_err(|_| fmt_err(line, format!("{what} {tok:?} is not a count")))
}

/// Split a `# weylcount <kind> key=value ...` header; the value of `tail`
/// (when given) swallows the rest of the line so it may contain spaces.
fn parse_header(
    line: &str,
    kind: &str,
    tail: Option<&str>,
) -> Result<BTreeMap<String, String>, IoError> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| IoError::Header(format!("missing '#' header, got {line:?}")))?
        .trim_start();
    let body = body
        .strip_prefix("weylcount")
        .ok_or_else(|| IoError::Header("header does not start with 'weylcount'".into()))?
        .trim_start();
    let body = body
        .strip_prefix(kind)
        .ok_or_else(|| IoError::Header(format!("expected a {kind} header, got {body:?}")))?;
    let mut attrs = BTreeMap::new();
    let mut rest = body.trim_start();
    while !rest.is_empty() {
        let (key, after) = match rest.split_once('=') {
            Some(kv) => kv,
            None => return Err(IoError::Header(format!("dangling header token {rest:?}"))),
        };
        if Some(key) == tail {
            attrs.insert(key.to_string(), after.to_string());
            rest = "";
        } else {
            let (value, after) = match after.split_once(' ') {
                Some(va) => va,
                None => (after, ""),
            };
            attrs.insert(key.to_string(), value.to_string());
            rest = after.trim_start();
        }
    }
    let version: u32 = attrs
        .get("format")
        .ok_or_else(|| IoError::Header("header lacks format=".into()))?
        .parse()
        .map_err(|_| IoError::Header("format= is not a number".into()))?;
    if version != FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(version));
    }
    Ok(attrs)
}

fn header_attr<'a>(
    attrs: &'a BTreeMap<String, String>,
    key: &str,
) -> Result<&'a str, IoError> {
    attrs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| IoError::Header(format!("header lacks {key}=")))
}

// ---------------------------------------------------------------------------
// Spectrum: tab-separated, one class per line.
// ---------------------------------------------------------------------------

/// Serialize a spectrum. Classes are already held in canonical order, so the
/// output is a pure function of the multiset of classes.
pub fn spectrum_to_string(spectrum: &Spectrum) -> Result<String, IoError> {
    let rank = spectrum.rank();
    let mut out = String::new();
    writeln!(
        out,
        "# weylcount spectrum format={FORMAT_VERSION} rank={rank} provenance={} classes={}",
        spectrum.provenance().as_str(),
        spectrum.len()
    )
    .unwrap();
    out.push_str("label");
    for k in 1..=rank {
        write!(out, "\tlen_{k}").unwrap();
    }
    out.push_str("\tflat_volume\tdet_factor\n");
    for class in spectrum.classes() {
        check_label(class.label())?;
        out.push_str(class.label());
        for l in class.lengths() {
            write!(out, "\t{l}").unwrap();
        }
        writeln!(out, "\t{}\t{}", class.flat_volume(), class.det_factor()).unwrap();
    }
    Ok(out)
}

/// Parse a spectrum; classes re-enter through the validating constructor and
/// the canonical sort, so a hand-edited file cannot smuggle in an invalid or
/// misordered class.
pub fn spectrum_from_str(text: &str) -> Result<Spectrum, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| IoError::Header("empty spectrum file".into()))?;
    let attrs = parse_header(header, "spectrum", None)?;
    let rank = parse_usize(header_attr(&attrs, "rank")?, 1, "rank")?;
    let provenance = Provenance::parse(header_attr(&attrs, "provenance")?)
        .ok_or_else(|| IoError::Header("unknown provenance".into()))?;
    let declared = parse_usize(header_attr(&attrs, "classes")?, 1, "classes")?;
    let (_, columns) = lines
        .next()
        .ok_or_else(|| IoError::Header("missing column row".into()))?;
    let expected_cols = 3 + rank;
    if columns.split('\t').count() != expected_cols {
        return Err(fmt_err(2, "column row does not match the declared rank"));
    }
    let mut classes = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != expected_cols {
            return Err(fmt_err(
                lineno,
                format!("expected {expected_cols} columns, got {}", cols.len()),
            ));
        }
        let label = cols[0].to_string();
        let mut lengths = Vec::with_capacity(rank);
        for k in 0..rank {
            lengths.push(parse_f64(cols[1 + k], lineno, "length")?);
        }
        let flat = parse_f64(cols[1 + rank], lineno, "flat_volume")?;
        let det = parse_f64(cols[2 + rank], lineno, "det_factor")?;
        classes.push(GeodesicClass::new(lengths, flat, det, label)?);
    }
    if classes.len() != declared {
        return Err(IoError::Header(format!(
            "header declares {declared} classes, file has {}",
            classes.len()
        )));
    }
    let basis = ChamberBasis::new(rank)?;
    Ok(Spectrum::from_classes(basis, provenance, classes)?)
}

// ---------------------------------------------------------------------------
// Pole model: tab-separated (Re theta_k, Im theta_k, ..., coeff) records.
// ---------------------------------------------------------------------------

/// Serialize a pole model. The leading term is implicit (pinned at one with
/// coefficient one); listed terms appear in the model's canonical order.
pub fn pole_model_to_string(model: &PoleModel) -> String {
    let rank = model.rank();
    let mut out = String::new();
    writeln!(
        out,
        "# weylcount polemodel format={FORMAT_VERSION} rank={rank} j={} terms={}",
        model.j(),
        model.terms().len()
    )
    .unwrap();
    for k in 1..=rank {
        write!(out, "re_theta_{k}\tim_theta_{k}\t").unwrap();
    }
    out.push_str("coeff\n");
    for term in model.terms() {
        for t in &term.theta {
            write!(out, "{}\t{}\t", t.re, t.im).unwrap();
        }
        writeln!(out, "{}", term.coeff).unwrap();
    }
    out
}

/// Parse a pole model; terms re-enter through the validating constructor,
/// which also restores the canonical order.
pub fn pole_model_from_str(text: &str) -> Result<PoleModel, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| IoError::Header("empty pole model file".into()))?;
    let attrs = parse_header(header, "polemodel", None)?;
    let rank = parse_usize(header_attr(&attrs, "rank")?, 1, "rank")?;
    let j = parse_usize(header_attr(&attrs, "j")?, 1, "j")? as u32;
    let declared = parse_usize(header_attr(&attrs, "terms")?, 1, "terms")?;
    lines
        .next()
        .ok_or_else(|| IoError::Header("missing column row".into()))?;
    let expected_cols = 2 * rank + 1;
    let mut terms = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != expected_cols {
            return Err(fmt_err(
                lineno,
                format!("expected {expected_cols} columns, got {}", cols.len()),
            ));
        }
        let mut theta = Vec::with_capacity(rank);
        for k in 0..rank {
            let re = parse_f64(cols[2 * k], lineno, "Re(theta)")?;
            let im = parse_f64(cols[2 * k + 1], lineno, "Im(theta)")?;
            theta.push(Complex64::new(re, im));
        }
        let coeff = parse_i64(cols[2 * rank], lineno, "coeff")?;
        terms.push(PoleTerm { theta, coeff });
    }
    if terms.len() != declared {
        return Err(IoError::Header(format!(
            "header declares {declared} terms, file has {}",
            terms.len()
        )));
    }
    Ok(PoleModel::new(rank, j, terms)?)
}

// ---------------------------------------------------------------------------
// Field table CSV.
// ---------------------------------------------------------------------------

/// The required field-table header.
pub const FIELD_TABLE_HEADER: &str =
    "poly_a,poly_b,poly_c,disc_field,h,R,fu1_c0,fu1_c1,fu1_c2,fu2_c0,fu2_c1,fu2_c2";

/// One rejected table row with its line number and reason.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedRow {
    pub line: usize,
    pub reason: String,
    pub raw: String,
}

/// Outcome of a table ingestion: validated records plus a rejection report.
#[derive(Debug)]
pub struct IngestReport {
    pub accepted: Vec<FieldRecord>,
    pub rejected: Vec<RejectedRow>,
}

/// Human-readable rejection reason for a validation failure.
fn reject_reason(e: &NumberFieldError) -> String {
    match e {
        NumberFieldError::NormNotUnit(_) => "norm ≠ ±1".to_string(),
        NumberFieldError::RegulatorMismatch { .. } => "regulator mismatch".to_string(),
        NumberFieldError::DiscMismatch { .. } => "discriminant mismatch".to_string(),
        other => other.to_string(),
    }
}

/// Ingest a field table: every row is revalidated exactly (discriminant
/// recomputation, Dedekind maximality, unit norms through the resultant,
/// regulator recomputation, Minkowski consistency), and, when a prime set is
/// given, every `p` in it must be non-decomposed in the row's field. Rows
/// that fail are collected with reasons instead of aborting the ingest;
/// a malformed prime set (too few members under the strict policy, or a
/// non-prime member) is a configuration error and aborts.
pub fn ingest_field_table_str(
    text: &str,
    s: Option<&BTreeSet<u64>>,
    policy: PrimeSetPolicy,
) -> Result<IngestReport, IoError> {
    let mut lines = text.lines().enumerate().peekable();
    let (_, header) = loop {
        match lines.next() {
            Some((i, l)) if l.trim().is_empty() || l.starts_with('#') => {
                let _ = i;
                continue;
            }
            Some(pair) => break pair,
            None => return Err(IoError::Header("empty field table".into())),
        }
    };
    if header.trim() != FIELD_TABLE_HEADER {
        return Err(IoError::Header(format!(
            "field table header must be {FIELD_TABLE_HEADER:?}"
        )));
    }
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match ingest_row(trimmed, lineno, s, policy) {
            Ok(record) => accepted.push(record),
            Err(RowOutcome::Reject(reason)) => rejected.push(RejectedRow {
                line: lineno,
                reason,
                raw: trimmed.to_string(),
            }),
            Err(RowOutcome::Abort(e)) => return Err(e),
        }
    }
    Ok(IngestReport { accepted, rejected })
}

enum RowOutcome {
    /// Row-local failure: report and continue.
    Reject(String),
    /// Configuration failure: stop the ingest.
    Abort(IoError),
}

fn ingest_row(
    line: &str,
    lineno: usize,
    s: Option<&BTreeSet<u64>>,
    policy: PrimeSetPolicy,
) -> Result<FieldRecord, RowOutcome> {
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != 12 {
        return Err(RowOutcome::Reject(format!(
            "expected 12 columns, got {}",
            cols.len()
        )));
    }
    let int = |i: usize, what: &str| -> Result<i64, RowOutcome> {
        parse_i64(cols[i], lineno, what).map_err(|e| RowOutcome::Reject(e.to_string()))
    };
    let a = int(0, "poly_a")?;
    let b = int(1, "poly_b")?;
    let c = int(2, "poly_c")?;
    let disc = int(3, "disc_field")? as i128;
    let h = int(4, "h")?;
    let h = u64::try_from(h).map_err(|_| RowOutcome::Reject(format!("h {h} is negative")))?;
    let r = parse_f64(cols[5], lineno, "R").map_err(|e| RowOutcome::Reject(e.to_string()))?;
    let mut units = [[0i64; 3]; 2];
    for (u, unit) in units.iter_mut().enumerate() {
        for (k, slot) in unit.iter_mut().enumerate() {
            *slot = int(6 + 3 * u + k, "unit coordinate")?;
        }
    }
    let poly = CubicPoly::new(a, b, c)
        .map_err(|e| RowOutcome::Reject(reject_reason(&e)))?;
    let record = FieldRecord::ingested(poly, disc, h, r, &units)
        .map_err(|e| RowOutcome::Reject(reject_reason(&e)))?;
    if let Some(set) = s {
        match lambda_s(&record, set, policy) {
            Ok(_) => {}
            Err(NumberFieldError::Decomposed { p }) => {
                return Err(RowOutcome::Reject(format!("decomposed at {p}")));
            }
            Err(e @ NumberFieldError::NotMaximalAt { .. }) => {
                return Err(RowOutcome::Reject(reject_reason(&e)));
            }
            Err(e) => return Err(RowOutcome::Abort(IoError::Field(e))),
        }
    }
    Ok(record)
}

/// Serialize records back to the table schema. Every record must carry a
/// class number, regulator, and unit pair.
/// True when a record carries everything the canonical table format needs:
/// class number, regulator, and the fundamental unit pair.
/// `field_table_to_string` refuses records failing this test, since the
/// schema has no way to write an unknown.
pub fn record_is_table_complete(record: &FieldRecord) -> bool {
    record.h().is_some() && record.r().is_some() && record.fundamental_units().is_some()
}

pub fn field_table_to_string(records: &[FieldRecord]) -> Result<String, IoError> {
    let mut out = String::new();
    writeln!(out, "# weylcount fieldtable format={FORMAT_VERSION}").unwrap();
    out.push_str(FIELD_TABLE_HEADER);
    out.push('\n');
    for record in records {
        let (a, b, c) = record.poly().coeffs();
        let h = record
            .h()
            .ok_or(NumberFieldError::MissingData("class number"))?;
        let r = record.r().ok_or(NumberFieldError::MissingData("regulator"))?;
        let units = record
            .fundamental_units()
            .ok_or(NumberFieldError::MissingData("fundamental units"))?;
        write!(out, "{a},{b},{c},{},{h},{r}", record.disc_field()).unwrap();
        for u in units {
            let [c0, c1, c2] = u.coords();
            write!(out, ",{c0},{c1},{c2}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ratio report: comma-separated with T_1..T_r columns.
// ---------------------------------------------------------------------------

/// Serialize a ratio report; the label rides in the header tail so it may
/// contain spaces and commas.
pub fn ratio_report_to_string(report: &RatioReport) -> Result<String, IoError> {
    if report.label.contains('\n') || report.label.contains('\r') {
        return Err(IoError::BadLabel(report.label.clone()));
    }
    let rank = report.rows.first().map_or(0, |row| row.bounds.len());
    let mut out = String::new();
    writeln!(
        out,
        "# weylcount ratio-report format={FORMAT_VERSION} rank={rank} normalizer={} label={}",
        report.normalizer.tag(),
        report.label
    )
    .unwrap();
    for k in 1..=rank {
        write!(out, "T{k},").unwrap();
    }
    out.push_str("count,normalizer,ratio\n");
    for row in &report.rows {
        if row.bounds.len() != rank {
            return Err(IoError::Header("rows have mixed ranks".into()));
        }
        for t in &row.bounds {
            write!(out, "{t},").unwrap();
        }
        writeln!(out, "{},{},{}", row.count, row.normalizer, row.ratio).unwrap();
    }
    Ok(out)
}

/// Parse a normalizer tag as produced by `Normalizer::tag`.
pub fn parse_normalizer_tag(tag: &str) -> Result<Normalizer, IoError> {
    if tag == "product_T_over_logs" {
        return Ok(Normalizer::ProductTOverLogs);
    }
    if let Some(inner) = tag
        .strip_prefix("product_T(constant=")
        .and_then(|t| t.strip_suffix(')'))
    {
        let constant = inner
            .parse::<f64>()
            .map_err(|_| IoError::Header(format!("bad normalizer constant {inner:?}")))?;
        return Ok(Normalizer::ProductT { constant });
    }
    if let Some(inner) = tag
        .strip_prefix("pnt_profile(j=")
        .and_then(|t| t.strip_suffix(')'))
    {
        let j = inner
            .parse::<u32>()
            .map_err(|_| IoError::Header(format!("bad normalizer j {inner:?}")))?;
        return Ok(Normalizer::PntProfile { j });
    }
    Err(IoError::Header(format!("unknown normalizer tag {tag:?}")))
}

/// Parse a ratio report back into memory.
pub fn ratio_report_from_str(text: &str) -> Result<RatioReport, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| IoError::Header("empty ratio report".into()))?;
    let attrs = parse_header(header, "ratio-report", Some("label"))?;
    let rank = parse_usize(header_attr(&attrs, "rank")?, 1, "rank")?;
    let normalizer = parse_normalizer_tag(header_attr(&attrs, "normalizer")?)?;
    let label = header_attr(&attrs, "label")?.to_string();
    lines
        .next()
        .ok_or_else(|| IoError::Header("missing column row".into()))?;
    let expected_cols = rank + 3;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != expected_cols {
            return Err(fmt_err(
                lineno,
                format!("expected {expected_cols} columns, got {}", cols.len()),
            ));
        }
        let mut bounds = Vec::with_capacity(rank);
        for k in 0..rank {
            bounds.push(parse_f64(cols[k], lineno, "bound")?);
        }
        rows.push(RatioRow {
            bounds,
            count: parse_f64(cols[rank], lineno, "count")?,
            normalizer: parse_f64(cols[rank + 1], lineno, "normalizer")?,
            ratio: parse_f64(cols[rank + 2], lineno, "ratio")?,
        });
    }
    Ok(RatioReport {
        normalizer,
        label,
        rows,
    })
}

// ---------------------------------------------------------------------------
// Verdict report: comma-separated (radius, B, tail_sup, tail_inf).
// ---------------------------------------------------------------------------

/// Serialize a convergence verdict report.
pub fn verdict_to_string(report: &VerdictReport) -> String {
    let mut out = String::new();
    write!(
        out,
        "# weylcount verdict format={FORMAT_VERSION} rank={} j={} ray=",
        report.ray.len(),
        report.j
    )
    .unwrap();
    for (k, v) in report.ray.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{v}").unwrap();
    }
    out.push('\n');
    out.push_str("radius,B,tail_sup,tail_inf\n");
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.radius, row.b, row.tail_sup, row.tail_inf
        )
        .unwrap();
    }
    out
}

/// Parse a verdict report back into memory.
pub fn verdict_from_str(text: &str) -> Result<VerdictReport, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| IoError::Header("empty verdict report".into()))?;
    let attrs = parse_header(header, "verdict", None)?;
    let rank = parse_usize(header_attr(&attrs, "rank")?, 1, "rank")?;
    let j = parse_usize(header_attr(&attrs, "j")?, 1, "j")? as u32;
    let ray: Vec<f64> = header_attr(&attrs, "ray")?
        .split(',')
        .map(|t| parse_f64(t, 1, "ray coordinate"))
        .collect::<Result<_, _>>()?;
    if ray.len() != rank {
        return Err(IoError::Header("ray length does not match rank".into()));
    }
    lines
        .next()
        .ok_or_else(|| IoError::Header("missing column row".into()))?;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(fmt_err(lineno, format!("expected 4 columns, got {}", cols.len())));
        }
        rows.push(VerdictRow {
            radius: parse_f64(cols[0], lineno, "radius")?,
            b: parse_f64(cols[1], lineno, "B")?,
            tail_sup: parse_f64(cols[2], lineno, "tail_sup")?,
            tail_inf: parse_f64(cols[3], lineno, "tail_inf")?,
        });
    }
    Ok(VerdictReport { ray, j, rows })
}

// ---------------------------------------------------------------------------
// Per-field JSON cache.
// ---------------------------------------------------------------------------

/// Certification flags as stored in the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheCertifications {
    pub h_certified_minkowski: bool,
    pub units_verified: bool,
    pub r_recomputed: bool,
}

/// Splitting data for one prime as stored in the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheSplitting {
    pub factors: Vec<(u32, u32)>,
    pub non_decomposed: bool,
    pub residue_degree: Option<u32>,
}

/// One cached field: the canonical polynomial plus every derived quantity.
/// Integers round-trip exactly; reals are written in shortest round-trip
/// form by the JSON writer, so they round-trip exactly as well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub format: u32,
    pub key: String,
    pub poly: [i64; 3],
    pub disc_poly: i64,
    pub disc_field: i64,
    pub h: Option<u64>,
    pub r: Option<f64>,
    pub units: Option<[[i64; 3]; 2]>,
    pub unit_status: String,
    pub source: String,
    pub certifications: CacheCertifications,
    pub splitting: BTreeMap<u64, CacheSplitting>,
}

/// Canonical cache key of a polynomial: the coefficient triple.
pub fn cache_key(poly: &CubicPoly) -> String {
    let (a, b, c) = poly.coeffs();
    format!("{a},{b},{c}")
}

/// File name of a cache entry inside the cache directory.
pub fn cache_file_name(poly: &CubicPoly) -> String {
    let (a, b, c) = poly.coeffs();
    format!("field_{a}_{b}_{c}.json")
}

impl CacheEntry {
    /// Snapshot a record into its cache form.
    pub fn from_record(record: &FieldRecord) -> Result<Self, IoError> {
        let (a, b, c) = record.poly().coeffs();
        let narrow = |v: i128| i64::try_from(v).map_err(|_| IoError::IntegerWidth(v));
        let splitting = record
            .splitting()
            .iter()
            .map(|(&p, st)| {
                (
                    p,
                    CacheSplitting {
                        factors: st.factors.clone(),
                        non_decomposed: st.non_decomposed,
                        residue_degree: st.residue_degree,
                    },
                )
            })
            .collect();
        Ok(CacheEntry {
            format: FORMAT_VERSION,
            key: cache_key(record.poly()),
            poly: [a, b, c],
            disc_poly: narrow(record.disc_poly())?,
            disc_field: narrow(record.disc_field())?,
            h: record.h(),
            r: record.r(),
            units: record
                .fundamental_units()
                .map(|us| [us[0].coords(), us[1].coords()]),
            unit_status: record.unit_status().as_str().to_string(),
            source: record.source().as_str().to_string(),
            certifications: CacheCertifications {
                h_certified_minkowski: record.certifications().h_certified_minkowski,
                units_verified: record.certifications().units_verified,
                r_recomputed: record.certifications().r_recomputed,
            },
            splitting,
        })
    }

    /// Rebuild the record, revalidating everything; the cache is trusted for
    /// nothing but the inputs.
    pub fn to_record(&self) -> Result<FieldRecord, IoError> {
        if self.format != FORMAT_VERSION {
            return Err(IoError::UnsupportedVersion(self.format));
        }
        let poly = CubicPoly::new(self.poly[0], self.poly[1], self.poly[2])?;
        let record = match (self.units, self.h, self.r) {
            (Some(units), Some(h), Some(r)) => {
                FieldRecord::ingested(poly, self.disc_field as i128, h, r, &units)?
            }
            _ => {
                let mut rec = FieldRecord::computed(poly, &BTreeSet::new())?;
                if let Some(units) = self.units {
                    let roots = rec.float_roots();
                    let status = match self.unit_status.as_str() {
                        "table_confirmed" => UnitStatus::TableConfirmed,
                        _ => UnitStatus::Candidate,
                    };
                    let pair = [
                        crate::numberfield::UnitElement::new(rec.poly(), &roots, units[0])?,
                        crate::numberfield::UnitElement::new(rec.poly(), &roots, units[1])?,
                    ];
                    rec.attach_units(pair, status)?;
                }
                if let Some(h) = self.h {
                    rec.attach_class_number(h, self.certifications.h_certified_minkowski)?;
                }
                rec
            }
        };
        if record.disc_poly() != self.disc_poly as i128 {
            return Err(IoError::Field(NumberFieldError::DiscMismatch {
                stored: self.disc_poly as i128,
                computed: record.disc_poly(),
            }));
        }
        // The splitting block is derived data; recompute and compare rather
        // than trust it.
        for (&p, cached) in &self.splitting {
            let fresh = record.splitting_at(p)?;
            if fresh.factors != cached.factors
                || fresh.non_decomposed != cached.non_decomposed
                || fresh.residue_degree != cached.residue_degree
            {
                return Err(IoError::Header(format!(
                    "cached splitting at {p} disagrees with recomputation"
                )));
            }
        }
        Ok(record)
    }
}

/// Write one record's cache entry under `dir`, creating the directory if
/// needed; returns the file path.
pub fn write_field_cache(dir: &Path, record: &FieldRecord) -> Result<PathBuf, IoError> {
    let entry = CacheEntry::from_record(record)?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(record.poly()));
    let mut body = serde_json::to_string_pretty(&entry)?;
    body.push('\n');
    std::fs::write(&path, body)?;
    Ok(path)
}

/// Read a record's cache entry from `dir`.
pub fn read_field_cache(dir: &Path, poly: &CubicPoly) -> Result<FieldRecord, IoError> {
    let path = dir.join(cache_file_name(poly));
    let body = std::fs::read_to_string(path)?;
    let entry: CacheEntry = serde_json::from_str(&body)?;
    entry.to_record()
}

// ---------------------------------------------------------------------------
// File helpers.
// ---------------------------------------------------------------------------

/// Write text to a file, creating parent directories.
pub fn write_text_file(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Read a whole text file.
pub fn read_text_file(path: &Path) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}

/// Ingest a field table from a file path.
pub fn ingest_field_table(
    path: &Path,
    s: Option<&BTreeSet<u64>>,
    policy: PrimeSetPolicy,
) -> Result<IngestReport, IoError> {
    ingest_field_table_str(&read_text_file(path)?, s, policy)
}
