//! Country-year panels of published indicators.
//!
//! Values are held in decimal units (Gini and shares in `[0, 1]`); percent
//! inputs are converted on ingestion. A record carries either the two decile
//! shares or, when only the inter-decile ratio is published, the `T/B` ratio
//! itself.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::composite::ShareRatio;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Wb,
    Oecd,
    Other,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Wb => "WB",
            Source::Oecd => "OECD",
            Source::Other => "OTHER",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "WB" => Ok(Source::Wb),
            "OECD" => Ok(Source::Oecd),
            "OTHER" => Ok(Source::Other),
            other => Err(Error::Domain(format!("unknown source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Decimal,
    Percent,
}

impl Unit {
    fn to_decimal(self, v: f64) -> f64 {
        match self {
            Unit::Decimal => v,
            Unit::Percent => v / 100.0,
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "decimal" => Ok(Unit::Decimal),
            "percent" => Ok(Unit::Percent),
            other => Err(Error::Domain(format!("unknown unit '{other}'"))),
        }
    }
}

/// Tail information for a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailMeasure {
    Shares { top10: f64, bottom10: f64 },
    /// Published top/bottom decile ratio, `>= 1` (infinite if the bottom
    /// decile holds nothing).
    Ratio { t_over_b: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryYearRecord {
    pub country: String,
    pub year: i32,
    pub source: Source,
    pub gini: f64,
    pub tail: TailMeasure,
}

impl CountryYearRecord {
    pub fn new(
        country: impl Into<String>,
        year: i32,
        source: Source,
        gini: f64,
        tail: TailMeasure,
    ) -> Result<Self> {
        let country = country.into();
        if country.trim().is_empty() {
            return Err(Error::Domain("empty country id".into()));
        }
        if !(gini > 0.0 && gini < 1.0) {
            return Err(Error::Domain(format!("gini {gini} outside (0, 1)")));
        }
        match tail {
            TailMeasure::Shares { top10, bottom10 } => {
                if !(top10 > 0.0 && top10 <= 1.0) {
                    return Err(Error::Domain(format!("top10 share {top10} outside (0, 1]")));
                }
                if !(0.0..1.0).contains(&bottom10) {
                    return Err(Error::Domain(format!("bottom10 share {bottom10} outside [0, 1)")));
                }
                if bottom10 > top10 {
                    return Err(Error::Domain("share ordering violated".into()));
                }
            }
            TailMeasure::Ratio { t_over_b } => {
                if t_over_b.is_nan() || t_over_b < 1.0 {
                    return Err(Error::Domain(format!("T/B ratio {t_over_b} below 1")));
                }
            }
        }
        Ok(Self { country, year, source, gini, tail })
    }

    pub fn top10(&self) -> Option<f64> {
        match self.tail {
            TailMeasure::Shares { top10, .. } => Some(top10),
            TailMeasure::Ratio { .. } => None,
        }
    }

    pub fn bottom10(&self) -> Option<f64> {
        match self.tail {
            TailMeasure::Shares { bottom10, .. } => Some(bottom10),
            TailMeasure::Ratio { .. } => None,
        }
    }

    fn key(&self) -> (&str, i32, Source) {
        (&self.country, self.year, self.source)
    }
}

/// Bottom-decile over top-decile share for a record.
pub fn ratio_of(record: &CountryYearRecord) -> ShareRatio {
    let ratio = match record.tail {
        TailMeasure::Shares { top10, bottom10 } => ShareRatio::from_shares(bottom10, top10),
        TailMeasure::Ratio { t_over_b } => ShareRatio::from_t_over_b(t_over_b),
    };
    ratio.expect("record invariants guarantee a valid ratio")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Panel {
    pub label: String,
    records: Vec<CountryYearRecord>,
}

impl Panel {
    pub fn new(label: impl Into<String>, records: Vec<CountryYearRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            if !seen.insert(r.key()) {
                return Err(Error::Domain(format!(
                    "duplicate record ({}, {}, {})",
                    r.country, r.year, r.source
                )));
            }
        }
        Ok(Self { label: label.into(), records })
    }

    pub fn records(&self) -> &[CountryYearRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn countries(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.country.as_str()).collect()
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.records.iter().map(|r| r.year).collect()
    }

    pub fn sources(&self) -> BTreeSet<Source> {
        self.records.iter().map(|r| r.source).collect()
    }

    /// Records matching the optional filters, sorted by country, year, source.
    pub fn select(&self, year: Option<i32>, source: Option<Source>) -> Panel {
        let mut records: Vec<_> = self
            .records
            .iter()
            .filter(|r| year.is_none_or(|y| r.year == y))
            .filter(|r| source.is_none_or(|s| r.source == s))
            .cloned()
            .collect();
        records.sort_by(|a, b| a.key().cmp(&b.key()));
        Panel { label: self.label.clone(), records }
    }

    pub fn slice(&self, year: i32, source: Source) -> Panel {
        self.select(Some(year), Some(source))
    }
}

/// Column names and units of an input CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaConfig {
    pub country: String,
    pub year: String,
    pub gini: String,
    pub top10: String,
    pub bottom10: String,
    pub t_over_b: String,
    /// Optional in the header; rows without it get `default_source`.
    pub source: String,
    pub default_source: Source,
    pub gini_unit: Unit,
    pub share_unit: Unit,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        Self {
            country: "country".into(),
            year: "year".into(),
            gini: "gini".into(),
            top10: "top10".into(),
            bottom10: "bottom10".into(),
            t_over_b: "t_over_b".into(),
            source: "source".into(),
            default_source: Source::Other,
            gini_unit: Unit::Decimal,
            share_unit: Unit::Decimal,
        }
    }
}

impl SchemaConfig {
    /// Applies `field=column,...` overrides, e.g. `gini=SI.POV.GINI,year=Year`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (field, column) = pair
                .split_once('=')
                .ok_or_else(|| Error::Schema(format!("expected field=column, got '{pair}'")))?;
            let column = column.trim().to_string();
            let slot = match field.trim() {
                "country" => &mut self.country,
                "year" => &mut self.year,
                "gini" => &mut self.gini,
                "top10" => &mut self.top10,
                "bottom10" => &mut self.bottom10,
                "t_over_b" => &mut self.t_over_b,
                "source" => &mut self.source,
                other => return Err(Error::Schema(format!("unknown schema field '{other}'"))),
            };
            *slot = column;
        }
        Ok(self)
    }
}

/// A skipped input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

struct Columns {
    country: usize,
    year: usize,
    gini: usize,
    shares: Option<(usize, usize)>,
    ratio: Option<usize>,
    source: Option<usize>,
}

impl Columns {
    fn resolve(header: &csv::StringRecord, schema: &SchemaConfig) -> Result<Self> {
        let index: HashMap<String, usize> = header
            .iter()
            .enumerate()
            .map(|(i, name)| (name.trim().to_ascii_lowercase(), i))
            .collect();
        let find = |name: &str| index.get(&name.trim().to_ascii_lowercase()).copied();
        let require = |name: &str| {
            find(name).ok_or_else(|| Error::Schema(format!("missing column '{name}'")))
        };

        let shares = match (find(&schema.top10), find(&schema.bottom10)) {
            (Some(t), Some(b)) => Some((t, b)),
            _ => None,
        };
        let ratio = find(&schema.t_over_b);
        if shares.is_none() && ratio.is_none() {
            return Err(Error::Schema(format!(
                "need columns '{}' and '{}', or '{}'",
                schema.top10, schema.bottom10, schema.t_over_b
            )));
        }
        Ok(Self {
            country: require(&schema.country)?,
            year: require(&schema.year)?,
            gini: require(&schema.gini)?,
            shares,
            ratio,
            source: find(&schema.source),
        })
    }
}

fn cell(row: &csv::StringRecord, idx: usize) -> &str {
    row.get(idx).map(str::trim).unwrap_or("")
}

fn number(row: &csv::StringRecord, idx: usize, what: &str) -> std::result::Result<f64, String> {
    let raw = cell(row, idx);
    if raw.is_empty() {
        return Err(format!("missing {what}"));
    }
    raw.parse::<f64>().map_err(|_| format!("unparseable {what} '{raw}'"))
}

fn parse_row(
    row: &csv::StringRecord,
    cols: &Columns,
    schema: &SchemaConfig,
) -> std::result::Result<CountryYearRecord, String> {
    let country = cell(row, cols.country);
    if country.is_empty() {
        return Err("missing country".into());
    }
    let year_raw = cell(row, cols.year);
    let year: i32 = year_raw.parse().map_err(|_| format!("unparseable year '{year_raw}'"))?;
    let gini = schema.gini_unit.to_decimal(number(row, cols.gini, "gini")?);

    let has_shares = cols
        .shares
        .is_some_and(|(t, b)| !cell(row, t).is_empty() && !cell(row, b).is_empty());
    let tail = if has_shares {
        let (t, b) = cols.shares.expect("checked above");
        TailMeasure::Shares {
            top10: schema.share_unit.to_decimal(number(row, t, "top10")?),
            bottom10: schema.share_unit.to_decimal(number(row, b, "bottom10")?),
        }
    } else if let Some(r) = cols.ratio.filter(|&r| !cell(row, r).is_empty()) {
        TailMeasure::Ratio { t_over_b: number(row, r, "T/B ratio")? }
    } else {
        return Err("missing decile shares or T/B ratio".into());
    };

    let source = match cols.source.map(|s| cell(row, s)).filter(|s| !s.is_empty()) {
        Some(s) => s.parse().map_err(|e: Error| e.to_string())?,
        None => schema.default_source,
    };

    CountryYearRecord::new(country, year, source, gini, tail).map_err(|e| match e {
        Error::Domain(reason) => reason,
        other => other.to_string(),
    })
}

/// Parses CSV text into a panel. Bad rows are skipped and reported; a header
/// lacking a required column rejects the whole input.
pub fn parse_panel(
    csv_text: &str,
    schema: &SchemaConfig,
) -> Result<(Panel, Vec<RowDiagnostic>)> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(csv_text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Schema(format!("unreadable header: {e}")))?
        .clone();
    if header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::Schema("header row is missing".into()));
    }
    let cols = Columns::resolve(&header, schema)?;

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        // header is line 1
        let fallback_line = i as u64 + 2;
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map_or(fallback_line, |p| p.line());
                diagnostics.push(RowDiagnostic { line, reason: format!("malformed row: {e}") });
                continue;
            }
        };
        let line = row.position().map_or(fallback_line, |p| p.line());
        match parse_row(&row, &cols, schema) {
            Ok(record) => {
                let key = (record.country.clone(), record.year, record.source);
                if seen.insert(key) {
                    records.push(record);
                } else {
                    diagnostics.push(RowDiagnostic {
                        line,
                        reason: format!(
                            "duplicate (country, year, source) ({}, {}, {})",
                            record.country, record.year, record.source
                        ),
                    });
                }
            }
            Err(reason) => diagnostics.push(RowDiagnostic { line, reason }),
        }
    }
    Ok((Panel { label: String::new(), records }, diagnostics))
}

pub const CANONICAL_HEADER: [&str; 7] =
    ["country", "year", "source", "gini", "top10", "bottom10", "t_over_b"];

/// Canonical CSV in decimal units. `t_over_b` is filled only for ratio-only
/// records; share records leave it empty.
pub fn serialize_panel(panel: &Panel) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CANONICAL_HEADER).expect("write to memory");
    for r in &panel.records {
        let (top, bottom, ratio) = match r.tail {
            TailMeasure::Shares { top10, bottom10 } => {
                (top10.to_string(), bottom10.to_string(), String::new())
            }
            TailMeasure::Ratio { t_over_b } => (String::new(), String::new(), t_over_b.to_string()),
        };
        writer
            .write_record([
                r.country.as_str(),
                &r.year.to_string(),
                &r.source.to_string(),
                &r.gini.to_string(),
                &top,
                &bottom,
                &ratio,
            ])
            .expect("write to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}
