//! Country rankings under a chosen indicator, rank comparisons and
//! per-country time series.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io;
use std::str::FromStr;

use crate::composite::{composite, round_half_away, ShareRatio, Weight};
use crate::error::{Error, Result};
use crate::panel::{ratio_of, Panel};

/// Decimal places applied to indicator values before ranking.
pub const RANK_DECIMALS: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    Gini,
    IndexI,
    RatioTb,
    Alt,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Indicator::Gini => "gini",
            Indicator::IndexI => "index_i",
            Indicator::RatioTb => "ratio_tb",
            Indicator::Alt => "alt",
        })
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gini" => Ok(Indicator::Gini),
            "index_i" | "i" | "index" => Ok(Indicator::IndexI),
            "ratio_tb" | "t_over_b" | "tb" => Ok(Indicator::RatioTb),
            "alt" | "alternative" => Ok(Indicator::Alt),
            other => Err(Error::Domain(format!("unknown indicator '{other}'"))),
        }
    }
}

/// The minimal inputs the composite index needs for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub country: String,
    pub gini: f64,
    pub ratio: ShareRatio,
}

impl Observation {
    pub fn value(&self, indicator: Indicator, weight: Weight) -> Result<f64> {
        Ok(match indicator {
            Indicator::Gini => self.gini,
            Indicator::RatioTb => self.ratio.t_over_b(),
            Indicator::IndexI => composite(self.gini, self.ratio, weight)?.index_i,
            Indicator::Alt => composite(self.gini, self.ratio, weight)?.alt_index,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankEntry {
    pub rank: usize,
    pub country: String,
    /// Rounded to [`RANK_DECIMALS`].
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub indicator: Indicator,
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn rank_of(&self, country: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.country == country).map(|e| e.rank)
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "country", &self.indicator.to_string()])?;
        for e in &self.entries {
            w.write_record([e.rank.to_string(), e.country.clone(), format!("{:.3}", e.value)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Competition ranking ("1224") of observations, lowest value first.
pub fn rank_observations(
    observations: &[Observation],
    indicator: Indicator,
    weight: Weight,
) -> Result<RankTable> {
    if observations.is_empty() {
        return Err(Error::EmptyInput("nothing to rank".into()));
    }
    let mut seen = HashSet::new();
    let mut scored = Vec::with_capacity(observations.len());
    for obs in observations {
        if !seen.insert(obs.country.as_str()) {
            return Err(Error::MixedPanel(format!("country '{}' appears twice", obs.country)));
        }
        let value = round_half_away(obs.value(indicator, weight)?, RANK_DECIMALS);
        scored.push((value, obs.country.clone()));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut entries: Vec<RankEntry> = Vec::with_capacity(scored.len());
    for (i, (value, country)) in scored.into_iter().enumerate() {
        let rank = match entries.last() {
            Some(prev) if prev.value == value => prev.rank,
            _ => i + 1,
        };
        entries.push(RankEntry { rank, country, value });
    }
    Ok(RankTable { indicator, entries })
}

fn observations(panel: &Panel) -> Vec<Observation> {
    panel
        .records()
        .iter()
        .map(|r| Observation { country: r.country.clone(), gini: r.gini, ratio: ratio_of(r) })
        .collect()
}

/// Ranks a single-year, single-source panel.
pub fn rank(panel: &Panel, indicator: Indicator, weight: Weight) -> Result<RankTable> {
    if panel.is_empty() {
        return Err(Error::EmptyInput("panel has no records".into()));
    }
    if panel.years().len() > 1 || panel.sources().len() > 1 {
        return Err(Error::MixedPanel(format!(
            "{} years and {} sources; slice the panel first",
            panel.years().len(),
            panel.sources().len()
        )));
    }
    rank_observations(&observations(panel), indicator, weight)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankComparison {
    pub changed: usize,
    pub unchanged: usize,
    pub per_country: BTreeMap<String, (usize, usize)>,
}

impl RankComparison {
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country", "rank_a", "rank_b", "changed"])?;
        for (country, (a, b)) in &self.per_country {
            w.write_record([country.clone(), a.to_string(), b.to_string(), (a != b).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Any difference in rank counts as a change, including moves into or out
/// of a tie group.
pub fn compare_rankings(a: &RankTable, b: &RankTable) -> Result<RankComparison> {
    let set_a: BTreeSet<&str> = a.entries.iter().map(|e| e.country.as_str()).collect();
    let set_b: BTreeSet<&str> = b.entries.iter().map(|e| e.country.as_str()).collect();
    if set_a != set_b {
        return Err(Error::Join {
            only_in_a: set_a.difference(&set_b).map(|s| s.to_string()).collect(),
            only_in_b: set_b.difference(&set_a).map(|s| s.to_string()).collect(),
        });
    }
    let ranks_b: BTreeMap<&str, usize> =
        b.entries.iter().map(|e| (e.country.as_str(), e.rank)).collect();
    let per_country: BTreeMap<String, (usize, usize)> = a
        .entries
        .iter()
        .map(|e| (e.country.clone(), (e.rank, ranks_b[e.country.as_str()])))
        .collect();
    let changed = per_country.values().filter(|(ra, rb)| ra != rb).count();
    Ok(RankComparison { changed, unchanged: per_country.len() - changed, per_country })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub year: i32,
    pub gini: f64,
    pub t_over_b: f64,
    pub index_i: f64,
}

pub fn series(panel: &Panel, country: &str, weight: Weight) -> Result<Vec<SeriesPoint>> {
    let mut rows: Vec<_> = panel.records().iter().filter(|r| r.country == country).collect();
    if rows.is_empty() {
        return Err(Error::NotFound(format!("country '{country}'")));
    }
    let sources: BTreeSet<_> = rows.iter().map(|r| r.source).collect();
    if sources.len() > 1 {
        return Err(Error::MixedPanel(format!("'{country}' has rows from {} sources", sources.len())));
    }
    rows.sort_by_key(|r| r.year);
    rows.iter()
        .map(|r| {
            let ratio = ratio_of(r);
            Ok(SeriesPoint {
                year: r.year,
                gini: r.gini,
                t_over_b: ratio.t_over_b(),
                index_i: composite(r.gini, ratio, weight)?.index_i,
            })
        })
        .collect()
}

pub fn write_series_csv<W: io::Write>(points: &[SeriesPoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["year", "gini", "t_over_b", "index_i"])?;
    for p in points {
        w.write_record([
            p.year.to_string(),
            format!("{:.6}", p.gini),
            format!("{:.6}", p.t_over_b),
            format!("{:.6}", p.index_i),
        ])?;
    }
    w.flush()?;
    Ok(())
}
