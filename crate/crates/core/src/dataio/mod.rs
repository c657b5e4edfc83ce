//! Grouped income-distribution records: CSV ingestion with validation,
//! the built-in four-country dataset, and CSV report output.
//!
//! Schema (comma separated, `#` starts a comment line):
//!
//! | column | required | meaning |
//! |---|---|---|
//! | `country`, `year`, `gini` | yes | |
//! | `d1` .. `d10` | all or none | decile income shares, poorest first |
//! | `bottom10`, `top10`, `bottom5`, `top5` | in pairs | tail income shares |
//! | `ratio10`, `ratio5` | no | published bottom/top ratio for that tail |

mod builtin;
mod report;

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{DecileShares, DECILES};
use crate::simple::TailShareObservation;

pub use builtin::builtin_paper_dataset;
pub use report::{write_report_csv, Cell, Column, Report};

/// Share sums within this distance of 1 pass silently.
pub const SHARE_SUM_EXACT: f64 = 1e-3;
/// Share sums within this distance of 1 pass with a warning; beyond it the
/// row is rejected.
pub const SHARE_SUM_SOFT: f64 = 0.01;
const MONOTONE_SLACK: f64 = 1e-6;
const TAIL_CONSISTENCY: f64 = 1e-3;

const DECILE_COLUMNS: [&str; DECILES] = ["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "d10"];

/// Tail columns: `(m, bottom, top, ratio)`.
const TAIL_COLUMNS: [(f64, &str, &str, &str); 2] = [
    (0.10, "bottom10", "top10", "ratio10"),
    (0.05, "bottom5", "top5", "ratio5"),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedDistribution {
    pub country: String,
    pub year: i32,
    pub gini: f64,
    pub decile_shares: Option<DecileShares>,
    pub tail_observations: Vec<TailShareObservation>,
}

/// Where a tail ratio came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioSource {
    /// `D1 / D10` from the decile shares (10% tails only).
    Deciles,
    /// The separately published ratio.
    Published,
    /// Quotient of the bottom and top shares.
    Shares,
}

impl RatioSource {
    pub fn label(&self) -> &'static str {
        match self {
            RatioSource::Deciles => "deciles",
            RatioSource::Published => "published",
            RatioSource::Shares => "shares",
        }
    }
}

impl GroupedDistribution {
    pub fn tail_observation(&self, m: f64) -> Option<&TailShareObservation> {
        self.tail_observations
            .iter()
            .find(|o| (o.m() - m).abs() < 1e-12)
    }

    /// The most precise bottom/top ratio available for tail size `m`.
    ///
    /// Tail shares are usually printed to three decimals, which loses most of
    /// the bottom share's precision. Decile shares carry a fourth decimal, so
    /// for `m = 0.1` the ratio `D1 / D10` is preferred; otherwise a published
    /// ratio beats the quotient of the rounded shares.
    pub fn tail_ratio(&self, m: f64) -> Option<(f64, RatioSource)> {
        if (m - 0.1).abs() < 1e-12 {
            if let Some(d) = &self.decile_shares {
                if d[0] > 0.0 && d[DECILES - 1] > 0.0 {
                    return Some((d[0] / d[DECILES - 1], RatioSource::Deciles));
                }
            }
        }
        let obs = self.tail_observation(m)?;
        Some(match obs.published_ratio() {
            Some(r) => (r, RatioSource::Published),
            None => (obs.bottom_share() / obs.top_share(), RatioSource::Shares),
        })
    }

    /// Checks every record invariant; `row` is used in diagnostics.
    pub fn validate(&self, row: u64) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        let fail = |message: String| Error::Validation { row, message };
        if self.country.trim().is_empty() {
            return Err(fail("country is empty".into()));
        }
        if !(0.0..1.0).contains(&self.gini) {
            return Err(fail(format!("gini {} outside [0, 1)", self.gini)));
        }
        if let Some(d) = &self.decile_shares {
            let total = d.sum();
            let drift = (total - 1.0).abs();
            if drift > SHARE_SUM_SOFT {
                return Err(fail(format!("decile shares sum to {total}, expected 1")));
            }
            if drift > SHARE_SUM_EXACT {
                warnings.push(format!(
                    "row {row}: decile shares sum to {total:.6}; accepted as publication rounding"
                ));
            }
            for (i, pair) in d.windows(2).enumerate() {
                if pair[1] < pair[0] - MONOTONE_SLACK {
                    return Err(fail(format!(
                        "decile shares decrease from d{} = {} to d{} = {}",
                        i + 1,
                        pair[0],
                        i + 2,
                        pair[1]
                    )));
                }
            }
            if let Some(obs) = self.tail_observation(0.1) {
                let (d1, d10) = (d[0], d[DECILES - 1]);
                if (obs.bottom_share() - d1).abs() > TAIL_CONSISTENCY {
                    return Err(fail(format!(
                        "bottom10 = {} disagrees with d1 = {d1}",
                        obs.bottom_share()
                    )));
                }
                if (obs.top_share() - d10).abs() > TAIL_CONSISTENCY {
                    return Err(fail(format!(
                        "top10 = {} disagrees with d10 = {d10}",
                        obs.top_share()
                    )));
                }
            }
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedDataset {
    pub records: Vec<GroupedDistribution>,
    /// Soft-validation notes, e.g. share sums accepted as rounding.
    pub warnings: Vec<String>,
}

struct Layout {
    country: usize,
    year: usize,
    gini: usize,
    deciles: Option<[usize; DECILES]>,
    tails: Vec<(f64, usize, usize, Option<usize>)>,
}

fn header_error(message: String) -> Error {
    Error::Validation { row: 1, message }
}

fn layout(headers: &csv::StringRecord) -> Result<Layout> {
    let names: Vec<String> = headers.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(header_error(format!("duplicate column `{n}`")));
        }
        let known = ["country", "year", "gini"].contains(&n.as_str())
            || DECILE_COLUMNS.contains(&n.as_str())
            || TAIL_COLUMNS
                .iter()
                .any(|(_, b, t, r)| [b, t, r].contains(&&n.as_str()));
        if !known {
            return Err(header_error(format!("unknown column `{n}`")));
        }
    }
    let find = |name: &str| names.iter().position(|n| n == name);
    let required = |name: &str| {
        find(name).ok_or_else(|| header_error(format!("missing required column `{name}`")))
    };

    let present: Vec<Option<usize>> = DECILE_COLUMNS.iter().map(|c| find(c)).collect();
    let deciles = match present.iter().filter(|p| p.is_some()).count() {
        0 => None,
        DECILES => {
            let mut idx = [0; DECILES];
            for (slot, p) in idx.iter_mut().zip(&present) {
                *slot = p.expect("all present");
            }
            Some(idx)
        }
        _ => {
            return Err(header_error(
                "decile columns d1..d10 must be all present or all absent".into(),
            ))
        }
    };

    let mut tails = Vec::new();
    for (m, b, t, r) in TAIL_COLUMNS {
        match (find(b), find(t)) {
            (Some(bi), Some(ti)) => tails.push((m, bi, ti, find(r))),
            (None, None) => {
                if find(r).is_some() {
                    return Err(header_error(format!("`{r}` needs `{b}` and `{t}`")));
                }
            }
            _ => return Err(header_error(format!("`{b}` and `{t}` must appear together"))),
        }
    }

    Ok(Layout {
        country: required("country")?,
        year: required("year")?,
        gini: required("gini")?,
        deciles,
        tails,
    })
}

struct Row<'a> {
    record: &'a csv::StringRecord,
    headers: &'a csv::StringRecord,
    line: u64,
}

impl Row<'_> {
    fn raw(&self, idx: usize) -> &str {
        self.record.get(idx).unwrap_or("").trim()
    }

    fn column(&self, idx: usize) -> String {
        self.headers.get(idx).unwrap_or("").trim().to_ascii_lowercase()
    }

    fn error(&self, idx: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            row: self.line,
            column: self.column(idx),
            message: message.into(),
        }
    }

    fn number(&self, idx: usize) -> Result<f64> {
        let raw = self.raw(idx);
        if raw.is_empty() {
            return Err(self.error(idx, "missing value"));
        }
        let v: f64 = raw
            .parse()
            .map_err(|_| self.error(idx, format!("`{raw}` is not a number")))?;
        if !v.is_finite() {
            return Err(self.error(idx, format!("`{raw}` is not finite")));
        }
        Ok(v)
    }

    fn optional_number(&self, idx: usize) -> Result<Option<f64>> {
        if self.raw(idx).is_empty() {
            Ok(None)
        } else {
            self.number(idx).map(Some)
        }
    }
}

fn parse_row(row: &Row<'_>, layout: &Layout) -> Result<GroupedDistribution> {
    let country = row.raw(layout.country).to_string();
    if country.is_empty() {
        return Err(row.error(layout.country, "missing value"));
    }
    let year_raw = row.raw(layout.year);
    let year: i32 = year_raw
        .parse()
        .map_err(|_| row.error(layout.year, format!("`{year_raw}` is not an integer year")))?;
    let gini = row.number(layout.gini)?;
    if !(0.0..1.0).contains(&gini) {
        return Err(row.error(layout.gini, format!("{gini} outside [0, 1)")));
    }

    let decile_shares = match &layout.deciles {
        None => None,
        Some(idx) => {
            let values: Vec<Option<f64>> = idx
                .iter()
                .map(|&i| row.optional_number(i))
                .collect::<Result<_>>()?;
            match values.iter().filter(|v| v.is_some()).count() {
                0 => None,
                DECILES => {
                    let shares: Vec<f64> = values.into_iter().flatten().collect();
                    for (&i, &s) in idx.iter().zip(&shares) {
                        if s < 0.0 {
                            return Err(row.error(i, format!("negative share {s}")));
                        }
                    }
                    Some(DecileShares::new(&shares)?)
                }
                _ => {
                    let missing = idx
                        .iter()
                        .zip(&values)
                        .find(|(_, v)| v.is_none())
                        .map(|(&i, _)| i)
                        .expect("some missing");
                    return Err(row.error(missing, "decile shares must be all present or all empty"));
                }
            }
        }
    };

    let mut tail_observations = Vec::new();
    for &(m, bi, ti, ri) in &layout.tails {
        let bottom = row.optional_number(bi)?;
        let top = row.optional_number(ti)?;
        let ratio = match ri {
            Some(r) => row.optional_number(r)?,
            None => None,
        };
        match (bottom, top) {
            (Some(b), Some(t)) => {
                let obs = TailShareObservation::new(m, b, t).map_err(|e| row.error(bi, e.to_string()))?;
                let obs = match ratio {
                    Some(r) => obs
                        .with_published_ratio(r)
                        .map_err(|e| row.error(ri.expect("ratio column"), e.to_string()))?,
                    None => obs,
                };
                tail_observations.push(obs);
            }
            (None, None) => {
                if let (Some(_), Some(r)) = (ratio, ri) {
                    return Err(row.error(r, "ratio given without bottom and top shares"));
                }
            }
            (None, Some(_)) => return Err(row.error(bi, "missing value")),
            (Some(_), None) => return Err(row.error(ti, "missing value")),
        }
    }

    Ok(GroupedDistribution {
        country,
        year,
        gini,
        decile_shares,
        tail_observations,
    })
}

/// Parses grouped records from CSV. Errors carry the 1-based line number
/// and, for malformed fields, the column name.
pub fn parse_grouped_csv<R: Read>(input: R) -> Result<ParsedDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(ParsedDataset::default());
    }
    let layout = layout(&headers)?;

    let mut out = ParsedDataset::default();
    let mut record = csv::StringRecord::new();
    while reader.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(Error::Validation {
                row: line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let row = Row {
            record: &record,
            headers: &headers,
            line,
        };
        let dist = parse_row(&row, &layout)?;
        out.warnings.extend(dist.validate(line)?);
        out.records.push(dist);
    }
    Ok(out)
}

/// Writes records in the schema read by [`parse_grouped_csv`], with every
/// optional column present. Numbers use the shortest representation that
/// round-trips exactly.
pub fn write_grouped_csv<W: Write>(records: &[GroupedDistribution], output: W) -> Result<()> {
    // quote fields that would otherwise read back as comment lines
    let mut writer = csv::WriterBuilder::new().comment(Some(b'#')).from_writer(output);
    let mut header: Vec<&str> = vec!["country", "year", "gini"];
    header.extend(DECILE_COLUMNS);
    for (_, b, t, r) in TAIL_COLUMNS {
        header.extend([b, t, r]);
    }
    writer.write_record(&header)?;

    for rec in records {
        let mut fields = vec![rec.country.clone(), rec.year.to_string(), rec.gini.to_string()];
        match &rec.decile_shares {
            Some(d) => fields.extend(d.iter().map(|s| s.to_string())),
            None => fields.extend(std::iter::repeat_n(String::new(), DECILES)),
        }
        for (m, _, _, _) in TAIL_COLUMNS {
            match rec.tail_observation(m) {
                Some(o) => {
                    fields.push(o.bottom_share().to_string());
                    fields.push(o.top_share().to_string());
                    fields.push(o.published_ratio().map(|r| r.to_string()).unwrap_or_default());
                }
                None => fields.extend([String::new(), String::new(), String::new()]),
            }
        }
        writer.write_record(&fields)?;
    }
    writer.flush()?;
    Ok(())
}
