//! End-to-end runs over grouped records: the closed-form estimate from tail
//! shares, least-squares fits of both models, and their comparison against
//! the observed decile shares and Gini index.

use serde::Serialize;

use crate::dataio::{GroupedDistribution, RatioSource};
use crate::error::{Error, Result};
use crate::fitting::{fit_kakwani, fit_weighted, points_from_decile_shares, FitOptions, FitResult};
use crate::gof::{full_report, GofReport};
use crate::metrics::{decile_shares, gini_analytic, DecileShares, GiniValue};
use crate::model::LorenzCurve;
use crate::simple::{estimate_from_ratio, SimpleEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Weighted,
    Kakwani,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Weighted => "weighted",
            ModelKind::Kakwani => "kakwani",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleRun {
    pub country: String,
    pub year: i32,
    pub m: f64,
    pub ratio: f64,
    pub ratio_source: RatioSource,
    pub estimate: SimpleEstimate,
    pub shares: DecileShares,
    /// Present when the record has decile shares to compare against.
    pub gof: Option<GofReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRun {
    pub country: String,
    pub year: i32,
    pub fit: FitResult,
    pub shares: DecileShares,
    pub gof: GofReport,
    /// Closed form for the weighted model, beta function for Kakwani.
    pub gini: GiniValue,
    /// Trapezoid Gini over the fitted curve's decile points.
    pub trapezoid_gini: f64,
}

fn compare(actual: &DecileShares, curve: &LorenzCurve) -> Result<(DecileShares, GofReport)> {
    let shares = decile_shares(curve);
    let gof = full_report(actual, &shares)?;
    Ok((shares, gof))
}

/// Closed-form estimate from the record's Gini index and its most precise
/// tail ratio for tail size `m` (see [`GroupedDistribution::tail_ratio`]).
pub fn run_simple(record: &GroupedDistribution, m: f64, clamp: bool) -> Result<SimpleRun> {
    let (ratio, ratio_source) = record.tail_ratio(m).ok_or_else(|| Error::Validation {
        row: 0,
        message: format!("{}: no tail shares for m = {m}", record.country),
    })?;
    let estimate = estimate_from_ratio(record.gini, m, ratio, clamp)?;
    let curve = LorenzCurve::from(estimate.params);
    let shares = decile_shares(&curve);
    let gof = match &record.decile_shares {
        Some(actual) => Some(full_report(actual, &shares)?),
        None => None,
    };
    Ok(SimpleRun {
        country: record.country.clone(),
        year: record.year,
        m,
        ratio,
        ratio_source,
        estimate,
        shares,
        gof,
    })
}

fn no_deciles(record: &GroupedDistribution) -> Error {
    Error::Validation {
        row: 0,
        message: format!("{}: no decile shares to fit", record.country),
    }
}

/// Least-squares fit to the record's decile shares.
pub fn run_fit(record: &GroupedDistribution, model: ModelKind, options: &FitOptions) -> Result<ModelRun> {
    let actual = record.decile_shares.as_ref().ok_or_else(|| no_deciles(record))?;
    let points = points_from_decile_shares(actual)?;
    let fit = match model {
        ModelKind::Weighted => fit_weighted(&points, options)?,
        ModelKind::Kakwani => fit_kakwani(&points, options)?,
    };
    let (shares, gof) = compare(actual, &fit.curve)?;
    Ok(ModelRun {
        country: record.country.clone(),
        year: record.year,
        gini: gini_analytic(&fit.curve),
        trapezoid_gini: shares.trapezoid_gini(),
        fit,
        shares,
        gof,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountryEvaluation {
    pub country: String,
    pub year: i32,
    pub observed_gini: f64,
    pub actual: DecileShares,
    pub simple_10: SimpleRun,
    pub simple_5: SimpleRun,
    pub weighted: ModelRun,
    pub kakwani: ModelRun,
}

/// Runs the closed-form estimate at 10% and 5% tails and both least-squares
/// fits for every record. Records must carry decile shares and both tail
/// observations.
pub fn run_paper_evaluation(
    records: &[GroupedDistribution],
    options: &FitOptions,
) -> Result<Vec<CountryEvaluation>> {
    records
        .iter()
        .map(|record| {
            let actual = record.decile_shares.ok_or_else(|| no_deciles(record))?;
            Ok(CountryEvaluation {
                country: record.country.clone(),
                year: record.year,
                observed_gini: record.gini,
                actual,
                simple_10: run_simple(record, 0.10, false)?,
                simple_5: run_simple(record, 0.05, false)?,
                weighted: run_fit(record, ModelKind::Weighted, options)?,
                kakwani: run_fit(record, ModelKind::Kakwani, options)?,
            })
        })
        .collect()
}
