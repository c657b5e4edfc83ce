//! Closed-form recovery of the weighted model from the Gini index and one
//! bottom/top income-share pair.
//!
//! The Gini index fixes `P = (1 + G) / (1 - G)`. Given `P`, the ratio
//! `R = B_m / T_m` of the bottom-`m` to top-`m` share is a Möbius function of
//! `k`, so `k` follows by solving one linear equation. No optimization is
//! involved. Only the ratio is matched: the fitted curve reproduces `B_m/T_m`
//! exactly but not necessarily `B_m` and `T_m` individually.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::WeightedParams;

/// Gini values this close to zero are treated as perfect equality.
const EQUALITY_EPS: f64 = 1e-12;
const DENOMINATOR_EPS: f64 = 1e-12;

/// Income shares of the bottom and top `m` fraction of the population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailShareObservation {
    m: f64,
    bottom_share: f64,
    top_share: f64,
    published_ratio: Option<f64>,
}

impl TailShareObservation {
    pub fn new(m: f64, bottom_share: f64, top_share: f64) -> Result<Self> {
        if !(m > 0.0 && m < 0.5) {
            return Err(Error::domain("m", m, "0 < m < 0.5"));
        }
        if !(bottom_share > 0.0 && bottom_share < 1.0) {
            return Err(Error::domain("bottom share", bottom_share, "0 < bottom < 1"));
        }
        if !(top_share > 0.0 && top_share < 1.0) {
            return Err(Error::domain("top share", top_share, "0 < top < 1"));
        }
        // equality only on the line of perfect equality
        if !(bottom_share <= top_share) {
            return Err(Error::domain("bottom share", bottom_share, "bottom <= top"));
        }
        if !(bottom_share + top_share < 1.0) {
            return Err(Error::domain(
                "bottom + top share",
                bottom_share + top_share,
                "bottom + top < 1",
            ));
        }
        Ok(Self {
            m,
            bottom_share,
            top_share,
            published_ratio: None,
        })
    }

    /// Attaches a separately published `bottom/top` ratio. Statistical
    /// agencies often print the ratio from unrounded shares, which makes it
    /// more precise than the quotient of the rounded shares.
    pub fn with_published_ratio(mut self, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::domain("ratio", ratio, "0 < ratio < 1"));
        }
        self.published_ratio = Some(ratio);
        Ok(self)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn bottom_share(&self) -> f64 {
        self.bottom_share
    }

    pub fn top_share(&self) -> f64 {
        self.top_share
    }

    pub fn published_ratio(&self) -> Option<f64> {
        self.published_ratio
    }

    /// The published ratio when present, else `bottom / top`.
    pub fn ratio(&self) -> f64 {
        self.published_ratio
            .unwrap_or(self.bottom_share / self.top_share)
    }
}

/// Powers entering the ratio equation for a given `P` and tail size `m`
/// (`n = 1 - m`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCoefficients {
    /// `m^P`: power-curve ordinate at `m`.
    pub bottom_power: f64,
    /// `(1 - m)^(1/P)`: Pareto-curve complement at `m`.
    pub bottom_pareto: f64,
    /// `n^P`: power-curve ordinate at `n`.
    pub top_power: f64,
    /// `(1 - n)^(1/P)`: Pareto-curve complement at `n`.
    pub top_pareto: f64,
}

pub fn p_from_gini(gini: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&gini) {
        return Err(Error::domain("gini", gini, "0 <= gini < 1"));
    }
    Ok((1.0 + gini) / (1.0 - gini))
}

pub fn gini_from_p(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain("P", p, "P >= 1"));
    }
    Ok((p - 1.0) / (p + 1.0))
}

pub fn ratio_coefficients(p: f64, m: f64) -> Result<RatioCoefficients> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain("P", p, "P >= 1"));
    }
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::domain("m", m, "0 < m < 1"));
    }
    let n = 1.0 - m;
    Ok(RatioCoefficients {
        bottom_power: m.powf(p),
        bottom_pareto: (1.0 - m).powf(1.0 / p),
        top_power: n.powf(p),
        top_pareto: (1.0 - n).powf(1.0 / p),
    })
}

/// Solves the ratio equation for `k`.
///
/// Fails with [`Error::KOutOfBounds`] (carrying the raw value) when the
/// solution leaves `[0, 1]`, and with [`Error::DegenerateRatio`] when the
/// equation does not determine `k` (e.g. `P = 1`).
pub fn k_from_ratio(p: f64, m: f64, ratio: f64) -> Result<f64> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::domain("ratio", ratio, "ratio > 0"));
    }
    let c = ratio_coefficients(p, m)?;
    let numerator = c.bottom_power - ratio + c.top_power * ratio;
    let denominator = c.top_power * ratio - ratio + c.top_pareto * ratio + c.bottom_power
        + c.bottom_pareto
        - 1.0;
    if denominator.abs() < DENOMINATOR_EPS {
        return Err(Error::DegenerateRatio { denominator });
    }
    let k = numerator / denominator;
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::KOutOfBounds { raw: k });
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimpleEstimate {
    pub params: WeightedParams,
    /// Perfect equality: every `k` gives the diagonal, `k = 0.5` is reported.
    pub degenerate: bool,
    /// The raw `k` left `[0, 1]` and was clamped to the nearest bound.
    pub clamped: bool,
    /// `k` before clamping.
    pub raw_k: f64,
}

/// Estimates `(P, k)` from the Gini index and a tail-share ratio.
pub fn estimate_from_ratio(gini: f64, m: f64, ratio: f64, clamp: bool) -> Result<SimpleEstimate> {
    let p = p_from_gini(gini)?;
    if !(m > 0.0 && m < 0.5) {
        return Err(Error::domain("m", m, "0 < m < 0.5"));
    }
    if (p - 1.0).abs() < EQUALITY_EPS {
        return Ok(SimpleEstimate {
            params: WeightedParams::new(1.0, 0.5)?,
            degenerate: true,
            clamped: false,
            raw_k: 0.5,
        });
    }
    let (k, raw_k, clamped) = match k_from_ratio(p, m, ratio) {
        Ok(k) => (k, k, false),
        Err(Error::KOutOfBounds { raw }) if clamp => (raw.clamp(0.0, 1.0), raw, true),
        Err(e) => return Err(e),
    };
    Ok(SimpleEstimate {
        params: WeightedParams::new(p, k)?,
        degenerate: false,
        clamped,
        raw_k,
    })
}

pub fn estimate_simple(
    gini: f64,
    observation: &TailShareObservation,
    clamp: bool,
) -> Result<SimpleEstimate> {
    estimate_from_ratio(gini, observation.m(), observation.ratio(), clamp)
}
