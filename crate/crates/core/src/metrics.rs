//! Inequality metrics of a curve: Gini index by several routes, decile
//! shares and tail shares.

use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{KakwaniParams, LorenzCurve, WeightedParams};
use crate::numerics::{beta, integrate, DEFAULT_PANELS};

pub const DECILES: usize = 10;

/// Income shares of the ten population deciles, poorest first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DecileShares([f64; DECILES]);

impl DecileShares {
    /// Accepts any ten finite non-negative shares. Published shares are
    /// rounded and need not sum to one exactly.
    pub fn new(shares: &[f64]) -> Result<Self> {
        if shares.len() != DECILES {
            return Err(Error::DecileCount(shares.len()));
        }
        let mut out = [0.0; DECILES];
        for (i, (&s, slot)) in shares.iter().zip(out.iter_mut()).enumerate() {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::BadShare { index: i + 1, value: s });
            }
            *slot = s;
        }
        Ok(Self(out))
    }

    /// `share_i = y(i/10) - y((i-1)/10)`.
    pub fn from_curve(curve: &LorenzCurve) -> Self {
        let mut out = [0.0; DECILES];
        let mut prev = curve.ordinate(0.0);
        for (i, slot) in out.iter_mut().enumerate() {
            let y = curve.ordinate((i + 1) as f64 / DECILES as f64);
            *slot = y - prev;
            prev = y;
        }
        Self(out)
    }

    pub fn as_array(&self) -> &[f64; DECILES] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Gini index of the piecewise-linear Lorenz curve through the decile
    /// points (trapezoid rule).
    pub fn trapezoid_gini(&self) -> f64 {
        let mut cum = 0.0;
        let mut area = 0.0;
        for &s in &self.0 {
            let next = cum + s;
            area += 0.5 * (cum + next) / DECILES as f64;
            cum = next;
        }
        1.0 - 2.0 * area
    }
}

impl Deref for DecileShares {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GiniMethod {
    ClosedForm,
    Quadrature,
    BetaFunction,
    /// Trapezoid rule over the ten decile points of the curve.
    DecileTrapezoid,
}

impl GiniMethod {
    pub fn label(&self) -> &'static str {
        match self {
            GiniMethod::ClosedForm => "closed-form",
            GiniMethod::Quadrature => "quadrature",
            GiniMethod::BetaFunction => "beta-function",
            GiniMethod::DecileTrapezoid => "decile-trapezoid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GiniValue {
    pub value: f64,
    pub method: GiniMethod,
}

/// `(P - 1) / (P + 1)`; independent of `k`.
pub fn gini_weighted_closed(params: &WeightedParams) -> GiniValue {
    let p = params.p();
    GiniValue {
        value: (p - 1.0) / (p + 1.0),
        method: GiniMethod::ClosedForm,
    }
}

/// `1 - 2 ∫ y dx` by composite Gauss-Legendre quadrature.
pub fn gini_quadrature(curve: &LorenzCurve) -> Result<GiniValue> {
    let area = integrate(|x| curve.ordinate(x), 0.0, 1.0, DEFAULT_PANELS)?;
    Ok(GiniValue {
        value: 1.0 - 2.0 * area,
        method: GiniMethod::Quadrature,
    })
}

/// `2 a B(alpha + 1, beta + 1)`.
pub fn gini_kakwani_beta(params: &KakwaniParams) -> GiniValue {
    let b = beta(params.alpha() + 1.0, params.beta() + 1.0)
        .expect("alpha + 1 and beta + 1 are positive");
    GiniValue {
        value: 2.0 * params.a() * b,
        method: GiniMethod::BetaFunction,
    }
}

pub fn gini_decile_trapezoid(curve: &LorenzCurve) -> GiniValue {
    GiniValue {
        value: DecileShares::from_curve(curve).trapezoid_gini(),
        method: GiniMethod::DecileTrapezoid,
    }
}

/// The model's analytic Gini: closed form for the weighted model, beta
/// function for Kakwani.
pub fn gini_analytic(curve: &LorenzCurve) -> GiniValue {
    match curve {
        LorenzCurve::Weighted(p) => gini_weighted_closed(p),
        LorenzCurve::Kakwani(p) => gini_kakwani_beta(p),
    }
}

pub fn decile_shares(curve: &LorenzCurve) -> DecileShares {
    DecileShares::from_curve(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailShares {
    pub bottom: f64,
    pub top: f64,
}

impl TailShares {
    pub fn ratio(&self) -> f64 {
        self.bottom / self.top
    }
}

/// `bottom = y(m)`, `top = 1 - y(1 - m)`.
pub fn tail_shares(curve: &LorenzCurve, m: f64) -> Result<TailShares> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::domain("m", m, "0 < m < 1"));
    }
    Ok(TailShares {
        bottom: curve.ordinate(m),
        top: 1.0 - curve.ordinate(1.0 - m),
    })
}
