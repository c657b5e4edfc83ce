//! Lorenz curve estimation from sparse inequality indicators.
//!
//! Two functional forms are supported: a weighted mix of the power curve
//! `x^P` and the Pareto-implied curve `1 - (1 - x)^(1/P)`, whose Gini index
//! has the closed form `(P - 1) / (P + 1)`, and Kakwani's three-parameter
//! curve `x - a x^alpha (1 - x)^beta`.
//!
//! The weighted model can be recovered without any optimization from the
//! Gini index plus one bottom/top income-share pair ([`simple`]), or fitted by
//! least squares to grouped decile data ([`fitting`]). [`metrics`] and
//! [`gof`] turn fitted curves into shares, Gini values and goodness-of-fit
//! reports; [`evaluation`] chains everything for a set of country records.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod fitting;
pub mod gof;
pub mod metrics;
pub mod model;
pub mod numerics;
pub mod simple;

pub use error::{Error, Result};
pub use metrics::{DecileShares, GiniMethod, GiniValue};
pub use model::{KakwaniParams, LorenzCurve, Validity, WeightedParams};
