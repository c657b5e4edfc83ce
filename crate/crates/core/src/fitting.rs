//! Least-squares fits of both functional forms to grouped Lorenz data.
//!
//! Parameters are searched in unconstrained coordinates
//! (`P = 1 + e^u`, `k = logistic(v)`, `a = e^u`, `alpha, beta = logistic`)
//! so the simplex never leaves the admissible box. Every fit is a
//! deterministic multi-start: the grid is fixed and the winner is the lowest
//! SSE, ties going to the earliest start.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof;
use crate::metrics::DecileShares;
use crate::model::{KakwaniParams, LorenzCurve, Validity, WeightedParams};
use crate::numerics::{nelder_mead, SimplexConfig};

/// Published decile shares are rounded; this is the widest drift from 1
/// accepted before cumulating them.
pub const SHARE_SUM_TOLERANCE: f64 = 0.01;

const WEIGHTED_P_GRID: [f64; 3] = [1.2, 2.0, 4.0];
const WEIGHTED_K_GRID: [f64; 3] = [0.2, 0.5, 0.8];
const KAKWANI_A_GRID: [f64; 3] = [0.3, 0.7, 1.2];
const KAKWANI_ALPHA_GRID: [f64; 2] = [0.5, 0.9];
const KAKWANI_BETA_GRID: [f64; 2] = [0.3, 0.7];
/// Rounding slack for `y <= x`; cumulative sums of ten equal shares already
/// overshoot the diagonal by one ulp.
const DIAGONAL_SLACK: f64 = 1e-12;

/// Interior points `(x, y)` of a Lorenz curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzPoints {
    points: Vec<(f64, f64)>,
}

impl LorenzPoints {
    /// Validates and normalizes: the endpoints `(0, 0)` and `(1, 1)` carry no
    /// information for either model and are dropped if present.
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut interior = Vec::new();
        for (x, y) in points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidPoints(format!("non-finite point ({x}, {y})")));
            }
            if x == 0.0 || x == 1.0 {
                if y != x {
                    return Err(Error::InvalidPoints(format!(
                        "endpoint ({x}, {y}) must lie on the diagonal"
                    )));
                }
                continue;
            }
            if !(0.0..1.0).contains(&x) {
                return Err(Error::InvalidPoints(format!("x = {x} outside [0, 1]")));
            }
            if y < 0.0 || y > x + DIAGONAL_SLACK {
                return Err(Error::InvalidPoints(format!(
                    "y = {y} at x = {x} is outside [0, x]"
                )));
            }
            interior.push((x, y));
        }
        for pair in interior.windows(2) {
            let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
            if !(x1 > x0) {
                return Err(Error::InvalidPoints(format!(
                    "x must be strictly increasing ({x0} then {x1})"
                )));
            }
            if y1 < y0 {
                return Err(Error::InvalidPoints(format!(
                    "y must be non-decreasing ({y0} then {y1})"
                )));
            }
        }
        Ok(Self { points: interior })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Group shares implied by the points, with `(0, 0)` and `(1, 1)` added.
    pub fn group_shares(&self) -> Vec<f64> {
        let mut prev = 0.0;
        let mut out = Vec::with_capacity(self.points.len() + 1);
        for &(_, y) in &self.points {
            out.push(y - prev);
            prev = y;
        }
        out.push(1.0 - prev);
        out
    }

    /// Points sampled from a curve at the given abscissae.
    pub fn sample(curve: &LorenzCurve, xs: &[f64]) -> Result<Self> {
        let pts = xs
            .iter()
            .map(|&x| curve.eval(x).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }
}

/// Nine interior points `(i/10, Σ_{j≤i} share_j)`.
pub fn points_from_decile_shares(shares: &DecileShares) -> Result<LorenzPoints> {
    let total = shares.sum();
    if (total - 1.0).abs() > SHARE_SUM_TOLERANCE {
        return Err(Error::ShareSum { total });
    }
    let mut cum = 0.0;
    let mut pts = Vec::with_capacity(9);
    for (i, &s) in shares.iter().take(9).enumerate() {
        cum += s;
        pts.push(((i + 1) as f64 / 10.0, cum));
    }
    LorenzPoints::new(pts)
}

/// `Σ (y_i - curve(x_i))²` over the cumulative ordinates.
pub fn sse_objective(curve: &LorenzCurve, points: &LorenzPoints) -> f64 {
    points
        .points()
        .iter()
        .map(|&(x, y)| (y - curve.ordinate(x)).powi(2))
        .sum()
}

/// Squared error between observed and fitted group shares.
pub fn share_sse(curve: &LorenzCurve, points: &LorenzPoints) -> f64 {
    let observed = points.group_shares();
    let mut prev_y = 0.0;
    let mut sse = 0.0;
    for (i, obs) in observed.iter().enumerate() {
        let x = points.points().get(i).map_or(1.0, |p| p.0);
        let y = curve.ordinate(x);
        sse += (obs - (y - prev_y)).powi(2);
        prev_y = y;
    }
    sse
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Cumulative ordinates at the interior points.
    #[default]
    Cumulative,
    /// Per-group shares, endpoints included.
    Shares,
}

impl Objective {
    pub fn evaluate(&self, curve: &LorenzCurve, points: &LorenzPoints) -> f64 {
        match self {
            Objective::Cumulative => sse_objective(curve, points),
            Objective::Shares => share_sse(curve, points),
        }
    }

    fn observations(&self, points: &LorenzPoints) -> Vec<f64> {
        match self {
            Objective::Cumulative => points.points().iter().map(|p| p.1).collect(),
            Objective::Shares => points.group_shares(),
        }
    }

    fn fitted(&self, curve: &LorenzCurve, points: &LorenzPoints) -> Vec<f64> {
        match self {
            Objective::Cumulative => points.points().iter().map(|p| curve.ordinate(p.0)).collect(),
            Objective::Shares => {
                let mut prev = 0.0;
                points
                    .points()
                    .iter()
                    .map(|p| p.0)
                    .chain(std::iter::once(1.0))
                    .map(|x| {
                        let y = curve.ordinate(x);
                        let s = y - prev;
                        prev = y;
                        s
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitOptions {
    pub simplex: SimplexConfig,
    pub objective: Objective,
    /// Extra start for the weighted fit, typically the closed-form estimate.
    pub weighted_seed: Option<WeightedParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub curve: LorenzCurve,
    pub sse: f64,
    /// R² over the observations the objective compares.
    pub r_squared: f64,
    pub converged: bool,
    pub starts_tried: usize,
    pub objective: Objective,
    pub validity: Validity,
}

impl FitResult {
    pub fn weighted(&self) -> Option<WeightedParams> {
        match self.curve {
            LorenzCurve::Weighted(p) => Some(p),
            _ => None,
        }
    }

    pub fn kakwani(&self) -> Option<KakwaniParams> {
        match self.curve {
            LorenzCurve::Kakwani(p) => Some(p),
            _ => None,
        }
    }
}

fn logistic(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-9, 1.0 - 1e-9);
    (p / (1.0 - p)).ln()
}

/// One multi-start candidate: a start vector in search coordinates and a
/// decoder from search coordinates to a curve.
struct Start<'a> {
    initial: Vec<f64>,
    decode: &'a dyn Fn(&[f64]) -> Option<LorenzCurve>,
}

fn run_starts(points: &LorenzPoints, options: &FitOptions, starts: &[Start<'_>]) -> Result<FitResult> {
    let objective = options.objective;
    let mut best: Option<(FitResult, usize)> = None;
    let mut any_converged = false;

    for (index, start) in starts.iter().enumerate() {
        let decode = start.decode;
        let f = |v: &[f64]| decode(v).map_or(f64::INFINITY, |c| objective.evaluate(&c, points));
        let result = match nelder_mead(f, &start.initial, &options.simplex) {
            Ok(r) => r,
            Err(Error::NonFiniteObjective) => continue,
            Err(e) => return Err(e),
        };
        let Some(curve) = decode(&result.argmin) else {
            continue;
        };
        let sse = objective.evaluate(&curve, points);
        if !sse.is_finite() {
            continue;
        }
        any_converged |= result.converged;
        let better = match &best {
            None => true,
            Some((b, _)) => sse < b.sse || (sse == b.sse && !b.converged && result.converged),
        };
        if better {
            let observed = objective.observations(points);
            let fitted = objective.fitted(&curve, points);
            let r_squared = gof::r_squared(&observed, &fitted).unwrap_or(f64::NAN);
            best = Some((
                FitResult {
                    curve,
                    sse,
                    r_squared,
                    converged: result.converged,
                    starts_tried: 0,
                    objective,
                    validity: curve.validity(),
                },
                index,
            ));
        }
    }

    let (mut fit, _) = best.ok_or(Error::NoFit)?;
    fit.starts_tried = starts.len();
    if !any_converged {
        return Err(Error::NonConvergence {
            starts: starts.len(),
            best_sse: fit.sse,
            best: Box::new(fit),
        });
    }
    Ok(fit)
}

/// Fits the weighted power/Pareto model by least squares.
pub fn fit_weighted(points: &LorenzPoints, options: &FitOptions) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let decode = |v: &[f64]| -> Option<LorenzCurve> {
        WeightedParams::new(1.0 + v[0].exp(), logistic(v[1]))
            .ok()
            .map(LorenzCurve::from)
    };
    let encode = |p: f64, k: f64| vec![(p - 1.0).max(1e-9).ln(), logit(k)];

    let mut starts: Vec<Start<'_>> = WEIGHTED_P_GRID
        .iter()
        .flat_map(|&p| WEIGHTED_K_GRID.iter().map(move |&k| (p, k)))
        .map(|(p, k)| Start {
            initial: encode(p, k),
            decode: &decode,
        })
        .collect();
    if let Some(seed) = options.weighted_seed {
        starts.push(Start {
            initial: encode(seed.p(), seed.k()),
            decode: &decode,
        });
    }
    run_starts(points, options, &starts)
}

/// Fits Kakwani's model by least squares.
///
/// Besides the free three-parameter search, sub-fits with `alpha = 1`,
/// `beta = 1`, or both are run, since the logistic map never reaches the
/// upper bound itself. The result carries the curve's validity verdict;
/// minima with `alpha < 1` are returned even though such curves dip below
/// zero next to the origin.
pub fn fit_kakwani(points: &LorenzPoints, options: &FitOptions) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    let build = |a: f64, alpha: f64, beta: f64| {
        KakwaniParams::new(a, alpha, beta).ok().map(LorenzCurve::from)
    };
    let free = |v: &[f64]| build(v[0].exp(), logistic(v[1]), logistic(v[2]));
    let alpha_one = |v: &[f64]| build(v[0].exp(), 1.0, logistic(v[1]));
    let beta_one = |v: &[f64]| build(v[0].exp(), logistic(v[1]), 1.0);
    let both_one = |v: &[f64]| build(v[0].exp(), 1.0, 1.0);

    let mut starts: Vec<Start<'_>> = Vec::new();
    for &a in &KAKWANI_A_GRID {
        for &alpha in &KAKWANI_ALPHA_GRID {
            for &beta in &KAKWANI_BETA_GRID {
                starts.push(Start {
                    initial: vec![a.ln(), logit(alpha), logit(beta)],
                    decode: &free,
                });
            }
        }
    }
    for &a in &KAKWANI_A_GRID {
        for &beta in &KAKWANI_BETA_GRID {
            starts.push(Start {
                initial: vec![a.ln(), logit(beta)],
                decode: &alpha_one,
            });
        }
    }
    for &a in &KAKWANI_A_GRID {
        for &alpha in &KAKWANI_ALPHA_GRID {
            starts.push(Start {
                initial: vec![a.ln(), logit(alpha)],
                decode: &beta_one,
            });
        }
    }
    for &a in &KAKWANI_A_GRID {
        starts.push(Start {
            initial: vec![a.ln()],
            decode: &both_one,
        });
    }
    run_starts(points, options, &starts)
}
