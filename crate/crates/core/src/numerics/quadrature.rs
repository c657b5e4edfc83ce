use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 32;
pub const DEFAULT_PANELS: usize = 8;

/// Number of geometric halvings applied to each end panel.
const END_GRADING_LEVELS: usize = 40;

/// An `n`-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the rule by Newton iteration on the Legendre polynomial `P_n`,
    /// starting from Tricomi's approximation of each root.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;

        for i in 0..n.div_ceil(2) {
            // i-th largest root
            let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// The shared default 32-point rule.
    pub fn default_rule() -> &'static QuadratureRule {
        static RULE: OnceLock<QuadratureRule> = OnceLock::new();
        RULE.get_or_init(|| QuadratureRule::gauss_legendre(DEFAULT_ORDER))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule once on `[lo, hi]`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: &F, lo: f64, hi: f64) -> Result<f64> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut sum = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let x = mid + half * t;
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFiniteIntegrand { x });
            }
            sum += w * fx;
        }
        Ok(sum * half)
    }

    /// Plain composite rule over `panels` equal panels.
    pub fn integrate_uniform<F: Fn(f64) -> f64>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
        panels: usize,
    ) -> Result<f64> {
        check_interval(lo, hi, panels)?;
        let h = (hi - lo) / panels as f64;
        let mut total = 0.0;
        for i in 0..panels {
            let a = lo + h * i as f64;
            let b = if i + 1 == panels { hi } else { a + h };
            total += self.apply(&f, a, b)?;
        }
        Ok(total)
    }

    /// Composite rule over `panels` equal panels whose two end panels are
    /// split geometrically toward the interval endpoints.
    ///
    /// Lorenz integrands behave like `x^alpha` or `(1 - x)^beta` at the ends;
    /// the grading keeps those endpoint singularities in derivative from
    /// limiting accuracy.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, panels: usize) -> Result<f64> {
        check_interval(lo, hi, panels)?;
        if lo == hi {
            return Ok(0.0);
        }
        let panels = panels.max(2);
        let h = (hi - lo) / panels as f64;

        let mut breaks = Vec::with_capacity(panels + 2 * END_GRADING_LEVELS + 1);
        breaks.push(lo);
        for j in (1..=END_GRADING_LEVELS).rev() {
            breaks.push(lo + h * 0.5f64.powi(j as i32));
        }
        for i in 1..panels {
            breaks.push(lo + h * i as f64);
        }
        for j in 1..=END_GRADING_LEVELS {
            breaks.push(hi - h * 0.5f64.powi(j as i32));
        }
        breaks.push(hi);

        let mut total = 0.0;
        for pair in breaks.windows(2) {
            total += self.apply(&f, pair[0], pair[1])?;
        }
        Ok(total)
    }
}

fn check_interval(lo: f64, hi: f64, panels: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::domain("interval", hi - lo, "finite lo <= hi"));
    }
    if panels == 0 {
        return Err(Error::domain("panels", 0.0, ">= 1"));
    }
    Ok(())
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrates `f` over `[lo, hi]` with the default 32-point rule on
/// `panels` panels (end panels graded).
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> Result<f64> {
    QuadratureRule::default_rule().integrate(f, lo, hi, panels)
}
