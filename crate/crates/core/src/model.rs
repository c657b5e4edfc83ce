//! Lorenz curve functional forms.
//!
//! [`WeightedParams`] is the weighted power/Pareto form
//! `y = (1 - k) x^P + k (1 - (1 - x)^(1/P))` with `P >= 1`, `0 <= k <= 1`.
//! Both base curves enclose the same area `1/(P+1)`, so `k` reshapes the
//! curve without moving the Gini index.
//!
//! [`KakwaniParams`] is `y = x - a x^alpha (1 - x)^beta` with `a > 0` and
//! `alpha, beta` in `(0, 1]`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedParams {
    p: f64,
    k: f64,
}

impl WeightedParams {
    pub fn new(p: f64, k: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::domain("P", p, "P >= 1"));
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain("k", k, "0 <= k <= 1"));
        }
        Ok(Self { p, k })
    }

    /// Inequality exponent; fixes the Gini index.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Weight on the Pareto-implied component.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.ordinate(x))
    }

    pub(crate) fn ordinate(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let power = x.powf(self.p);
        let pareto = 1.0 - (1.0 - x).powf(1.0 / self.p);
        (1.0 - self.k) * power + self.k * pareto
    }

    /// `dy/dx` on the open interval `(0, 1)`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain("x", x, "0 < x < 1"));
        }
        let p = self.p;
        Ok((1.0 - self.k) * p * x.powf(p - 1.0) + (self.k / p) * (1.0 - x).powf(1.0 / p - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KakwaniParams {
    a: f64,
    alpha: f64,
    beta: f64,
}

impl KakwaniParams {
    /// Checks the box `a > 0`, `0 < alpha <= 1`, `0 < beta <= 1` only.
    /// Whether the curve is a proper Lorenz curve is a separate question,
    /// answered by [`LorenzCurve::validity`]: with `alpha < 1` the curve dips
    /// below zero close to the origin.
    pub fn new(a: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain("a", a, "a > 0"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain("alpha", alpha, "0 < alpha <= 1"));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::domain("beta", beta, "0 < beta <= 1"));
        }
        Ok(Self { a, alpha, beta })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.ordinate(x))
    }

    pub(crate) fn ordinate(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        x - self.a * x.powf(self.alpha) * (1.0 - x).powf(self.beta)
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain("x", x, "0 <= x <= 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum LorenzCurve {
    Weighted(WeightedParams),
    Kakwani(KakwaniParams),
}

impl From<WeightedParams> for LorenzCurve {
    fn from(p: WeightedParams) -> Self {
        LorenzCurve::Weighted(p)
    }
}

impl From<KakwaniParams> for LorenzCurve {
    fn from(p: KakwaniParams) -> Self {
        LorenzCurve::Kakwani(p)
    }
}

/// Interior points used by [`LorenzCurve::validity`].
pub const VALIDITY_GRID_POINTS: usize = 1001;
const VALIDITY_TOLERANCE: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Endpoint { x: f64, y: f64 },
    Decreasing { x: f64 },
    NotConvex { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    Invalid(Violation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

impl LorenzCurve {
    pub fn name(&self) -> &'static str {
        match self {
            LorenzCurve::Weighted(_) => "weighted",
            LorenzCurve::Kakwani(_) => "kakwani",
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.ordinate(x))
    }

    /// Curve ordinate; `x` is clamped into `[0, 1]`.
    pub(crate) fn ordinate(&self, x: f64) -> f64 {
        match self {
            LorenzCurve::Weighted(p) => p.ordinate(x),
            LorenzCurve::Kakwani(p) => p.ordinate(x),
        }
    }

    /// Scans endpoints, then first and second differences on a uniform grid.
    /// Returns the first violation found.
    pub fn validity(&self) -> Validity {
        for (x, expected) in [(0.0, 0.0), (1.0, 1.0)] {
            let y = self.ordinate(x);
            if y != expected {
                return Validity::Invalid(Violation::Endpoint { x, y });
            }
        }
        let n = VALIDITY_GRID_POINTS + 1;
        let ys: Vec<f64> = (0..=n).map(|i| self.ordinate(i as f64 / n as f64)).collect();
        for i in 1..=n {
            if ys[i] - ys[i - 1] < VALIDITY_TOLERANCE {
                return Validity::Invalid(Violation::Decreasing { x: i as f64 / n as f64 });
            }
        }
        for i in 1..n {
            if ys[i + 1] - 2.0 * ys[i] + ys[i - 1] < VALIDITY_TOLERANCE {
                return Validity::Invalid(Violation::NotConvex { x: i as f64 / n as f64 });
            }
        }
        Validity::Valid
    }
}

pub fn is_valid_lorenz(curve: &LorenzCurve) -> Validity {
    curve.validity()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: f64, k: f64) -> WeightedParams {
        WeightedParams::new(p, k).unwrap()
    }

    #[test]
    fn weighted_examples() {
        assert!((w(1.805, 0.47).eval(0.1).unwrap() - 0.0349).abs() < 5e-4);
        assert_eq!(w(1.805, 0.47).eval(0.0).unwrap(), 0.0);
        assert_eq!(w(1.805, 0.47).eval(1.0).unwrap(), 1.0);
        assert!((w(2.0, 0.0).eval(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((w(2.0, 1.0).eval(0.75).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weighted_domain() {
        assert!(w(2.0, 0.5).eval(1.01).is_err());
        assert!(w(2.0, 0.5).eval(-0.01).is_err());
        assert!(WeightedParams::new(0.99, 0.5).is_err());
        assert!(WeightedParams::new(2.0, 1.01).is_err());
        assert!(WeightedParams::new(2.0, -0.01).is_err());
        assert!(WeightedParams::new(f64::NAN, 0.5).is_err());
        assert!(WeightedParams::new(f64::INFINITY, 0.5).is_err());
    }

    #[test]
    fn kakwani_examples() {
        let p = KakwaniParams::new(0.55, 0.90, 0.59).unwrap();
        let y = p.eval(0.1).unwrap();
        assert!((y - 0.0350).abs() < 5e-4);
        // hand evaluation
        let hand = 0.1 - 0.55 * 0.1f64.powf(0.9) * 0.9f64.powf(0.59);
        assert!((y - hand).abs() < 1e-15);
        assert_eq!(p.eval(0.0).unwrap(), 0.0);
        assert_eq!(p.eval(1.0).unwrap(), 1.0);
        let tiny = KakwaniParams::new(1e-15, 0.4, 0.8).unwrap();
        assert!((tiny.eval(0.3).unwrap() - 0.3).abs() < 1e-14);
    }

    #[test]
    fn kakwani_domain() {
        assert!(KakwaniParams::new(0.0, 0.5, 0.5).is_err());
        assert!(KakwaniParams::new(1.0, 0.0, 0.5).is_err());
        assert!(KakwaniParams::new(1.0, 1.01, 0.5).is_err());
        assert!(KakwaniParams::new(1.0, 0.5, 1.5).is_err());
        assert!(KakwaniParams::new(1.0, 0.5, 0.5).unwrap().eval(2.0).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert!((w(1.0, 0.0).derivative(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((w(2.0, 0.0).derivative(0.5).unwrap() - 1.0).abs() < 1e-15);
        // mpmath numerical derivative of the curve at P=2.3, k=0.4, x=0.37
        let d = w(2.3, 0.4).derivative(0.37).unwrap();
        assert!((d - 0.604_727_291_263_455_3).abs() < 1e-12);
        assert!(w(2.0, 0.5).derivative(0.0).is_err());
        assert!(w(2.0, 0.5).derivative(1.0).is_err());
    }

    #[test]
    fn validity_examples() {
        assert!(LorenzCurve::from(w(1.805, 0.47)).validity().is_valid());
        let civ = KakwaniParams::new(0.94, 1.00, 0.35).unwrap();
        assert!(LorenzCurve::from(civ).validity().is_valid());
        let bad = KakwaniParams::new(5.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            LorenzCurve::from(bad).validity(),
            Validity::Invalid(Violation::Decreasing { .. })
        ));
        // alpha < 1 drives the curve negative next to the origin
        let malta = KakwaniParams::new(0.55, 0.90, 0.59).unwrap();
        assert!(!LorenzCurve::from(malta).validity().is_valid());
    }
}
