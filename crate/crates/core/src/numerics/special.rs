use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "x > 0"));
    }
    if x < 0.5 {
        // Lanczos loses accuracy below 1/2; shift up one.
        return Ok(lanczos(x + 1.0) - x.ln());
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Euler beta function `B(p, q) = Γ(p)Γ(q)/Γ(p+q)`.
pub fn beta(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain("p", p, "p > 0"));
    }
    if !(q > 0.0) {
        return Err(Error::domain("q", q, "q > 0"));
    }
    Ok((log_gamma(p)? + log_gamma(q)? - log_gamma(p + q)?).exp())
}

/// Below this λ the series equals 1 to double precision.
const KOLMOGOROV_SATURATION: f64 = 0.2;
const KOLMOGOROV_MAX_TERMS: usize = 100;
const KOLMOGOROV_TERM_EPS: f64 = 1e-12;

/// Survival function of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{j≥1} (-1)^(j-1) exp(-2 j² λ²)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda.is_nan() || lambda <= KOLMOGOROV_SATURATION {
        return 1.0;
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=KOLMOGOROV_MAX_TERMS {
        let jf = j as f64;
        let term = (a * jf * jf).exp();
        sum += sign * term;
        if term < KOLMOGOROV_TERM_EPS {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // lnΓ reference values, mpmath at 30 digits.
    #[allow(clippy::excessive_precision)]
    const LOG_GAMMA_TABLE: [(f64, f64); 9] = [
        (0.1, 2.252_712_651_734_206),
        (0.5, 0.572_364_942_924_700_1),
        (0.75, 0.203_280_951_431_295_37),
        (1.35, -0.115_240_897_352_445_13),
        (2.5, 0.284_682_870_472_919_16),
        (10.0, 12.801_827_480_081_47),
        (17.3, 31.515_624_178_175_29),
        (33.3, 82.603_723_581_654_95),
        (50.0, 144.565_743_946_344_9),
    ];

    #[test]
    fn log_gamma_reference_values() {
        for (x, expected) in LOG_GAMMA_TABLE {
            let got = log_gamma(x).unwrap();
            assert!((got - expected).abs() <= 1e-12, "x={x}: {got} vs {expected}");
        }
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-13);
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 0.5;
        while x <= 20.0 {
            let lhs = log_gamma(x + 1.0).unwrap().exp();
            let rhs = x * log_gamma(x).unwrap().exp();
            assert!(((lhs - rhs) / rhs).abs() < 1e-10, "x={x}");
            x += 0.37;
        }
    }

    #[test]
    fn log_gamma_domain() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn beta_values() {
        assert!((beta(2.0, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        // quadrature oracle: ∫ t^0.9 (1-t)^0.59 dt, mpmath
        let b = beta(1.9, 1.59).unwrap();
        assert!(((b - 0.261_126_047_214_587) / b).abs() < 1e-10);
        let b = beta(2.9, 1.59).unwrap();
        assert!(((b - 0.142_160_312_237_167_7) / b).abs() < 1e-10);
        let b = beta(0.3, 7.5).unwrap();
        assert!(((b - 1.657_718_912_108_625_4) / b).abs() < 1e-10);
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
    }

    #[test]
    fn beta_symmetry() {
        for &(p, q) in &[(1.1, 3.7), (0.4, 0.9), (2.0, 1.59), (12.5, 0.7)] {
            let a = beta(p, q).unwrap();
            let b = beta(q, p).unwrap();
            assert!(((a - b) / a).abs() < 1e-12);
        }
    }

    #[test]
    fn kolmogorov_values() {
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(10.0).abs() < 1e-12);
        // direct series summation, mpmath
        assert!((kolmogorov_q(0.481) - 0.974_815_718_325_738).abs() < 1e-10);
        assert!((kolmogorov_q(1.0) - 0.269_999_671_677_354_5).abs() < 1e-10);
        assert!((kolmogorov_q(0.5) - 0.963_945_243_664_875).abs() < 1e-10);
        assert!((kolmogorov_q(0.2405) - 0.999_999_994_315_219_6).abs() < 1e-10);
    }

    #[test]
    fn kolmogorov_is_monotone() {
        let mut prev = kolmogorov_q(0.0);
        for i in 1..=60 {
            let q = kolmogorov_q(0.05 * i as f64);
            assert!(q <= prev, "λ={}", 0.05 * i as f64);
            assert!((0.0..=1.0).contains(&q));
            prev = q;
        }
    }
}
