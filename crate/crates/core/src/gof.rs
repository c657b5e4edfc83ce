//! Goodness-of-fit statistics between actual and estimated share vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::kolmogorov_q;

fn check_lengths(actual: &[f64], estimated: &[f64]) -> Result<()> {
    if actual.len() != estimated.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: estimated.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(())
}

/// `1 - SSE/SST`, with `SST` taken around the mean of `actual`.
pub fn r_squared(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_lengths(actual, estimated)?;
    if actual.iter().all(|&a| a == actual[0]) {
        return Err(Error::UndefinedRSquared);
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let sst: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    let sse: f64 = actual
        .iter()
        .zip(estimated)
        .map(|(a, e)| (a - e).powi(2))
        .sum();
    Ok(1.0 - sse / sst)
}

pub fn mse(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_lengths(actual, estimated)?;
    let sum: f64 = actual.iter().zip(estimated).map(|(a, e)| (a - e).powi(2)).sum();
    Ok(sum / actual.len() as f64)
}

pub fn mae(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_lengths(actual, estimated)?;
    let sum: f64 = actual.iter().zip(estimated).map(|(a, e)| (a - e).abs()).sum();
    Ok(sum / actual.len() as f64)
}

/// Maximum absolute error.
pub fn mas(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_lengths(actual, estimated)?;
    Ok(actual
        .iter()
        .zip(estimated)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max))
}

/// Theil's information inaccuracy `Σ a ln(a / e)`.
pub fn iim(actual: &[f64], estimated: &[f64]) -> Result<f64> {
    check_lengths(actual, estimated)?;
    let mut sum = 0.0;
    for (i, (&a, &e)) in actual.iter().zip(estimated).enumerate() {
        if !(a > 0.0) {
            return Err(Error::BadShare { index: i + 1, value: a });
        }
        if !(e > 0.0) {
            return Err(Error::BadShare { index: i + 1, value: e });
        }
        sum += a * (a / e).ln();
    }
    Ok(sum)
}

/// Label of the p-value approximation used by [`ks_two_sample`].
pub const KS_METHOD: &str = "stephens-asymptotic";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
}

/// Two-sample Kolmogorov-Smirnov test.
///
/// `D` is the largest gap between the two empirical CDFs; the p-value uses
/// the asymptotic Kolmogorov distribution with Stephens' small-sample
/// correction `λ = (√Ne + 0.12 + 0.11/√Ne) D`, `Ne = nm/(n+m)`.
pub fn ks_two_sample(sample_a: &[f64], sample_b: &[f64]) -> Result<KsResult> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut a = sample_a.to_vec();
    let mut b = sample_b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());

    // integer counts so D is an exact ratio, e.g. exactly 0.1 for n = m = 10
    let (mut i, mut j) = (0usize, 0usize);
    let mut max_gap: u64 = 0;
    while i < n && j < m {
        let v = if a[i].total_cmp(&b[j]).is_le() { a[i] } else { b[j] };
        while i < n && a[i].total_cmp(&v).is_le() {
            i += 1;
        }
        while j < m && b[j].total_cmp(&v).is_le() {
            j += 1;
        }
        let gap = (i as u64 * m as u64).abs_diff(j as u64 * n as u64);
        max_gap = max_gap.max(gap);
    }
    let d = max_gap as f64 / (n as f64 * m as f64);

    let ne = (n * m) as f64 / (n + m) as f64;
    let sqrt_ne = ne.sqrt();
    let lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
    Ok(KsResult {
        d,
        p: kolmogorov_q(lambda),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub r_squared: f64,
    pub mse: f64,
    pub mae: f64,
    pub mas: f64,
    pub iim: f64,
    pub ks_d: f64,
    pub ks_p: f64,
    pub ks_method: &'static str,
}

pub fn full_report(actual: &[f64], estimated: &[f64]) -> Result<GofReport> {
    let ks = ks_two_sample(actual, estimated)?;
    Ok(GofReport {
        r_squared: r_squared(actual, estimated)?,
        mse: mse(actual, estimated)?,
        mae: mae(actual, estimated)?,
        mas: mas(actual, estimated)?,
        iim: iim(actual, estimated)?,
        ks_d: ks.d,
        ks_p: ks.p,
        ks_method: KS_METHOD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const USA_ACTUAL: [f64; 10] = [0.0179, 0.0344, 0.0457, 0.0572, 0.0693, 0.0832, 0.1005, 0.1245, 0.1625, 0.3046];
    const USA_SIMPLE_10: [f64; 10] = [0.0160, 0.0260, 0.0392, 0.0549, 0.0727, 0.0926, 0.1148, 0.1401, 0.1718, 0.2719];

    #[test]
    fn usa_table_columns() {
        assert!((mse(&USA_ACTUAL, &USA_SIMPLE_10).unwrap() - 0.00018).abs() <= 1e-5);
        assert!((mae(&USA_ACTUAL, &USA_SIMPLE_10).unwrap() - 0.0104).abs() <= 1e-4);
        assert!((mas(&USA_ACTUAL, &USA_SIMPLE_10).unwrap() - 0.0327).abs() <= 1e-4);
        assert!((iim(&USA_ACTUAL, &USA_SIMPLE_10).unwrap() - 0.0063).abs() <= 5e-4);
    }

    #[test]
    fn identical_inputs() {
        let r = full_report(&USA_ACTUAL, &USA_ACTUAL).unwrap();
        assert_eq!(r.r_squared, 1.0);
        assert_eq!((r.mse, r.mae, r.mas, r.iim), (0.0, 0.0, 0.0, 0.0));
        assert_eq!((r.ks_d, r.ks_p), (0.0, 1.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(r_squared(&[0.1; 10], &[0.1; 10]), Err(Error::UndefinedRSquared)));
        assert!(matches!(mse(&[0.1; 3], &[0.1; 4]), Err(Error::LengthMismatch { .. })));
        assert!(iim(&[0.1, 0.0], &[0.1, 0.1]).is_err());
        assert!(iim(&[0.1, 0.1], &[0.1, -0.1]).is_err());
        assert!(matches!(ks_two_sample(&[], &[1.0]), Err(Error::EmptySample)));
    }

    #[test]
    fn ks_gap_values() {
        let r = ks_two_sample(&[1.0, 2.0, 3.0], &[1.5, 2.5, 3.5]).unwrap();
        assert!((r.d - 1.0 / 3.0).abs() < 1e-15);
        let r = ks_two_sample(&[1.0, 2.0], &[3.0, 4.0, 5.0]).unwrap();
        assert_eq!(r.d, 1.0);
        // ties across samples step together
        let r = ks_two_sample(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((r.d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ks_small_sample_p() {
        // D = 0.2 at n = m = 10: λ = (√5 + 0.12 + 0.11/√5)·0.2
        let a: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64 + 1.5).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert_eq!(r.d, 0.2);
        assert!((r.p - 0.975).abs() < 0.001, "{}", r.p);
    }
}
