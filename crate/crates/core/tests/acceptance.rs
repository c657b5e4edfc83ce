//! Acceptance gate. Every check prints one PASS/FAIL line; each criterion
//! fails as a whole if any of its checks fails.

use lorenz_core::dataio::builtin_paper_dataset;
use lorenz_core::evaluation::{run_paper_evaluation, CountryEvaluation, ModelRun, SimpleRun};
use lorenz_core::fitting::{fit_kakwani, fit_weighted, FitOptions, LorenzPoints};
use lorenz_core::gof::iim;
use lorenz_core::metrics::{gini_kakwani_beta, gini_quadrature, gini_weighted_closed};
use lorenz_core::simple::{k_from_ratio, ratio_coefficients};
use lorenz_core::{KakwaniParams, LorenzCurve, WeightedParams};
use std::sync::OnceLock;

const COUNTRIES: [&str; 4] = ["Malta", "Taiwan", "USA", "Côte d'Ivoire"];

struct Gate {
    criterion: u32,
    failures: Vec<String>,
    checks: usize,
}

impl Gate {
    fn new(criterion: u32) -> Self {
        Self {
            criterion,
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.record(ok, format!("{what}: got {got:.6}, want {want} ± {tol}"));
    }

    fn holds(&mut self, what: &str, ok: bool, detail: String) {
        self.record(ok, format!("{what}: {detail}"));
    }

    fn record(&mut self, ok: bool, line: String) {
        self.checks += 1;
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("[criterion {}] {verdict} {line}", self.criterion);
        if !ok {
            self.failures.push(line);
        }
    }

    fn finish(self) {
        println!(
            "[criterion {}] {} ({} checks, {} failed)",
            self.criterion,
            if self.failures.is_empty() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len()
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n{}",
            self.criterion,
            self.failures.join("\n")
        );
    }
}

fn evaluation() -> &'static [CountryEvaluation] {
    static CELL: OnceLock<Vec<CountryEvaluation>> = OnceLock::new();
    CELL.get_or_init(|| run_paper_evaluation(&builtin_paper_dataset(), &FitOptions::default()).unwrap())
}

/// One unit of the last printed digit of a table value.
fn last_digit_unit(printed: &str) -> f64 {
    let decimals = printed.split_once('.').map_or(0, |(_, d)| d.len());
    10f64.powi(-(decimals as i32))
}

fn simple_params(gate: &mut Gate, runs: &[&SimpleRun], k_want: [f64; 4], r2_want: [f64; 4], p_want: Option<[f64; 4]>) {
    for (i, run) in runs.iter().enumerate() {
        let c = COUNTRIES[i];
        if let Some(p) = p_want {
            gate.within(&format!("{c} P"), run.estimate.params.p(), p[i], 0.005);
        }
        gate.within(&format!("{c} k"), run.estimate.params.k(), k_want[i], 0.01);
        let r2 = run.gof.as_ref().expect("builtin has deciles").r_squared;
        gate.within(&format!("{c} R²"), r2, r2_want[i], 0.002);
    }
}

#[test]
fn criterion_1_simple_method_ten_percent() {
    let mut gate = Gate::new(1);
    let runs: Vec<&SimpleRun> = evaluation().iter().map(|e| &e.simple_10).collect();
    simple_params(
        &mut gate,
        &runs,
        [0.47, 0.49, 0.31, 0.22],
        [0.9970, 0.9929, 0.9713, 0.9095],
        Some([1.81, 1.92, 2.40, 3.88]),
    );
    gate.finish();
}

#[test]
fn criterion_2_simple_method_five_percent() {
    let mut gate = Gate::new(2);
    let runs: Vec<&SimpleRun> = evaluation().iter().map(|e| &e.simple_5).collect();
    simple_params(&mut gate, &runs, [0.48, 0.39, 0.17, 0.09], [0.9980, 0.9759, 0.9223, 0.8520], None);
    gate.finish();
}

struct ShareTable {
    label: &'static str,
    estimates: [[f64; 10]; 4],
    /// MSE, MAE, MAS, IIM as printed.
    gof: [[&'static str; 4]; 4],
    ks_d: [f64; 4],
    ks_p: [f64; 4],
}

const TEN_PERCENT: ShareTable = ShareTable {
    label: "10% tails",
    estimates: [
        [0.0349, 0.0487, 0.0609, 0.0727, 0.0843, 0.0964, 0.1094, 0.1245, 0.1454, 0.2229],
        [0.0321, 0.0446, 0.0566, 0.0687, 0.0811, 0.0941, 0.1084, 0.1252, 0.1487, 0.2405],
        [0.0160, 0.0260, 0.0392, 0.0549, 0.0727, 0.0926, 0.1148, 0.1401, 0.1718, 0.2719],
        [0.0059, 0.0078, 0.0128, 0.0228, 0.0396, 0.0649, 0.1006, 0.1489, 0.2142, 0.3826],
    ],
    gof: [
        ["0.00001", "0.0023", "0.0071", "0.0003"],
        ["0.00003", "0.0040", "0.0112", "0.0012"],
        ["0.00018", "0.0104", "0.0327", "0.0063"],
        ["0.00159", "0.0276", "0.0943", "0.0458"],
    ],
    ks_d: [0.1, 0.1, 0.1, 0.2],
    ks_p: [1.000, 1.000, 1.000, 0.975],
};

const FIVE_PERCENT: ShareTable = ShareTable {
    label: "5% tails",
    estimates: [
        [0.0354, 0.0490, 0.0610, 0.0725, 0.0840, 0.0959, 0.1088, 0.1239, 0.1450, 0.2243],
        [0.0283, 0.0425, 0.0561, 0.0695, 0.0832, 0.0973, 0.1124, 0.1294, 0.1519, 0.2295],
        [0.0106, 0.0220, 0.0372, 0.0552, 0.0754, 0.0978, 0.1222, 0.1492, 0.1804, 0.2500],
        [0.0026, 0.0044, 0.0097, 0.0208, 0.0395, 0.0677, 0.1076, 0.1610, 0.2310, 0.3557],
    ],
    gof: [
        ["0.00001", "0.0019", "0.0057", "0.0002"],
        ["0.00009", "0.0074", "0.0222", "0.0036"],
        ["0.00049", "0.0170", "0.0546", "0.0179"],
        ["0.00259", "0.0354", "0.1212", "0.0800"],
    ],
    ks_d: [0.1, 0.1, 0.1, 0.2],
    ks_p: [1.000, 1.000, 1.000, 0.975],
};

fn share_table(gate: &mut Gate, table: &ShareTable, runs: &[&SimpleRun]) {
    let label = table.label;
    for (i, run) in runs.iter().enumerate() {
        let c = COUNTRIES[i];
        for (d, (&got, &want)) in run.shares.iter().zip(&table.estimates[i]).enumerate() {
            gate.within(&format!("{label} {c} D{}", d + 1), got, want, 1e-3);
        }
        let g = run.gof.as_ref().expect("builtin has deciles");
        for (name, got, printed) in [
            ("MSE", g.mse, table.gof[i][0]),
            ("MAE", g.mae, table.gof[i][1]),
            ("MAS", g.mas, table.gof[i][2]),
            ("IIM", g.iim, table.gof[i][3]),
        ] {
            let want: f64 = printed.parse().unwrap();
            let tol = last_digit_unit(printed) + 1e-12;
            gate.within(&format!("{label} {c} {name}"), got, want, tol);
        }
        gate.holds(
            &format!("{label} {c} K-S D"),
            g.ks_d == table.ks_d[i],
            format!("got {}, want exactly {}", g.ks_d, table.ks_d[i]),
        );
        gate.within(&format!("{label} {c} K-S p"), g.ks_p, table.ks_p[i], 0.02);
    }
}

#[test]
fn criterion_3_estimated_decile_shares() {
    let mut gate = Gate::new(3);
    let ten: Vec<&SimpleRun> = evaluation().iter().map(|e| &e.simple_10).collect();
    let five: Vec<&SimpleRun> = evaluation().iter().map(|e| &e.simple_5).collect();
    share_table(&mut gate, &TEN_PERCENT, &ten);
    share_table(&mut gate, &FIVE_PERCENT, &five);
    gate.finish();
}

const WEIGHTED_FIT_SHARES: [[f64; 10]; 4] = [
    [0.0376, 0.0500, 0.0612, 0.0720, 0.0829, 0.0943, 0.1068, 0.1219, 0.1436, 0.2298],
    [0.0366, 0.0470, 0.0572, 0.0676, 0.0785, 0.0903, 0.1037, 0.1202, 0.1450, 0.2540],
    [0.0242, 0.0320, 0.0423, 0.0545, 0.0686, 0.0847, 0.1033, 0.1261, 0.1586, 0.3057],
    [0.0172, 0.0193, 0.0232, 0.0298, 0.0401, 0.0554, 0.0771, 0.1081, 0.1571, 0.4726],
];

#[test]
fn criterion_4_weighted_least_squares() {
    let mut gate = Gate::new(4);
    let p_want = [1.81, 1.92, 2.40, 3.86];
    let k_want = [0.53, 0.60, 0.52, 0.64];
    let gini_want = [0.287, 0.316, 0.411, 0.589];
    for (i, e) in evaluation().iter().enumerate() {
        let c = COUNTRIES[i];
        let run: &ModelRun = &e.weighted;
        let p = run.fit.weighted().unwrap();
        let tol = if i == 3 { 0.05 } else { 0.03 };
        gate.within(&format!("{c} P"), p.p(), p_want[i], tol);
        gate.within(&format!("{c} k"), p.k(), k_want[i], tol);
        for (d, (&got, &want)) in run.shares.iter().zip(&WEIGHTED_FIT_SHARES[i]).enumerate() {
            gate.within(&format!("{c} D{}", d + 1), got, want, 2e-3);
        }
        gate.within(&format!("{c} closed-form Gini"), run.gini.value, gini_want[i], 2e-3);
    }
    gate.finish();
}

const KAKWANI_FIT_SHARES: [[f64; 10]; 4] = [
    [0.0350, 0.0519, 0.0625, 0.0724, 0.0825, 0.0934, 0.1060, 0.1218, 0.1453, 0.2291],
    [0.0345, 0.0484, 0.0583, 0.0680, 0.0782, 0.0895, 0.1029, 0.1202, 0.1469, 0.2529],
    [0.0192, 0.0334, 0.0449, 0.0567, 0.0696, 0.0841, 0.1016, 0.1244, 0.1601, 0.3060],
    [0.0091, 0.0168, 0.0251, 0.0346, 0.0458, 0.0595, 0.0774, 0.1033, 0.1497, 0.4787],
];

#[test]
fn criterion_5_kakwani_comparison() {
    let mut gate = Gate::new(5);
    let params = [(0.55, 0.90, 0.59), (0.59, 0.93, 0.54), (0.78, 0.96, 0.53), (0.94, 1.00, 0.35)];
    let gini_want = [0.281, 0.308, 0.401, 0.569];
    for (i, e) in evaluation().iter().enumerate() {
        let c = COUNTRIES[i];
        let run = &e.kakwani;
        let p = run.fit.kakwani().unwrap();
        let (a, alpha, beta) = params[i];
        gate.within(&format!("{c} a"), p.a(), a, 0.03);
        gate.within(&format!("{c} alpha"), p.alpha(), alpha, 0.03);
        gate.within(&format!("{c} beta"), p.beta(), beta, 0.03);
        for (d, (&got, &want)) in run.shares.iter().zip(&KAKWANI_FIT_SHARES[i]).enumerate() {
            gate.within(&format!("{c} D{}", d + 1), got, want, 2e-3);
        }
        gate.within(&format!("{c} beta-function Gini"), run.gini.value, gini_want[i], 0.01);
    }
    gate.finish();
}

/// Evenly spread points of `[lo, hi]` offset from the ends.
fn spread(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
}

fn weighted_samples() -> Vec<WeightedParams> {
    // 10 x 10 grid over P in [1, 6], k in [0, 1]
    spread(10, 1.0, 6.0)
        .flat_map(|p| spread(10, 0.0, 1.0).map(move |k| WeightedParams::new(p, k).unwrap()))
        .collect()
}

fn kakwani_samples() -> Vec<KakwaniParams> {
    // 4 x 5 x 5 grid over a in [0.1, 1.2], alpha and beta in (0, 1]
    let mut out = Vec::new();
    for a in spread(4, 0.1, 1.2) {
        for alpha in spread(5, 0.05, 1.0) {
            for beta in spread(5, 0.05, 1.0) {
                out.push(KakwaniParams::new(a, alpha, beta).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_6_property_suites() {
    let mut gate = Gate::new(6);

    let weighted = weighted_samples();
    let worst = weighted
        .iter()
        .map(|p| {
            let q = gini_quadrature(&LorenzCurve::from(*p)).unwrap().value;
            (q - gini_weighted_closed(p).value).abs()
        })
        .fold(0.0, f64::max);
    gate.holds(
        "closed-form vs quadrature Gini",
        worst <= 1e-8,
        format!("{} params, worst gap {worst:.3e} (tol 1e-8)", weighted.len()),
    );

    let kakwani = kakwani_samples();
    let worst = kakwani
        .iter()
        .map(|p| {
            let q = gini_quadrature(&LorenzCurve::from(*p)).unwrap().value;
            (q - gini_kakwani_beta(p).value).abs()
        })
        .fold(0.0, f64::max);
    gate.holds(
        "beta-function vs quadrature Gini",
        worst <= 1e-8,
        format!("{} params, worst gap {worst:.3e} (tol 1e-8)", kakwani.len()),
    );

    let mut worst = 0.0f64;
    let mut cases = 0;
    for p in spread(8, 1.05, 6.0) {
        for k in spread(8, 0.0, 1.0) {
            for m in [0.05, 0.10, 0.20] {
                let curve = LorenzCurve::from(WeightedParams::new(p, k).unwrap());
                let ratio = curve.eval(m).unwrap() / (1.0 - curve.eval(1.0 - m).unwrap());
                let back = k_from_ratio(p, m, ratio).unwrap();
                worst = worst.max((back - k).abs());
                cases += 1;
            }
        }
    }
    gate.holds(
        "tail-ratio inversion round trip",
        worst <= 1e-10,
        format!("{cases} (P, k, m) cases, worst |Δk| {worst:.3e} (tol 1e-10)"),
    );
    // the coefficients themselves stay finite over the grid
    assert!(ratio_coefficients(6.0, 0.05).is_ok());

    let invalid = weighted
        .iter()
        .filter(|p| !LorenzCurve::from(**p).validity().is_valid())
        .count();
    gate.holds(
        "weighted validity",
        invalid == 0,
        format!("{invalid} of {} in-box params invalid", weighted.len()),
    );

    let xs: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let mut worst_param = 0.0f64;
    let mut worst_sse = 0.0f64;
    for (p, k) in [(1.5, 0.3), (2.4, 0.52), (3.86, 0.64), (1.2, 0.9), (5.0, 0.1)] {
        let truth = LorenzCurve::from(WeightedParams::new(p, k).unwrap());
        let fit = fit_weighted(&LorenzPoints::sample(&truth, &xs).unwrap(), &FitOptions::default()).unwrap();
        let got = fit.weighted().unwrap();
        worst_param = worst_param.max((got.p() - p).abs()).max((got.k() - k).abs());
        worst_sse = worst_sse.max(fit.sse);
    }
    for (a, alpha, beta) in [(0.78, 0.96, 0.53), (0.5, 0.8, 0.6), (0.94, 0.99, 0.35)] {
        let truth = LorenzCurve::from(KakwaniParams::new(a, alpha, beta).unwrap());
        let fit = fit_kakwani(&LorenzPoints::sample(&truth, &xs).unwrap(), &FitOptions::default()).unwrap();
        let got = fit.kakwani().unwrap();
        worst_param = worst_param
            .max((got.a() - a).abs())
            .max((got.alpha() - alpha).abs())
            .max((got.beta() - beta).abs());
        worst_sse = worst_sse.max(fit.sse);
    }
    gate.holds(
        "optimizer identifiability",
        worst_param <= 1e-5 && worst_sse < 1e-16,
        format!("worst |Δθ| {worst_param:.3e} (tol 1e-5), worst sse {worst_sse:.3e} (tol 1e-16)"),
    );

    let mut min_iim = f64::INFINITY;
    for raw in [
        [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
        [5.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5],
        [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1],
    ] {
        for w in weighted.iter().step_by(7) {
            let est = lorenz_core::metrics::decile_shares(&LorenzCurve::from(*w));
            if est.iter().any(|&s| s <= 0.0) {
                continue;
            }
            let total: f64 = raw.iter().sum();
            let actual: Vec<f64> = raw.iter().map(|r| r / total).collect();
            let est_total: f64 = est.iter().sum();
            let est: Vec<f64> = est.iter().map(|e| e / est_total).collect();
            min_iim = min_iim.min(iim(&actual, &est).unwrap());
        }
    }
    gate.holds(
        "IIM non-negativity",
        min_iim >= -1e-15,
        format!("smallest IIM {min_iim:.3e}"),
    );

    let mut worst = 0.0f64;
    for p in &weighted {
        for x in [0.05, 0.2, 0.5, 0.8, 0.95] {
            let h = 1e-6;
            let c = LorenzCurve::from(*p);
            let fd = (c.eval(x + h).unwrap() - c.eval(x - h).unwrap()) / (2.0 * h);
            let d = p.derivative(x).unwrap();
            worst = worst.max((fd - d).abs() / d.abs().max(1e-300));
        }
    }
    gate.holds(
        "derivative vs finite difference",
        worst <= 1e-6,
        format!("worst relative gap {worst:.3e} (tol 1e-6)"),
    );

    gate.finish();
}
