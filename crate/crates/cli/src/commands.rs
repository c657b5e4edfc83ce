use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use lorenz_core::dataio::{
    builtin_paper_dataset, parse_grouped_csv, write_grouped_csv, Cell, Column, GroupedDistribution,
};
use lorenz_core::evaluation::{run_fit, run_paper_evaluation, ModelKind, ModelRun, SimpleRun};
use lorenz_core::fitting::{FitOptions, Objective};
use lorenz_core::gof::{full_report, GofReport};
use lorenz_core::metrics::{
    decile_shares, gini_decile_trapezoid, gini_kakwani_beta, gini_quadrature, gini_weighted_closed, DECILES,
};
use lorenz_core::simple::{estimate_from_ratio, estimate_simple, SimpleEstimate, TailShareObservation};
use lorenz_core::{DecileShares, Error, KakwaniParams, LorenzCurve, WeightedParams};

use crate::output::{Format, Section};
use crate::{
    CliError, CurveArgs, DatasetArgs, FitArgs, GiniArgs, GiniMethodArg, ModelArg, ModelParams, ObjectiveArg,
    ReportArgs, SimpleArgs, Source, SourceArgs,
};

type Sections = Result<Vec<Section>, CliError>;

const PARAM_DIGITS: usize = 2;
const SHARE_DIGITS: usize = 4;
const GINI_DIGITS: usize = 3;

fn warn(message: &str) {
    eprintln!("lorenz: warning: {message}");
}

fn load(path: &Path) -> Result<Vec<GroupedDistribution>, CliError> {
    let parsed = if path.as_os_str() == "-" {
        parse_grouped_csv(io::stdin().lock())?
    } else {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
        parse_grouped_csv(file)?
    };
    for w in &parsed.warnings {
        warn(w);
    }
    Ok(parsed.records)
}

fn records(source: &Source) -> Result<Vec<GroupedDistribution>, CliError> {
    match &source.input {
        Some(path) => load(path),
        None => Ok(builtin_paper_dataset()),
    }
}

/// Records with decile shares; the rest are reported and skipped.
fn with_deciles(records: Vec<GroupedDistribution>) -> Vec<GroupedDistribution> {
    records
        .into_iter()
        .filter(|r| {
            let keep = r.decile_shares.is_some();
            if !keep {
                warn(&format!("skipping {} {}: no decile shares", r.country, r.year));
            }
            keep
        })
        .collect()
}

fn gof_columns(lead: &[&str]) -> Vec<Column> {
    let mut cols: Vec<Column> = lead.iter().map(|c| Column::new(*c)).collect();
    cols.push(Column::fixed("r_squared", 4));
    cols.extend(["mse", "mae", "mas", "iim", "ks_d", "ks_p"].map(Column::new));
    cols
}

fn gof_cells(g: &GofReport) -> Vec<Cell> {
    vec![
        g.r_squared.into(),
        g.mse.into(),
        g.mae.into(),
        g.mas.into(),
        g.iim.into(),
        g.ks_d.into(),
        g.ks_p.into(),
    ]
}

fn decile_label(i: usize) -> Cell {
    format!("D{}", i + 1).into()
}

fn yes_no(b: bool) -> Cell {
    if b { "yes" } else { "no" }.into()
}

fn estimate_notes(e: &SimpleEstimate) {
    if e.degenerate {
        warn("gini is 0: every k gives the line of equality; reporting k = 0.5");
    }
    if e.clamped {
        warn(&format!("k = {} is outside [0, 1]; clamped to {}", e.raw_k, e.params.k()));
    }
}

pub fn simple(args: SimpleArgs) -> Sections {
    let mut obs = TailShareObservation::new(args.m, args.bottom, args.top)?;
    if let Some(r) = args.ratio {
        obs = obs.with_published_ratio(r)?;
    }
    let est = estimate_simple(args.gini, &obs, args.clamp)?;
    estimate_notes(&est);
    let curve = LorenzCurve::from(est.params);
    let shares = decile_shares(&curve);

    let actual = match &args.actual {
        None => None,
        Some(path) => {
            let recs = load(path)?;
            let rec = match &args.country {
                Some(c) => recs.into_iter().find(|r| &r.country == c),
                None => recs.into_iter().find(|r| r.decile_shares.is_some()),
            };
            let rec = rec.ok_or_else(|| {
                CliError::Usage(format!("{}: no matching record with decile shares", path.display()))
            })?;
            Some(rec.decile_shares.ok_or_else(|| {
                CliError::Usage(format!("{}: {} has no decile shares", path.display(), rec.country))
            })?)
        }
    };

    let mut params = Section::new(
        "estimate",
        vec![
            Column::new("gini"),
            Column::new("m"),
            Column::new("ratio"),
            Column::fixed("P", PARAM_DIGITS),
            Column::fixed("k", PARAM_DIGITS),
            Column::new("degenerate"),
            Column::new("clamped"),
        ],
    );
    params.push(vec![
        args.gini.into(),
        args.m.into(),
        obs.ratio().into(),
        est.params.p().into(),
        est.params.k().into(),
        yes_no(est.degenerate),
        yes_no(est.clamped),
    ]);

    let mut cols = vec![Column::new("decile"), Column::fixed("estimate", SHARE_DIGITS)];
    if actual.is_some() {
        cols.push(Column::fixed("actual", SHARE_DIGITS));
    }
    let mut table = Section::new("decile shares", cols);
    for i in 0..DECILES {
        let mut row = vec![decile_label(i), shares[i].into()];
        if let Some(a) = &actual {
            row.push(a[i].into());
        }
        table.push(row);
    }

    let mut sections = vec![params, table];
    if let Some(a) = &actual {
        let mut g = Section::new("goodness of fit", gof_columns(&[]));
        g.push(gof_cells(&full_report(a, &shares)?));
        sections.push(g);
    }
    Ok(sections)
}

fn fit_options(objective: ObjectiveArg) -> FitOptions {
    FitOptions {
        objective: match objective {
            ObjectiveArg::Cumulative => Objective::Cumulative,
            ObjectiveArg::Shares => Objective::Shares,
        },
        ..FitOptions::default()
    }
}

fn kind(model: ModelArg) -> ModelKind {
    match model {
        ModelArg::Weighted => ModelKind::Weighted,
        ModelArg::Kakwani => ModelKind::Kakwani,
    }
}

fn param_columns(model: ModelKind) -> Vec<Column> {
    let names: &[&str] = match model {
        ModelKind::Weighted => &["P", "k"],
        ModelKind::Kakwani => &["a", "alpha", "beta"],
    };
    names.iter().map(|n| Column::fixed(*n, PARAM_DIGITS)).collect()
}

fn param_cells(curve: &LorenzCurve) -> Vec<Cell> {
    match curve {
        LorenzCurve::Weighted(p) => vec![p.p().into(), p.k().into()],
        LorenzCurve::Kakwani(p) => vec![p.a().into(), p.alpha().into(), p.beta().into()],
    }
}

fn fit_sections(model: ModelKind, recs: &[GroupedDistribution], runs: &[ModelRun]) -> Vec<Section> {
    let mut cols = vec![Column::new("country"), Column::new("year")];
    cols.extend(param_columns(model));
    cols.extend([
        Column::new("sse"),
        Column::fixed("r_squared", 4),
        Column::new("converged"),
        Column::new("valid"),
        Column::fixed("gini_observed", GINI_DIGITS),
        Column::fixed("gini_estimate", GINI_DIGITS),
        Column::new("gini_method"),
    ]);
    let mut params = Section::new(format!("least squares, {}", model.name()), cols);
    let mut shares = Section::new(
        format!("decile shares, {}", model.name()),
        vec![
            Column::new("country"),
            Column::new("decile"),
            Column::fixed("actual", SHARE_DIGITS),
            Column::fixed("estimate", SHARE_DIGITS),
        ],
    );
    let mut gof = Section::new(format!("goodness of fit, {}", model.name()), gof_columns(&["country"]));
    for (rec, run) in recs.iter().zip(runs) {
        let mut row = vec![run.country.clone().into(), run.year.into()];
        row.extend(param_cells(&run.fit.curve));
        row.extend([
            run.fit.sse.into(),
            run.fit.r_squared.into(),
            yes_no(run.fit.converged),
            yes_no(run.fit.validity.is_valid()),
            rec.gini.into(),
            run.gini.value.into(),
            run.gini.method.label().into(),
        ]);
        params.push(row);
        let actual = rec.decile_shares.as_ref().expect("filtered");
        for i in 0..DECILES {
            shares.push(vec![run.country.clone().into(), decile_label(i), actual[i].into(), run.shares[i].into()]);
        }
        let mut row = vec![run.country.clone().into()];
        row.extend(gof_cells(&run.gof));
        gof.push(row);
    }
    vec![params, shares, gof]
}

pub fn fit(args: FitArgs) -> Sections {
    let recs = with_deciles(records(&args.source)?);
    let options = fit_options(args.objective);
    let model = kind(args.model);
    let runs = recs
        .iter()
        .map(|r| run_fit(r, model, &options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(fit_sections(model, &recs, &runs))
}

fn comparison_sections(rows: &[(&GroupedDistribution, &ModelRun, &ModelRun)]) -> Vec<Section> {
    let mut shares = Section::new(
        "decile shares, weighted vs kakwani",
        vec![
            Column::new("country"),
            Column::new("decile"),
            Column::fixed("actual", SHARE_DIGITS),
            Column::fixed("weighted", SHARE_DIGITS),
            Column::fixed("kakwani", SHARE_DIGITS),
        ],
    );
    let mut gof = Section::new("goodness of fit, weighted vs kakwani", gof_columns(&["country", "model"]));
    let mut gini = Section::new(
        "gini, weighted vs kakwani",
        vec![
            Column::new("country"),
            Column::fixed("observed", GINI_DIGITS),
            Column::fixed("weighted", GINI_DIGITS),
            Column::fixed("kakwani", GINI_DIGITS),
            Column::fixed("kakwani_trapezoid", GINI_DIGITS),
        ],
    );
    for (rec, w, k) in rows {
        let actual = rec.decile_shares.as_ref().expect("filtered");
        for i in 0..DECILES {
            shares.push(vec![
                rec.country.clone().into(),
                decile_label(i),
                actual[i].into(),
                w.shares[i].into(),
                k.shares[i].into(),
            ]);
        }
        for run in [w, k] {
            let mut row = vec![rec.country.clone().into(), run.fit.curve.name().into()];
            row.extend(gof_cells(&run.gof));
            gof.push(row);
        }
        gini.push(vec![
            rec.country.clone().into(),
            rec.gini.into(),
            w.gini.value.into(),
            k.gini.value.into(),
            k.trapezoid_gini.into(),
        ]);
    }
    vec![shares, gof, gini]
}

pub fn compare(args: SourceArgs) -> Sections {
    let recs = with_deciles(records(&args.source)?);
    let options = FitOptions::default();
    let mut runs = Vec::new();
    for r in &recs {
        runs.push((
            run_fit(r, ModelKind::Weighted, &options)?,
            run_fit(r, ModelKind::Kakwani, &options)?,
        ));
    }
    let rows: Vec<_> = recs.iter().zip(&runs).map(|(r, (w, k))| (r, w, k)).collect();
    Ok(comparison_sections(&rows))
}

fn missing(flag: &str, model: &str) -> CliError {
    CliError::Usage(format!("--{flag} is required for the {model} model"))
}

fn build_curve(p: &ModelParams) -> Result<LorenzCurve, CliError> {
    match p.model {
        ModelArg::Weighted => {
            if p.a.is_some() || p.alpha.is_some() || p.beta.is_some() {
                return Err(CliError::Usage("--a/--alpha/--beta apply to the kakwani model".into()));
            }
            let pp = p.p.ok_or_else(|| missing("p", "weighted"))?;
            let k = p.k.ok_or_else(|| missing("k", "weighted"))?;
            Ok(WeightedParams::new(pp, k)?.into())
        }
        ModelArg::Kakwani => {
            if p.p.is_some() || p.k.is_some() {
                return Err(CliError::Usage("--p/--k apply to the weighted model".into()));
            }
            let a = p.a.ok_or_else(|| missing("a", "kakwani"))?;
            let alpha = p.alpha.ok_or_else(|| missing("alpha", "kakwani"))?;
            let beta = p.beta.ok_or_else(|| missing("beta", "kakwani"))?;
            Ok(KakwaniParams::new(a, alpha, beta)?.into())
        }
    }
}

pub fn curve(args: CurveArgs) -> Sections {
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let curve = match args.gini {
        Some(g) => {
            if args.params.model != ModelArg::Weighted {
                return Err(CliError::Usage("--gini estimation applies to the weighted model".into()));
            }
            let (m, b, t) = (args.m.unwrap_or_default(), args.bottom.unwrap_or_default(), args.top.unwrap_or_default());
            let obs = TailShareObservation::new(m, b, t)?;
            let est = estimate_from_ratio(g, m, obs.ratio(), false)?;
            estimate_notes(&est);
            LorenzCurve::from(est.params)
        }
        None => build_curve(&args.params)?,
    };
    let mut cols = vec![Column::new("x"), Column::new("y")];
    if args.with_diagonal {
        cols.push(Column::new("diagonal"));
    }
    let mut s = Section::new("curve", cols);
    let n = args.samples - 1;
    for i in 0..=n {
        let x = i as f64 / n as f64;
        let mut row = vec![x.into(), curve.eval(x)?.into()];
        if args.with_diagonal {
            row.push(x.into());
        }
        s.push(row);
    }
    Ok(vec![s])
}

pub fn gini(args: GiniArgs) -> Sections {
    let curve = build_curve(&args.params)?;
    let method = args.method.unwrap_or(match curve {
        LorenzCurve::Weighted(_) => GiniMethodArg::Closed,
        LorenzCurve::Kakwani(_) => GiniMethodArg::Beta,
    });
    let value = match (method, &curve) {
        (GiniMethodArg::Closed, LorenzCurve::Weighted(p)) => gini_weighted_closed(p),
        (GiniMethodArg::Closed, _) => {
            return Err(CliError::Usage(
                "--method closed needs the weighted model; Kakwani's curve has no closed-form Gini (use beta)".into(),
            ))
        }
        (GiniMethodArg::Beta, LorenzCurve::Kakwani(p)) => gini_kakwani_beta(p),
        (GiniMethodArg::Beta, _) => {
            return Err(CliError::Usage(
                "--method beta needs the kakwani model; use closed for the weighted model".into(),
            ))
        }
        (GiniMethodArg::Quadrature, c) => gini_quadrature(c)?,
        (GiniMethodArg::Trapezoid, c) => gini_decile_trapezoid(c),
    };
    let mut s = Section::new("gini", vec![Column::fixed("gini", 6), Column::new("method")]);
    s.push(vec![value.value.into(), value.method.label().into()]);
    Ok(vec![s])
}

fn simple_sections(label: &str, recs: &[GroupedDistribution], runs: &[&SimpleRun]) -> Vec<Section> {
    let mut params = Section::new(
        format!("closed-form estimate, {label} tails"),
        vec![
            Column::new("country"),
            Column::new("year"),
            Column::fixed("gini", GINI_DIGITS),
            Column::fixed("bottom", 3),
            Column::fixed("top", 3),
            Column::new("ratio"),
            Column::new("ratio_source"),
            Column::fixed("P", PARAM_DIGITS),
            Column::fixed("k", PARAM_DIGITS),
            Column::fixed("r_squared", 4),
        ],
    );
    let mut shares = Section::new(
        format!("decile shares, {label} tails"),
        vec![
            Column::new("country"),
            Column::new("decile"),
            Column::fixed("actual", SHARE_DIGITS),
            Column::fixed("estimate", SHARE_DIGITS),
        ],
    );
    let mut gof = Section::new(format!("goodness of fit, {label} tails"), gof_columns(&["country"]));
    for (rec, run) in recs.iter().zip(runs) {
        let obs = rec.tail_observation(run.m).expect("run_simple found a ratio");
        let g = run.gof.as_ref().expect("records have decile shares");
        params.push(vec![
            run.country.clone().into(),
            run.year.into(),
            rec.gini.into(),
            obs.bottom_share().into(),
            obs.top_share().into(),
            run.ratio.into(),
            run.ratio_source.label().into(),
            run.estimate.params.p().into(),
            run.estimate.params.k().into(),
            g.r_squared.into(),
        ]);
        let actual: &DecileShares = rec.decile_shares.as_ref().expect("filtered");
        for i in 0..DECILES {
            shares.push(vec![run.country.clone().into(), decile_label(i), actual[i].into(), run.shares[i].into()]);
        }
        let mut row = vec![run.country.clone().into()];
        row.extend(gof_cells(g));
        gof.push(row);
    }
    vec![params, shares, gof]
}

pub fn report(args: ReportArgs) -> Sections {
    let recs = match &args.source.input {
        Some(path) => load(path)?,
        None => builtin_paper_dataset(),
    };
    let recs: Vec<_> = with_deciles(recs)
        .into_iter()
        .filter(|r| {
            let keep = r.tail_observation(0.10).is_some() && r.tail_observation(0.05).is_some();
            if !keep {
                warn(&format!("skipping {} {}: needs 10% and 5% tail shares", r.country, r.year));
            }
            keep
        })
        .collect();
    let evals = run_paper_evaluation(&recs, &FitOptions::default())?;

    let mut sections = Vec::new();
    let ten: Vec<&SimpleRun> = evals.iter().map(|e| &e.simple_10).collect();
    let five: Vec<&SimpleRun> = evals.iter().map(|e| &e.simple_5).collect();
    sections.extend(simple_sections("10%", &recs, &ten));
    sections.extend(simple_sections("5%", &recs, &five));
    let weighted: Vec<ModelRun> = evals.iter().map(|e| e.weighted.clone()).collect();
    let kakwani: Vec<ModelRun> = evals.iter().map(|e| e.kakwani.clone()).collect();
    sections.extend(fit_sections(ModelKind::Weighted, &recs, &weighted));
    sections.extend(fit_sections(ModelKind::Kakwani, &recs, &kakwani).into_iter().take(1));
    let rows: Vec<_> = recs
        .iter()
        .zip(&evals)
        .map(|(r, e)| (r, &e.weighted, &e.kakwani))
        .collect();
    sections.extend(comparison_sections(&rows));
    Ok(sections)
}

pub fn dataset(args: DatasetArgs, format: Format, precision: Option<usize>, out: &mut dyn Write) -> Result<(), CliError> {
    let mut recs = builtin_paper_dataset();
    if let Some(c) = &args.country {
        recs.retain(|r| r.country.eq_ignore_ascii_case(c));
        if recs.is_empty() {
            return Err(CliError::Usage(format!("no built-in record for `{c}`")));
        }
    }
    match format {
        Format::Csv => write_grouped_csv(&recs, out)?,
        Format::JsonLines => {
            for r in &recs {
                serde_json::to_writer(&mut *out, r).map_err(|e| CliError::Core(Error::Io(e.into())))?;
                writeln!(out)?;
            }
        }
        Format::Table => {
            let mut cols = vec![Column::new("country"), Column::new("year"), Column::fixed("gini", 3)];
            cols.extend((1..=DECILES).map(|i| Column::fixed(format!("d{i}"), SHARE_DIGITS)));
            cols.extend(["bottom10", "top10", "bottom5", "top5"].map(|c| Column::fixed(c, 3)));
            let mut s = Section::new("dataset", cols);
            for r in &recs {
                let mut row: Vec<Cell> = vec![r.country.clone().into(), r.year.into(), r.gini.into()];
                let d = r.decile_shares.expect("built-in records have deciles");
                row.extend(d.iter().map(|&v| Cell::from(v)));
                for m in [0.10, 0.05] {
                    let o = r.tail_observation(m).expect("built-in records have both tails");
                    row.push(o.bottom_share().into());
                    row.push(o.top_share().into());
                }
                s.push(row);
            }
            crate::output::emit(out, &[s], format, precision)?;
        }
    }
    Ok(())
}
