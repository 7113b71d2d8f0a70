use olx_core::evaluate::calibrate::direct_value;
use olx_core::evaluate::{calibrate_truncation, dirichlet_direct, zeta_eta, LineProduct};
use olx_core::lfamily::{dirichlet_l1, sym2_residue, ModelSpec};
use olx_core::mertens::{mertens_report, truncated_product_at_1};
use olx_core::resonator::{min_height, moment_audit, resonance_at, resonance_product, ResonanceReport};
use olx_core::scan::{bound_report, grid_scan_with, refine_peak_in, ScanRecord};
use olx_core::{Complex64, Error, Model, EULER_GAMMA};
use serde::Serialize;

use crate::args::Command;
use crate::output::{Cell, Output, RunConfig, Table};
use crate::CliError;

/// Golden-section tolerance for scan refinement.
pub const REFINE_TOL: f64 = 1e-9;

fn build(spec: &str) -> Result<Model, CliError> {
    Ok(spec.parse::<ModelSpec>()?.build()?)
}

fn to_json<S: Serialize>(v: &S) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

/// Effective configuration and result of one command.
pub fn execute(command: &Command) -> Result<(RunConfig, Output), CliError> {
    let common = command.common();
    let mut cfg = RunConfig {
        model: common.model.clone(),
        format: common.format.name(),
        out: common.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let output = match command {
        Command::Mertens { x, x_grid, .. } => {
            cfg.command = "mertens";
            let grid = match (x, x_grid) {
                (_, Some(g)) => g.clone(),
                (Some(x), None) => vec![*x],
                (None, None) => vec![1e6],
            };
            if grid.len() == 1 {
                cfg.x = Some(grid[0]);
            } else {
                cfg.x_grid = Some(grid.clone());
            }
            mertens(&common.model, &grid)?
        }
        Command::Residue { .. } => {
            cfg.command = "residue";
            residue(&common.model)?
        }
        Command::Resonance { t_height, resonator_x, .. } => {
            cfg.command = "resonance";
            cfg.t_height = *t_height;
            cfg.resonator_x = *resonator_x;
            let model = build(&common.model)?;
            let report = match (t_height, resonator_x) {
                (Some(t), _) => resonance_product(&model, *t)?,
                (None, Some(x)) => resonance_at(&model, *x)?,
                (None, None) => return Err(CliError::Usage("resonance needs --T or --X".into())),
            };
            resonance(&report)
        }
        Command::Moments { resonator_x, t_height, n_cutoff, step, .. } => {
            cfg.command = "moments";
            cfg.resonator_x = Some(*resonator_x);
            cfg.t_height = Some(*t_height);
            cfg.n_cutoff = Some(*n_cutoff);
            cfg.step = Some(*step);
            let model = build(&common.model)?;
            moments(&model, *resonator_x, *t_height, *n_cutoff, *step)?
        }
        Command::Evaluate { t, y, .. } => {
            cfg.command = "evaluate";
            cfg.t = Some(*t);
            cfg.y = Some(*y);
            let model = build(&common.model)?;
            evaluate(&model, *t, *y)?
        }
        Command::Calibrate { t_min, t_max, y, samples, seed, .. } => {
            cfg.command = "calibrate";
            cfg.t_min = Some(*t_min);
            cfg.t_max = Some(*t_max);
            cfg.y = Some(*y);
            cfg.samples = Some(*samples);
            cfg.seed = Some(*seed);
            let model = build(&common.model)?;
            calibrate(&model, (*t_min, *t_max), *y, *samples, *seed)?
        }
        Command::Scan { t_height, t_min, t_max, step, y, top_k, .. } => {
            cfg.command = "scan";
            let (lo, hi) = match (t_min, t_max, t_height) {
                (Some(a), Some(b), _) => (*a, *b),
                (a, b, Some(t)) if *t > 0.0 => (a.unwrap_or(t.sqrt()), b.unwrap_or(*t)),
                _ => return Err(CliError::Usage("scan needs --t-min and --t-max, or --T".into())),
            };
            cfg.t_height = *t_height;
            cfg.t_min = Some(lo);
            cfg.t_max = Some(hi);
            cfg.step = Some(*step);
            cfg.y = Some(*y);
            cfg.top_k = Some(*top_k);
            let model = build(&common.model)?;
            scan(&model, *t_height, (lo, hi), *step, *y, *top_k)?
        }
    };
    Ok((cfg, output))
}

fn mertens(spec: &str, grid: &[f64]) -> Result<Output, CliError> {
    let model = build(spec)?;
    let report = mertens_report(&model, grid)?;
    let mut table = Table::new("mertens", &["x", "product", "prediction", "ratio"]);
    for r in &report.rows {
        table.push(vec![r.x.into(), r.product.into(), r.prediction.into(), r.ratio.into()]);
    }
    Ok(Output { report: to_json(&report), tables: vec![table] })
}

#[derive(Serialize)]
struct ResidueReport {
    model: String,
    method: &'static str,
    residue: f64,
    tail_estimate: Option<f64>,
    gamma_f: f64,
}

fn residue(spec: &str) -> Result<Output, CliError> {
    let parsed: ModelSpec = spec.parse()?;
    let (method, residue, tail_estimate) = match parsed {
        ModelSpec::Zeta { .. } => {
            build(spec)?;
            ("exact", 1.0, None)
        }
        ModelSpec::Dedekind { d } => ("dirichlet_L1", dirichlet_l1(d)?, None),
        ModelSpec::RsDelta { n } => {
            let r = sym2_residue::<f64>(n as u64)?;
            ("sym2_residue", r.value, Some(r.tail_estimate))
        }
    };
    let order = match parsed {
        ModelSpec::Zeta { power } => power as f64,
        _ => 1.0,
    };
    let report = ResidueReport {
        model: parsed.to_string(),
        method,
        residue,
        tail_estimate,
        gamma_f: order * EULER_GAMMA + residue.ln(),
    };
    let mut table = Table::new("residue", &["model", "method", "residue", "tail_estimate", "gamma_f"]);
    table.push(vec![
        report.model.as_str().into(),
        method.into(),
        residue.into(),
        tail_estimate.into(),
        report.gamma_f.into(),
    ]);
    Ok(Output { report: to_json(&report), tables: vec![table] })
}

fn resonance(report: &ResonanceReport<f64>) -> Output {
    let mut table = Table::new(
        "resonance",
        &["model", "T", "X", "resonance_product", "mertens_factor", "defect", "asymptotic_bound", "note"],
    );
    table.push(vec![
        report.model.as_str().into(),
        report.t_height.into(),
        report.x.into(),
        report.resonance_product.into(),
        report.mertens_factor.into(),
        report.defect.into(),
        report.asymptotic_bound.into(),
        report.note.into(),
    ]);
    Output { report: to_json(report), tables: vec![table] }
}

fn moments(model: &Model, x: f64, t_height: f64, n_cutoff: u64, step: f64) -> Result<Output, CliError> {
    let audit = moment_audit(model, x, t_height, n_cutoff, step)?;
    let (s, q) = (&audit.series, &audit.quadrature);
    let mut table = Table::new(
        "moments",
        &[
            "model",
            "X",
            "T",
            "eps",
            "n_cutoff",
            "i1_series",
            "i2_series",
            "truncation_bound",
            "pairs",
            "i1_quadrature",
            "i2_quadrature",
            "quadrature_step",
            "quadrature_error",
            "resonance_product",
            "ratio",
            "ratio_series",
            "allowance",
            "inequality_holds",
            "i2_relative_gap",
        ],
    );
    table.push(vec![
        audit.model.as_str().into(),
        s.x.into(),
        s.t_height.into(),
        s.eps.into(),
        s.n_cutoff.into(),
        s.i1.into(),
        s.i2.into(),
        s.truncation_bound.into(),
        s.pairs.into(),
        q.i1.into(),
        q.i2.into(),
        q.step.into(),
        q.error_estimate.into(),
        audit.resonance_product.into(),
        audit.ratio.into(),
        audit.ratio_series.into(),
        audit.allowance.into(),
        audit.inequality_holds.into(),
        audit.i2_relative_gap.into(),
    ]);
    Ok(Output { report: to_json(&audit), tables: vec![table] })
}

#[derive(Serialize)]
struct EvaluateReport {
    model: String,
    t: f64,
    #[serde(rename = "Y")]
    y: f64,
    re: f64,
    im: f64,
    magnitude: f64,
    phase: f64,
    /// `F_Y(1)`, which bounds `|F(1+it; Y)|` for zeta powers.
    product_at_1: f64,
    oracle: Option<&'static str>,
    direct_re: Option<f64>,
    direct_im: Option<f64>,
    cross_re: Option<f64>,
    cross_im: Option<f64>,
    /// `|F(1+it; Y) / F(1+it) - 1|`.
    deviation: Option<f64>,
}

fn evaluate(model: &Model, t: f64, y: f64) -> Result<Output, CliError> {
    let v = LineProduct::new(model, y)?.value(t)?;
    let product_at_1 = truncated_product_at_1(model, y)?;
    // the direct oracles have a pole at t = 0
    let oracles: Option<(&'static str, Complex64, Complex64)> = match model.spec() {
        _ if t == 0.0 => None,
        ModelSpec::Zeta { power } => {
            let cross = zeta_eta(Complex64::new(1.0, t))?.powu(power);
            Some(("zeta_em; cross-check zeta_eta", direct_value(model, t)?, cross))
        }
        ModelSpec::Dedekind { d } => {
            let cross = zeta_eta(Complex64::new(1.0, t))? * dirichlet_direct(d, t)?;
            Some(("zeta_em*dirichlet_direct; cross-check zeta_eta*dirichlet_direct", direct_value(model, t)?, cross))
        }
        ModelSpec::RsDelta { .. } => None,
    };
    let report = EvaluateReport {
        model: model.label().to_string(),
        t,
        y,
        re: v.re,
        im: v.im,
        magnitude: v.norm(),
        phase: v.arg(),
        product_at_1,
        oracle: oracles.map(|o| o.0),
        direct_re: oracles.map(|o| o.1.re),
        direct_im: oracles.map(|o| o.1.im),
        cross_re: oracles.map(|o| o.2.re),
        cross_im: oracles.map(|o| o.2.im),
        deviation: oracles.map(|o| (v / o.1 - 1.0).norm()),
    };
    let mut table = Table::new(
        "evaluate",
        &[
            "model", "t", "Y", "re", "im", "magnitude", "phase", "product_at_1", "oracle", "direct_re", "direct_im",
            "cross_re", "cross_im", "deviation",
        ],
    );
    table.push(vec![
        report.model.as_str().into(),
        t.into(),
        y.into(),
        report.re.into(),
        report.im.into(),
        report.magnitude.into(),
        report.phase.into(),
        product_at_1.into(),
        report.oracle.map_or(Cell::Empty, Cell::from),
        report.direct_re.into(),
        report.direct_im.into(),
        report.cross_re.into(),
        report.cross_im.into(),
        report.deviation.into(),
    ]);
    Ok(Output { report: to_json(&report), tables: vec![table] })
}

fn calibrate(model: &Model, range: (f64, f64), y: f64, samples: u64, seed: u64) -> Result<Output, CliError> {
    let count = usize::try_from(samples).map_err(|_| Error::Resource {
        param: "samples",
        value: samples.to_string(),
        limit: usize::MAX.to_string(),
    })?;
    let stats = calibrate_truncation(model, range, y, count, seed)?;
    let mut per = Table::new("samples", &["index", "t", "deviation"]);
    for (i, (t, d)) in stats.samples.iter().zip(&stats.deviations).enumerate() {
        per.push(vec![(i as u64).into(), (*t).into(), (*d).into()]);
    }
    let mut summary = Table::new(
        "summary",
        &["model", "t_min", "t_max", "Y", "sample_count", "seed", "median", "mean", "max", "note"],
    );
    summary.push(vec![
        stats.model.as_str().into(),
        stats.t_min.into(),
        stats.t_max.into(),
        stats.y.into(),
        (stats.sample_count as u64).into(),
        stats.seed.into(),
        stats.median.into(),
        stats.mean.into(),
        stats.max.into(),
        stats.note.into(),
    ]);
    Ok(Output { report: to_json(&stats), tables: vec![per, summary] })
}

#[derive(Serialize)]
struct ScanReport {
    model: String,
    t_min: f64,
    t_max: f64,
    step: f64,
    #[serde(rename = "Y")]
    y: f64,
    refine_tol: f64,
    grid: Vec<ScanRecord<f64>>,
    refined: Vec<ScanRecord<f64>>,
    bound: Option<olx_core::BoundReport>,
}

fn record_table(name: &'static str, records: &[ScanRecord<f64>]) -> Table {
    let mut table = Table::new(name, &["t", "magnitude", "phase", "Y", "refined"]);
    for r in records {
        table.push(vec![r.t.into(), r.magnitude.into(), r.phase.into(), r.y.into(), r.refined.into()]);
    }
    table
}

fn scan(model: &Model, t_height: Option<f64>, (lo, hi): (f64, f64), step: f64, y: f64, top_k: u64) -> Result<Output, CliError> {
    let line = LineProduct::new(model, y)?;
    let top_k = usize::try_from(top_k).unwrap_or(usize::MAX);
    let grid = grid_scan_with(&line, lo, hi, step, top_k)?;
    let refined = grid
        .iter()
        .map(|r| refine_peak_in(&line, r.t, (r.t - step).max(lo), (r.t + step).min(hi), REFINE_TOL))
        .collect::<Result<Vec<_>, _>>()?;
    let all: Vec<ScanRecord<f64>> = grid.iter().chain(&refined).copied().collect();
    // without an explicit T the bound uses t_max when it is large enough
    let bound = match t_height {
        Some(t) => Some(bound_report(&all, model, t)?),
        None if hi > min_height() => Some(bound_report(&all, model, hi)?),
        None => None,
    };
    let mut tables = vec![record_table("grid", &grid), record_table("refined", &refined)];
    let mut bt = Table::new(
        "bound",
        &["model", "T", "max_magnitude", "t_at_max", "bound", "difference", "ratio", "conjectural", "note"],
    );
    if let Some(b) = &bound {
        bt.push(vec![
            b.model.as_str().into(),
            b.t_height.into(),
            b.max_magnitude.into(),
            b.t_at_max.into(),
            b.bound.into(),
            b.difference.into(),
            b.ratio.into(),
            b.conjectural.into(),
            b.note.into(),
        ]);
    }
    tables.push(bt);
    let report = ScanReport {
        model: model.label().to_string(),
        t_min: lo,
        t_max: hi,
        step,
        y,
        refine_tol: REFINE_TOL,
        grid,
        refined,
        bound,
    };
    Ok(Output { report: to_json(&report), tables })
}
