use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use vixbond::diagnostics::{acf_to_csv, qq_to_csv, MomentSummary, TestResult, DEFAULT_ADF_LAGS};
use vixbond::ingest::MonthRange;
use vixbond::models::{save_model, ModelFile, ModelParams, ReturnsModelParams};
use vixbond::pipeline::{
    analyze_rates, analyze_returns, analyze_vix, build_report, fitted_joint_spec, format_table, Case, DataSource, Dataset,
    InnovationKind, Inputs, DEFAULT_BILL_SERIES,
};
use vixbond::regression::OlsFit;
use vixbond::simulator::{
    ergodicity_diagnostic, published_aaa_spec, simulate_path, stationary_moments, validate_assumptions, JointModelSpec,
    Severity,
};

#[derive(Parser)]
#[command(name = "vixbond", version, about = "VIX-normalized autoregressions for corporate bond rates and returns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the log-VIX, rate and return regressions and write model files.
    Fit(DataArgs),
    /// Residual comparison, unit-root/normality/autocorrelation tests and figure data.
    Diagnose(DataArgs),
    /// Simulate the joint volatility/rate/return chain and check convergence.
    Simulate(SimulateArgs),
    /// Regenerate every table, figure data set and model file.
    Report(ReportArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Directory of `<SERIES>.csv` FRED exports.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Lags in the augmented Dickey-Fuller regression.
    #[arg(long, default_value_t = DEFAULT_ADF_LAGS)]
    lags: usize,
    /// Three-month bill series used for excess yields and premia.
    #[arg(long, default_value = DEFAULT_BILL_SERIES)]
    bill_series: String,
}

#[derive(Args, Clone)]
struct DataArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    dataset: DatasetArg,
    /// BofA only: yield, spread or excess.
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    /// Month range `YYYY-MM..YYYY-MM`; defaults to the dataset's published window.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Fit the spec from this dataset in `--data-dir`.
    #[arg(long, value_enum)]
    dataset: Option<DatasetArg>,
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    #[arg(long)]
    window: Option<String>,
    /// JSON file holding a full chain specification.
    #[arg(long, conflicts_with_all = ["dataset", "preset"])]
    spec: Option<PathBuf>,
    /// Built-in specification.
    #[arg(long, value_enum, conflicts_with = "dataset")]
    preset: Option<Preset>,
    /// Innovation law when fitting from data.
    #[arg(long, value_enum, default_value = "gaussian")]
    innovations: InnovationArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Steps per exported path.
    #[arg(long, default_value_t = 5000)]
    steps: usize,
    /// Number of exported paths.
    #[arg(long, default_value_t = 1)]
    paths: usize,
    /// Steps per chain in the convergence check.
    #[arg(long, default_value_t = 20_000)]
    check_steps: usize,
    /// Chain pairs in the convergence check.
    #[arg(long, default_value_t = 5)]
    pairs: usize,
    /// Defaults to `ceil(10 / (1 - max(b, beta)))`.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Simulate despite assumption violations.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DatasetArg {
    MoodysAaa,
    MoodysBaa,
    BofaQuality,
    BofaJunk,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Yield,
    Spread,
    Excess,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Published Moody's AAA coefficients with Gaussian innovations.
    PublishedAaa,
}

#[derive(Clone, Copy, ValueEnum)]
enum InnovationArg {
    Gaussian,
    Bootstrap,
    VarianceGamma,
}

impl From<DatasetArg> for Dataset {
    fn from(d: DatasetArg) -> Self {
        match d {
            DatasetArg::MoodysAaa => Dataset::MoodysAaa,
            DatasetArg::MoodysBaa => Dataset::MoodysBaa,
            DatasetArg::BofaQuality => Dataset::BofaQuality,
            DatasetArg::BofaJunk => Dataset::BofaJunk,
        }
    }
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Yield => Case::Yield,
            CaseArg::Spread => Case::Spread,
            CaseArg::Excess => Case::Excess,
        }
    }
}

impl From<InnovationArg> for InnovationKind {
    fn from(k: InnovationArg) -> Self {
        match k {
            InnovationArg::Gaussian => InnovationKind::Gaussian,
            InnovationArg::Bootstrap => InnovationKind::Bootstrap,
            InnovationArg::VarianceGamma => InnovationKind::VarianceGamma,
        }
    }
}

/// Simulation refused because of assumption violations.
#[derive(Debug)]
struct Blocked(String);

impl std::fmt::Display for Blocked {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Blocked {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, out) = match &cli.command {
        Command::Fit(a) => ("fit", a.common.out.clone()),
        Command::Diagnose(a) => ("diagnose", a.common.out.clone()),
        Command::Simulate(a) => ("simulate", a.common.out.clone()),
        Command::Report(a) => ("report", a.common.out.clone()),
    };
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Diagnose(a) => cmd_diagnose(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Report(a) => cmd_report(&a),
    };
    let status = match &result {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("error: {e:#}"),
    };
    log_run(&out, name, &status);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Blocked>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

/// Appends a timestamped line to `run.log`; data files never carry timestamps.
fn log_run(out: &Path, command: &str, status: &str) {
    if !out.is_dir() {
        return;
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(out.join("run.log")) {
        let _ = writeln!(f, "unix_time={secs} command={command} status={status}");
    }
}

fn source(common: &Common) -> Result<DataSource> {
    let dir = common.data_dir.clone().context("--data-dir is required")?;
    Ok(DataSource::new(dir).with_bill_series(&common.bill_series))
}

fn parse_window(w: &Option<String>) -> Result<Option<MonthRange>> {
    w.as_deref().map(|s| s.parse::<MonthRange>().with_context(|| format!("bad --window `{s}`"))).transpose()
}

fn load_inputs(common: &Common, dataset: DatasetArg, case: Option<CaseArg>, window: &Option<String>) -> Result<Inputs> {
    let src = source(common)?;
    Ok(src.inputs(dataset.into(), case.map(Into::into), parse_window(window)?)?)
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(dir, name, &text)
}

fn stem(inputs: &Inputs) -> String {
    format!("{}_{}", inputs.dataset, inputs.case)
}

fn fit_rows(out: &mut String, model: &str, fit: &OlsFit<f64>, residuals: Option<&MomentSummary<f64>>) {
    for i in 0..fit.names.len() {
        out.push_str(&format!(
            "{model},{},{},{},{}\n",
            fit.names[i], fit.coefficients[i], fit.standard_errors[i], fit.p_values[i]
        ));
    }
    out.push_str(&format!("{model},r_squared,{},,\n", fit.r_squared));
    out.push_str(&format!("{model},adj_r_squared,{},,\n", fit.adj_r_squared));
    if let Some(m) = residuals {
        out.push_str(&format!("{model},residual_skewness,{},,\n", m.skewness));
        out.push_str(&format!("{model},residual_excess_kurtosis,{},,\n", m.excess_kurtosis));
    }
}

fn returns_model_file(r: &ReturnsModelParams, names: &[String]) -> ModelFile {
    ModelFile::new(ModelParams::Returns(r.clone()), names.to_vec())
}

fn cmd_fit(args: &DataArgs) -> Result<()> {
    let inputs = load_inputs(&args.common, args.dataset, args.case, &args.window)?;
    let out = &args.common.out;
    prepare_out(out)?;
    let stem = stem(&inputs);
    let vix = analyze_vix(&inputs.vix)?;
    let rates = analyze_rates(&inputs, args.common.lags)?;

    save_model(&ModelFile::new(ModelParams::Vix(vix.model.clone()), vec![inputs.vix.name.clone()]), &out.join(format!("{stem}_vix_model.json")))?;
    save_model(
        &ModelFile::new(ModelParams::Spread(rates.model.clone()), rates.series_names.clone()),
        &out.join(format!("{stem}_rate_model.json")),
    )?;

    let mut summary = String::from("model,term,estimate,std_error,p_value\n");
    fit_rows(&mut summary, "log_vix_ar", &vix.model.fit, Some(&vix.w_moments));
    fit_rows(&mut summary, "rate_ar", &rates.raw.fit, Some(&rates.comparison.original));
    fit_rows(&mut summary, "rate_normalized", &rates.model.fit, Some(&rates.comparison.refit_normalized));
    summary.push_str(&format!("rate_normalized,corr_z_w,{},,\n", rates.z_w_correlation));

    if inputs.returns.is_some() {
        let ret = analyze_returns(&inputs)?;
        save_model(&returns_model_file(&ret.single, &ret.series_names), &out.join(format!("{stem}_returns_single_model.json")))?;
        save_model(
            &returns_model_file(&ret.with_rate, &ret.series_names),
            &out.join(format!("{stem}_returns_with_rate_model.json")),
        )?;
        fit_rows(&mut summary, "returns_single", &ret.single.fit, Some(&ret.comparison.refit_normalized));
        fit_rows(&mut summary, "returns_with_rate", &ret.with_rate.fit, None);
        fit_rows(&mut summary, "returns_unnormalized", &ret.unnormalized.fit, Some(&ret.comparison.original));
    }
    let spec = fitted_joint_spec(&inputs, InnovationKind::Gaussian)?;
    write_json(out, &format!("{stem}_joint_spec.json"), &spec)?;
    write(out, &format!("{stem}_fit_summary.csv"), &summary)?;

    let m = &rates.model;
    println!("{} {} window {} ({} months)", inputs.dataset, inputs.case, inputs.window, inputs.rate.len());
    println!("  log VIX: alpha = {:.4}, beta = {:.4}", vix.model.alpha, vix.model.beta);
    println!("  normalized rate regression: a = {:.4}, b - 1 = {:.4}, c = {:.4}", m.a, m.slope(), m.c);
    println!("  wrote {}", out.display());
    Ok(())
}

fn moments_csv(rows: &[(&str, &MomentSummary<f64>)]) -> String {
    let mut s = String::from("residuals,n,mean,std,skewness,excess_kurtosis\n");
    for (name, m) in rows {
        s.push_str(&format!("{name},{},{},{},{},{}\n", m.n, m.mean, m.std, m.skewness, m.excess_kurtosis));
    }
    s
}

fn tests_csv(tests: &[&TestResult<f64>]) -> String {
    let mut s = String::from("test,statistic,p_value,parameter,nobs\n");
    for t in tests {
        s.push_str(&format!("{},{},{},{},{}\n", t.test_name, t.statistic, t.p_value, t.parameter, t.nobs));
    }
    s
}

fn cmd_diagnose(args: &DataArgs) -> Result<()> {
    let inputs = load_inputs(&args.common, args.dataset, args.case, &args.window)?;
    let out = &args.common.out;
    prepare_out(out)?;
    let stem = stem(&inputs);
    let r = analyze_rates(&inputs, args.common.lags)?;
    let c = &r.comparison;
    write(
        out,
        &format!("{stem}_residual_moments.csv"),
        &moments_csv(&[("original", &c.original), ("normalized", &c.normalized), ("refit_normalized", &c.refit_normalized)]),
    )?;
    write(out, &format!("{stem}_tests.csv"), &tests_csv(&[&r.adf, &r.jarque_bera_z, &r.ljung_box_z]))?;
    write(out, &format!("{stem}_acf_z.csv"), &acf_to_csv(&r.acf_z))?;
    write(out, &format!("{stem}_acf_abs_z.csv"), &acf_to_csv(&r.acf_abs_z))?;
    write(out, &format!("{stem}_qq_z.csv"), &qq_to_csv(&r.qq_z))?;
    write_json(out, &format!("{stem}_diagnostics.json"), &r)?;
    if inputs.returns.is_some() {
        let ret = analyze_returns(&inputs)?;
        let c = &ret.comparison;
        write(
            out,
            &format!("{stem}_returns_residual_moments.csv"),
            &moments_csv(&[("delta", &c.original), ("delta_over_v", &c.normalized), ("delta_prime", &c.refit_normalized)]),
        )?;
    }
    println!(
        "{} {}: skewness {:.3} -> {:.3}, excess kurtosis {:.3} -> {:.3}, ADF p = {:.3}",
        inputs.dataset,
        inputs.case,
        c.original.skewness,
        c.normalized.skewness,
        c.original.excess_kurtosis,
        c.normalized.excess_kurtosis,
        r.adf.p_value
    );
    Ok(())
}

fn resolve_spec(args: &SimulateArgs) -> Result<JointModelSpec> {
    let mut spec = if let Some(path) = &args.spec {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("bad spec file {}", path.display()))?
    } else if let Some(Preset::PublishedAaa) = args.preset {
        published_aaa_spec()
    } else if let Some(d) = args.dataset {
        let inputs = load_inputs(&args.common, d, args.case, &args.window)?;
        fitted_joint_spec(&inputs, args.innovations.into())?
    } else {
        bail!("give one of --spec, --preset or --dataset (with --data-dir)");
    };
    if let Some(x) = args.alpha {
        spec.vix.alpha = x;
    }
    if let Some(x) = args.beta {
        spec.vix.beta = x;
    }
    if let Some(x) = args.a {
        spec.spread.a = x;
    }
    if let Some(x) = args.b {
        spec.spread.b = x;
    }
    if let Some(x) = args.c {
        spec.spread.c = x;
    }
    Ok(spec)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let spec = resolve_spec(args)?;
    let findings = validate_assumptions(&spec);
    for f in findings.iter().filter(|f| f.severity >= Severity::Warning) {
        eprintln!("{:?}: {}", f.severity, f.message);
    }
    let violations: Vec<&str> =
        findings.iter().filter(|f| f.severity == Severity::Violation).map(|f| f.message.as_str()).collect();
    if !violations.is_empty() && !args.force {
        return Err(Blocked(format!("refusing to simulate: {} (pass --force to override)", violations.join("; "))).into());
    }
    let out = &args.common.out;
    prepare_out(out)?;
    let seed = args.common.seed;
    write_json(out, "spec.json", &spec)?;
    write_json(out, "findings.json", &findings)?;

    let start = spec.fixed_point_state();
    let width = args.paths.saturating_sub(1).to_string().len().max(3);
    for i in 0..args.paths {
        let path = simulate_path(&spec, args.steps, seed, i as u64, start)?;
        write(out, &format!("path_{i:0width$}.csv"), &path.to_csv())?;
    }

    let burn_in = args.burn_in.or_else(|| spec.default_burn_in()).unwrap_or(args.check_steps / 10);
    let report = ergodicity_diagnostic(&spec, args.check_steps, burn_in, args.pairs, seed)?;
    write_json(out, "convergence.json", &report)?;
    if args.check_steps > burn_in + 1000 {
        write_json(out, "stationary_moments.json", &stationary_moments(&spec, args.check_steps, burn_in, seed)?)?;
    }
    println!(
        "{} path(s) of {} steps; convergence check {} (max KS {:.4}, threshold {})",
        args.paths,
        args.steps,
        if report.passed { "passed" } else { "FAILED" },
        report.max_ks,
        report.threshold
    );
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let src = source(&args.common)?;
    let report = build_report(&src, args.common.lags)?;
    let out = &args.common.out;
    prepare_out(out)?;
    for t in &report.tables {
        write(out, &format!("{}.csv", t.name), &format_table(t))?;
    }
    let figures = out.join("figures");
    prepare_out(&figures)?;
    for (name, csv) in report.figures() {
        write(&figures, &name, &csv)?;
    }
    let models = out.join("models");
    prepare_out(&models)?;
    save_model(&ModelFile::new(ModelParams::Vix(report.vix.model.clone()), vec!["VIXCLS".into()]), &models.join("vix_model.json"))?;
    for r in &report.rates {
        save_model(
            &ModelFile::new(ModelParams::Spread(r.model.clone()), r.series_names.clone()),
            &models.join(format!("{}_{}_rate_model.json", r.dataset, r.case)),
        )?;
    }
    for r in &report.returns {
        save_model(
            &returns_model_file(&r.with_rate, &r.series_names),
            &models.join(format!("{}_{}_returns_with_rate_model.json", r.dataset, r.case)),
        )?;
    }
    write_json(out, "report.json", &report)?;
    println!("wrote {} tables, {} figure files to {}", report.tables.len(), report.figures().len(), out.display());
    Ok(())
}
