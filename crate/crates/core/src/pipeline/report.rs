use serde::{Deserialize, Serialize};

use super::{analyze_rates, analyze_returns, analyze_vix, all_required_series, report_cells, Case, Dataset, DataSource};
use super::{RateAnalysis, ReturnsAnalysis, VixAnalysis};
use crate::diagnostics::{acf_to_csv, qq_to_csv};
use crate::error::{Error, Result};
use crate::regression::t_test_pvalue;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub values: Vec<f64>,
    /// Digits after the decimal point in the CSV rendering.
    pub decimals: usize,
    /// Operation and field each value comes from.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl Table {
    fn new(name: &str, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    fn row(&mut self, label: &str, values: Vec<f64>, decimals: usize, provenance: &str) {
        self.rows.push(TableRow { label: label.into(), values, decimals, provenance: provenance.into() });
    }

    pub fn get(&self, label: &str, column: &str) -> Option<f64> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.iter().find(|r| r.label == label).map(|r| r.values[j])
    }
}

/// CSV with a leading label column and a trailing provenance column.
pub fn format_table(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(table.columns.iter().cloned());
    header.push("provenance".into());
    w.write_record(&header).expect("in-memory write");
    for r in &table.rows {
        let mut rec = vec![r.label.clone()];
        rec.extend(r.values.iter().map(|v| format!("{v:.*}", r.decimals)));
        rec.push(r.provenance.clone());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn find<'a>(rates: &'a [RateAnalysis], d: Dataset, c: Case) -> Result<&'a RateAnalysis> {
    rates
        .iter()
        .find(|r| r.dataset == d && r.case == c)
        .ok_or_else(|| Error::InvalidArgument(format!("no rate analysis for {d}/{c}")))
}

fn bofa_cells() -> Vec<(Dataset, Case)> {
    [Dataset::BofaQuality, Dataset::BofaJunk].into_iter().flat_map(|d| Case::ALL.map(|c| (d, c))).collect()
}

fn bofa_columns() -> Vec<String> {
    bofa_cells().iter().map(|(d, c)| format!("{} {}", d.label(), c.label())).collect()
}

fn bofa_row(rates: &[RateAnalysis], f: impl Fn(&RateAnalysis) -> f64) -> Result<Vec<f64>> {
    bofa_cells().into_iter().map(|(d, c)| find(rates, d, c).map(&f)).collect()
}

/// Autoregression of the six BofA rate series: slope, intercept, p-values and
/// residual moments before and after division by VIX.
pub fn table1(rates: &[RateAnalysis]) -> Result<Table> {
    let mut t = Table::new("table1", bofa_columns());
    t.row("Regression slope b-1", bofa_row(rates, |r| r.raw.slope())?, 3, "fit_raw_ar: b - 1");
    t.row("Regression intercept a", bofa_row(rates, |r| r.raw.a)?, 3, "fit_raw_ar: a");
    t.row("Student t-test p-value", bofa_row(rates, |r| r.raw.fit.p_value("rate_lag"))?, 3, "fit_raw_ar: t-test p for b - 1 = 0");
    t.row("ADF test p-value", bofa_row(rates, |r| r.adf.p_value)?, 3, "adf_test: p-value");
    t.row(
        "Original residuals skewness",
        bofa_row(rates, |r| r.comparison.original.skewness)?,
        2,
        "compare_residuals: original skewness",
    );
    t.row(
        "Normalized residuals skewness",
        bofa_row(rates, |r| r.comparison.normalized.skewness)?,
        2,
        "compare_residuals: normalized skewness",
    );
    t.row(
        "Original residuals kurtosis",
        bofa_row(rates, |r| r.comparison.original.excess_kurtosis)?,
        2,
        "compare_residuals: original excess kurtosis",
    );
    t.row(
        "Normalized residuals kurtosis",
        bofa_row(rates, |r| r.comparison.normalized.excess_kurtosis)?,
        2,
        "compare_residuals: normalized excess kurtosis",
    );
    Ok(t)
}

/// Normalized regression of the six BofA rate series.
pub fn table2(rates: &[RateAnalysis]) -> Result<Table> {
    let mut t = Table::new("table2", bofa_columns());
    t.row("Regression intercept a", bofa_row(rates, |r| r.model.a)?, 4, "fit_spread_model: a");
    t.row("Regression slope b-1", bofa_row(rates, |r| r.model.slope())?, 4, "fit_spread_model: b - 1");
    t.row("Volatility coefficient c", bofa_row(rates, |r| r.model.c)?, 4, "fit_spread_model: c");
    t.row("Value p for a", bofa_row(rates, |r| r.model.fit.p_value("inv_vix"))?, 3, "fit_spread_model: t-test p for a");
    t.row(
        "Value p for b-1",
        bofa_row(rates, |r| r.model.fit.p_value("rate_lag_over_vix"))?,
        3,
        "fit_spread_model: t-test p for b - 1",
    );
    t.row("Value p for c", bofa_row(rates, |r| r.model.fit.p_value("const"))?, 3, "fit_spread_model: t-test p for c");
    t.row("Value R^2", bofa_row(rates, |r| r.model.fit.r_squared)?, 3, "fit_spread_model: R^2");
    t.row(
        "Residuals skewness",
        bofa_row(rates, |r| r.comparison.refit_normalized.skewness)?,
        3,
        "fit_spread_model: skewness of Z",
    );
    t.row(
        "Residuals kurtosis",
        bofa_row(rates, |r| r.comparison.refit_normalized.excess_kurtosis)?,
        3,
        "fit_spread_model: excess kurtosis of Z",
    );
    Ok(t)
}

fn find_returns(returns: &[ReturnsAnalysis], d: Dataset, c: Case) -> Result<&ReturnsAnalysis> {
    returns
        .iter()
        .find(|r| r.dataset == d && r.case == c)
        .ok_or_else(|| Error::InvalidArgument(format!("no returns analysis for {d}/{c}")))
}

/// Adjusted R^2 of the normalized return regressions with and without `k`,
/// and the p-value for `k = 0`, all in percent.
pub fn table3(returns: &[ReturnsAnalysis]) -> Result<Table> {
    let mut columns = Vec::new();
    for d in [Dataset::BofaQuality, Dataset::BofaJunk] {
        columns.push(format!("{} R^2 single", d.label()));
        columns.push(format!("{} R^2 with k", d.label()));
        columns.push(format!("{} p for k=0", d.label()));
    }
    let mut t = Table::new("table3", columns);
    for c in Case::ALL {
        let mut values = Vec::new();
        for d in [Dataset::BofaQuality, Dataset::BofaJunk] {
            let r = find_returns(returns, d, c)?;
            values.push(100.0 * r.single.fit.adj_r_squared);
            values.push(100.0 * r.with_rate.fit.adj_r_squared);
            values.push(100.0 * r.with_rate.k_p_value().unwrap_or(f64::NAN));
        }
        t.row(
            &format!("Case ({})", c.letter()),
            values,
            1,
            "fit_returns_model: adjusted R^2 (single, with_lagged_rate); t-test p for k",
        );
    }
    Ok(t)
}

/// Skewness and excess kurtosis of `delta`, `delta / V` and `delta'`.
pub fn table4(returns: &[ReturnsAnalysis]) -> Result<Table> {
    let columns = ["Skewness delta", "Skewness delta/V", "Skewness delta'", "Kurtosis delta", "Kurtosis delta/V", "Kurtosis delta'"];
    let mut t = Table::new("table4", columns.iter().map(|s| s.to_string()).collect());
    for d in [Dataset::BofaQuality, Dataset::BofaJunk] {
        for c in Case::ALL {
            let m = find_returns(returns, d, c)?.comparison;
            t.row(
                &format!("{} ({})", d.label(), c.letter()),
                vec![
                    m.original.skewness,
                    m.normalized.skewness,
                    m.refit_normalized.skewness,
                    m.original.excess_kurtosis,
                    m.normalized.excess_kurtosis,
                    m.refit_normalized.excess_kurtosis,
                ],
                3,
                "compare_residuals: fit_unnormalized_returns_model residuals, divided by V, fit_returns_model residuals",
            );
        }
    }
    Ok(t)
}

/// Moody's spread fits, residual comparison and `Z`-`W` correlation.
pub fn moodys_table(rates: &[RateAnalysis]) -> Result<Table> {
    let ds = [Dataset::MoodysAaa, Dataset::MoodysBaa];
    let cols = ds.iter().map(|d| d.label().to_string()).collect();
    let mut t = Table::new("moodys", cols);
    let row = |f: &dyn Fn(&RateAnalysis) -> f64| -> Result<Vec<f64>> {
        ds.iter().map(|d| find(rates, *d, Case::Spread).map(f)).collect()
    };
    t.row("a", row(&|r| r.model.a)?, 4, "fit_spread_model: a");
    t.row("b-1", row(&|r| r.model.slope())?, 4, "fit_spread_model: b - 1");
    t.row("c", row(&|r| r.model.c)?, 4, "fit_spread_model: c");
    t.row("p for a", row(&|r| r.model.fit.p_value("inv_vix"))?, 3, "fit_spread_model: t-test p for a");
    t.row("p for b-1", row(&|r| r.model.fit.p_value("rate_lag_over_vix"))?, 3, "fit_spread_model: t-test p for b - 1");
    t.row("p for c", row(&|r| r.model.fit.p_value("const"))?, 3, "fit_spread_model: t-test p for c");
    t.row("Original residuals skewness", row(&|r| r.comparison.original.skewness)?, 3, "compare_residuals: original skewness");
    t.row("Original residuals kurtosis", row(&|r| r.comparison.original.excess_kurtosis)?, 3, "compare_residuals: original excess kurtosis");
    t.row("Normalized residuals skewness", row(&|r| r.comparison.normalized.skewness)?, 3, "compare_residuals: normalized skewness");
    t.row(
        "Normalized residuals kurtosis",
        row(&|r| r.comparison.normalized.excess_kurtosis)?,
        3,
        "compare_residuals: normalized excess kurtosis",
    );
    t.row("Z skewness", row(&|r| r.comparison.refit_normalized.skewness)?, 3, "fit_spread_model: skewness of Z");
    t.row("Z kurtosis", row(&|r| r.comparison.refit_normalized.excess_kurtosis)?, 3, "fit_spread_model: excess kurtosis of Z");
    t.row("corr(Z, W)", row(&|r| r.z_w_correlation)?, 3, "correlation: Z against fit_vix_ar innovations");
    t.row("ADF test p-value", row(&|r| r.adf.p_value)?, 3, "adf_test: p-value");
    Ok(t)
}

/// Log-VIX autoregression and innovation summary.
pub fn vix_table(vix: &VixAnalysis) -> Table {
    let m = &vix.model;
    let i = m.fit.index_of("log_vix_lag").expect("log_vix_lag column");
    let p_unit = t_test_pvalue((m.beta - 1.0) / m.fit.standard_errors[i], m.fit.dof);
    let mut t = Table::new("vix", vec!["VIXCLS".into()]);
    t.row("alpha", vec![m.alpha], 3, "fit_vix_ar: alpha");
    t.row("beta", vec![m.beta], 3, "fit_vix_ar: beta");
    t.row("p for beta=1", vec![p_unit], 4, "fit_vix_ar: t-test p for beta = 1");
    t.row("W skewness", vec![vix.w_moments.skewness], 2, "moments: skewness of W");
    t.row("W kurtosis", vec![vix.w_moments.excess_kurtosis], 2, "moments: excess kurtosis of W");
    t.row("Jarque-Bera p-value", vec![vix.jarque_bera_w.p_value], 4, "jarque_bera: W");
    if let Some(vg) = &m.vg {
        t.row("VG location", vec![vg.params.location], 4, "fit_variance_gamma: location");
        t.row("VG scale", vec![vg.params.scale], 4, "fit_variance_gamma: scale");
        t.row("VG asymmetry", vec![vg.params.asymmetry], 4, "fit_variance_gamma: asymmetry");
        t.row("VG shape", vec![vg.params.shape], 4, "fit_variance_gamma: shape");
    }
    t
}

/// All fits, tests, tables and figure point sets over the published windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub vix: VixAnalysis,
    pub rates: Vec<RateAnalysis>,
    pub returns: Vec<ReturnsAnalysis>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// `(file name, csv)` for the ACF of `Z`, ACF of `|Z|` and QQ of `Z` per rate series.
    pub fn figures(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for r in &self.rates {
            let stem = format!("{}_{}", r.dataset, r.case);
            out.push((format!("{stem}_acf_z.csv"), acf_to_csv(&r.acf_z)));
            out.push((format!("{stem}_acf_abs_z.csv"), acf_to_csv(&r.acf_abs_z)));
            out.push((format!("{stem}_qq_z.csv"), qq_to_csv(&r.qq_z)));
        }
        out
    }
}

/// Runs every fit and diagnostic the tables need; fails listing all missing files.
pub fn build_report(source: &DataSource, adf_lags: usize) -> Result<Report> {
    source.check_present(&all_required_series(source))?;
    let vix = analyze_vix(&source.vix(Dataset::MoodysAaa.default_window())?)?;
    let mut rates = Vec::new();
    let mut returns = Vec::new();
    for (d, c) in report_cells() {
        let inputs = source.inputs(d, Some(c), None)?;
        rates.push(analyze_rates(&inputs, adf_lags)?);
        if inputs.returns.is_some() {
            returns.push(analyze_returns(&inputs)?);
        }
    }
    let tables = vec![
        table1(&rates)?,
        table2(&rates)?,
        table3(&returns)?,
        table4(&returns)?,
        moodys_table(&rates)?,
        vix_table(&vix),
    ];
    Ok(Report { vix, rates, returns, tables })
}
