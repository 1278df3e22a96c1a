//! End-to-end runs over a directory of FRED exports: loading, fitting,
//! diagnostics and the report tables.

mod analysis;
mod report;
pub mod synthetic;

pub use analysis::{
    analyze_rates, analyze_returns, analyze_vix, fitted_joint_spec, InnovationKind, RateAnalysis, ReturnsAnalysis,
    VixAnalysis, ACF_LAGS,
};
pub use report::{
    build_report, format_table, moodys_table, table1, table2, table3, table4, vix_table, Report, Table, TableRow,
};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{
    align, derive_difference, derive_log_returns, derive_premia, load_fred_file, MonthRange, MonthlyRule, MonthlySeries,
    YearMonth,
};

pub const VIX_SERIES: &str = "VIXCLS";
pub const DEFAULT_BILL_SERIES: &str = "TB3MS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    MoodysAaa,
    MoodysBaa,
    BofaQuality,
    BofaJunk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// `Q` = total returns, `R` = effective yield.
    Yield,
    /// `Q` = premia, `R` = option-adjusted spread.
    Spread,
    /// `Q` = premia, `R` = yield minus the bill rate.
    Excess,
}

impl Dataset {
    pub const ALL: [Dataset; 4] = [Dataset::MoodysAaa, Dataset::MoodysBaa, Dataset::BofaQuality, Dataset::BofaJunk];

    pub fn is_bofa(self) -> bool {
        matches!(self, Dataset::BofaQuality | Dataset::BofaJunk)
    }

    /// Sample window of the published fits.
    pub fn default_window(self) -> MonthRange {
        let ym = |y, m| YearMonth { year: y, month: m };
        if self.is_bofa() {
            MonthRange { first: ym(1996, 12), last: ym(2024, 3) }
        } else {
            MonthRange { first: ym(1986, 1), last: ym(2024, 8) }
        }
    }

    /// Column label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Dataset::MoodysAaa => "AAA",
            Dataset::MoodysBaa => "BAA",
            Dataset::BofaQuality => "Quality",
            Dataset::BofaJunk => "Junk",
        }
    }

    fn yield_series(self) -> Option<&'static str> {
        match self {
            Dataset::BofaQuality => Some("BAMLC0A0CMEY"),
            Dataset::BofaJunk => Some("BAMLH0A0HYM2EY"),
            _ => None,
        }
    }

    fn spread_series(self) -> &'static str {
        match self {
            Dataset::MoodysAaa => "AAA10Y",
            Dataset::MoodysBaa => "BAA10Y",
            Dataset::BofaQuality => "BAMLC0A0CM",
            Dataset::BofaJunk => "BAMLH0A0HYM2",
        }
    }

    fn index_series(self) -> Option<&'static str> {
        match self {
            Dataset::BofaQuality => Some("BAMLCC0A0CMTRIV"),
            Dataset::BofaJunk => Some("BAMLHYH0A0HYM2TRIV"),
            _ => None,
        }
    }

    /// Moody's data only carry spreads; BofA defaults to the yield case.
    pub fn resolve_case(self, case: Option<Case>) -> Result<Case> {
        match (self.is_bofa(), case) {
            (true, c) => Ok(c.unwrap_or(Case::Yield)),
            (false, None | Some(Case::Spread)) => Ok(Case::Spread),
            (false, Some(c)) => Err(Error::InvalidArgument(format!("{self} has only a spread series, not `{c}`"))),
        }
    }
}

impl Case {
    pub const ALL: [Case; 3] = [Case::Yield, Case::Spread, Case::Excess];

    pub fn label(self) -> &'static str {
        match self {
            Case::Yield => "Yield",
            Case::Spread => "Spread",
            Case::Excess => "Excess",
        }
    }

    /// `(a)`, `(b)` or `(c)` in the returns tables.
    pub fn letter(self) -> char {
        match self {
            Case::Yield => 'a',
            Case::Spread => 'b',
            Case::Excess => 'c',
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dataset::MoodysAaa => "moodys_aaa",
            Dataset::MoodysBaa => "moodys_baa",
            Dataset::BofaQuality => "bofa_quality",
            Dataset::BofaJunk => "bofa_junk",
        })
    }
}

impl FromStr for Dataset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown dataset `{s}`")))
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label().to_ascii_lowercase())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case `{s}`")))
    }
}

/// Directory of `<SERIES>.csv` FRED exports.
#[derive(Debug, Clone)]
pub struct DataSource {
    pub dir: PathBuf,
    pub bill_series: String,
}

/// Rate and volatility over a common window, plus the return series when the
/// dataset has one.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub dataset: Dataset,
    pub case: Case,
    pub window: MonthRange,
    pub rate: MonthlySeries,
    pub vix: MonthlySeries,
    /// `Q_t` for months `1..n` of the window.
    pub returns: Option<MonthlySeries>,
}

impl DataSource {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), bill_series: DEFAULT_BILL_SERIES.into() }
    }

    pub fn with_bill_series(mut self, name: impl Into<String>) -> Self {
        self.bill_series = name.into();
        self
    }

    fn path(&self, series: &str) -> PathBuf {
        self.dir.join(format!("{series}.csv"))
    }

    /// Series files a dataset/case needs.
    pub fn required_series(&self, dataset: Dataset, case: Case) -> Vec<String> {
        let mut out = vec![VIX_SERIES.to_string()];
        match case {
            Case::Yield => out.extend(dataset.yield_series().map(str::to_string)),
            Case::Spread => out.push(dataset.spread_series().to_string()),
            Case::Excess => {
                out.extend(dataset.yield_series().map(str::to_string));
                out.push(self.bill_series.clone());
            }
        }
        if let Some(ix) = dataset.index_series() {
            out.push(ix.to_string());
            if case != Case::Yield && !out.contains(&self.bill_series) {
                out.push(self.bill_series.clone());
            }
        }
        out
    }

    /// Fails with every absent file named when any of `series` is missing.
    pub fn check_present<S: AsRef<str>>(&self, series: &[S]) -> Result<()> {
        let missing: Vec<String> =
            series.iter().map(|s| s.as_ref()).filter(|s| !self.path(s).is_file()).map(str::to_string).collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingSeries { dir: self.dir.display().to_string(), series: missing })
        }
    }

    fn load(&self, series: &str) -> Result<MonthlySeries> {
        // VIX is averaged over the month; rates, spreads and index levels are month-end.
        let rule = if series == VIX_SERIES || series == self.bill_series {
            MonthlyRule::MonthlyAverage
        } else {
            MonthlyRule::EndOfMonth
        };
        Ok(load_fred_file(&self.path(series), rule)?.with_name(series))
    }

    pub fn vix(&self, window: MonthRange) -> Result<MonthlySeries> {
        self.check_present(&[VIX_SERIES])?;
        Ok(self.load(VIX_SERIES)?.restrict(window))
    }

    fn rate(&self, dataset: Dataset, case: Case) -> Result<MonthlySeries> {
        match case {
            Case::Spread => self.load(dataset.spread_series()),
            Case::Yield => self.load(dataset.yield_series().expect("bofa yield")),
            Case::Excess => {
                let name = dataset.yield_series().expect("bofa yield");
                let panel = align(&[self.load(name)?, self.load(&self.bill_series)?])?;
                let excess = derive_difference(panel.series(name)?, panel.series(&self.bill_series)?)?;
                Ok(excess.with_name(format!("{name}_excess")))
            }
        }
    }

    /// Loads rate, VIX and (for BofA) the return series over `window`, which
    /// defaults to the dataset's published window.
    pub fn inputs(&self, dataset: Dataset, case: Option<Case>, window: Option<MonthRange>) -> Result<Inputs> {
        let case = dataset.resolve_case(case)?;
        self.check_present(&self.required_series(dataset, case))?;
        let window = window.unwrap_or_else(|| dataset.default_window());
        let rate = self.rate(dataset, case)?;
        let vix = self.load(VIX_SERIES)?;
        let panel = align(&[rate.clone(), vix])?.restrict(window)?;
        let rate = panel.series(&rate.name)?.clone();
        let vix = panel.series(VIX_SERIES)?.clone();
        let returns = match dataset.index_series() {
            None => None,
            Some(ix) => {
                let index = self.load(ix)?;
                let range = panel.range();
                let q = derive_log_returns(&index.restrict(range))?;
                Some(match case {
                    Case::Yield => q,
                    Case::Spread | Case::Excess => derive_premia(&q, &self.load(&self.bill_series)?)?,
                })
            }
        };
        Ok(Inputs { dataset, case, window: panel.range(), rate, vix, returns })
    }
}

/// Every series the full report reads.
pub fn all_required_series(source: &DataSource) -> Vec<String> {
    let mut all: Vec<String> = Vec::new();
    for (d, c) in report_cells() {
        for s in source.required_series(d, c) {
            if !all.contains(&s) {
                all.push(s);
            }
        }
    }
    all
}

/// `(dataset, case)` pairs covered by the report, Moody's first.
pub fn report_cells() -> Vec<(Dataset, Case)> {
    Dataset::ALL
        .into_iter()
        .flat_map(|d| Case::ALL.into_iter().filter(move |c| d.resolve_case(Some(*c)).is_ok()).map(move |c| (d, c)))
        .collect()
}
