//! FRED CSV ingestion, monthly aggregation, alignment, and derived series.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Calendar month key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidArgument(format!("month {month} out of range")));
        }
        Ok(Self { year, month })
    }

    pub fn of_date(d: NaiveDate) -> Self {
        Self { year: d.year(), month: d.month() }
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Self { year: self.year + 1, month: 1 }
        } else {
            Self { year: self.year, month: self.month + 1 }
        }
    }

    pub fn prev(self) -> Self {
        if self.month == 1 {
            Self { year: self.year - 1, month: 12 }
        } else {
            Self { year: self.year, month: self.month - 1 }
        }
    }

    /// Number of months from `self` to `other` (negative if `other` is earlier).
    pub fn months_until(self, other: Self) -> i64 {
        (other.year as i64 - self.year as i64) * 12 + other.month as i64 - self.month as i64
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected YYYY-MM, got `{s}`"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        Self::new(year, month)
    }
}

/// Inclusive month range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthRange {
    pub first: YearMonth,
    pub last: YearMonth,
}

impl MonthRange {
    pub fn len(&self) -> usize {
        (self.first.months_until(self.last) + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.last < self.first
    }

    pub fn contains(&self, m: YearMonth) -> bool {
        self.first <= m && m <= self.last
    }
}

impl fmt::Display for MonthRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl FromStr for MonthRange {
    type Err = Error;

    /// Parses `YYYY-MM..YYYY-MM` (also accepts `:` as the separator).
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("..")
            .or_else(|| s.split_once(':'))
            .ok_or_else(|| Error::InvalidArgument(format!("expected FIRST..LAST, got `{s}`")))?;
        let r = Self { first: a.parse()?, last: b.parse()? };
        if r.is_empty() {
            return Err(Error::InvalidArgument(format!("empty month range `{s}`")));
        }
        Ok(r)
    }
}

/// One row of a FRED export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCsvRecord {
    pub date: NaiveDate,
    pub value: Option<f64>,
}

/// Parsed FRED export.
#[derive(Debug, Clone, PartialEq)]
pub struct FredCsv {
    /// Second header column, e.g. `VIXCLS`.
    pub series_name: String,
    pub records: Vec<RawCsvRecord>,
}

/// Parses `DATE,<NAME>` exports where `.` or an empty cell marks a missing value.
/// Errors cite the 1-based data row.
pub fn parse_fred_csv(text: &str) -> Result<FredCsv> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse { row: 0, message: e.to_string() })?;
    if headers.len() != 2 {
        return Err(Error::Parse {
            row: 0,
            message: format!("expected header `DATE,<NAME>`, got {} columns", headers.len()),
        });
    }
    let series_name = headers[1].to_string();
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::Parse { row: row_no, message: e.to_string() })?;
        let date = NaiveDate::parse_from_str(&row[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            row: row_no,
            message: format!("bad date `{}`: {e}", &row[0]),
        })?;
        let raw = &row[1];
        let value = if raw.is_empty() || raw == "." {
            None
        } else {
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                row: row_no,
                message: format!("non-numeric value `{raw}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { row: row_no, message: format!("non-finite value `{raw}`") });
            }
            Some(v)
        };
        records.push(RawCsvRecord { date, value });
    }
    Ok(FredCsv { series_name, records })
}

/// How daily observations collapse into one monthly value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonthlyRule {
    EndOfMonth,
    MonthlyAverage,
}

/// Month-indexed series. Months are strictly increasing; gaps are allowed
/// until the series goes through [`align`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthlySeries {
    pub name: String,
    months: Vec<YearMonth>,
    values: Vec<f64>,
}

impl MonthlySeries {
    pub fn new(name: impl Into<String>, months: Vec<YearMonth>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if months.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "series `{name}`: {} months but {} values",
                months.len(),
                values.len()
            )));
        }
        if months.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("series `{name}`: months not strictly increasing")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("series `{name}` has non-finite values")));
        }
        Ok(Self { name, months, values })
    }

    /// Consecutive months starting at `start`.
    pub fn from_start(name: impl Into<String>, start: YearMonth, values: Vec<f64>) -> Result<Self> {
        let mut months = Vec::with_capacity(values.len());
        let mut m = start;
        for _ in 0..values.len() {
            months.push(m);
            m = m.next();
        }
        Self::new(name, months, values)
    }

    pub fn months(&self) -> &[YearMonth] {
        &self.months
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn range(&self) -> Option<MonthRange> {
        Some(MonthRange { first: *self.months.first()?, last: *self.months.last()? })
    }

    pub fn get(&self, m: YearMonth) -> Option<f64> {
        self.months.binary_search(&m).ok().map(|i| self.values[i])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Keeps months inside `range`.
    pub fn restrict(&self, range: MonthRange) -> Self {
        let (months, values) = self
            .months
            .iter()
            .zip(&self.values)
            .filter(|(m, _)| range.contains(**m))
            .map(|(m, v)| (*m, *v))
            .unzip();
        Self { name: self.name.clone(), months, values }
    }

    pub fn map(&self, name: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        Self {
            name: name.into(),
            months: self.months.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Collapses records into monthly values, dropping months with no observations.
pub fn to_monthly(name: impl Into<String>, records: &[RawCsvRecord], rule: MonthlyRule) -> Result<MonthlySeries> {
    let name = name.into();
    let mut buckets: BTreeMap<YearMonth, Vec<(NaiveDate, f64)>> = BTreeMap::new();
    for r in records {
        if let Some(v) = r.value {
            buckets.entry(YearMonth::of_date(r.date)).or_default().push((r.date, v));
        }
    }
    if buckets.is_empty() {
        return Err(Error::EmptySeries(name));
    }
    let mut months = Vec::with_capacity(buckets.len());
    let mut values = Vec::with_capacity(buckets.len());
    for (m, obs) in buckets {
        let v = match rule {
            MonthlyRule::EndOfMonth => obs.iter().max_by_key(|(d, _)| *d).map(|(_, v)| *v).unwrap_or(f64::NAN),
            MonthlyRule::MonthlyAverage => obs.iter().map(|(_, v)| v).sum::<f64>() / obs.len() as f64,
        };
        months.push(m);
        values.push(v);
    }
    MonthlySeries::new(name, months, values)
}

/// Reads `<path>` as a FRED export and aggregates it to months.
pub fn load_fred_file(path: &Path, rule: MonthlyRule) -> Result<MonthlySeries> {
    let text = std::fs::read_to_string(path)?;
    let csv = parse_fred_csv(&text)?;
    to_monthly(csv.series_name, &csv.records, rule)
}

/// Column-aligned series over a common, gap-free month range.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPanel {
    columns: BTreeMap<String, MonthlySeries>,
    range: MonthRange,
}

impl AlignedPanel {
    pub fn range(&self) -> MonthRange {
        self.range
    }

    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn months(&self) -> &[YearMonth] {
        self.columns.values().next().map(|s| s.months()).unwrap_or(&[])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn series(&self, name: &str) -> Result<&MonthlySeries> {
        self.columns
            .get(name)
            .ok_or_else(|| Error::InvalidArgument(format!("panel has no column `{name}`")))
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        Ok(self.series(name)?.values())
    }

    pub fn columns(&self) -> impl Iterator<Item = &MonthlySeries> {
        self.columns.values()
    }

    /// Restricts to `window`, which must lie inside the panel range.
    pub fn restrict(&self, window: MonthRange) -> Result<Self> {
        if !(self.range.contains(window.first) && self.range.contains(window.last)) {
            return Err(Error::Alignment(format!("window {window} not inside panel range {}", self.range)));
        }
        let columns = self.columns.iter().map(|(k, s)| (k.clone(), s.restrict(window))).collect();
        Ok(Self { columns, range: window })
    }
}

/// Restricts every series to the intersection of their month ranges.
///
/// Fails if the intersection is empty, names collide, or any series has an
/// interior gap inside the common range.
pub fn align(series: &[MonthlySeries]) -> Result<AlignedPanel> {
    if series.is_empty() {
        return Err(Error::Alignment("no series to align".into()));
    }
    let mut ranges = Vec::with_capacity(series.len());
    for s in series {
        ranges.push((s.name.as_str(), s.range().ok_or_else(|| Error::EmptySeries(s.name.clone()))?));
    }
    let first = ranges.iter().map(|(_, r)| r.first).max().expect("non-empty");
    let last = ranges.iter().map(|(_, r)| r.last).min().expect("non-empty");
    if last < first {
        let listing: Vec<String> = ranges.iter().map(|(n, r)| format!("{n}: {r}")).collect();
        return Err(Error::Alignment(format!("empty intersection of ranges [{}]", listing.join(", "))));
    }
    let range = MonthRange { first, last };
    let mut columns = BTreeMap::new();
    for s in series {
        let r = s.restrict(range);
        if r.len() != range.len() {
            let missing = expected_months(range).find(|m| r.get(*m).is_none()).expect("some month missing");
            return Err(Error::Alignment(format!(
                "series `{}` is missing {missing} inside the common range {range}",
                s.name
            )));
        }
        if columns.insert(s.name.clone(), r).is_some() {
            return Err(Error::Alignment(format!("duplicate series name `{}`", s.name)));
        }
    }
    Ok(AlignedPanel { columns, range })
}

fn expected_months(range: MonthRange) -> impl Iterator<Item = YearMonth> {
    std::iter::successors(Some(range.first), |m| Some(m.next())).take(range.len())
}

/// `Q_t = ln Y_t - ln Y_{t-1}`; one fewer month than the index.
pub fn derive_log_returns(index: &MonthlySeries) -> Result<MonthlySeries> {
    if let Some((m, v)) = index.months.iter().zip(&index.values).find(|(_, v)| **v <= 0.0) {
        return Err(Error::Domain(format!("index `{}` is nonpositive ({v}) at {m}", index.name)));
    }
    if index.len() < 2 {
        return Err(Error::SampleSize { what: "log returns", need: 2, got: index.len() });
    }
    if let Some(w) = index.months.windows(2).find(|w| w[0].next() != w[1]) {
        return Err(Error::Alignment(format!("index `{}` has a gap between {} and {}", index.name, w[0], w[1])));
    }
    let values = index.values.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    MonthlySeries::new(format!("{}_logret", index.name), index.months[1..].to_vec(), values)
}

/// Pointwise `a - b` over identical months.
pub fn derive_difference(a: &MonthlySeries, b: &MonthlySeries) -> Result<MonthlySeries> {
    if a.months != b.months {
        return Err(Error::Alignment(format!(
            "`{}` and `{}` do not share month keys",
            a.name, b.name
        )));
    }
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    MonthlySeries::new(format!("{}_minus_{}", a.name, b.name), a.months.clone(), values)
}

/// Monthly simple accrual of an annual percentage bill rate.
pub const RISK_FREE_DIVISOR: f64 = 1200.0;

/// Premia: `Q_t - bill_{t-1} / 1200`, the bill rate in percent known at the
/// start of month `t`.
pub fn derive_premia(returns: &MonthlySeries, bill: &MonthlySeries) -> Result<MonthlySeries> {
    let values = returns
        .months
        .iter()
        .zip(&returns.values)
        .map(|(m, q)| {
            bill.get(m.prev()).map(|rf| q - rf / RISK_FREE_DIVISOR).ok_or_else(|| {
                Error::Alignment(format!("bill series `{}` has no value for {}", bill.name, m.prev()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MonthlySeries::new(format!("{}_premia", returns.name), returns.months.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ym(y: i32, m: u32) -> YearMonth {
        YearMonth::new(y, m).unwrap()
    }

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn parses_single_row() {
        let csv = parse_fred_csv("DATE,VIXCLS\n1986-01-31,19.94").unwrap();
        assert_eq!(csv.series_name, "VIXCLS");
        assert_eq!(csv.records, vec![RawCsvRecord { date: d(1986, 1, 31), value: Some(19.94) }]);
    }

    #[test]
    fn missing_sentinel() {
        let csv = parse_fred_csv("DATE,X\n2020-03-31,.\n2020-04-30,\n").unwrap();
        assert!(csv.records.iter().all(|r| r.value.is_none()));
        assert_eq!(csv.records.len(), 2);
    }

    #[test]
    fn invalid_month_cites_row() {
        match parse_fred_csv("DATE,X\n2020-13-01,5") {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_fred_csv("DATE,X\n2020-01-01,5\n2020-02-01,abc") {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn monthly_rules() {
        let recs = [
            RawCsvRecord { date: d(2020, 1, 2), value: Some(10.0) },
            RawCsvRecord { date: d(2020, 1, 30), value: Some(20.0) },
        ];
        let avg = to_monthly("VIX", &recs, MonthlyRule::MonthlyAverage).unwrap();
        let eom = to_monthly("VIX", &recs, MonthlyRule::EndOfMonth).unwrap();
        assert_eq!(avg.values(), &[15.0]);
        assert_eq!(eom.values(), &[20.0]);
        assert_eq!(avg.months(), &[ym(2020, 1)]);
    }

    #[test]
    fn scattered_days_per_month_oracle() {
        let recs = [
            RawCsvRecord { date: d(2021, 5, 3), value: Some(1.5) },
            RawCsvRecord { date: d(2021, 7, 9), value: Some(4.0) },
            RawCsvRecord { date: d(2021, 5, 28), value: Some(2.5) },
            RawCsvRecord { date: d(2021, 6, 1), value: None },
        ];
        let s = to_monthly("X", &recs, MonthlyRule::MonthlyAverage).unwrap();
        assert_eq!(s.months(), &[ym(2021, 5), ym(2021, 7)]);
        assert_eq!(s.values(), &[(1.5 + 2.5) / 2.0, 4.0]);
    }

    #[test]
    fn all_missing_is_empty_error() {
        let recs = [RawCsvRecord { date: d(2021, 5, 3), value: None }];
        assert!(matches!(to_monthly("X", &recs, MonthlyRule::EndOfMonth), Err(Error::EmptySeries(_))));
    }

    #[test]
    fn align_full_moodys_window() {
        let a = MonthlySeries::from_start("A", ym(1986, 1), vec![1.0; 464]).unwrap();
        let b = MonthlySeries::from_start("B", ym(1986, 1), vec![2.0; 464]).unwrap();
        let p = align(&[a, b]).unwrap();
        assert_eq!(p.len(), 464);
        assert_eq!(p.range(), MonthRange { first: ym(1986, 1), last: ym(2024, 8) });
    }

    #[test]
    fn align_intersection_and_disjoint() {
        let a = MonthlySeries::from_start("A", ym(2000, 1), vec![1.0; 132]).unwrap();
        let b = MonthlySeries::from_start("B", ym(2005, 1), vec![1.0; 132]).unwrap();
        let p = align(&[a.clone(), b]).unwrap();
        assert_eq!(p.range(), MonthRange { first: ym(2005, 1), last: ym(2010, 12) });
        let c = MonthlySeries::from_start("C", ym(2015, 1), vec![1.0; 5]).unwrap();
        assert!(matches!(align(&[a, c]), Err(Error::Alignment(_))));
    }

    #[test]
    fn interior_gap_rejected() {
        let a = MonthlySeries::new("A", vec![ym(2000, 1), ym(2000, 2), ym(2000, 4)], vec![1.0, 2.0, 3.0]).unwrap();
        let b = MonthlySeries::from_start("B", ym(2000, 1), vec![1.0; 4]).unwrap();
        assert!(matches!(align(&[a, b]), Err(Error::Alignment(_))));
    }

    #[test]
    fn log_return_examples() {
        let flat = MonthlySeries::from_start("Y", ym(2000, 1), vec![100.0; 3]).unwrap();
        assert_eq!(derive_log_returns(&flat).unwrap().values(), &[0.0, 0.0]);
        let e = MonthlySeries::from_start("Y", ym(2000, 1), vec![100.0, 100.0 * std::f64::consts::E]).unwrap();
        assert_relative_eq!(derive_log_returns(&e).unwrap().values()[0], 1.0, epsilon = 1e-15);
        let y = MonthlySeries::from_start("Y", ym(2000, 1), vec![100.0, 105.0, 103.0]).unwrap();
        let q = derive_log_returns(&y).unwrap();
        assert_relative_eq!(q.values()[0], 1.05f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(q.values()[1], (103.0f64 / 105.0).ln(), epsilon = 1e-15);
        assert_eq!(q.months()[0], ym(2000, 2));
        let bad = MonthlySeries::from_start("Y", ym(2000, 1), vec![100.0, 0.0]).unwrap();
        assert!(matches!(derive_log_returns(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn differences() {
        let y = MonthlySeries::from_start("Y", ym(2000, 1), vec![6.0, 5.0, 3.1, 2.2, 8.0]).unwrap();
        let b = MonthlySeries::from_start("B", ym(2000, 1), vec![2.0, 1.0, 0.5, 0.25, 9.0]).unwrap();
        let diff = derive_difference(&y, &b).unwrap();
        for i in 0..5 {
            assert_eq!(diff.values()[i], y.values()[i] - b.values()[i]);
        }
        assert_eq!(diff.values()[0], 4.0);
        assert!(derive_difference(&y, &y).unwrap().values().iter().all(|v| *v == 0.0));
        let shifted = MonthlySeries::from_start("S", ym(2000, 2), vec![1.0; 5]).unwrap();
        assert!(matches!(derive_difference(&y, &shifted), Err(Error::Alignment(_))));
    }

    #[test]
    fn premia_use_lagged_bill() {
        let q = MonthlySeries::from_start("Q", ym(2000, 2), vec![0.01, 0.02]).unwrap();
        let bill = MonthlySeries::from_start("TB", ym(2000, 1), vec![6.0, 12.0, 3.0]).unwrap();
        let p = derive_premia(&q, &bill).unwrap();
        assert_relative_eq!(p.values()[0], 0.01 - 0.005, epsilon = 1e-15);
        assert_relative_eq!(p.values()[1], 0.02 - 0.01, epsilon = 1e-15);
    }

    #[test]
    fn parses_ranges() {
        let r: MonthRange = "1996-12..2024-03".parse().unwrap();
        assert_eq!(r.len(), 328);
        assert!("2024-03..1996-12".parse::<MonthRange>().is_err());
    }

    proptest! {
        #[test]
        fn align_is_idempotent(off_a in 0usize..24, off_b in 0usize..24, len in 30usize..60) {
            let a = MonthlySeries::from_start("A", ym(2000, 1), (0..len + off_a).map(|i| i as f64).collect()).unwrap();
            let b = MonthlySeries::from_start("B", ym(2000, 1).next(), (0..len + off_b).map(|i| -(i as f64)).collect()).unwrap();
            let p = align(&[a, b]).unwrap();
            let cols: Vec<MonthlySeries> = p.columns().cloned().collect();
            prop_assert_eq!(align(&cols).unwrap(), p);
        }

        #[test]
        fn log_returns_invert_cumsum(q in prop::collection::vec(-0.3f64..0.3, 2..80), scale in 1.0f64..1e4) {
            let mut level = scale;
            let mut idx = vec![level];
            for r in &q {
                level *= r.exp();
                idx.push(level);
            }
            let y = MonthlySeries::from_start("Y", ym(1990, 1), idx).unwrap();
            let back = derive_log_returns(&y).unwrap();
            for (a, b) in back.values().iter().zip(&q) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn monthly_average_permutation_invariant(vals in prop::collection::vec(-50.0f64..50.0, 1..20), seed in 0u64..1000) {
            let recs: Vec<RawCsvRecord> = vals.iter().enumerate()
                .map(|(i, v)| RawCsvRecord { date: d(2010, 3, 1 + (i as u32 % 28)), value: Some(*v) })
                .collect();
            let mut shuffled = recs.clone();
            let n = shuffled.len();
            for i in 0..n {
                let j = ((seed as usize).wrapping_mul(31).wrapping_add(i * 17)) % n;
                shuffled.swap(i, j);
            }
            let a = to_monthly("X", &recs, MonthlyRule::MonthlyAverage).unwrap();
            let b = to_monthly("X", &shuffled, MonthlyRule::MonthlyAverage).unwrap();
            prop_assert!((a.values()[0] - b.values()[0]).abs() < 1e-12);
        }
    }
}
