//! Market/sentiment data: CSV ingestion, validation, gap filling,
//! day-one normalization, calendar alignment, dataset splits, and a
//! seeded synthetic market generator.

mod synth;

pub use synth::{generate_synthetic, RegimeSegment, SyntheticMarketSpec};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One trading day of adjusted OHLCV data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssetBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: f64,
}

impl AssetBar {
    pub fn validate(&self) -> Result<()> {
        if !(self.open > 0.0 && self.high > 0.0 && self.low > 0.0 && self.close > 0.0) {
            return Err(Error::Validation(format!(
                "non-positive price on {}",
                self.date
            )));
        }
        if self.volume < 0.0 {
            return Err(Error::Validation(format!(
                "negative volume on {}",
                self.date
            )));
        }
        if self.low > self.open.min(self.close) || self.high < self.open.max(self.close) {
            return Err(Error::Validation(format!(
                "inconsistent high/low on {}",
                self.date
            )));
        }
        Ok(())
    }
}

/// One day of news sentiment. `sentiment` is bullishness on a -5..5 scale,
/// `news_buzz` is a 1..10 news-volume spike score. Imputed records stand in
/// for missing days with a neutral score of zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentimentRecord {
    pub date: NaiveDate,
    pub sentiment: f64,
    pub news_buzz: f64,
    pub imputed: bool,
}

impl SentimentRecord {
    pub fn validate(&self) -> Result<()> {
        if !(-5.0..=5.0).contains(&self.sentiment) {
            return Err(Error::Validation(format!(
                "sentiment {} on {} outside [-5, 5]",
                self.sentiment, self.date
            )));
        }
        if !self.imputed && !(1.0..=10.0).contains(&self.news_buzz) {
            return Err(Error::Validation(format!(
                "news_buzz {} on {} outside [1, 10]",
                self.news_buzz, self.date
            )));
        }
        if self.imputed && self.sentiment != 0.0 {
            return Err(Error::Validation(format!(
                "imputed sentiment on {} must be neutral",
                self.date
            )));
        }
        Ok(())
    }

    pub fn imputed_for(date: NaiveDate) -> Self {
        SentimentRecord {
            date,
            sentiment: 0.0,
            news_buzz: 1.0,
            imputed: true,
        }
    }
}

/// Day-one raw feature values kept for inverting normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationBase {
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
    pub volume: f64,
}

/// Aligned per-asset OHLCV + sentiment time series.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetSeries {
    pub symbol: String,
    pub bars: Vec<AssetBar>,
    pub sentiments: Vec<SentimentRecord>,
    pub normalization_base: Option<NormalizationBase>,
}

impl AssetSeries {
    pub fn new(
        symbol: impl Into<String>,
        bars: Vec<AssetBar>,
        sentiments: Vec<SentimentRecord>,
    ) -> Result<Self> {
        let series = AssetSeries {
            symbol: symbol.into(),
            bars,
            sentiments,
            normalization_base: None,
        };
        series.check_sorted()?;
        Ok(series)
    }

    fn check_sorted(&self) -> Result<()> {
        for pair in self.bars.windows(2) {
            if pair[1].date <= pair[0].date {
                return Err(Error::Validation(format!(
                    "{}: bar dates not strictly increasing at {}",
                    self.symbol, pair[1].date
                )));
            }
        }
        for pair in self.sentiments.windows(2) {
            if pair[1].date <= pair[0].date {
                return Err(Error::Validation(format!(
                    "{}: sentiment dates not strictly increasing at {}",
                    self.symbol, pair[1].date
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.bars.iter().map(|b| b.date).collect()
    }

    pub fn date_set(&self) -> BTreeSet<NaiveDate> {
        self.bars.iter().map(|b| b.date).collect()
    }

    /// Fraction of sentiment records that were gap-filled.
    pub fn imputed_fraction(&self) -> f64 {
        if self.sentiments.is_empty() {
            return 0.0;
        }
        self.sentiments.iter().filter(|s| s.imputed).count() as f64 / self.sentiments.len() as f64
    }

    /// Keeps only the rows whose date is in `keep`.
    pub fn restrict_to(&self, keep: &BTreeSet<NaiveDate>) -> AssetSeries {
        AssetSeries {
            symbol: self.symbol.clone(),
            bars: self.bars.iter().copied().filter(|b| keep.contains(&b.date)).collect(),
            sentiments: self
                .sentiments
                .iter()
                .copied()
                .filter(|s| keep.contains(&s.date))
                .collect(),
            normalization_base: self.normalization_base,
        }
    }

    /// Inclusive date-range slice.
    pub fn range(&self, start: NaiveDate, end: NaiveDate) -> AssetSeries {
        AssetSeries {
            symbol: self.symbol.clone(),
            bars: self
                .bars
                .iter()
                .copied()
                .filter(|b| b.date >= start && b.date <= end)
                .collect(),
            sentiments: self
                .sentiments
                .iter()
                .copied()
                .filter(|s| s.date >= start && s.date <= end)
                .collect(),
            normalization_base: self.normalization_base,
        }
    }

    /// Inverts `normalize` using the stored base values.
    pub fn denormalize(&self) -> Result<AssetSeries> {
        let base = self.normalization_base.ok_or_else(|| {
            Error::Validation(format!("{}: series is not normalized", self.symbol))
        })?;
        let bars = self
            .bars
            .iter()
            .map(|b| AssetBar {
                date: b.date,
                open: b.open * base.open,
                high: b.high * base.high,
                low: b.low * base.low,
                close: b.close * base.close,
                volume: b.volume * base.volume,
            })
            .collect();
        Ok(AssetSeries {
            symbol: self.symbol.clone(),
            bars,
            sentiments: self.sentiments.clone(),
            normalization_base: None,
        })
    }
}

/// Which CSV layout a file is expected to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsvSchema {
    Price,
    Sentiment,
}

/// A parsed CSV file: either the price half or the sentiment half of a series.
#[derive(Debug, Clone)]
pub enum SeriesFragment {
    Prices(Vec<AssetBar>),
    Sentiments(Vec<SentimentRecord>),
}

const PRICE_HEADER: [&str; 6] = ["date", "open", "high", "low", "close", "volume"];
const SENTIMENT_HEADER: [&str; 3] = ["date", "sentiment", "news_buzz"];

fn parse_date(path: &Path, line: u64, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|_| Error::CsvRow {
        path: path.to_path_buf(),
        line,
        msg: format!("unparseable date {s:?} (expected YYYY-MM-DD)"),
    })
}

fn parse_f64(path: &Path, line: u64, field: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::CsvRow {
        path: path.to_path_buf(),
        line,
        msg: format!("unparseable {field} value {s:?}"),
    })
}

fn check_duplicates<T>(rows: &[T], date_of: impl Fn(&T) -> NaiveDate) -> Result<()> {
    for pair in rows.windows(2) {
        let (a, b) = (date_of(&pair[0]), date_of(&pair[1]));
        if a == b {
            return Err(Error::Validation(format!("duplicated date {a}")));
        }
    }
    Ok(())
}

/// Loads one CSV file. Rows are parsed strictly (a malformed row reports its
/// line number), then date-sorted; duplicated dates are an error.
pub fn load_csv(path: &Path, schema: CsvSchema) -> Result<SeriesFragment> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Validation(format!("cannot open {}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Validation(format!("cannot read header of {}: {e}", path.display())))?
        .iter()
        .map(|h| h.to_ascii_lowercase())
        .collect();
    let expected: &[&str] = match schema {
        CsvSchema::Price => &PRICE_HEADER,
        CsvSchema::Sentiment => &SENTIMENT_HEADER,
    };
    if headers != expected {
        return Err(Error::Validation(format!(
            "{}: header {:?} does not match the {:?} schema {:?}",
            path.display(),
            headers,
            schema,
            expected
        )));
    }

    match schema {
        CsvSchema::Price => {
            let mut bars = Vec::new();
            for record in reader.records() {
                let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                if record.len() != 6 {
                    return Err(Error::CsvRow {
                        path: path.to_path_buf(),
                        line,
                        msg: format!("expected 6 fields, got {}", record.len()),
                    });
                }
                let bar = AssetBar {
                    date: parse_date(path, line, &record[0])?,
                    open: parse_f64(path, line, "open", &record[1])?,
                    high: parse_f64(path, line, "high", &record[2])?,
                    low: parse_f64(path, line, "low", &record[3])?,
                    close: parse_f64(path, line, "close", &record[4])?,
                    volume: parse_f64(path, line, "volume", &record[5])?,
                };
                bar.validate()?;
                bars.push(bar);
            }
            bars.sort_by_key(|b| b.date);
            check_duplicates(&bars, |b| b.date)?;
            Ok(SeriesFragment::Prices(bars))
        }
        CsvSchema::Sentiment => {
            let mut rows = Vec::new();
            for record in reader.records() {
                let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
                let line = record.position().map(|p| p.line()).unwrap_or(0);
                if record.len() != 3 {
                    return Err(Error::CsvRow {
                        path: path.to_path_buf(),
                        line,
                        msg: format!("expected 3 fields, got {}", record.len()),
                    });
                }
                let rec = SentimentRecord {
                    date: parse_date(path, line, &record[0])?,
                    sentiment: parse_f64(path, line, "sentiment", &record[1])?,
                    news_buzz: parse_f64(path, line, "news_buzz", &record[2])?,
                    imputed: false,
                };
                rec.validate()?;
                rows.push(rec);
            }
            rows.sort_by_key(|r| r.date);
            check_duplicates(&rows, |r| r.date)?;
            Ok(SeriesFragment::Sentiments(rows))
        }
    }
}

/// Reads back a prepared (normalized) series pair. Per-feature day-one
/// normalization does not preserve the raw high/low ordering, so this
/// reader checks positivity and sorting but not the OHLC relations.
pub fn read_series_lenient(
    price_path: &Path,
    sentiment_path: &Path,
    symbol: &str,
) -> Result<AssetSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(price_path)
        .map_err(|e| Error::Validation(format!("cannot open {}: {e}", price_path.display())))?;
    let mut bars = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bar = AssetBar {
            date: parse_date(price_path, line, &record[0])?,
            open: parse_f64(price_path, line, "open", &record[1])?,
            high: parse_f64(price_path, line, "high", &record[2])?,
            low: parse_f64(price_path, line, "low", &record[3])?,
            close: parse_f64(price_path, line, "close", &record[4])?,
            volume: parse_f64(price_path, line, "volume", &record[5])?,
        };
        if bar.open <= 0.0 || bar.high <= 0.0 || bar.low <= 0.0 || bar.close <= 0.0 {
            return Err(Error::Validation(format!(
                "non-positive price on {} in {}",
                bar.date,
                price_path.display()
            )));
        }
        bars.push(bar);
    }
    let SeriesFragment::Sentiments(sentiments) = load_csv(sentiment_path, CsvSchema::Sentiment)?
    else {
        unreachable!("sentiment schema yields sentiments");
    };
    AssetSeries::new(symbol, bars, sentiments)
}

/// Writes the price half of a series in the canonical CSV layout.
pub fn write_price_csv(series: &AssetSeries, path: &Path) -> Result<()> {
    let mut out = String::from("date,open,high,low,close,volume\n");
    for b in &series.bars {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            b.date, b.open, b.high, b.low, b.close, b.volume
        )
        .expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Writes the sentiment half of a series in the canonical CSV layout.
pub fn write_sentiment_csv(series: &AssetSeries, path: &Path) -> Result<()> {
    let mut out = String::from("date,sentiment,news_buzz\n");
    for s in &series.sentiments {
        writeln!(out, "{},{},{}", s.date, s.sentiment, s.news_buzz).expect("string write");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Ensures every bar date has a sentiment record. Missing days get a neutral
/// imputed record; sentiment rows on non-trading days are dropped.
pub fn fill_sentiment_gaps(series: &AssetSeries) -> AssetSeries {
    let bar_dates = series.date_set();
    let mut by_date: std::collections::BTreeMap<NaiveDate, SentimentRecord> = series
        .sentiments
        .iter()
        .filter(|s| bar_dates.contains(&s.date))
        .map(|s| (s.date, *s))
        .collect();
    for date in &bar_dates {
        by_date
            .entry(*date)
            .or_insert_with(|| SentimentRecord::imputed_for(*date));
    }
    AssetSeries {
        symbol: series.symbol.clone(),
        bars: series.bars.clone(),
        sentiments: by_date.into_values().collect(),
        normalization_base: series.normalization_base,
    }
}

/// Divides every price/volume feature by its day-one value, keeping the base
/// for inversion. Day-one volume of zero is rejected: there is nothing sane
/// to divide by.
pub fn normalize(series: &AssetSeries) -> Result<AssetSeries> {
    let first = series.bars.first().ok_or_else(|| {
        Error::InsufficientData(format!("{}: cannot normalize an empty series", series.symbol))
    })?;
    first.validate()?;
    if first.volume <= 0.0 {
        return Err(Error::Validation(format!(
            "{}: day-one volume is zero, normalization undefined",
            series.symbol
        )));
    }
    let base = NormalizationBase {
        open: first.open,
        high: first.high,
        low: first.low,
        close: first.close,
        volume: first.volume,
    };
    let bars = series
        .bars
        .iter()
        .map(|b| AssetBar {
            date: b.date,
            open: b.open / base.open,
            high: b.high / base.high,
            low: b.low / base.low,
            close: b.close / base.close,
            volume: b.volume / base.volume,
        })
        .collect();
    Ok(AssetSeries {
        symbol: series.symbol.clone(),
        bars,
        sentiments: series.sentiments.clone(),
        normalization_base: Some(base),
    })
}

/// Restricts every series to the intersection of their trading calendars.
pub fn align_calendar(series: &[AssetSeries]) -> Result<Vec<AssetSeries>> {
    let mut iter = series.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InsufficientData("align_calendar needs at least one series".into()))?;
    let mut common = first.date_set();
    for s in iter {
        let dates = s.date_set();
        common = common.intersection(&dates).copied().collect();
    }
    if common.is_empty() {
        return Err(Error::Validation(
            "calendar intersection is empty: the series share no trading dates".into(),
        ));
    }
    Ok(series.iter().map(|s| s.restrict_to(&common)).collect())
}

/// An inclusive calendar date range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateRange {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Self {
        DateRange { start, end }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        date >= self.start && date <= self.end
    }
}

/// The five chronologically ordered, non-overlapping stage ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub eam_train: DateRange,
    pub eam_predict: DateRange,
    pub sam_train: DateRange,
    pub sam_validate: DateRange,
    pub sam_experiment: DateRange,
}

impl DatasetSplit {
    /// Stage ranges in chronological order. The allocator stages are nested
    /// inside the signal-prediction range, so ordering/overlap rules apply
    /// separately to the signal tier and the allocator tier.
    pub fn named_ranges(&self) -> [(&'static str, DateRange); 5] {
        [
            ("eam_train", self.eam_train),
            ("eam_predict", self.eam_predict),
            ("sam_train", self.sam_train),
            ("sam_validate", self.sam_validate),
            ("sam_experiment", self.sam_experiment),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in self.named_ranges() {
            if r.start > r.end {
                return Err(Error::Config(format!(
                    "split range {name} has start after end"
                )));
            }
        }
        // Signal tier: training strictly precedes prediction.
        if self.eam_train.end >= self.eam_predict.start {
            return Err(Error::Config(
                "eam_train must end before eam_predict starts".into(),
            ));
        }
        // Allocator tier: train, validate, experiment are ordered and disjoint.
        if self.sam_train.end >= self.sam_validate.start {
            return Err(Error::Config(
                "sam_train must end before sam_validate starts".into(),
            ));
        }
        if self.sam_validate.end >= self.sam_experiment.start {
            return Err(Error::Config(
                "sam_validate must end before sam_experiment starts".into(),
            ));
        }
        Ok(())
    }
}

/// The per-stage slices of a series set.
#[derive(Debug, Clone)]
pub struct SplitSets {
    pub eam_train: Vec<AssetSeries>,
    pub eam_predict: Vec<AssetSeries>,
    pub sam_train: Vec<AssetSeries>,
    pub sam_validate: Vec<AssetSeries>,
    pub sam_experiment: Vec<AssetSeries>,
}

/// Slices every series into the five named stage subsets. A range that
/// captures zero rows of some series is an error.
pub fn split(series: &[AssetSeries], split: &DatasetSplit) -> Result<SplitSets> {
    split.validate()?;
    let slice = |range: DateRange, name: &str| -> Result<Vec<AssetSeries>> {
        series
            .iter()
            .map(|s| {
                let cut = s.range(range.start, range.end);
                if cut.is_empty() {
                    Err(Error::InsufficientData(format!(
                        "split range {name} ({}..{}) selects no rows of {}",
                        range.start, range.end, s.symbol
                    )))
                } else {
                    Ok(cut)
                }
            })
            .collect()
    };
    Ok(SplitSets {
        eam_train: slice(split.eam_train, "eam_train")?,
        eam_predict: slice(split.eam_predict, "eam_predict")?,
        sam_train: slice(split.sam_train, "sam_train")?,
        sam_validate: slice(split.sam_validate, "sam_validate")?,
        sam_experiment: slice(split.sam_experiment, "sam_experiment")?,
    })
}
