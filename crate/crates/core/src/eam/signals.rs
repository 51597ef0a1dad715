//! Greedy signal generation over a series and the position-holding report:
//! the signal channel stacked onto the prices is what the allocator consumes.

use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::env::PositionLedger;
use super::train::{greedy_index, q_values};
use super::{state_to_input, TradeAction};
use crate::data::AssetSeries;
use crate::error::{Error, Result};
use crate::nncore::{NetworkGraph, Tensor};

/// Price/volume features with the per-day trading signal stacked on as an
/// extra channel. Signals take values in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalComprisedFrame {
    pub symbol: String,
    pub dates: Vec<NaiveDate>,
    pub open: Vec<f64>,
    pub high: Vec<f64>,
    pub low: Vec<f64>,
    pub close: Vec<f64>,
    pub volume: Vec<f64>,
    pub signal: Vec<f64>,
}

impl SignalComprisedFrame {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Inclusive date-range slice.
    pub fn range(&self, start: NaiveDate, end: NaiveDate) -> SignalComprisedFrame {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.dates[i] >= start && self.dates[i] <= end)
            .collect();
        let pick = |v: &[f64]| keep.iter().map(|&i| v[i]).collect();
        SignalComprisedFrame {
            symbol: self.symbol.clone(),
            dates: keep.iter().map(|&i| self.dates[i]).collect(),
            open: pick(&self.open),
            high: pick(&self.high),
            low: pick(&self.low),
            close: pick(&self.close),
            volume: pick(&self.volume),
            signal: pick(&self.signal),
        }
    }

    /// Same frame with the signal channel zeroed (the ablation input).
    pub fn without_signals(&self) -> SignalComprisedFrame {
        SignalComprisedFrame {
            signal: vec![0.0; self.len()],
            ..self.clone()
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("date,open,high,low,close,volume,signal\n");
        for i in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.dates[i],
                self.open[i],
                self.high[i],
                self.low[i],
                self.close[i],
                self.volume[i],
                self.signal[i]
            )
            .expect("string write");
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path, symbol: &str) -> Result<SignalComprisedFrame> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Validation(format!("cannot open {}: {e}", path.display())))?;
        let mut frame = SignalComprisedFrame {
            symbol: symbol.to_string(),
            dates: Vec::new(),
            open: Vec::new(),
            high: Vec::new(),
            low: Vec::new(),
            close: Vec::new(),
            volume: Vec::new(),
            signal: Vec::new(),
        };
        for record in reader.records() {
            let record = record.map_err(|e| Error::Validation(format!("{e}")))?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.len() != 7 {
                return Err(Error::CsvRow {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("expected 7 fields, got {}", record.len()),
                });
            }
            let field = |i: usize, name: &str| -> Result<f64> {
                record[i].parse::<f64>().map_err(|_| Error::CsvRow {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("unparseable {name} value {:?}", &record[i]),
                })
            };
            frame.dates.push(
                NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|_| Error::CsvRow {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("unparseable date {:?}", &record[0]),
                })?,
            );
            frame.open.push(field(1, "open")?);
            frame.high.push(field(2, "high")?);
            frame.low.push(field(3, "low")?);
            frame.close.push(field(4, "close")?);
            frame.volume.push(field(5, "volume")?);
            let s = field(6, "signal")?;
            if s != 0.0 && s != 1.0 && s != -1.0 {
                return Err(Error::CsvRow {
                    path: path.to_path_buf(),
                    line,
                    msg: format!("signal {s} outside {{-1, 0, 1}}"),
                });
            }
            frame.signal.push(s);
        }
        Ok(frame)
    }
}

/// Runs the trained agent greedily over the series, one signal per day,
/// starting at the first day with a full window. Position legality is
/// enforced: the recorded channel holds effective actions only.
pub fn generate_signals(
    graph: &NetworkGraph,
    series: &AssetSeries,
    window: usize,
) -> Result<SignalComprisedFrame> {
    let n = window;
    if series.len() < n {
        return Err(Error::InsufficientData(format!(
            "{}: {} days cannot fill a {}-day window",
            series.symbol,
            series.len(),
            n
        )));
    }
    if series.sentiments.len() != series.bars.len() {
        return Err(Error::Validation(format!(
            "{}: sentiments not aligned with bars (fill gaps first)",
            series.symbol
        )));
    }
    let mut ledger = PositionLedger::default();
    let mut frame = SignalComprisedFrame {
        symbol: series.symbol.clone(),
        dates: Vec::new(),
        open: Vec::new(),
        high: Vec::new(),
        low: Vec::new(),
        close: Vec::new(),
        volume: Vec::new(),
        signal: Vec::new(),
    };
    for t in (n - 1)..series.len() {
        let state = window_state(series, t, n, &ledger);
        let q = q_values(graph, &state_to_input(&state))?;
        let action = TradeAction::from_index(greedy_index(&q));
        let effective = ledger.apply(action, t, series.bars[t].close);
        let bar = &series.bars[t];
        frame.dates.push(bar.date);
        frame.open.push(bar.open);
        frame.high.push(bar.high);
        frame.low.push(bar.low);
        frame.close.push(bar.close);
        frame.volume.push(bar.volume);
        frame.signal.push(effective.signal_value());
    }
    Ok(frame)
}

fn window_state(
    series: &AssetSeries,
    t: usize,
    n: usize,
    ledger: &PositionLedger,
) -> super::env::EamState {
    let lo = t + 1 - n;
    let mut price = Vec::with_capacity(5 * n);
    for field in 0..5usize {
        for bar in &series.bars[lo..=t] {
            price.push(match field {
                0 => bar.close,
                1 => bar.open,
                2 => bar.high,
                3 => bar.low,
                _ => bar.volume,
            });
        }
    }
    let mut sent = Vec::with_capacity(2 * n);
    for rec in &series.sentiments[lo..=t] {
        sent.push(rec.sentiment);
    }
    for rec in &series.sentiments[lo..=t] {
        sent.push(rec.news_buzz);
    }
    let bars_held = ledger.entry().map(|(entry, _)| t - entry).unwrap_or(0);
    super::env::EamState {
        price_window: Tensor::new(vec![5, n], price).expect("price window"),
        sentiment_window: Tensor::new(vec![2, n], sent).expect("sentiment window"),
        position_open: ledger.is_open(),
        bars_held,
        window_len: n,
    }
}

/// Position-holding statistics of a signal channel. A position opens at the
/// first buy signal after the previous close, closes at the first closing
/// signal, and wins when its exit price exceeds its entry price. A position
/// still open at the end of the frame is not counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionReport {
    pub positions: usize,
    pub winning: usize,
    pub losing: usize,
    /// Percent of closed positions that won; 0 when there are none.
    pub winning_rate_pct: f64,
    /// Per-position arithmetic returns, in order.
    pub position_returns: Vec<f64>,
    /// Compounded return over all closed positions, in percent.
    pub compounded_return_pct: f64,
}

pub fn position_report(frame: &SignalComprisedFrame) -> PositionReport {
    let mut entry: Option<f64> = None;
    let mut returns = Vec::new();
    for i in 0..frame.len() {
        match frame.signal[i] {
            s if s > 0.0 => {
                if entry.is_none() {
                    entry = Some(frame.close[i]);
                }
            }
            s if s < 0.0 => {
                if let Some(entry_price) = entry.take() {
                    returns.push(frame.close[i] / entry_price - 1.0);
                }
            }
            _ => {}
        }
    }
    let positions = returns.len();
    let winning = returns.iter().filter(|r| **r > 0.0).count();
    let compounded = returns.iter().fold(1.0, |acc, r| acc * (1.0 + r));
    PositionReport {
        positions,
        winning,
        losing: positions - winning,
        winning_rate_pct: if positions > 0 {
            winning as f64 / positions as f64 * 100.0
        } else {
            0.0
        },
        position_returns: returns,
        compounded_return_pct: (compounded - 1.0) * 100.0,
    }
}
