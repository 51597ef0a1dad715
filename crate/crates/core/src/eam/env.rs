//! Single-asset trading environment. Long-only with three actions per day:
//! open a position, close it, or do nothing. Illegal choices (buying while
//! holding, closing while flat) degrade to skip, keeping the action space
//! fixed at three.
//!
//! Reward accounting: while a position is held over a day, the agent earns
//! the scaled arithmetic close-to-close return of that day; opening and
//! closing each charge the scaled commission once. Summed over one closed
//! position this telescopes to scale * (sum of daily returns - 2 * commission).

use rand::Rng;

use super::TradeAction;
use crate::data::AssetSeries;
use crate::error::{Error, Result};
use crate::nncore::Tensor;

/// What the agent observes: an n-day price-feature window, an n-day
/// sentiment window, and its own position status.
#[derive(Debug, Clone)]
pub struct EamState {
    /// (5, n): close, open, high, low, volume rows.
    pub price_window: Tensor,
    /// (2, n): sentiment, news_buzz rows.
    pub sentiment_window: Tensor,
    pub position_open: bool,
    pub bars_held: usize,
    pub window_len: usize,
}

/// One completed round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedTrade {
    pub entry_index: usize,
    pub exit_index: usize,
    pub entry_price: f64,
    pub exit_price: f64,
}

impl ClosedTrade {
    pub fn trade_return(&self) -> f64 {
        self.exit_price / self.entry_price - 1.0
    }
}

/// Position bookkeeping: at most one open position, strict open/close
/// alternation, and a realized-trade log.
#[derive(Debug, Clone, Default)]
pub struct PositionLedger {
    open: Option<(usize, f64)>,
    pub trades: Vec<ClosedTrade>,
}

impl PositionLedger {
    pub fn is_open(&self) -> bool {
        self.open.is_some()
    }

    pub fn entry(&self) -> Option<(usize, f64)> {
        self.open
    }

    /// Applies an action at `index`/`price`, degrading illegal choices to
    /// skip. Returns the effective action.
    pub fn apply(&mut self, action: TradeAction, index: usize, price: f64) -> TradeAction {
        match (action, self.open) {
            (TradeAction::Buy, None) => {
                self.open = Some((index, price));
                TradeAction::Buy
            }
            (TradeAction::Close, Some((entry_index, entry_price))) => {
                self.trades.push(ClosedTrade {
                    entry_index,
                    exit_index: index,
                    entry_price,
                    exit_price: price,
                });
                self.open = None;
                TradeAction::Close
            }
            _ => TradeAction::Skip,
        }
    }
}

/// Episodic environment over one (normalized) asset series. Episodes start
/// at a uniformly random day and run a fixed horizon.
pub struct EamEnv<'a> {
    series: &'a AssetSeries,
    window: usize,
    episode_length: usize,
    commission: f64,
    reward_scale: f64,
    t: usize,
    episode_end: usize,
    pub ledger: PositionLedger,
}

impl<'a> EamEnv<'a> {
    pub fn new(
        series: &'a AssetSeries,
        window: usize,
        episode_length: usize,
        commission: f64,
        reward_scale: f64,
    ) -> Result<Self> {
        if series.len() < window + episode_length {
            return Err(Error::InsufficientData(format!(
                "{}: series of {} days cannot host a window of {} plus an episode of {}",
                series.symbol,
                series.len(),
                window,
                episode_length
            )));
        }
        Ok(EamEnv {
            series,
            window,
            episode_length,
            commission,
            reward_scale,
            t: window - 1,
            episode_end: window - 1,
            ledger: PositionLedger::default(),
        })
    }

    /// Number of admissible episode start indices.
    pub fn valid_starts(&self) -> usize {
        self.series.len() - self.window - self.episode_length + 1
    }

    pub fn first_start(&self) -> usize {
        self.window - 1
    }

    /// Starts a new episode at a uniformly random valid day.
    pub fn reset(&mut self, rng: &mut impl Rng) -> EamState {
        let start = self.first_start() + rng.random_range(0..self.valid_starts());
        self.reset_at(start)
    }

    /// Starts a new episode at a specific day index (window end).
    pub fn reset_at(&mut self, start: usize) -> EamState {
        debug_assert!(start >= self.first_start());
        debug_assert!(start + self.episode_length < self.series.len());
        self.t = start;
        self.episode_end = start + self.episode_length;
        self.ledger = PositionLedger::default();
        self.state_at(self.t)
    }

    pub fn current_index(&self) -> usize {
        self.t
    }

    pub fn state_at(&self, t: usize) -> EamState {
        let n = self.window;
        let lo = t + 1 - n;
        let mut price = Vec::with_capacity(5 * n);
        for field in 0..5usize {
            for bar in &self.series.bars[lo..=t] {
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
        for rec in &self.series.sentiments[lo..=t] {
            sent.push(rec.sentiment);
        }
        for rec in &self.series.sentiments[lo..=t] {
            sent.push(rec.news_buzz);
        }
        let bars_held = self
            .ledger
            .entry()
            .map(|(entry, _)| t - entry)
            .unwrap_or(0);
        EamState {
            price_window: Tensor::new(vec![5, n], price).expect("price window"),
            sentiment_window: Tensor::new(vec![2, n], sent).expect("sentiment window"),
            position_open: self.ledger.is_open(),
            bars_held,
            window_len: n,
        }
    }

    /// Advances one day. The returned reward combines the commission of the
    /// action just taken with the holding return over the coming day.
    pub fn step(&mut self, action: TradeAction) -> (EamState, f64, bool) {
        debug_assert!(self.t < self.episode_end, "episode already finished");
        let close_now = self.series.bars[self.t].close;
        let effective = self.ledger.apply(action, self.t, close_now);
        let mut reward = 0.0;
        if matches!(effective, TradeAction::Buy | TradeAction::Close) {
            reward -= self.reward_scale * self.commission;
        }
        let close_next = self.series.bars[self.t + 1].close;
        if self.ledger.is_open() {
            reward += self.reward_scale * (close_next / close_now - 1.0);
        }
        self.t += 1;
        let done = self.t >= self.episode_end;
        (self.state_at(self.t), reward, done)
    }
}
