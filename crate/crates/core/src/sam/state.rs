//! The 3-D observation of the allocator: per-asset feature windows stacked
//! over assets, with a constant cash row prepended.

use crate::eam::SignalComprisedFrame;
use crate::error::{Error, Result};
use crate::nncore::Tensor;

/// Feature rows, in order: close, open, high, low, volume, signal.
pub const FEATURES: usize = 6;

/// The (features, assets-plus-cash, window) tensor observed per step. The
/// cash row holds unit prices, zero volume and zero signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfoundState(pub Tensor);

impl ProfoundState {
    pub fn assets_with_cash(&self) -> usize {
        self.0.shape()[1]
    }

    pub fn window(&self) -> usize {
        self.0.shape()[2]
    }
}

/// Verifies that every frame covers the same dates.
pub fn check_frames_aligned(frames: &[SignalComprisedFrame]) -> Result<()> {
    let first = frames
        .first()
        .ok_or_else(|| Error::InsufficientData("no frames to stack".into()))?;
    for f in &frames[1..] {
        if f.dates != first.dates {
            return Err(Error::Validation(format!(
                "frames {} and {} are not calendar-aligned",
                first.symbol, f.symbol
            )));
        }
    }
    Ok(())
}

/// Stacks the aligned frames into the tensor for the window ending at day
/// index `t` (inclusive), i.e. days [t-n+1, t]. Asset order follows the
/// input order; the cash row comes first.
///
/// Each asset's price features are rescaled by that asset's window-final
/// close (volume by the window-final volume), so the allocator always sees
/// recent movement relative to today instead of an unbounded level. The
/// cash row and the signal channel are untouched.
pub fn stack_profound_state(
    frames: &[SignalComprisedFrame],
    t: usize,
    n: usize,
) -> Result<ProfoundState> {
    check_frames_aligned(frames)?;
    let len = frames[0].len();
    if t >= len {
        return Err(Error::ShapeMismatch(format!(
            "window end {t} out of range for {len} days"
        )));
    }
    if t + 1 < n {
        return Err(Error::InsufficientData(format!(
            "window of {n} days cannot end at index {t}"
        )));
    }
    let m_star = frames.len() + 1;
    let lo = t + 1 - n;
    let mut data = vec![0.0; FEATURES * m_star * n];
    {
        let mut put = |f: usize, m: usize, j: usize, v: f64| {
            data[(f * m_star + m) * n + j] = v;
        };
        for j in 0..n {
            // Cash row: unit prices, no volume, no signal.
            for f in 0..4 {
                put(f, 0, j, 1.0);
            }
        }
        for (a, frame) in frames.iter().enumerate() {
            let m = a + 1;
            let close_ref = frame.close[t];
            let volume_ref = frame.volume[t];
            if close_ref <= 0.0 {
                return Err(Error::Validation(format!(
                    "{}: non-positive close at window end",
                    frame.symbol
                )));
            }
            let volume_scale = if volume_ref > 0.0 { volume_ref } else { 1.0 };
            for j in 0..n {
                let i = lo + j;
                put(0, m, j, frame.close[i] / close_ref);
                put(1, m, j, frame.open[i] / close_ref);
                put(2, m, j, frame.high[i] / close_ref);
                put(3, m, j, frame.low[i] / close_ref);
                put(4, m, j, frame.volume[i] / volume_scale);
                put(5, m, j, frame.signal[i]);
            }
        }
    }
    Ok(ProfoundState(Tensor::new(vec![FEATURES, m_star, n], data)?))
}
