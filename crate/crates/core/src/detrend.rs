//! Construction of the Fourier-transformable fluctuation curve.
//!
//! Consecutive quotes are joined by exponential arcs, as if each day were a
//! fixed-interest asset. Dividing out the constant average growth rate makes
//! the first and last values equal, and subtracting the first price pins both
//! ends to zero, so the curve extends by zero outside `[0, T]` and captures
//! the fluctuations only.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ingest::IndexedSeries;

/// One exponential arc covering `[k, k+1]`.
///
/// On its interval the detrended curve is `g(t) = a_k * e^{c_k (t-k)} - p0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Day index `k` of the segment start.
    pub start: usize,
    /// Detrended value at the segment start, before the offset subtraction.
    pub amplitude: f64,
    /// Per-day exponential rate after average-growth removal.
    pub rate: f64,
}

/// Piecewise-exponential, compactly supported fluctuation curve `g(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetrendedCurve {
    segments: Vec<Segment>,
    p0: f64,
    rbar: f64,
    n: usize,
}

impl DetrendedCurve {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// First price, the offset subtracted across the whole support.
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Average per-day log growth rate removed from every segment.
    pub fn rbar(&self) -> f64 {
        self.rbar
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    /// Support length in days, `T = N - 1`.
    pub fn span_days(&self) -> f64 {
        (self.n - 1) as f64
    }

    /// Evaluate `g(t)` for `t` in `[0, T]`.
    ///
    /// Segments are right-open; `t = T` maps to the last segment. Continuity
    /// at the knots makes that choice numerically invisible.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let span = self.span_days();
        if !(0.0..=span).contains(&t) {
            return Err(Error::OutOfSupport { t, span });
        }
        let k = (t.floor() as usize).min(self.segments.len() - 1);
        let seg = &self.segments[k];
        Ok(seg.amplitude * (seg.rate * (t - seg.start as f64)).exp() - self.p0)
    }

    /// Debug dump: `p0=..,rbar=..,N=..` header, then one `k,a_k,c_k` line per
    /// segment.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p0={},rbar={},N={}", self.p0, self.rbar, self.n).unwrap();
        for seg in &self.segments {
            writeln!(out, "{},{},{}", seg.start, seg.amplitude, seg.rate).unwrap();
        }
        out
    }
}

/// Average per-day log growth rate `rbar = ln(p_{N-1}/p_0)/(N-1)`.
///
/// This is the unique constant rate whose removal makes the first and last
/// detrended values equal.
pub fn mean_log_rate(s: &IndexedSeries) -> f64 {
    let p = s.prices();
    (p[p.len() - 1] / p[0]).ln() / (p.len() - 1) as f64
}

/// Build the detrended piecewise-exponential curve from an indexed series.
pub fn build_curve(s: &IndexedSeries) -> DetrendedCurve {
    let p = s.prices();
    let rbar = mean_log_rate(s);
    let segments = (0..p.len() - 1)
        .map(|k| {
            let raw_rate = (p[k + 1] / p[k]).ln();
            Segment {
                start: k,
                amplitude: p[k] * (-rbar * k as f64).exp(),
                rate: raw_rate - rbar,
            }
        })
        .collect();
    DetrendedCurve {
        segments,
        p0: p[0],
        rbar,
        n: p.len(),
    }
}
