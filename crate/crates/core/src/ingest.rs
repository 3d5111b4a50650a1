//! Loading and indexing of raw daily price data.
//!
//! Input is plain text, one `YYYY-MM-DD,<price>` observation per line with an
//! optional `date,close` header. Calendar gaps (weekends, holidays) carry no
//! information here: prices do not exist between quotes, so the indexed form
//! collapses observations onto consecutive integer trading-day positions.

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// A single dated closing price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub date: NaiveDate,
    pub price: f64,
}

/// Validated calendar-dated price series.
///
/// Invariants: dates strictly increasing, every price > 0, length >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    observations: Vec<Observation>,
}

impl PriceSeries {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 observations, got {}",
                observations.len()
            )));
        }
        for (i, obs) in observations.iter().enumerate() {
            if !(obs.price > 0.0) || !obs.price.is_finite() {
                return Err(Error::InvalidSeries(format!(
                    "non-positive price {} at position {i}",
                    obs.price
                )));
            }
            if i > 0 && obs.date <= observations[i - 1].date {
                return Err(Error::InvalidSeries(format!(
                    "dates not strictly increasing at position {i} ({})",
                    obs.date
                )));
            }
        }
        Ok(Self { observations })
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: length >= 2
    }

    /// Render in the input file format, one `YYYY-MM-DD,<price>` row per line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for obs in &self.observations {
            out.push_str(&format!("{},{}\n", obs.date.format("%Y-%m-%d"), obs.price));
        }
        out
    }
}

/// Prices re-indexed to integer trading-day positions `0..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedSeries {
    prices: Vec<f64>,
    origin_date: NaiveDate,
}

impl IndexedSeries {
    /// Build directly from raw prices (used by synthetic generators).
    pub fn from_prices(prices: Vec<f64>, origin_date: NaiveDate) -> Result<Self> {
        if prices.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "need at least 2 prices, got {}",
                prices.len()
            )));
        }
        if let Some((i, &p)) = prices
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p > 0.0) || !p.is_finite())
        {
            return Err(Error::InvalidSeries(format!(
                "non-positive price {p} at index {i}"
            )));
        }
        Ok(Self {
            prices,
            origin_date,
        })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn origin_date(&self) -> NaiveDate {
        self.origin_date
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Span in trading days, `T = N - 1`.
    pub fn span_days(&self) -> f64 {
        (self.prices.len() - 1) as f64
    }
}

/// Parse the input file format into a validated [`PriceSeries`].
///
/// Accepts `\n` or `\r\n` line endings and an optional `date,close` header.
pub fn parse_prices(text: &str) -> Result<PriceSeries> {
    let mut observations = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        let display_line = lineno + 1;
        if line.is_empty() {
            continue;
        }
        if lineno == 0 && is_header(line) {
            continue;
        }
        let (date_str, price_str) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: display_line,
            msg: format!("expected 'YYYY-MM-DD,<price>', got {line:?}"),
        })?;
        let date =
            NaiveDate::parse_from_str(date_str.trim(), "%Y-%m-%d").map_err(|e| Error::Parse {
                line: display_line,
                msg: format!("bad date {:?}: {e}", date_str.trim()),
            })?;
        let price: f64 = price_str.trim().parse().map_err(|e| Error::Parse {
            line: display_line,
            msg: format!("bad price {:?}: {e}", price_str.trim()),
        })?;
        if !(price > 0.0) || !price.is_finite() {
            return Err(Error::Parse {
                line: display_line,
                msg: format!("non-positive price {price}"),
            });
        }
        if let Some(prev) = observations.last() {
            let prev: &Observation = prev;
            if date <= prev.date {
                return Err(Error::Parse {
                    line: display_line,
                    msg: format!("date {date} not after previous {}", prev.date),
                });
            }
        }
        observations.push(Observation { date, price });
    }
    PriceSeries::new(observations)
}

fn is_header(line: &str) -> bool {
    let lower = line.to_ascii_lowercase();
    let mut parts = lower.splitn(2, ',');
    matches!(
        (parts.next().map(str::trim), parts.next().map(str::trim)),
        (Some("date"), Some("close"))
    )
}

/// Collapse calendar dates onto consecutive integer trading-day positions.
pub fn index_series(s: &PriceSeries) -> IndexedSeries {
    IndexedSeries {
        prices: s.observations().iter().map(|o| o.price).collect(),
        origin_date: s.observations()[0].date,
    }
}
