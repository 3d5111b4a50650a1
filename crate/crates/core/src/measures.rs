//! Scalar and curve-valued risk indicators derived from the spectrum.
//!
//! The cumulative amplitude integral `F(w)` accumulates `|f(w')|` from 0 to
//! `w` by the composite trapezoid rule and is normalized by its total, which
//! makes series quoted in different currencies directly comparable. The
//! irrationality ratio is the low-frequency share of that mass: values near 1
//! mean little high-frequency (speculative) activity. Classical annualized
//! volatility is kept alongside as the comparator.

use num_complex::Complex64;
use serde::Serialize;

use crate::detrend::DetrendedCurve;
use crate::error::{Error, Result};
use crate::ingest::IndexedSeries;
use crate::spectrum::{evaluate_grid, EvalOptions, GridSpec, SpectrumGrid, TransformKernel};

/// Running integral of the amplitude spectrum with its normalization.
#[derive(Debug, Clone)]
pub struct CumulativeSpectrum {
    spec: GridSpec,
    f: Vec<f64>,
    ftot: f64,
}

impl CumulativeSpectrum {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// `F(w_j)`, nondecreasing, `F[0] = 0`.
    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn ftot(&self) -> f64 {
        self.ftot
    }

    /// `F/Ftot` at grid point `j`.
    pub fn fnorm(&self, j: usize) -> f64 {
        self.f[j] / self.ftot
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `F` at an arbitrary frequency, linearly interpolated between grid
    /// points.
    pub fn f_at(&self, omega: f64) -> Result<f64> {
        if !(0.0..=self.spec.omega_max).contains(&omega) {
            return Err(Error::InvalidBand {
                lo: omega,
                hi: omega,
            });
        }
        let step = self.spec.step();
        let pos = omega / step;
        let j = (pos.floor() as usize).min(self.f.len() - 2);
        let frac = pos - j as f64;
        Ok(self.f[j] + frac * (self.f[j + 1] - self.f[j]))
    }
}

/// Below `NO_SIGNAL_FLOOR_REL * p0` the whole amplitude spectrum is treated
/// as numerically zero: a fluctuation-free asset detrended in floating point
/// leaves residuals well under this level, and no meaningful normalization
/// exists for them.
pub const NO_SIGNAL_FLOOR_REL: f64 = 1e-10;

/// Trapezoid accumulation of the amplitude spectrum.
///
/// Fails with [`Error::NoRiskSignal`] when the spectrum is identically zero
/// (fluctuation-free input), since no normalization exists there.
pub fn cumulative(grid: &SpectrumGrid) -> Result<CumulativeSpectrum> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty spectrum grid".into()));
    }
    let amps = grid.amplitudes();
    if !amps.iter().any(|&a| a > 0.0) {
        return Err(Error::NoRiskSignal);
    }
    let h = grid.spec().step();
    let mut f = Vec::with_capacity(amps.len());
    f.push(0.0);
    let mut acc = 0.0;
    for j in 1..amps.len() {
        acc += 0.5 * (amps[j - 1] + amps[j]) * h;
        f.push(acc);
    }
    Ok(CumulativeSpectrum {
        spec: *grid.spec(),
        f,
        ftot: acc,
    })
}

/// Normalized amplitude mass between two frequencies,
/// `(F(hi) - F(lo)) / Ftot`.
pub fn band_share(cs: &CumulativeSpectrum, omega_lo: f64, omega_hi: f64) -> Result<f64> {
    if !(0.0 <= omega_lo && omega_lo < omega_hi && omega_hi <= cs.spec.omega_max) {
        return Err(Error::InvalidBand {
            lo: omega_lo,
            hi: omega_hi,
        });
    }
    Ok((cs.f_at(omega_hi)? - cs.f_at(omega_lo)?) / cs.ftot)
}

/// Low-frequency share `F(omega_cut)/Ftot`; closer to 1 = less speculation.
pub fn irrationality_continuous(cs: &CumulativeSpectrum, omega_cut: f64) -> Result<f64> {
    if !(omega_cut > 0.0 && omega_cut <= cs.spec.omega_max) {
        return Err(Error::InvalidCutoff(format!(
            "omega_cut {omega_cut} outside (0, {}]",
            cs.spec.omega_max
        )));
    }
    Ok(cs.f_at(omega_cut)? / cs.ftot)
}

/// Complex Fourier coefficients of the curve treated as one period of length
/// `T`, computed analytically from the closed-form kernel at the harmonic
/// frequencies `2*pi*k/T`.
#[derive(Debug, Clone)]
pub struct DiscreteCoefficients {
    c: Vec<Complex64>,
    // |f(2*pi*k/T)|/T, divided after taking the modulus so the value is
    // bit-identical to what a caller gets from the kernel directly
    amp: Vec<f64>,
    period: f64,
}

impl DiscreteCoefficients {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    /// `|c_k|`, equal to `|f(2*pi*k/T)|/T` to the last bit.
    pub fn amplitude(&self, k: usize) -> f64 {
        self.amp[k]
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amp
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn max_harmonic(&self) -> usize {
        self.c.len() - 1
    }

    /// Harmonic frequency of coefficient `k`.
    pub fn omega(&self, k: usize) -> f64 {
        harmonic_omega(k, self.period)
    }
}

/// `2*pi*k/T`, shared with tests asserting kernel coherence.
pub fn harmonic_omega(k: usize, period: f64) -> f64 {
    std::f64::consts::TAU * k as f64 / period
}

/// `c_k = f(2*pi*k/T)/T` for `k = 0..=max_harmonic`, via the same analytic
/// kernel as the continuous transform (no sampling, no aliasing).
pub fn dft_coefficients(curve: &DetrendedCurve, max_harmonic: usize) -> DiscreteCoefficients {
    let kernel = TransformKernel::new(curve);
    let period = curve.span_days();
    let mut c = Vec::with_capacity(max_harmonic + 1);
    let mut amp = Vec::with_capacity(max_harmonic + 1);
    for k in 0..=max_harmonic {
        let z = kernel.eval(harmonic_omega(k, period));
        c.push(z / period);
        amp.push(z.norm() / period);
    }
    DiscreteCoefficients { c, amp, period }
}

/// `sum_{k<=n_cut} |c_k| / sum_{k<=K} |c_k|`.
pub fn irrationality_discrete(dc: &DiscreteCoefficients, n_cut: usize) -> Result<f64> {
    if n_cut > dc.max_harmonic() {
        return Err(Error::InvalidCutoff(format!(
            "harmonic cutoff {n_cut} exceeds max harmonic {}",
            dc.max_harmonic()
        )));
    }
    let total: f64 = dc.amp.iter().sum();
    if total == 0.0 {
        return Err(Error::NoRiskSignal);
    }
    let low: f64 = dc.amp[..=n_cut].iter().sum();
    Ok(low / total)
}

/// Annualized standard deviation of daily log returns (252 trading days).
pub fn volatility(s: &IndexedSeries) -> Result<f64> {
    let p = s.prices();
    if p.len() < 3 {
        return Err(Error::InvalidSeries(format!(
            "volatility needs at least 3 prices, got {}",
            p.len()
        )));
    }
    let returns: Vec<f64> = p.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    let var = returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var.sqrt() * 252f64.sqrt())
}

/// A frequency band given as day periods, `1/(lo_days)` to `1/(hi_days)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandShare {
    pub lo_days: f64,
    pub hi_days: f64,
    pub share: f64,
}

/// Table-row risk summary for one series.
#[derive(Debug, Clone, Serialize)]
pub struct RiskReport {
    pub series_id: String,
    pub n: usize,
    pub omega_max: f64,
    pub points_per_oscillation: u32,
    pub omega_cut_days: f64,
    pub irrationality_continuous: f64,
    pub irrationality_discrete: f64,
    pub volatility_annualized: f64,
    pub band_shares: Vec<BandShare>,
}

/// Configuration for [`build_report`].
#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub omega_max: f64,
    pub points_per_oscillation: u32,
    /// Low-frequency cutoff period in days; `omega_cut = 2*pi/days`.
    pub omega_cut_days: f64,
    /// Bands as `(lo_days, hi_days)` period pairs, e.g. `(50, 1)` for
    /// `1/(50 days)` to `1/(1 day)`.
    pub bands_days: Vec<(f64, f64)>,
    /// Truncation `K` for the discrete coefficient sum; `None` takes every
    /// harmonic up to `omega_max`.
    pub max_harmonic: Option<usize>,
    pub eval: EvalOptions,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            omega_max: std::f64::consts::TAU,
            points_per_oscillation: GridSpec::DEFAULT_POINTS_PER_OSCILLATION,
            omega_cut_days: 10.0,
            bands_days: vec![(50.0, 1.0), (5.0, 1.0)],
            max_harmonic: None,
            eval: EvalOptions::default(),
        }
    }
}

/// Period in days to angular frequency, `w = 2*pi/days`.
pub fn omega_from_days(days: f64) -> f64 {
    std::f64::consts::TAU / days
}

/// Full pipeline for one series: detrend, dense grid, cumulative measures,
/// discrete coefficients, volatility.
pub fn build_report(
    series: &IndexedSeries,
    series_id: &str,
    config: &ReportConfig,
) -> Result<RiskReport> {
    let curve = crate::detrend::build_curve(series);
    let spec = GridSpec {
        omega_max: config.omega_max,
        points_per_oscillation: config.points_per_oscillation,
        span_days: curve.span_days(),
    };
    let grid = evaluate_grid(&curve, &spec, &config.eval)?;
    let floor = NO_SIGNAL_FLOOR_REL * curve.p0();
    if grid.amplitudes().iter().all(|&a| a <= floor) {
        return Err(Error::NoRiskSignal);
    }
    let cs = cumulative(&grid)?;
    report_from_parts(series, series_id, &curve, &cs, config)
}

/// Report assembly from a precomputed cumulative spectrum. Split out so tests
/// can inject synthetic spectra.
pub fn report_from_parts(
    series: &IndexedSeries,
    series_id: &str,
    curve: &DetrendedCurve,
    cs: &CumulativeSpectrum,
    config: &ReportConfig,
) -> Result<RiskReport> {
    let omega_cut = omega_from_days(config.omega_cut_days).min(cs.spec().omega_max);
    let irr_cont = irrationality_continuous(cs, omega_cut)?;

    let period = curve.span_days();
    let max_harmonic = config
        .max_harmonic
        .unwrap_or((config.omega_max * period / std::f64::consts::TAU).floor() as usize)
        .max(1);
    let dc = dft_coefficients(curve, max_harmonic);
    // harmonic index nearest the day-period cutoff
    let n_cut = ((period / config.omega_cut_days).round() as usize).min(max_harmonic);
    let irr_disc = irrationality_discrete(&dc, n_cut)?;

    let mut band_shares = Vec::new();
    for &(lo_days, hi_days) in &config.bands_days {
        let lo = omega_from_days(lo_days);
        let hi = omega_from_days(hi_days).min(cs.spec().omega_max);
        band_shares.push(BandShare {
            lo_days,
            hi_days,
            share: band_share(cs, lo, hi)?,
        });
    }

    Ok(RiskReport {
        series_id: series_id.to_string(),
        n: series.len(),
        omega_max: config.omega_max,
        points_per_oscillation: config.points_per_oscillation,
        omega_cut_days: config.omega_cut_days,
        irrationality_continuous: irr_cont,
        irrationality_discrete: irr_disc,
        volatility_annualized: volatility(series)?,
        band_shares,
    })
}
