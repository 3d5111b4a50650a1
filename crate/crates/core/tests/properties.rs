//! Property tests for the parsing, transform, and measure invariants.

use std::f64::consts::TAU;

use chrono::NaiveDate;
use proptest::prelude::*;

use spectral_risk::detrend::build_curve;
use spectral_risk::ingest::{parse_prices, IndexedSeries, Observation, PriceSeries};
use spectral_risk::measures::{band_share, cumulative, irrationality_continuous};
use spectral_risk::oracle::{quadrature_transform, VERIFY_MAX_RELATIVE_DEVIATION};
use spectral_risk::spectrum::{evaluate_grid, transform_at, EvalOptions, GridSpec};
use spectral_risk::synth::{generate, SynthKind, SynthSpec};

fn origin() -> NaiveDate {
    NaiveDate::from_ymd_opt(2004, 5, 17).unwrap()
}

/// Strictly positive prices with mild day-to-day moves.
fn price_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    (2..=max_len).prop_flat_map(|n| {
        (
            1.0..1000.0f64,
            proptest::collection::vec(-0.2..0.2f64, n - 1),
        )
            .prop_map(|(p0, returns)| {
                let mut prices = vec![p0];
                for r in returns {
                    let last = *prices.last().unwrap();
                    prices.push(last * r.exp());
                }
                prices
            })
    })
}

fn series_from(prices: &[f64]) -> IndexedSeries {
    IndexedSeries::from_prices(prices.to_vec(), origin()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn serialized_series_reparses_identically(prices in price_vec(40)) {
        let observations = prices
            .iter()
            .enumerate()
            .map(|(k, &price)| Observation {
                date: origin() + chrono::Days::new(k as u64),
                price,
            })
            .collect();
        let original = PriceSeries::new(observations).unwrap();
        let reparsed = parse_prices(&original.serialize()).unwrap();
        prop_assert_eq!(original, reparsed);
    }

    #[test]
    fn analytic_transform_matches_quadrature(
        prices in price_vec(60),
        omegas in proptest::collection::vec(1e-4..TAU, 3),
    ) {
        let curve = build_curve(&series_from(&prices));
        let floor = 1e-12 * prices[0];
        for omega in omegas {
            let analytic = transform_at(&curve, omega);
            let reference = quadrature_transform(&curve, omega, 1e-10);
            prop_assert!(reference.converged);
            let deviation =
                (analytic - reference.value).norm() / (reference.value.norm() + floor);
            prop_assert!(
                deviation < VERIFY_MAX_RELATIVE_DEVIATION,
                "deviation {deviation} at omega {omega}"
            );
        }
    }

    #[test]
    fn fnorm_ignores_price_scale(prices in price_vec(30), lambda in 1e-3..1e3f64) {
        let spec = |curve: &spectral_risk::detrend::DetrendedCurve| GridSpec {
            omega_max: TAU,
            points_per_oscillation: 8,
            span_days: curve.span_days(),
        };
        let base_curve = build_curve(&series_from(&prices));
        let scaled: Vec<f64> = prices.iter().map(|p| p * lambda).collect();
        let scaled_curve = build_curve(&series_from(&scaled));

        let opts = EvalOptions::default();
        let base = evaluate_grid(&base_curve, &spec(&base_curve), &opts).unwrap();
        let scaled = evaluate_grid(&scaled_curve, &spec(&scaled_curve), &opts).unwrap();
        let (Ok(base), Ok(scaled)) = (cumulative(&base), cumulative(&scaled)) else {
            // numerically flat series carry no signal at any scale
            return Ok(());
        };
        for j in 0..base.len() {
            prop_assert!((base.fnorm(j) - scaled.fnorm(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn band_shares_are_additive_and_complement_the_ratio(
        prices in price_vec(30),
        split in 0.1..0.9f64,
    ) {
        let curve = build_curve(&series_from(&prices));
        let spec = GridSpec {
            omega_max: TAU,
            points_per_oscillation: 8,
            span_days: curve.span_days(),
        };
        let grid = evaluate_grid(&curve, &spec, &EvalOptions::default()).unwrap();
        let Ok(cs) = cumulative(&grid) else { return Ok(()) };

        let mid = split * TAU;
        let low = band_share(&cs, 0.0, mid).unwrap();
        let high = band_share(&cs, mid, TAU).unwrap();
        prop_assert!((low + high - 1.0).abs() < 1e-12);

        let ratio = irrationality_continuous(&cs, mid).unwrap();
        prop_assert!((ratio + high - 1.0).abs() < 1e-12);
        prop_assert!((ratio - low).abs() < 1e-12);
    }

    #[test]
    fn transform_is_stable_across_the_series_branch(prices in price_vec(20)) {
        // straddle the small-argument switchover of the kernel; the jump must
        // stay within the Lipschitz bound |f'(w)| <= sup|g| * T^2 / 2
        let curve = build_curve(&series_from(&prices));
        let below = 9.9e-7;
        let above = 1.01e-6;
        let t = curve.span_days();
        let sup_g = curve
            .segments()
            .iter()
            .map(|s| s.amplitude * s.rate.exp().max(1.0) + curve.p0())
            .fold(0.0f64, f64::max);
        let bound = (above - below) * sup_g * t * t / 2.0;
        let jump = (transform_at(&curve, below) - transform_at(&curve, above)).norm();
        prop_assert!(jump <= bound * 1.01 + 1e-12, "jump {jump} > bound {bound}");
    }
}

#[test]
fn modulation_peak_lands_on_the_harmonic_for_several_periods() {
    for q in [3.0, 5.0, 20.0] {
        let spec = SynthSpec {
            kind: SynthKind::Modulated,
            n: 301,
            p0: 100.0,
            rate: 0.0,
            epsilon: 0.02,
            period: q,
            sigma: 0.0,
            seed: 0,
        };
        let series = generate(&spec).unwrap();
        let curve = build_curve(&series);
        let grid_spec = GridSpec {
            omega_max: TAU,
            points_per_oscillation: 50,
            span_days: curve.span_days(),
        };
        let grid = evaluate_grid(&curve, &grid_spec, &EvalOptions::default()).unwrap();
        let peak = grid
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let target = TAU / q;
        let step = grid_spec.step();
        assert!(
            (grid.omega(peak) - target).abs() <= 3.0 * step,
            "period {q}: peak at {} expected {target}",
            grid.omega(peak)
        );
    }
}
