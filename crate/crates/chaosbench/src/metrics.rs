//! Forecast-error metrics and Spearman rank correlation.
//!
//! Percentage metrics (MAPE, sMAPE, MARRE, CV) are reported in percent.
//! Pairs with a zero denominator are skipped rather than clamped, so
//! signals that cross zero do not produce infinite percentages.

use serde::Serialize;

use crate::error::{ChaosError, Result};

/// The eight error metrics computed for every (system, model) cell, plus
/// RMSE as a derived convenience field.
#[derive(Debug, Clone, Serialize)]
pub struct MetricSuite {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub mape: f64,
    pub smape: f64,
    pub marre: f64,
    pub cv_abs: f64,
    pub one_minus_r2: f64,
    pub mase: f64,
}

fn check_lengths(actual: &[f64], predicted: &[f64]) -> Result<()> {
    if actual.is_empty() {
        return Err(ChaosError::SeriesTooShort { needed: 1, got: 0 });
    }
    if actual.len() != predicted.len() {
        return Err(ChaosError::DimensionMismatch {
            expected: actual.len(),
            got: predicted.len(),
        });
    }
    Ok(())
}

/// Symmetric mean absolute percent error, (200/n)·Σ |a−p|/(|a|+|p|).
pub fn smape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for (&a, &p) in actual.iter().zip(predicted) {
        let denom = a.abs() + p.abs();
        if denom == 0.0 {
            continue;
        }
        sum += (a - p).abs() / denom;
        n += 1;
    }
    if n == 0 {
        return Err(ChaosError::EmptyAfterFiltering);
    }
    Ok(200.0 * sum / n as f64)
}

/// Mean absolute percent error, (100/n)·Σ |a−p|/|a|, skipping a == 0.
pub fn mape(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check_lengths(actual, predicted)?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for (&a, &p) in actual.iter().zip(predicted) {
        if a == 0.0 {
            continue;
        }
        sum += (a - p).abs() / a.abs();
        n += 1;
    }
    if n == 0 {
        return Err(ChaosError::EmptyAfterFiltering);
    }
    Ok(100.0 * sum / n as f64)
}

/// All nine fields. `insample` is the training series used for the MASE
/// denominator (mean absolute one-step naive error).
pub fn metric_suite(actual: &[f64], predicted: &[f64], insample: &[f64]) -> Result<MetricSuite> {
    check_lengths(actual, predicted)?;
    let n = actual.len() as f64;
    let mut se = 0.0;
    let mut ae = 0.0;
    for (&a, &p) in actual.iter().zip(predicted) {
        let d = a - p;
        se += d * d;
        ae += d.abs();
    }
    let mse = se / n;
    let mae = ae / n;

    let mean_a = actual.iter().sum::<f64>() / n;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean_a).powi(2)).sum();
    let (min_a, max_a) = actual
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| {
            (lo.min(a), hi.max(a))
        });
    let range = max_a - min_a;
    if range == 0.0 {
        return Err(ChaosError::ZeroRange);
    }

    if insample.len() < 2 {
        return Err(ChaosError::SeriesTooShort {
            needed: 2,
            got: insample.len(),
        });
    }
    let scale = insample
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum::<f64>()
        / (insample.len() - 1) as f64;
    if scale == 0.0 {
        return Err(ChaosError::ZeroScale);
    }

    // Constant-zero actuals are already rejected by the range check, so
    // mean |a| > 0 here.
    let mean_abs_a = actual.iter().map(|a| a.abs()).sum::<f64>() / n;

    Ok(MetricSuite {
        mse,
        rmse: mse.sqrt(),
        mae,
        mape: mape(actual, predicted)?,
        smape: smape(actual, predicted)?,
        marre: 100.0 * mae / range,
        cv_abs: 100.0 * mse.sqrt() / mean_abs_a,
        one_minus_r2: se / ss_tot,
        mase: mae / scale,
    })
}

/// Average ranks (ties get the mean of the positions they straddle).
fn ranks(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average-rank tie handling.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(ChaosError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(ChaosError::SeriesTooShort {
            needed: 3,
            got: x.len(),
        });
    }
    let rx = ranks(x);
    let ry = ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        num += (a - mx) * (b - my);
        dx += (a - mx).powi(2);
        dy += (b - my).powi(2);
    }
    if dx == 0.0 || dy == 0.0 {
        return Err(ChaosError::ZeroVariance);
    }
    Ok(num / (dx * dy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smape_on_identical_series_is_zero() {
        assert_eq!(smape(&[1.0, -2.0, 3.0], &[1.0, -2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn smape_single_pair_hand_value() {
        // 200 * |1-3| / (1+3) = 100
        assert!((smape(&[1.0], &[3.0]).unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn smape_is_symmetric() {
        let a = [1.0, 2.0, -0.5, 4.0];
        let p = [0.7, 2.2, 0.1, 3.0];
        assert_eq!(smape(&a, &p).unwrap(), smape(&p, &a).unwrap());
    }

    #[test]
    fn smape_skips_zero_denominator_pairs() {
        // The (0, 0) pair contributes nothing; remaining pair gives 100.
        let v = smape(&[0.0, 1.0], &[0.0, 3.0]).unwrap();
        assert!((v - 100.0).abs() < 1e-12);
        assert!(matches!(
            smape(&[0.0], &[0.0]).unwrap_err(),
            ChaosError::EmptyAfterFiltering
        ));
    }

    #[test]
    fn perfect_forecast_zeroes_every_error_field() {
        let a = [1.0, 2.0, 3.0, 2.0];
        let s = metric_suite(&a, &a, &a).unwrap();
        assert_eq!(s.mse, 0.0);
        assert_eq!(s.rmse, 0.0);
        assert_eq!(s.mae, 0.0);
        assert_eq!(s.mape, 0.0);
        assert_eq!(s.smape, 0.0);
        assert_eq!(s.marre, 0.0);
        assert_eq!(s.cv_abs, 0.0);
        assert_eq!(s.one_minus_r2, 0.0);
        assert_eq!(s.mase, 0.0);
    }

    #[test]
    fn mse_is_rmse_squared() {
        let a = [1.0, 5.0, 2.0, 8.0, 3.0];
        let p = [1.5, 4.0, 2.5, 7.0, 3.5];
        let s = metric_suite(&a, &p, &a).unwrap();
        assert!((s.mse - s.rmse * s.rmse).abs() <= 1e-12 * s.mse);
        assert!(s.smape >= 0.0 && s.smape <= 200.0);
        assert!(s.mase >= 0.0 && s.mae >= 0.0);
    }

    #[test]
    fn naive_persistence_has_unit_mase() {
        // Test series a[1..], forecast a[..n-1]: the forecast MAE equals
        // the in-sample one-step naive error by construction.
        let ins = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let actual = &ins[1..];
        let predicted = &ins[..ins.len() - 1];
        let s = metric_suite(actual, predicted, &ins).unwrap();
        assert!((s.mase - 1.0).abs() < 1e-9, "mase {}", s.mase);
    }

    #[test]
    fn constant_actual_raises_zero_range() {
        assert!(matches!(
            metric_suite(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0], &[1.0, 2.0]).unwrap_err(),
            ChaosError::ZeroRange
        ));
    }

    #[test]
    fn constant_insample_raises_zero_scale() {
        assert!(matches!(
            metric_suite(&[1.0, 2.0], &[1.0, 1.0], &[5.0, 5.0, 5.0]).unwrap_err(),
            ChaosError::ZeroScale
        ));
    }

    #[test]
    fn spearman_on_monotone_data_is_plus_minus_one() {
        let x = [1.0, 2.0, 5.0, 9.0];
        let up = [0.1, 0.4, 0.5, 3.0];
        let down = [3.0, 0.5, 0.4, 0.1];
        assert!((spearman(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &down).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_tie_matches_hand_computed_ranks() {
        // y ranks with the tie averaged: (1, 2.5, 2.5, 4); Pearson against
        // (1, 2, 3, 4) works out to 4.5 / sqrt(5 * 4.5) = 3 / sqrt(10).
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 2.0, 2.0, 4.0];
        let expected = 3.0 / 10.0_f64.sqrt();
        assert!((spearman(&x, &y).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn spearman_invariant_under_monotone_transform() {
        let x = [0.3, 1.9, 0.7, 4.2, 2.8, 0.1];
        let y = [5.0, 2.0, 9.0, 1.0, 7.0, 3.0];
        let base = spearman(&x, &y).unwrap();
        let ex: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let cube: Vec<f64> = y.iter().map(|v| v.powi(3)).collect();
        assert!((spearman(&ex, &y).unwrap() - base).abs() < 1e-12);
        assert!((spearman(&x, &cube).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn spearman_constant_input_is_an_error() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap_err(),
            ChaosError::ZeroVariance
        ));
    }

    #[test]
    fn smape_and_mae_rank_models_identically_at_shared_scale() {
        // Three candidate forecasts of the same series, all on the same
        // scale: orderings by sMAPE and MAE agree.
        let actual = [10.0, 11.0, 12.0, 13.0, 14.0];
        let cands: Vec<Vec<f64>> = vec![
            actual.iter().map(|a| a + 0.1).collect(),
            actual.iter().map(|a| a + 0.5).collect(),
            actual.iter().map(|a| a + 1.5).collect(),
        ];
        let maes: Vec<f64> = cands
            .iter()
            .map(|p| {
                actual
                    .iter()
                    .zip(p)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
            })
            .collect();
        let smapes: Vec<f64> = cands.iter().map(|p| smape(&actual, p).unwrap()).collect();
        let order = |v: &[f64]| {
            let mut i: Vec<usize> = (0..v.len()).collect();
            i.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
            i
        };
        assert_eq!(order(&maes), order(&smapes));
    }
}
