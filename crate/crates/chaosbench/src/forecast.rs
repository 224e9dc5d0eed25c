//! Baseline forecasters, timescale tuning, backtesting, and the benchmark
//! harness correlating forecast error with the registry annotations.
//!
//! All forecasting is univariate on the first coordinate.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{ChaosError, Result};
use crate::metrics::{metric_suite, spearman, MetricSuite};
use crate::registry;

pub const DEFAULT_RIDGE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForecasterKind {
    NaiveMean,
    NaiveSeasonal,
    NaiveDrift,
    Fourier,
    RidgeAr,
}

pub const ALL_KINDS: [ForecasterKind; 5] = [
    ForecasterKind::NaiveMean,
    ForecasterKind::NaiveSeasonal,
    ForecasterKind::NaiveDrift,
    ForecasterKind::Fourier,
    ForecasterKind::RidgeAr,
];

impl fmt::Display for ForecasterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ForecasterKind::NaiveMean => "naive_mean",
            ForecasterKind::NaiveSeasonal => "naive_seasonal",
            ForecasterKind::NaiveDrift => "naive_drift",
            ForecasterKind::Fourier => "fourier",
            ForecasterKind::RidgeAr => "ridge_ar",
        };
        f.write_str(s)
    }
}

impl FromStr for ForecasterKind {
    type Err = ChaosError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive_mean" => Ok(ForecasterKind::NaiveMean),
            "naive_seasonal" => Ok(ForecasterKind::NaiveSeasonal),
            "naive_drift" => Ok(ForecasterKind::NaiveDrift),
            "fourier" => Ok(ForecasterKind::Fourier),
            "ridge_ar" => Ok(ForecasterKind::RidgeAr),
            other => Err(ChaosError::InvalidArgument(format!(
                "unknown model kind '{other}'"
            ))),
        }
    }
}

/// The single timescale-like hyperparameter every model exposes (window /
/// season length / mode count / lag order), plus the ridge strength used
/// only by `ridge_ar`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Hyperparameters {
    pub timescale: usize,
    pub ridge: f64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            timescale: 1,
            ridge: DEFAULT_RIDGE,
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Mean(f64),
    /// Last season, oldest first.
    Seasonal(Vec<f64>),
    Drift {
        last: f64,
        slope: f64,
    },
    /// Selected bins as (angular frequency per step, amplitude, phase),
    /// plus the series mean and length (phases are referenced to t = 0).
    Fourier {
        modes: Vec<(f64, f64, f64)>,
        mean: f64,
        n: usize,
    },
    RidgeAr {
        coef: Vec<f64>,
        intercept: f64,
        /// Last `lag` observations, oldest first.
        window: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct Forecaster {
    pub kind: ForecasterKind,
    pub hyper: Hyperparameters,
    state: Option<State>,
}

impl Forecaster {
    pub fn new(kind: ForecasterKind, hyper: Hyperparameters) -> Self {
        Forecaster {
            kind,
            hyper,
            state: None,
        }
    }

    pub fn is_fitted(&self) -> bool {
        self.state.is_some()
    }

    pub fn fit(&mut self, series: &[f64]) -> Result<()> {
        let n = series.len();
        let w = self.hyper.timescale.max(1);
        if n < (2 * w).max(2) {
            return Err(ChaosError::SeriesTooShort {
                needed: (2 * w).max(2),
                got: n,
            });
        }
        if series.iter().any(|v| !v.is_finite()) {
            return Err(ChaosError::NonFinite {
                context: "forecast training series".into(),
            });
        }
        self.state = Some(match self.kind {
            ForecasterKind::NaiveMean => {
                let tail = &series[n - w.min(n)..];
                State::Mean(tail.iter().sum::<f64>() / tail.len() as f64)
            }
            ForecasterKind::NaiveSeasonal => State::Seasonal(series[n - w..].to_vec()),
            ForecasterKind::NaiveDrift => {
                let span = w.min(n - 1);
                State::Drift {
                    last: series[n - 1],
                    slope: (series[n - 1] - series[n - 1 - span]) / span as f64,
                }
            }
            ForecasterKind::Fourier => fit_fourier(series, w),
            ForecasterKind::RidgeAr => fit_ridge_ar(series, w, self.hyper.ridge)?,
        });
        Ok(())
    }

    pub fn predict(&self, horizon: usize) -> Result<Vec<f64>> {
        if horizon == 0 {
            return Err(ChaosError::InvalidHorizon(0));
        }
        let state = self.state.as_ref().ok_or(ChaosError::NotFitted)?;
        let mut out = Vec::with_capacity(horizon);
        match state {
            State::Mean(m) => out.resize(horizon, *m),
            State::Seasonal(season) => {
                for k in 0..horizon {
                    out.push(season[k % season.len()]);
                }
            }
            State::Drift { last, slope } => {
                for k in 1..=horizon {
                    out.push(last + slope * k as f64);
                }
            }
            State::Fourier { modes, mean, n } => {
                for k in 0..horizon {
                    let t = (*n + k) as f64;
                    let mut v = *mean;
                    for &(omega, amp, phase) in modes {
                        v += amp * (omega * t + phase).cos();
                    }
                    out.push(v);
                }
            }
            State::RidgeAr {
                coef,
                intercept,
                window,
            } => {
                let mut win = window.clone();
                for _ in 0..horizon {
                    let mut v = *intercept;
                    for (c, x) in coef.iter().zip(&win) {
                        v += c * x;
                    }
                    out.push(v);
                    win.rotate_left(1);
                    let last = win.len() - 1;
                    win[last] = v;
                }
            }
        }
        Ok(out)
    }
}

fn fit_fourier(series: &[f64], n_modes: usize) -> State {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = series
        .iter()
        .map(|&v| Complex::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    // Rank positive-frequency bins by amplitude; exclude DC. The Nyquist
    // bin (even n) is unpaired so it carries 1/n instead of 2/n.
    let half = n / 2;
    let mut bins: Vec<usize> = (1..=half.min(n - 1)).collect();
    bins.sort_by(|&a, &b| buf[b].norm().partial_cmp(&buf[a].norm()).unwrap());
    let modes = bins
        .into_iter()
        .take(n_modes)
        .map(|k| {
            let c = buf[k];
            let factor = if n % 2 == 0 && k == half { 1.0 } else { 2.0 };
            (
                2.0 * std::f64::consts::PI * k as f64 / n as f64,
                factor * c.norm() / n as f64,
                c.arg(),
            )
        })
        .collect();
    State::Fourier { modes, mean, n }
}

fn fit_ridge_ar(series: &[f64], lag: usize, ridge: f64) -> Result<State> {
    let n = series.len();
    let rows = n - lag;
    let p = lag + 1; // lags plus unpenalized intercept
    let mut a = DMatrix::zeros(rows, p);
    let mut y = DVector::zeros(rows);
    for r in 0..rows {
        for c in 0..lag {
            a[(r, c)] = series[r + c];
        }
        a[(r, lag)] = 1.0;
        y[r] = series[r + lag];
    }
    let mut normal = a.transpose() * &a;
    for c in 0..lag {
        normal[(c, c)] += ridge;
    }
    let rhs = a.transpose() * y;
    let beta = normal
        .lu()
        .solve(&rhs)
        .ok_or_else(|| ChaosError::InvalidArgument("singular ridge system".into()))?;
    Ok(State::RidgeAr {
        coef: beta.as_slice()[..lag].to_vec(),
        intercept: beta[lag],
        window: series[n - lag..].to_vec(),
    })
}

/// The Appendix-G style grid: one point, five points, half a period, one
/// period, where a period is `granularity` points.
pub fn timescale_grid(granularity: usize) -> Vec<usize> {
    let mut grid = vec![
        1,
        5,
        ((granularity as f64) / 2.0).round() as usize,
        granularity,
    ];
    grid.retain(|&v| v >= 1);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Grid search over the timescale grid, selecting minimal validation MSE on
/// the final two periods. Ties break toward the smaller timescale.
pub fn tune(kind: ForecasterKind, series: &[f64], granularity: usize) -> Result<Hyperparameters> {
    let v = 2 * granularity;
    if series.len() < 12 * granularity {
        return Err(ChaosError::SeriesTooShort {
            needed: 12 * granularity,
            got: series.len(),
        });
    }
    let (train, valid) = series.split_at(series.len() - v);
    let mut best: Option<(f64, usize)> = None;
    for ts in timescale_grid(granularity) {
        let mut model = Forecaster::new(
            kind,
            Hyperparameters {
                timescale: ts,
                ridge: DEFAULT_RIDGE,
            },
        );
        model.fit(train)?;
        let pred = model.predict(v)?;
        let mse = valid
            .iter()
            .zip(&pred)
            .map(|(a, p)| (a - p).powi(2))
            .sum::<f64>()
            / v as f64;
        if best.map_or(true, |(b, _)| mse < b) {
            best = Some((mse, ts));
        }
    }
    let (_, timescale) = best.unwrap();
    Ok(Hyperparameters {
        timescale,
        ridge: DEFAULT_RIDGE,
    })
}

/// Expanding-window historical forecasts. The forecast for block
/// [t, t+stride) is made from a model fitted on series[..t]; the output is
/// per-timepoint absolute error, with the pre-window prefix filled with the
/// median of the computed errors.
pub fn backtest(
    kind: ForecasterKind,
    hyper: Hyperparameters,
    series: &[f64],
    stride: usize,
) -> Result<Vec<f64>> {
    if stride == 0 {
        return Err(ChaosError::InvalidArgument("stride must be >= 1".into()));
    }
    let n = series.len();
    let w0 = (2 * hyper.timescale.max(1)).max(8);
    if n <= w0 {
        return Err(ChaosError::SeriesTooShort {
            needed: w0 + 1,
            got: n,
        });
    }
    let mut errors = vec![f64::NAN; n];
    let mut t = w0;
    while t < n {
        let mut model = Forecaster::new(kind, hyper);
        model.fit(&series[..t])?;
        let h = stride.min(n - t);
        let pred = model.predict(h)?;
        for (k, p) in pred.into_iter().enumerate() {
            errors[t + k] = (series[t + k] - p).abs();
        }
        t += stride;
    }
    let mut computed: Vec<f64> = errors[w0..].to_vec();
    computed.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = computed[computed.len() / 2];
    for e in &mut errors[..w0] {
        *e = median;
    }
    Ok(errors)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkRow {
    pub system: String,
    pub granularity: usize,
    pub model: ForecasterKind,
    pub hyper: Hyperparameters,
    pub suite: MetricSuite,
    pub train_initial_condition: Vec<f64>,
    pub test_initial_condition: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    /// metric name -> annotation name -> Spearman across systems, using the
    /// best (minimal) per-system value of the metric over models.
    pub correlations: BTreeMap<String, BTreeMap<String, f64>>,
    /// (system/model context, error message) for rows that failed.
    pub failures: Vec<(String, String)>,
}

const TRAIN_PERIODS: usize = 10;
const VALIDATION_PERIODS: usize = 2;

struct SystemSeries {
    train: Vec<f64>,
    test: Vec<f64>,
    train_ic: Vec<f64>,
    test_ic: Vec<f64>,
}

fn prepare_series(system: &str, granularity: usize, seed: u64) -> Result<SystemSeries> {
    use rand::{Rng, SeedableRng};
    let spec = registry::lookup(system)?;
    // Integrate at a fine base step and decimate to the requested
    // granularity; coarse steps are outside the RK4 stability region for
    // the fast systems.
    const BASE: usize = 300;
    let dt = spec.period / BASE as f64;
    let n = (TRAIN_PERIODS + VALIDATION_PERIODS) * BASE;
    let train_ic = crate::integrate::settle_on_attractor(
        spec,
        &spec.default_initial_condition,
        crate::integrate::DEFAULT_TRANSIENT_PERIODS,
    )?;
    // The test trajectory starts from a different, independently settled
    // initial condition.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x7e57);
    let scale = train_ic
        .iter()
        .map(|v| v.abs())
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1e-3);
    let perturbed: Vec<f64> = train_ic
        .iter()
        .map(|v| v + scale * 0.05 * rng.gen_range(-1.0..1.0))
        .collect();
    let test_ic = crate::integrate::settle_on_attractor(spec, &perturbed, 7)?;
    let train = crate::integrate::resample(
        &crate::integrate::integrate_fixed(spec, &train_ic, dt, n)?,
        granularity as f64,
        spec.period,
    )?;
    let test = crate::integrate::resample(
        &crate::integrate::integrate_fixed(spec, &test_ic, dt, n)?,
        granularity as f64,
        spec.period,
    )?;
    Ok(SystemSeries {
        train: train.column(0),
        test: test.column(0),
        train_ic,
        test_ic,
    })
}

/// Per (system, granularity, model): tune on the training trajectory, refit
/// on the test trajectory's first ten periods, score the final two.
pub fn run_benchmark(
    systems: &[String],
    granularities: &[usize],
    models: &[ForecasterKind],
    seed: u64,
) -> Result<BenchmarkReport> {
    let mut jobs = Vec::new();
    for s in systems {
        for &g in granularities {
            jobs.push((s.clone(), g));
        }
    }
    let results: Vec<(String, usize, Result<Vec<BenchmarkRow>>)> = jobs
        .into_par_iter()
        .map(|(system, g)| {
            let out = (|| {
                let series = prepare_series(&system, g, seed)?;
                let split = TRAIN_PERIODS * g;
                let mut rows = Vec::new();
                for &kind in models {
                    let hyper = tune(kind, &series.train, g)?;
                    let mut model = Forecaster::new(kind, hyper);
                    model.fit(&series.test[..split])?;
                    let pred = model.predict(series.test.len() - split)?;
                    let suite =
                        metric_suite(&series.test[split..], &pred, &series.test[..split])?;
                    rows.push(BenchmarkRow {
                        system: system.clone(),
                        granularity: g,
                        model: kind,
                        hyper,
                        suite,
                        train_initial_condition: series.train_ic.clone(),
                        test_initial_condition: series.test_ic.clone(),
                    });
                }
                Ok(rows)
            })();
            (system, g, out)
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut sorted = results;
    sorted.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    for (system, g, out) in sorted {
        match out {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => failures.push((format!("{system}@{g}"), e.to_string())),
        }
    }
    let correlations = correlation_matrix(&rows)?;
    Ok(BenchmarkReport {
        rows,
        correlations,
        failures,
    })
}

fn metric_value(suite: &MetricSuite, metric: &str) -> f64 {
    match metric {
        "mse" => suite.mse,
        "rmse" => suite.rmse,
        "mae" => suite.mae,
        "mape" => suite.mape,
        "smape" => suite.smape,
        "marre" => suite.marre,
        "cv_abs" => suite.cv_abs,
        "one_minus_r2" => suite.one_minus_r2,
        "mase" => suite.mase,
        _ => unreachable!(),
    }
}

pub const METRIC_NAMES: [&str; 9] = [
    "mse",
    "rmse",
    "mae",
    "mape",
    "smape",
    "marre",
    "cv_abs",
    "one_minus_r2",
    "mase",
];

pub const ANNOTATION_NAMES: [&str; 5] = [
    "largest_lyapunov",
    "kaplan_yorke_dimension",
    "pesin_entropy",
    "correlation_dimension",
    "multiscale_entropy",
];

fn annotation_value(system: &str, name: &str) -> Result<f64> {
    let spec = registry::lookup(system)?;
    let ann = spec
        .annotations
        .as_ref()
        .ok_or_else(|| ChaosError::MissingAnnotation {
            fields: vec![system.to_string()],
        })?;
    Ok(match name {
        "largest_lyapunov" => ann.largest_lyapunov,
        "kaplan_yorke_dimension" => ann.kaplan_yorke_dimension,
        "pesin_entropy" => ann.pesin_entropy,
        "correlation_dimension" => ann.correlation_dimension,
        "multiscale_entropy" => ann.multiscale_entropy,
        _ => unreachable!(),
    })
}

fn correlation_matrix(rows: &[BenchmarkRow]) -> Result<BTreeMap<String, BTreeMap<String, f64>>> {
    let mut systems: Vec<String> = rows.iter().map(|r| r.system.clone()).collect();
    systems.sort();
    systems.dedup();
    let mut out = BTreeMap::new();
    if systems.len() < 3 {
        return Ok(out);
    }
    for metric in METRIC_NAMES {
        // Best (minimal) value per system over all models/granularities.
        let best: Vec<f64> = systems
            .iter()
            .map(|s| {
                rows.iter()
                    .filter(|r| &r.system == s)
                    .map(|r| metric_value(&r.suite, metric))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let mut inner = BTreeMap::new();
        for ann in ANNOTATION_NAMES {
            let vals: Vec<f64> = systems
                .iter()
                .map(|s| annotation_value(s, ann))
                .collect::<Result<_>>()?;
            match spearman(&vals, &best) {
                Ok(rho) => {
                    inner.insert(ann.to_string(), rho);
                }
                Err(ChaosError::ZeroVariance) => {}
                Err(e) => return Err(e),
            }
        }
        out.insert(metric.to_string(), inner);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::smape;

    fn model(kind: ForecasterKind, ts: usize) -> Forecaster {
        Forecaster::new(
            kind,
            Hyperparameters {
                timescale: ts,
                ridge: DEFAULT_RIDGE,
            },
        )
    }

    #[test]
    fn predict_before_fit_is_an_error() {
        let m = model(ForecasterKind::NaiveMean, 1);
        assert!(matches!(m.predict(3).unwrap_err(), ChaosError::NotFitted));
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let mut m = model(ForecasterKind::NaiveMean, 1);
        m.fit(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            m.predict(0).unwrap_err(),
            ChaosError::InvalidHorizon(0)
        ));
    }

    #[test]
    fn naive_mean_on_constant_series() {
        let mut m = model(ForecasterKind::NaiveMean, 1);
        m.fit(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(m.predict(3).unwrap(), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn naive_drift_extends_a_ramp() {
        let mut m = model(ForecasterKind::NaiveDrift, 2);
        m.fit(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.predict(2).unwrap(), vec![4.0, 5.0]);
    }

    #[test]
    fn naive_seasonal_is_exact_on_periodic_series() {
        let series: Vec<f64> = [1.0, 5.0, 2.0].iter().cycle().take(12).cloned().collect();
        let mut m = model(ForecasterKind::NaiveSeasonal, 3);
        m.fit(&series).unwrap();
        let pred = m.predict(6).unwrap();
        assert_eq!(pred, vec![1.0, 5.0, 2.0, 1.0, 5.0, 2.0]);
        assert_eq!(smape(&pred, &series[..6].to_vec()).unwrap(), 0.0);
    }

    #[test]
    fn predictions_are_deterministic() {
        let series: Vec<f64> = (0..64).map(|i| (i as f64 * 0.3).sin()).collect();
        for kind in ALL_KINDS {
            let mut m = model(kind, 4);
            m.fit(&series).unwrap();
            assert_eq!(m.predict(10).unwrap(), m.predict(10).unwrap(), "{kind}");
        }
    }

    #[test]
    fn fourier_extrapolates_a_two_tone_signal() {
        // 2 periods of a two-tone signal at 100 points per unit: both
        // tones land exactly on FFT bins. Phase offsets keep signal zeros
        // off the sample grid, where sMAPE is ill-conditioned.
        let tone = |t: f64| {
            (2.0 * std::f64::consts::PI * t + 0.3).sin()
                + 0.5 * (4.0 * std::f64::consts::PI * t + 1.1).sin()
        };
        let n = 200;
        let series: Vec<f64> = (0..n).map(|i| tone(i as f64 / 100.0)).collect();
        let mut m = model(ForecasterKind::Fourier, 2);
        m.fit(&series).unwrap();
        let pred = m.predict(100).unwrap();
        let actual: Vec<f64> = (0..100).map(|i| tone((n + i) as f64 / 100.0)).collect();
        let s = smape(&actual, &pred).unwrap();
        assert!(s < 1.0, "sMAPE {s}");
    }

    #[test]
    fn ridge_ar_recovers_exact_ar2_coefficients() {
        // x_t = 2cos(w) x_{t-1} - x_{t-2} holds exactly for a sampled
        // sinusoid, so the lag-2 regression has a zero-residual solution.
        let w = 0.7;
        let series: Vec<f64> = (0..400).map(|i| (w * i as f64).sin()).collect();
        let mut m = Forecaster::new(
            ForecasterKind::RidgeAr,
            Hyperparameters {
                timescale: 2,
                ridge: 1e-10,
            },
        );
        m.fit(&series).unwrap();
        let State::RidgeAr { coef, .. } = m.state.as_ref().unwrap() else {
            panic!()
        };
        assert!((coef[1] - 2.0 * w.cos()).abs() < 1e-6, "{coef:?}");
        assert!((coef[0] + 1.0).abs() < 1e-6, "{coef:?}");
    }

    #[test]
    fn ridge_ar_matches_normal_equation_oracle() {
        // Independent dense normal-equations solve on a small noisy series.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut series = vec![0.0, 0.5];
        for _ in 0..4000 {
            let prev = series[series.len() - 1];
            series.push(0.9 * prev + 0.1 * rng.gen_range(-1.0..1.0));
        }
        let lag = 2;
        let ridge = 1e-6;
        let mut m = Forecaster::new(
            ForecasterKind::RidgeAr,
            Hyperparameters {
                timescale: lag,
                ridge,
            },
        );
        m.fit(&series).unwrap();
        let State::RidgeAr {
            coef, intercept, ..
        } = m.state.as_ref().unwrap()
        else {
            panic!()
        };
        // Oracle: explicit 3x3 normal equations built with plain loops.
        let rows = series.len() - lag;
        let mut xtx = [[0.0f64; 3]; 3];
        let mut xty = [0.0f64; 3];
        for r in 0..rows {
            let feats = [series[r], series[r + 1], 1.0];
            let y = series[r + lag];
            for i in 0..3 {
                for j in 0..3 {
                    xtx[i][j] += feats[i] * feats[j];
                }
                xty[i] += feats[i] * y;
            }
        }
        xtx[0][0] += ridge;
        xtx[1][1] += ridge;
        let a = nalgebra::Matrix3::from_fn(|i, j| xtx[i][j]);
        let b = nalgebra::Vector3::from_row_slice(&xty);
        let sol = a.lu().solve(&b).unwrap();
        assert!((coef[0] - sol[0]).abs() < 1e-9);
        assert!((coef[1] - sol[1]).abs() < 1e-9);
        assert!((intercept - sol[2]).abs() < 1e-9);
        // The data-generating coefficient on the most recent lag.
        assert!((coef[1] - 0.9).abs() < 0.05, "{coef:?}");
    }

    #[test]
    fn huge_ridge_approaches_the_mean_forecast() {
        let series: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin() * 2.0).collect();
        // With the penalty dominating, the lag coefficients vanish and the
        // unpenalized intercept converges to the mean of the targets.
        let targets = &series[3..];
        let mean = targets.iter().sum::<f64>() / targets.len() as f64;
        let mut m = Forecaster::new(
            ForecasterKind::RidgeAr,
            Hyperparameters {
                timescale: 3,
                ridge: 1e12,
            },
        );
        m.fit(&series).unwrap();
        let pred = m.predict(5).unwrap();
        for p in pred {
            assert!((p - mean).abs() < 1e-6, "{p} vs mean {mean}");
        }
    }

    #[test]
    fn grid_matches_both_granularities() {
        assert_eq!(timescale_grid(15), vec![1, 5, 8, 15]);
        assert_eq!(timescale_grid(100), vec![1, 5, 50, 100]);
    }

    #[test]
    fn tune_finds_the_true_season() {
        // Period-20 sawtooth, 14 periods of data.
        let series: Vec<f64> = (0..280).map(|i| (i % 20) as f64).collect();
        let hyper = tune(ForecasterKind::NaiveSeasonal, &series, 20).unwrap();
        assert_eq!(hyper.timescale, 20);
    }

    #[test]
    fn tune_rejects_short_series() {
        let series = vec![0.0; 50];
        assert!(matches!(
            tune(ForecasterKind::NaiveMean, &series, 20).unwrap_err(),
            ChaosError::SeriesTooShort { .. }
        ));
    }

    #[test]
    fn backtest_on_a_ramp_with_drift_is_exact() {
        let series: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let errs = backtest(
            ForecasterKind::NaiveDrift,
            Hyperparameters {
                timescale: 2,
                ridge: DEFAULT_RIDGE,
            },
            &series,
            3,
        )
        .unwrap();
        assert_eq!(errs.len(), series.len());
        assert!(errs.iter().all(|&e| e >= 0.0));
        assert!(errs.iter().all(|&e| e < 1e-9), "{errs:?}");
    }

    #[test]
    fn backtest_output_length_and_prefill() {
        let series: Vec<f64> = (0..40).map(|i| (i as f64 * 0.5).sin()).collect();
        let errs = backtest(
            ForecasterKind::NaiveMean,
            Hyperparameters::default(),
            &series,
            5,
        )
        .unwrap();
        assert_eq!(errs.len(), 40);
        // Prefix entries carry the median of the computed errors.
        let mut sorted: Vec<f64> = errs[8..].to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(errs[0], sorted[sorted.len() / 2]);
    }
}
