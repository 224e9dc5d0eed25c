//! Power spectra, random-phase surrogates, and surrogate significance
//! testing, used to select each system's integration timestep and
//! dominant period.

use crate::error::{ChaosError, Result};
use crate::integrate;
use crate::registry::SystemSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

pub const DEFAULT_N_SURROGATES: usize = 1000;
pub const DEFAULT_QUANTILE: f64 = 0.95;
pub const DEFAULT_OVERSAMPLE_FACTOR: usize = 16;

/// Power spectrum with per-frequency surrogate significance thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTestResult {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    pub threshold: Vec<f64>,
    pub significant: Vec<bool>,
    pub dominant_frequency: Option<f64>,
    pub highest_significant_frequency: Option<f64>,
}

fn fft_forward(signal: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new()
        .plan_fft_forward(signal.len())
        .process(&mut buf);
    buf
}

/// One-sided periodogram normalized so the total power over nonzero
/// frequencies equals the (biased) signal variance. The zero-frequency
/// entry holds the squared mean.
pub fn power_spectrum(signal: &[f64], sample_rate: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if signal.len() < 64 {
        return Err(ChaosError::SeriesTooShort {
            needed: 64,
            got: signal.len(),
        });
    }
    if sample_rate <= 0.0 {
        return Err(ChaosError::InvalidArgument("sample_rate must be positive".into()));
    }
    let n = signal.len();
    let spectrum = fft_forward(signal);
    let n_bins = n / 2 + 1;
    let norm = 1.0 / (n as f64 * n as f64);
    let mut freqs = Vec::with_capacity(n_bins);
    let mut power = Vec::with_capacity(n_bins);
    for (k, c) in spectrum.iter().take(n_bins).enumerate() {
        freqs.push(k as f64 * sample_rate / n as f64);
        // Double interior bins so the one-sided sum satisfies Parseval.
        let two_sided = c.norm_sqr() * norm;
        let p = if k == 0 || (n % 2 == 0 && k == n / 2) {
            two_sided
        } else {
            2.0 * two_sided
        };
        power.push(p);
    }
    Ok((freqs, power))
}

/// Random-phase surrogates: identical amplitude spectrum, phases drawn
/// uniformly, Hermitian symmetry enforced so outputs are real.
pub fn phase_surrogates(signal: &[f64], n_surrogates: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n_surrogates == 0 {
        return Err(ChaosError::InvalidArgument("need at least one surrogate".into()));
    }
    if signal.len() < 2 {
        return Err(ChaosError::SeriesTooShort {
            needed: 2,
            got: signal.len(),
        });
    }
    let n = signal.len();
    let spectrum = fft_forward(signal);
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_surrogates);
    for _ in 0..n_surrogates {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        buf[0] = spectrum[0]; // keep the mean
        let half = n / 2;
        for k in 1..=half {
            if n % 2 == 0 && k == half {
                // Nyquist bin must stay real.
                buf[k] = spectrum[k];
            } else {
                let phase: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
                let amp = spectrum[k].norm();
                buf[k] = Complex::from_polar(amp, phase);
                buf[n - k] = buf[k].conj();
            }
        }
        ifft.process(&mut buf);
        out.push(buf.iter().map(|c| c.re / n as f64).collect());
    }
    Ok(out)
}

/// Shuffle surrogates: the same sample values in a random order. They
/// preserve the amplitude distribution but destroy all temporal structure,
/// giving a flat-spectrum null whose per-frequency power genuinely varies
/// across the ensemble. (Phase surrogates preserve the periodogram exactly,
/// so a pointwise power comparison against them carries no signal.)
fn shuffle_surrogates(signal: &[f64], n_surrogates: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_surrogates)
        .map(|_| {
            let mut s = signal.to_vec();
            s.shuffle(&mut rng);
            s
        })
        .collect()
}

/// Surrogate significance test: a frequency is significant when its power
/// exceeds the per-frequency `quantile` of the surrogate ensemble powers.
pub fn significant_frequencies(
    signal: &[f64],
    sample_rate: f64,
    n_surrogates: usize,
    quantile: f64,
    seed: u64,
) -> Result<SpectrumTestResult> {
    if !(0.0..1.0).contains(&quantile) || quantile <= 0.0 {
        return Err(ChaosError::InvalidArgument("quantile must be in (0, 1)".into()));
    }
    let (frequencies, power) = power_spectrum(signal, sample_rate)?;
    let surrogates = shuffle_surrogates(signal, n_surrogates, seed);
    let n_bins = power.len();
    // Per-frequency surrogate power samples.
    let mut samples = vec![Vec::with_capacity(n_surrogates); n_bins];
    for s in &surrogates {
        let (_, sp) = power_spectrum(s, sample_rate)?;
        for (bin, p) in sp.into_iter().enumerate() {
            samples[bin].push(p);
        }
    }
    let mut threshold = Vec::with_capacity(n_bins);
    for bin_samples in &mut samples {
        bin_samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let idx = ((quantile * bin_samples.len() as f64).ceil() as usize)
            .clamp(1, bin_samples.len())
            - 1;
        threshold.push(bin_samples[idx]);
    }
    let mut significant = vec![false; n_bins];
    for k in 1..n_bins {
        significant[k] = power[k] > threshold[k];
    }
    let dominant_frequency = (1..n_bins)
        .filter(|&k| significant[k])
        .max_by(|&a, &b| power[a].partial_cmp(&power[b]).unwrap())
        .map(|k| frequencies[k]);
    let highest_significant_frequency = (1..n_bins)
        .filter(|&k| significant[k])
        .last()
        .map(|k| frequencies[k]);
    Ok(SpectrumTestResult {
        frequencies,
        power,
        threshold,
        significant,
        dominant_frequency,
        highest_significant_frequency,
    })
}

/// Select (dt, period) for a system from a settled pilot trajectory:
/// period = 1 / dominant frequency, dt = 1 / (oversample * highest
/// significant frequency).
pub fn select_timescales(spec: &SystemSpec, oversample_factor: usize, seed: u64) -> Result<(f64, f64)> {
    if oversample_factor == 0 {
        return Err(ChaosError::InvalidArgument("oversample_factor must be >= 1".into()));
    }
    let settled = integrate::settle_on_attractor(
        spec,
        &spec.default_initial_condition,
        integrate::DEFAULT_TRANSIENT_PERIODS,
    )?;
    // Pilot: 50 nominal periods of the first coordinate.
    let n = (50.0 * spec.period / spec.dt).round() as usize;
    let traj = integrate::integrate_fixed(spec, &settled, spec.dt, n.max(64))?;
    let pilot = traj.column(0);
    let sample_rate = 1.0 / spec.dt;
    let result = significant_frequencies(&pilot, sample_rate, DEFAULT_N_SURROGATES, DEFAULT_QUANTILE, seed)?;
    let dominant = result
        .dominant_frequency
        .ok_or(ChaosError::NoSignificantFrequency)?;
    let highest = result
        .highest_significant_frequency
        .ok_or(ChaosError::NoSignificantFrequency)?;
    let period = 1.0 / dominant;
    let dt = 1.0 / (oversample_factor as f64 * highest);
    Ok((dt, period))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, sample_rate: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (std::f64::consts::TAU * freq * i as f64 / sample_rate).sin())
            .collect()
    }

    #[test]
    fn monochromatic_peak_lands_on_the_right_bin() {
        let signal = sine(5.0, 100.0, 1000);
        let (freqs, power) = power_spectrum(&signal, 100.0).unwrap();
        let argmax = (1..power.len())
            .max_by(|&a, &b| power[a].partial_cmp(&power[b]).unwrap())
            .unwrap();
        assert!((freqs[argmax] - 5.0).abs() < 1e-9);
    }

    #[test]
    fn constant_signal_has_no_ac_power() {
        let signal = vec![3.25; 256];
        let (_, power) = power_spectrum(&signal, 1.0).unwrap();
        for p in &power[1..] {
            assert!(p.abs() < 1e-18);
        }
    }

    #[test]
    fn parseval_holds_on_white_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let signal: Vec<f64> = (0..1024).map(|_| rng.gen::<f64>() - 0.5).collect();
        let (_, power) = power_spectrum(&signal, 1.0).unwrap();
        let total: f64 = power[1..].iter().sum();
        let mean = signal.iter().sum::<f64>() / signal.len() as f64;
        let var = signal.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / signal.len() as f64;
        assert!((total - var).abs() / var < 1e-9, "{total} vs {var}");
    }

    #[test]
    fn surrogates_preserve_amplitude_spectrum_and_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let signal: Vec<f64> = (0..512)
            .map(|i| (0.07 * i as f64).sin() + 0.3 * rng.gen::<f64>())
            .collect();
        let (_, original) = power_spectrum(&signal, 1.0).unwrap();
        let surrogates = phase_surrogates(&signal, 3, 99).unwrap();
        let scale = original.iter().cloned().fold(0.0, f64::max);
        let mean = signal.iter().sum::<f64>() / signal.len() as f64;
        for s in &surrogates {
            let (_, sp) = power_spectrum(s, 1.0).unwrap();
            for (a, b) in original.iter().zip(&sp) {
                assert!((a - b).abs() / scale < 1e-9);
            }
            let smean = s.iter().sum::<f64>() / s.len() as f64;
            assert!((smean - mean).abs() < 1e-9);
        }
    }

    #[test]
    fn different_seeds_give_different_surrogates() {
        let signal = sine(3.0, 64.0, 256);
        let a = &phase_surrogates(&signal, 1, 1).unwrap()[0];
        let b = &phase_surrogates(&signal, 1, 2).unwrap()[0];
        let max_diff = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(max_diff > 0.0);
    }

    #[test]
    fn tone_in_noise_is_significant_and_dominant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1000;
        let signal: Vec<f64> = (0..n)
            .map(|i| {
                (std::f64::consts::TAU * 5.0 * i as f64 / 100.0).sin()
                    + 0.05 * (rng.gen::<f64>() - 0.5)
            })
            .collect();
        let result = significant_frequencies(&signal, 100.0, 200, 0.95, 4).unwrap();
        let dom = result.dominant_frequency.unwrap();
        assert!((dom - 5.0).abs() < 0.11, "dominant {dom}");
    }

    #[test]
    fn white_noise_false_positive_rate_matches_quantile() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 1024;
        let signal: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        let quantile = 0.95;
        let result = significant_frequencies(&signal, 1.0, 400, quantile, 6).unwrap();
        let tested = result.significant.len() - 1;
        let flagged = result.significant.iter().filter(|&&s| s).count();
        let rate = flagged as f64 / tested as f64;
        let expected = 1.0 - quantile;
        // 3 Monte Carlo standard deviations of a binomial proportion.
        let std = (expected * (1.0 - expected) / tested as f64).sqrt();
        assert!(
            (rate - expected).abs() < 3.0 * std,
            "false positive rate {rate}, expected {expected} +- {}",
            3.0 * std
        );
    }

    #[test]
    fn two_tone_ordering_dominant_vs_highest() {
        let n = 2000;
        let signal: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / 100.0;
                2.0 * (std::f64::consts::TAU * 3.0 * t).sin()
                    + (std::f64::consts::TAU * 7.0 * t).sin()
            })
            .collect();
        let result = significant_frequencies(&signal, 100.0, 200, 0.95, 7).unwrap();
        assert!((result.dominant_frequency.unwrap() - 3.0).abs() < 0.06);
        assert!((result.highest_significant_frequency.unwrap() - 7.0).abs() < 0.06);
    }

    #[test]
    fn significance_test_is_reproducible() {
        let signal = sine(2.0, 50.0, 512);
        let a = significant_frequencies(&signal, 50.0, 100, 0.95, 11).unwrap();
        let b = significant_frequencies(&signal, 50.0, 100, 0.95, 11).unwrap();
        assert_eq!(a.threshold, b.threshold);
        assert_eq!(a.significant, b.significant);
    }

    #[test]
    fn torus_period_matches_the_analytic_tone() {
        let spec = crate::registry::lookup("Torus").unwrap();
        let (dt, period) = select_timescales(spec, DEFAULT_OVERSAMPLE_FACTOR, 13).unwrap();
        // First coordinate oscillates at exactly 0.2 Hz.
        let n_pilot = (50.0 * spec.period / spec.dt).round() as usize;
        let bin = 1.0 / (n_pilot as f64 * spec.dt);
        let f_measured = 1.0 / period;
        assert!(
            (f_measured - 0.2).abs() <= bin + 1e-12,
            "measured frequency {f_measured}, bin width {bin}"
        );
        assert!(period / dt >= 16.0 - 1e-9);
    }
}
