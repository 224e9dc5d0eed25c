//! Mathematical annotations: Lyapunov spectra and derived quantities,
//! correlation dimension, and multiscale entropy.

mod dimension;
mod entropy;
mod lyapunov;

pub use dimension::{correlation_dimension, DEFAULT_FIT_QUANTILES, SCALING_FIT_QUANTILES};
pub use entropy::{multiscale_entropy, sample_entropy, DEFAULT_M, DEFAULT_R_FACTOR, DEFAULT_SCALES};
pub use lyapunov::{
    lyapunov_spectrum, LyapunovSpectrum, DEFAULT_REPLICATES, DEFAULT_TOLERANCE,
    POINTS_PER_PERIOD,
};

use crate::registry::{SystemAnnotations, SystemSpec};
use crate::error::Result;

/// Kaplan-Yorke dimension of a descending-sorted exponent list.
pub fn kaplan_yorke_of(exponents: &[f64]) -> f64 {
    if exponents.is_empty() || exponents[0] < 0.0 {
        return 0.0;
    }
    let mut cumulative = 0.0;
    let mut j = 0usize;
    let mut sum_j = 0.0;
    for (i, l) in exponents.iter().enumerate() {
        cumulative += l;
        if cumulative >= 0.0 {
            j = i + 1;
            sum_j = cumulative;
        }
    }
    if j == exponents.len() {
        return exponents.len() as f64;
    }
    j as f64 + sum_j / exponents[j].abs()
}

/// Sum of strictly positive exponents (upper bound on metric entropy).
pub fn pesin_bound(exponents: &[f64]) -> f64 {
    exponents.iter().filter(|&&l| l > 0.0).sum()
}

impl LyapunovSpectrum {
    pub fn kaplan_yorke(&self) -> f64 {
        kaplan_yorke_of(&self.exponents)
    }

    pub fn pesin_bound(&self) -> f64 {
        pesin_bound(&self.exponents)
    }
}

/// Compute the full annotation record for a system.
pub fn annotate(
    spec: &SystemSpec,
    n_periods: usize,
    replicates: usize,
    seed: u64,
    tol: f64,
) -> Result<SystemAnnotations> {
    let spectrum = lyapunov_spectrum(spec, n_periods, replicates, seed, tol)?;
    let settled = crate::integrate::settle_on_attractor(
        spec,
        &spec.default_initial_condition,
        crate::integrate::DEFAULT_TRANSIENT_PERIODS,
    )?;
    // 100 periods at 50 points per period: long enough to cover the
    // attractor, coarse enough that the Theiler window (one period) still
    // leaves plenty of pairs. Integrated at the fine step and decimated so
    // stiff systems stay inside the RK4 stability region.
    let corr_points_per_period = 50;
    let dt = spec.period / POINTS_PER_PERIOD as f64;
    let fine = crate::integrate::integrate_fixed(spec, &settled, dt, 100 * POINTS_PER_PERIOD)?;
    let traj = crate::integrate::resample(&fine, corr_points_per_period as f64, spec.period)?;
    let corr_dim = correlation_dimension(&traj, corr_points_per_period, SCALING_FIT_QUANTILES)?;
    // Entropy on ten periods at 100 points per period, decimated from the
    // same fine trajectory.
    let entropy_traj = crate::integrate::resample(
        &fine.slice(0, 10 * POINTS_PER_PERIOD),
        100.0,
        spec.period,
    )?;
    let mse = multiscale_entropy(&entropy_traj, DEFAULT_M, DEFAULT_R_FACTOR, DEFAULT_SCALES)?;
    let largest = spectrum
        .exponents
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SystemAnnotations {
        largest_lyapunov: largest,
        kaplan_yorke_dimension: spectrum.kaplan_yorke(),
        pesin_entropy: spectrum.pesin_bound(),
        lyapunov_spectrum: spectrum.exponents,
        correlation_dimension: corr_dim,
        multiscale_entropy: mse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kaplan_yorke_textbook_case() {
        assert!((kaplan_yorke_of(&[1.0, 0.0, -2.0]) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn kaplan_yorke_all_negative_is_zero() {
        assert_eq!(kaplan_yorke_of(&[-0.5, -1.0]), 0.0);
    }

    #[test]
    fn kaplan_yorke_all_nonnegative_is_full_dimension() {
        assert_eq!(kaplan_yorke_of(&[0.5, 0.2, 0.1]), 3.0);
    }

    #[test]
    fn kaplan_yorke_stays_in_range() {
        for spectrum in [
            vec![0.9, 0.0, -14.6],
            vec![2.0, 1.0, -0.5, -9.0],
            vec![-0.1, -0.2],
            vec![0.1, -0.05],
        ] {
            let d = kaplan_yorke_of(&spectrum);
            assert!(d >= 0.0 && d <= spectrum.len() as f64, "{spectrum:?} -> {d}");
        }
    }

    #[test]
    fn pesin_bound_cases() {
        assert!((pesin_bound(&[0.9, 0.0, -14.6]) - 0.9).abs() < 1e-12);
        assert_eq!(pesin_bound(&[-1.0, -2.0]), 0.0);
        assert!((pesin_bound(&[0.3, 0.1, 0.0, -5.0]) - 0.4).abs() < 1e-12);
    }
}
