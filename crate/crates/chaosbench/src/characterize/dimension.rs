//! Grassberger-Procaccia correlation dimension.

use crate::error::{ChaosError, Result};
use crate::trajectory::Trajectory;

pub const DEFAULT_FIT_QUANTILES: (f64, f64) = (0.05, 0.5);
/// Band used for annotations. The default band reaches radii comparable to
/// the attractor size, where boundary effects flatten log C(r) and bias the
/// slope low; restricting the fit to the smallest distances keeps it inside
/// the scaling region.
pub const SCALING_FIT_QUANTILES: (f64, f64) = (0.001, 0.05);
const MIN_POINTS: usize = 500;
const MIN_PAIRS: usize = 1000;
const N_RADII: usize = 16;

/// Slope of log C(r) vs log r, fitted over the radius band between the
/// given quantiles of the pairwise-distance distribution. Pairs closer in
/// time than `theiler_window` samples are excluded.
pub fn correlation_dimension(
    traj: &Trajectory,
    theiler_window: usize,
    fit_quantiles: (f64, f64),
) -> Result<f64> {
    let n = traj.len();
    if n < MIN_POINTS {
        return Err(ChaosError::SeriesTooShort {
            needed: MIN_POINTS,
            got: n,
        });
    }
    let (q_lo, q_hi) = fit_quantiles;
    if !(0.0 < q_lo && q_lo < q_hi && q_hi < 1.0) {
        return Err(ChaosError::InvalidArgument(
            "fit quantiles must satisfy 0 < lo < hi < 1".into(),
        ));
    }
    let d = traj.dim;
    let mut distances = Vec::new();
    for i in 0..n {
        let a = traj.row(i);
        for j in (i + 1 + theiler_window)..n {
            let b = traj.row(j);
            let mut acc = 0.0;
            for k in 0..d {
                let diff = a[k] - b[k];
                acc += diff * diff;
            }
            distances.push(acc.sqrt());
        }
    }
    if distances.len() < MIN_PAIRS {
        return Err(ChaosError::InsufficientPairs {
            remaining: distances.len(),
        });
    }
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = distances.len();
    let r_lo = distances[((q_lo * m as f64) as usize).min(m - 1)].max(f64::MIN_POSITIVE);
    let r_hi = distances[((q_hi * m as f64) as usize).min(m - 1)];
    if !(r_hi > r_lo) {
        return Err(ChaosError::InvalidArgument(
            "degenerate radius band (constant trajectory?)".into(),
        ));
    }
    // Log-spaced radii; C(r) by binary search in the sorted distances.
    let log_lo = r_lo.ln();
    let log_step = (r_hi.ln() - log_lo) / (N_RADII - 1) as f64;
    let mut xs = Vec::with_capacity(N_RADII);
    let mut ys = Vec::with_capacity(N_RADII);
    for k in 0..N_RADII {
        let log_r = log_lo + k as f64 * log_step;
        let r = log_r.exp();
        let count = distances.partition_point(|&dist| dist <= r);
        if count == 0 {
            continue;
        }
        xs.push(log_r);
        ys.push((count as f64 / m as f64).ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in x.iter().zip(y) {
        num += (a - mx) * (b - my);
        den += (a - mx) * (a - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Provenance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(points: Vec<f64>, dim: usize) -> Trajectory {
        let n = points.len() / dim;
        Trajectory::new(
            (0..n).map(|i| i as f64).collect(),
            points,
            dim,
            1.0,
            Provenance::deterministic("cloud", &[]),
        )
    }

    #[test]
    fn line_segment_has_dimension_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let traj = cloud(pts, 1);
        let dim = correlation_dimension(&traj, 0, SCALING_FIT_QUANTILES).unwrap();
        assert!((dim - 1.0).abs() < 0.05, "dimension {dim}");
    }

    #[test]
    fn unit_square_has_dimension_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<f64> = (0..4000).map(|_| rng.gen::<f64>()).collect();
        let traj = cloud(pts, 2);
        let dim = correlation_dimension(&traj, 0, SCALING_FIT_QUANTILES).unwrap();
        assert!((dim - 2.0).abs() < 0.1, "dimension {dim}");
    }

    #[test]
    fn slope_is_invariant_under_global_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<f64> = (0..3000).map(|_| rng.gen::<f64>()).collect();
        let a = correlation_dimension(&cloud(pts.clone(), 2), 0, SCALING_FIT_QUANTILES).unwrap();
        let scaled: Vec<f64> = pts.iter().map(|v| 10.0 * v).collect();
        let b = correlation_dimension(&cloud(scaled, 2), 0, SCALING_FIT_QUANTILES).unwrap();
        // Radii are rebuilt in log space, so counts can shift by a few
        // boundary pairs; invariance holds only approximately.
        assert!((a - b).abs() < 1e-2, "{a} vs {b}");
    }

    #[test]
    fn theiler_window_can_exhaust_pairs() {
        let pts: Vec<f64> = (0..600).map(|i| i as f64).collect();
        let traj = cloud(pts, 1);
        let err = correlation_dimension(&traj, 600, DEFAULT_FIT_QUANTILES).unwrap_err();
        assert!(matches!(err, crate::error::ChaosError::InsufficientPairs { .. }));
    }

    #[test]
    fn lorenz_attractor_dimension_is_near_two() {
        let spec = crate::registry::lookup("Lorenz").unwrap();
        let settled = crate::integrate::settle_on_attractor(
            spec,
            &spec.default_initial_condition,
            100,
        )
        .unwrap();
        let dt = spec.period / 50.0;
        let traj = crate::integrate::integrate_fixed(spec, &settled, dt, 5000).unwrap();
        let dim = correlation_dimension(&traj, 50, SCALING_FIT_QUANTILES).unwrap();
        assert!((dim - 2.05).abs() < 0.1, "Lorenz correlation dimension {dim}");
    }
}
