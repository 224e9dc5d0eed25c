//! Sample entropy and its multiscale aggregate.

use crate::error::{ChaosError, Result};
use crate::trajectory::Trajectory;

pub const DEFAULT_M: usize = 2;
pub const DEFAULT_R_FACTOR: f64 = 0.2;
pub const DEFAULT_SCALES: &[usize] = &[1, 2, 3, 4, 5];
const MIN_COARSE_POINTS: usize = 100;

/// Sample entropy: -ln of the conditional template-match ratio for
/// templates of length m vs m+1, Chebyshev distance, self-matches excluded.
pub fn sample_entropy(series: &[f64], m: usize, tolerance: f64) -> Result<f64> {
    let n = series.len();
    if n < m + 2 {
        return Err(ChaosError::SeriesTooShort {
            needed: m + 2,
            got: n,
        });
    }
    // Both template lengths range over the same n - m start indices so the
    // ratio is a proper conditional probability.
    let n_templates = n - m;
    let mut matches_m = 0u64;
    let mut matches_m1 = 0u64;
    for i in 0..n_templates {
        for j in (i + 1)..n_templates {
            let mut cheb = 0.0f64;
            for k in 0..m {
                cheb = cheb.max((series[i + k] - series[j + k]).abs());
            }
            if cheb <= tolerance {
                matches_m += 1;
                if (series[i + m] - series[j + m]).abs() <= tolerance {
                    matches_m1 += 1;
                }
            }
        }
    }
    if matches_m == 0 || matches_m1 == 0 {
        return Err(ChaosError::UndefinedEntropy { m, scale: 1 });
    }
    Ok(-((matches_m1 as f64) / (matches_m as f64)).ln())
}

/// Non-overlapping window means at the given scale.
fn coarse_grain(series: &[f64], scale: usize) -> Vec<f64> {
    series
        .chunks_exact(scale)
        .map(|c| c.iter().sum::<f64>() / scale as f64)
        .collect()
}

/// Multiscale entropy: per coordinate, sample entropy of each
/// coarse-grained series averaged over scales; the median across
/// coordinates is returned. The tolerance is `r_factor` times the
/// coordinate's standard deviation.
pub fn multiscale_entropy(
    traj: &Trajectory,
    m: usize,
    r_factor: f64,
    scales: &[usize],
) -> Result<f64> {
    if scales.is_empty() || scales.contains(&0) {
        return Err(ChaosError::InvalidArgument("scales must be positive".into()));
    }
    if r_factor <= 0.0 {
        return Err(ChaosError::InvalidArgument("r_factor must be positive".into()));
    }
    let stds = traj.std();
    let mut per_coordinate = Vec::with_capacity(traj.dim);
    for j in 0..traj.dim {
        let series = traj.column(j);
        let tolerance = r_factor * stds[j];
        let mut acc = 0.0;
        for &scale in scales {
            let coarse = coarse_grain(&series, scale);
            if coarse.len() < MIN_COARSE_POINTS {
                return Err(ChaosError::SeriesTooShort {
                    needed: MIN_COARSE_POINTS * scale,
                    got: series.len(),
                });
            }
            let e = match sample_entropy(&coarse, m, tolerance) {
                Ok(e) => e,
                Err(ChaosError::UndefinedEntropy { .. }) => {
                    return Err(ChaosError::UndefinedEntropy { m, scale })
                }
                Err(e) => return Err(e),
            };
            acc += e;
        }
        per_coordinate.push(acc / scales.len() as f64);
    }
    per_coordinate.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = per_coordinate.len();
    Ok(if k % 2 == 1 {
        per_coordinate[k / 2]
    } else {
        0.5 * (per_coordinate[k / 2 - 1] + per_coordinate[k / 2])
    })
}
