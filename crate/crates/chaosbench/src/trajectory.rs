//! Uniformly sampled multivariate time series with provenance.

use crate::error::{ChaosError, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Where a trajectory came from: enough to regenerate it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub system: String,
    pub initial_condition: Vec<f64>,
    pub seed: Option<u64>,
    pub noise_amplitude: f64,
}

impl Provenance {
    pub fn deterministic(system: &str, ic: &[f64]) -> Self {
        Provenance {
            system: system.to_string(),
            initial_condition: ic.to_vec(),
            seed: None,
            noise_amplitude: 0.0,
        }
    }
}

/// A uniformly sampled trajectory: `len` rows of `dim` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Row-major state matrix, `times.len() * dim` entries.
    pub states: Vec<f64>,
    pub dim: usize,
    /// Points per dominant period.
    pub granularity: f64,
    pub provenance: Provenance,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        states: Vec<f64>,
        dim: usize,
        granularity: f64,
        provenance: Provenance,
    ) -> Self {
        debug_assert_eq!(states.len(), times.len() * dim);
        Trajectory {
            times,
            states,
            dim,
            granularity,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    pub fn last_state(&self) -> &[f64] {
        self.row(self.len() - 1)
    }

    /// Copy of coordinate `j` as a standalone series.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.states[i * self.dim + j]).collect()
    }

    pub fn dt(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
    }

    /// Per-coordinate mean.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for i in 0..self.len() {
            for (acc, v) in m.iter_mut().zip(self.row(i)) {
                *acc += v;
            }
        }
        let n = self.len() as f64;
        m.iter_mut().for_each(|v| *v /= n);
        m
    }

    /// Per-coordinate population standard deviation.
    pub fn std(&self) -> Vec<f64> {
        let mean = self.mean();
        let mut s = vec![0.0; self.dim];
        for i in 0..self.len() {
            for ((acc, v), mu) in s.iter_mut().zip(self.row(i)).zip(&mean) {
                let d = v - mu;
                *acc += d * d;
            }
        }
        let n = self.len() as f64;
        s.iter_mut().for_each(|v| *v = (*v / n).sqrt());
        s
    }

    /// Keep only the given coordinate (univariate view).
    pub fn univariate(&self, j: usize) -> Trajectory {
        Trajectory {
            times: self.times.clone(),
            states: self.column(j),
            dim: 1,
            granularity: self.granularity,
            provenance: self.provenance.clone(),
        }
    }

    /// Rows `start..end` as a new trajectory.
    pub fn slice(&self, start: usize, end: usize) -> Trajectory {
        Trajectory {
            times: self.times[start..end].to_vec(),
            states: self.states[start * self.dim..end * self.dim].to_vec(),
            dim: self.dim,
            granularity: self.granularity,
            provenance: self.provenance.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.states.len() != self.times.len() * self.dim {
            return Err(ChaosError::DimensionMismatch {
                expected: self.times.len() * self.dim,
                got: self.states.len(),
            });
        }
        if !self.times.iter().all(|t| t.is_finite())
            || !self.states.iter().all(|x| x.is_finite())
        {
            return Err(ChaosError::NonFinite {
                context: "trajectory".into(),
            });
        }
        for w in self.times.windows(2) {
            if w[1] <= w[0] {
                return Err(ChaosError::InvalidArgument(
                    "times not strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// Max relative deviation from uniform spacing.
    pub fn spacing_deviation(&self) -> f64 {
        let dt = self.dt();
        if dt == 0.0 {
            return 0.0;
        }
        self.times
            .windows(2)
            .map(|w| ((w[1] - w[0]) - dt).abs() / dt)
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,x0..x{d-1}`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "t")?;
        for j in 0..self.dim {
            write!(w, ",x{j}")?;
        }
        writeln!(w)?;
        for i in 0..self.len() {
            write!(w, "{}", fmt17(self.times[i]))?;
            for v in self.row(i) {
                write!(w, ",{}", fmt17(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, provenance: Provenance, granularity: f64) -> Result<Self> {
        let mut times = Vec::new();
        let mut states = Vec::new();
        let mut dim = 0usize;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            if lineno == 0 {
                dim = line.split(',').count() - 1;
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let t: f64 = fields
                .next()
                .ok_or_else(|| ChaosError::InvalidArgument("empty CSV row".into()))?
                .parse()
                .map_err(|e| ChaosError::InvalidArgument(format!("bad CSV number: {e}")))?;
            times.push(t);
            for f in fields {
                states.push(
                    f.parse::<f64>()
                        .map_err(|e| ChaosError::InvalidArgument(format!("bad CSV number: {e}")))?,
                );
            }
        }
        if states.len() != times.len() * dim {
            return Err(ChaosError::InvalidArgument("ragged CSV rows".into()));
        }
        Ok(Trajectory {
            times,
            states,
            dim,
            granularity,
            provenance,
        })
    }
}

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
