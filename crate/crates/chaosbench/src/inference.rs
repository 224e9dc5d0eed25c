//! Sparse symbolic model recovery: polynomial feature libraries and
//! sequentially thresholded least squares (STLSQ).
//!
//! The regression task is states → time derivatives: inputs are points on
//! the attractor, targets are the exact analytic right-hand side evaluated
//! at those points. STLSQ alternates ridge regression with hard coefficient
//! thresholding until the active set stabilizes, one target variable at a
//! time.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ChaosError, Result};
use crate::integrate;
use crate::metrics::{smape, spearman};
use crate::registry::{self, SystemSpec};

pub const DEFAULT_DEGREE: usize = 3;
pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_RIDGE: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 20;
/// Sampling rate of regression datasets, points per period.
pub const REGRESSION_GRANULARITY: usize = 15;
/// Length of each regression split, periods.
pub const REGRESSION_PERIODS: usize = 10;

/// Fine integration rate (points per period); trajectories are decimated to
/// [`REGRESSION_GRANULARITY`] so stiff systems stay inside the RK4
/// stability region.
const BASE: usize = 300;

/// Which trajectory a regression dataset was sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

/// States and exact time derivatives sampled along one settled trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionDataset {
    pub system: String,
    pub split: Split,
    /// Row-major `n × dim` state matrix.
    pub inputs: Vec<f64>,
    /// Row-major `n × dim` derivative matrix (analytic rhs at each input).
    pub targets: Vec<f64>,
    /// Sample times (needed to evaluate nonautonomous right-hand sides).
    pub times: Vec<f64>,
    pub n: usize,
    pub dim: usize,
    pub granularity: f64,
    pub periods: usize,
    pub initial_condition: Vec<f64>,
}

impl RegressionDataset {
    pub fn input_row(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn target_row(&self, i: usize) -> &[f64] {
        &self.targets[i * self.dim..(i + 1) * self.dim]
    }

    /// Column `j` of the target matrix as a standalone series.
    pub fn target_column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.targets[i * self.dim + j]).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.len() != self.n * self.dim || self.targets.len() != self.inputs.len() {
            return Err(ChaosError::DimensionMismatch {
                expected: self.n * self.dim,
                got: self.inputs.len().min(self.targets.len()),
            });
        }
        Ok(())
    }
}

/// Train and test regression datasets from two distinct initial conditions.
#[derive(Debug, Clone, Serialize)]
pub struct RegressionBundle {
    pub train: RegressionDataset,
    pub test: RegressionDataset,
}

fn sample_split(
    spec: &SystemSpec,
    ic: &[f64],
    granularity: usize,
    periods: usize,
    split: Split,
) -> Result<RegressionDataset> {
    let dt = spec.period / BASE as f64;
    let fine = integrate::integrate_fixed(spec, ic, dt, periods * BASE)?;
    let traj = integrate::resample(&fine, granularity as f64, spec.period)?;
    let n = periods * granularity;
    let d = spec.dimension;
    let mut inputs = Vec::with_capacity(n * d);
    let mut targets = Vec::with_capacity(n * d);
    let mut times = Vec::with_capacity(n);
    for i in 0..n {
        let state = traj.row(i);
        let t = traj.times[i];
        inputs.extend_from_slice(state);
        targets.extend_from_slice(&spec.rhs_eval(state, t)?);
        times.push(t);
    }
    Ok(RegressionDataset {
        system: spec.name.to_string(),
        split,
        inputs,
        targets,
        times,
        n,
        dim: d,
        granularity: granularity as f64,
        periods,
        initial_condition: ic.to_vec(),
    })
}

/// Build the train/test regression pair for a system. The train split
/// starts from the settled default initial condition; the test split starts
/// from a second settled point reached by perturbing the first by up to 5%
/// of the attractor amplitude (deterministic, derived from the system
/// name).
pub fn make_regression_dataset(
    spec: &SystemSpec,
    granularity: usize,
    periods: usize,
) -> Result<RegressionBundle> {
    if granularity == 0 || periods == 0 {
        return Err(ChaosError::InvalidArgument(
            "granularity and periods must be >= 1".into(),
        ));
    }
    let settled = integrate::settle_on_attractor(
        spec,
        &spec.default_initial_condition,
        integrate::DEFAULT_TRANSIENT_PERIODS,
    )?;
    let train = sample_split(spec, &settled, granularity, periods, Split::Train)?;

    let scale = settled.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(
        0x51AD ^ spec.name.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64)),
    );
    let jitter = Uniform::new(-0.05 * scale, 0.05 * scale);
    let perturbed: Vec<f64> = settled.iter().map(|v| v + jitter.sample(&mut rng)).collect();
    let second_ic = integrate::settle_on_attractor(spec, &perturbed, 7)?;
    let test = sample_split(spec, &second_ic, granularity, periods, Split::Test)?;
    Ok(RegressionBundle { train, test })
}

/// Exponent vectors of all monomials in `d` variables with total degree
/// ≤ `degree`, ordered by (total degree, descending lexicographic), so for
/// d=2, degree=2: 1, x0, x1, x0², x0·x1, x1².
fn monomial_exponents(d: usize, degree: usize) -> Vec<Vec<usize>> {
    fn fill(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(remaining - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=degree {
        fill(total, d, &mut Vec::new(), &mut out);
    }
    out
}

fn describe(exponents: &[usize]) -> String {
    let mut parts = Vec::new();
    for (j, &e) in exponents.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{j}")),
            _ => parts.push(format!("x{j}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Number of monomials in `d` variables of total degree ≤ `degree`:
/// C(d + degree, degree).
pub fn library_size(d: usize, degree: usize) -> usize {
    let mut c = 1usize;
    for i in 1..=degree {
        c = c * (d + i) / i;
    }
    c
}

/// Evaluate the polynomial feature library at every state row. Returns the
/// row-major `n × P` feature matrix and the `P` human-readable term
/// descriptors (e.g. `"1"`, `"x0*x1"`, `"x2^3"`).
pub fn polynomial_library(
    states: &[f64],
    n: usize,
    d: usize,
    degree: usize,
) -> Result<(Vec<f64>, Vec<String>)> {
    if degree == 0 {
        return Err(ChaosError::InvalidArgument("degree must be >= 1".into()));
    }
    if states.len() != n * d {
        return Err(ChaosError::DimensionMismatch {
            expected: n * d,
            got: states.len(),
        });
    }
    let exps = monomial_exponents(d, degree);
    let p = exps.len();
    debug_assert_eq!(p, library_size(d, degree));
    let mut features = vec![0.0; n * p];
    for i in 0..n {
        let row = &states[i * d..(i + 1) * d];
        for (k, exp) in exps.iter().enumerate() {
            let mut v = 1.0;
            for (x, &e) in row.iter().zip(exp) {
                for _ in 0..e {
                    v *= x;
                }
            }
            features[i * p + k] = v;
        }
    }
    let terms = exps.iter().map(|e| describe(e)).collect();
    Ok((features, terms))
}

/// Sparse linear model over a polynomial library: column `j` of
/// `coefficients` gives the recovered right-hand side of variable `j`.
#[derive(Debug, Clone, Serialize)]
pub struct SparseModel {
    pub system: Option<String>,
    /// Row-major `P × d` coefficient matrix.
    pub coefficients: Vec<f64>,
    pub terms: Vec<String>,
    pub library_size: usize,
    pub dim: usize,
    pub library_degree: usize,
    pub threshold: f64,
    pub ridge: f64,
    /// Variables whose columns pruned to nothing (degenerate threshold).
    pub zeroed_variables: Vec<usize>,
}

impl SparseModel {
    pub fn coefficient(&self, term: usize, variable: usize) -> f64 {
        self.coefficients[term * self.dim + variable]
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coefficients.iter().filter(|c| **c != 0.0).count()
    }

    /// Predicted derivatives for `n` states (row-major `n × dim`).
    pub fn predict(&self, states: &[f64], n: usize) -> Result<Vec<f64>> {
        let (features, _) = polynomial_library(states, n, self.dim, self.library_degree)?;
        let p = self.library_size;
        let mut out = vec![0.0; n * self.dim];
        for i in 0..n {
            for j in 0..self.dim {
                let mut acc = 0.0;
                for k in 0..p {
                    acc += features[i * p + k] * self.coefficients[k * self.dim + j];
                }
                out[i * self.dim + j] = acc;
            }
        }
        Ok(out)
    }

    /// Human-readable equations, one per variable, omitting zero terms.
    pub fn equations(&self) -> Vec<String> {
        (0..self.dim)
            .map(|j| {
                let terms: Vec<String> = (0..self.library_size)
                    .filter(|&k| self.coefficient(k, j) != 0.0)
                    .map(|k| format!("{:+.4}*{}", self.coefficient(k, j), self.terms[k]))
                    .collect();
                if terms.is_empty() {
                    format!("dx{j}/dt = 0")
                } else {
                    format!("dx{j}/dt = {}", terms.join(" "))
                }
            })
            .collect()
    }
}

/// Ridge least squares restricted to the active columns of `a`.
fn ridge_solve(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    active: &[usize],
    ridge: f64,
) -> Option<Vec<f64>> {
    let sub = a.select_columns(active.iter());
    let mut gram = sub.transpose() * &sub;
    for i in 0..active.len() {
        gram[(i, i)] += ridge;
    }
    let rhs = sub.transpose() * b;
    gram.lu().solve(&rhs).map(|v| v.iter().cloned().collect())
}

/// Sequentially thresholded least squares over a precomputed feature
/// matrix. Target variables are independent and solved in parallel.
pub fn stlsq(
    features: &[f64],
    targets: &[f64],
    n: usize,
    p: usize,
    d: usize,
    terms: Vec<String>,
    library_degree: usize,
    threshold: f64,
    ridge: f64,
    max_iter: usize,
) -> Result<SparseModel> {
    if features.len() != n * p || targets.len() != n * d {
        return Err(ChaosError::DimensionMismatch {
            expected: n * p,
            got: features.len(),
        });
    }
    if threshold < 0.0 || ridge < 0.0 {
        return Err(ChaosError::InvalidArgument(
            "threshold and ridge must be >= 0".into(),
        ));
    }
    if max_iter == 0 {
        return Err(ChaosError::InvalidArgument("max_iter must be >= 1".into()));
    }
    let a = DMatrix::from_row_slice(n, p, features);
    let columns: Vec<Result<(Vec<f64>, bool)>> = (0..d)
        .into_par_iter()
        .map(|j| {
            let b = DVector::from_iterator(n, (0..n).map(|i| targets[i * d + j]));
            let mut active: Vec<usize> = (0..p).collect();
            let mut coef = vec![0.0; p];
            for _ in 0..max_iter {
                if active.is_empty() {
                    break;
                }
                let sol = ridge_solve(&a, &b, &active, ridge).ok_or_else(|| {
                    ChaosError::InvalidArgument(
                        "singular feature matrix; increase ridge".into(),
                    )
                })?;
                coef = vec![0.0; p];
                for (&k, &v) in active.iter().zip(&sol) {
                    coef[k] = v;
                }
                let next: Vec<usize> = active
                    .iter()
                    .cloned()
                    .filter(|&k| coef[k].abs() >= threshold)
                    .collect();
                for k in 0..p {
                    if !next.contains(&k) {
                        coef[k] = 0.0;
                    }
                }
                if next == active {
                    break;
                }
                active = next;
            }
            let pruned_to_zero = active.is_empty();
            Ok((coef, pruned_to_zero))
        })
        .collect();
    let mut coefficients = vec![0.0; p * d];
    let mut zeroed = Vec::new();
    for (j, col) in columns.into_iter().enumerate() {
        let (coef, pruned) = col?;
        if pruned {
            zeroed.push(j);
        }
        for k in 0..p {
            coefficients[k * d + j] = coef[k];
        }
    }
    if !zeroed.is_empty() {
        eprintln!(
            "stlsq: threshold {threshold} pruned every term for variable(s) {zeroed:?}; returning the zero model there"
        );
    }
    Ok(SparseModel {
        system: None,
        coefficients,
        terms,
        library_size: p,
        dim: d,
        library_degree,
        threshold,
        ridge,
        zeroed_variables: zeroed,
    })
}

/// Fit a sparse model to a regression dataset with the default STLSQ
/// settings.
pub fn fit_dataset(
    dataset: &RegressionDataset,
    degree: usize,
    threshold: f64,
    ridge: f64,
) -> Result<SparseModel> {
    dataset.validate()?;
    let (features, terms) =
        polynomial_library(&dataset.inputs, dataset.n, dataset.dim, degree)?;
    let p = terms.len();
    let mut model = stlsq(
        &features,
        &dataset.targets,
        dataset.n,
        p,
        dataset.dim,
        terms,
        degree,
        threshold,
        ridge,
        DEFAULT_MAX_ITER,
    )?;
    model.system = Some(dataset.system.clone());
    Ok(model)
}

/// Median across variables of the sMAPE between predicted and true
/// derivatives on a dataset.
pub fn evaluate_symbolic(model: &SparseModel, dataset: &RegressionDataset) -> Result<f64> {
    dataset.validate()?;
    if model.dim != dataset.dim {
        return Err(ChaosError::DimensionMismatch {
            expected: model.dim,
            got: dataset.dim,
        });
    }
    let predicted = model.predict(&dataset.inputs, dataset.n)?;
    let mut per_variable = Vec::with_capacity(dataset.dim);
    for j in 0..dataset.dim {
        let actual = dataset.target_column(j);
        let pred: Vec<f64> = (0..dataset.n).map(|i| predicted[i * dataset.dim + j]).collect();
        per_variable.push(smape(&actual, &pred)?);
    }
    per_variable.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let m = per_variable.len();
    Ok(if m % 2 == 1 {
        per_variable[m / 2]
    } else {
        0.5 * (per_variable[m / 2 - 1] + per_variable[m / 2])
    })
}

/// One system's recovery result in the benchmark sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SindyRow {
    pub system: String,
    pub train_smape: f64,
    pub test_smape: f64,
    pub nonzero_terms: usize,
    pub library_size: usize,
}

/// Benchmark summary: per-system rows plus the Spearman correlation of
/// test error against the annotated largest Lyapunov exponent.
#[derive(Debug, Clone, Serialize)]
pub struct SindyReport {
    pub rows: Vec<SindyRow>,
    pub degree: usize,
    pub threshold: f64,
    /// Spearman rank correlation between test sMAPE and the largest
    /// Lyapunov exponent (None when undefined).
    pub chaoticity_correlation: Option<f64>,
}

/// Run STLSQ recovery across every polynomial (non-transcendental) system
/// in the registry. Failures on individual systems abort the sweep since
/// the polynomial subset is expected to be recoverable.
pub fn run_sindy_benchmark(degree: usize, threshold: f64, ridge: f64) -> Result<SindyReport> {
    let specs: Vec<&SystemSpec> = registry::all_systems()
        .filter(|s| !s.flags.transcendental)
        .collect();
    let rows: Vec<Result<SindyRow>> = specs
        .par_iter()
        .map(|spec| {
            let bundle =
                make_regression_dataset(spec, REGRESSION_GRANULARITY, REGRESSION_PERIODS)?;
            let model = fit_dataset(&bundle.train, degree, threshold, ridge)?;
            Ok(SindyRow {
                system: spec.name.to_string(),
                train_smape: evaluate_symbolic(&model, &bundle.train)?,
                test_smape: evaluate_symbolic(&model, &bundle.test)?,
                nonzero_terms: model.nonzero_terms(),
                library_size: model.library_size,
            })
        })
        .collect();
    let rows: Result<Vec<SindyRow>> = rows.into_iter().collect();
    let mut rows = rows?;
    rows.sort_by(|a, b| a.system.cmp(&b.system));
    let mut errors = Vec::new();
    let mut lles = Vec::new();
    for row in &rows {
        if let Some(ann) = registry::lookup(&row.system)?.annotations.as_ref() {
            errors.push(row.test_smape);
            lles.push(ann.largest_lyapunov);
        }
    }
    let chaoticity_correlation = spearman(&errors, &lles).ok();
    Ok(SindyReport {
        rows,
        degree,
        threshold,
        chaoticity_correlation,
    })
}
