//! Curated collection of dynamical systems as callable right-hand sides.

mod annotations;
mod systems;

use crate::error::{ChaosError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Right-hand side: (state, t, params, out).
pub type RhsFn = fn(&[f64], f64, &[f64], &mut [f64]);
/// Analytic Jacobian: (state, t, params, out) with `out` row-major d*d.
pub type JacFn = fn(&[f64], f64, &[f64], &mut [f64]);
/// Conserved quantity for Hamiltonian systems: (state, params) -> energy.
pub type EnergyFn = fn(&[f64], &[f64]) -> f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFlags {
    pub hamiltonian: bool,
    pub nonautonomous: bool,
    pub bounded: bool,
    pub chaotic: bool,
    /// Right-hand side contains non-polynomial terms (sin, cos, ...), so it
    /// cannot be represented in a polynomial feature library.
    pub transcendental: bool,
}

/// Precomputed mathematical annotations for a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemAnnotations {
    pub lyapunov_spectrum: Vec<f64>,
    pub largest_lyapunov: f64,
    pub correlation_dimension: f64,
    pub kaplan_yorke_dimension: f64,
    pub multiscale_entropy: f64,
    pub pesin_entropy: f64,
}

impl SystemAnnotations {
    pub fn validate(&self) -> Result<()> {
        let max = self
            .lyapunov_spectrum
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if (self.largest_lyapunov - max).abs() > 1e-12 {
            return Err(ChaosError::InvalidArgument(
                "largest_lyapunov must equal max of spectrum".into(),
            ));
        }
        let pesin: f64 = self
            .lyapunov_spectrum
            .iter()
            .filter(|&&l| l > 0.0)
            .sum();
        if self.pesin_entropy < 0.0 || (self.pesin_entropy - pesin).abs() > 1e-12 {
            return Err(ChaosError::InvalidArgument(
                "pesin_entropy must be the sum of positive exponents".into(),
            ));
        }
        if self
            .lyapunov_spectrum
            .windows(2)
            .any(|w| w[0] < w[1])
        {
            return Err(ChaosError::InvalidArgument(
                "lyapunov_spectrum must be sorted descending".into(),
            ));
        }
        Ok(())
    }
}

/// A dynamical system record: callable right-hand side plus metadata.
#[derive(Clone)]
pub struct SystemSpec {
    pub name: &'static str,
    pub dimension: usize,
    pub param_names: &'static [&'static str],
    pub params: Vec<f64>,
    pub rhs: RhsFn,
    pub analytic_jacobian: Option<JacFn>,
    pub energy: Option<EnergyFn>,
    pub default_initial_condition: Vec<f64>,
    /// Integration timestep (time units).
    pub dt: f64,
    /// Dominant timescale (time units).
    pub period: f64,
    pub flags: SystemFlags,
    pub unbounded_indices: Vec<usize>,
    /// Loose per-coordinate bound on |x_i| for bounded coordinates.
    pub state_bound: f64,
    pub citation: &'static str,
    pub description: &'static str,
    pub annotations: Option<SystemAnnotations>,
}

impl std::fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SystemSpec")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("params", &self.parameters())
            .field("dt", &self.dt)
            .field("period", &self.period)
            .field("flags", &self.flags)
            .finish()
    }
}

impl SystemSpec {
    /// Named parameter mapping.
    pub fn parameters(&self) -> BTreeMap<String, f64> {
        self.param_names
            .iter()
            .map(|s| s.to_string())
            .zip(self.params.iter().cloned())
            .collect()
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.param_names
            .iter()
            .position(|&n| n == name)
            .map(|i| self.params[i])
    }

    /// Evaluate the right-hand side with dimension and finiteness checks.
    pub fn rhs_eval(&self, state: &[f64], t: f64) -> Result<Vec<f64>> {
        if state.len() != self.dimension {
            return Err(ChaosError::DimensionMismatch {
                expected: self.dimension,
                got: state.len(),
            });
        }
        if !state.iter().all(|x| x.is_finite()) {
            return Err(ChaosError::NonFinite {
                context: format!("{} rhs input", self.name),
            });
        }
        let mut out = vec![0.0; self.dimension];
        (self.rhs)(state, t, &self.params, &mut out);
        if !out.iter().all(|x| x.is_finite()) {
            return Err(ChaosError::NonFinite {
                context: format!("{} rhs output", self.name),
            });
        }
        Ok(out)
    }

    /// Unchecked rhs evaluation into a caller-provided buffer (hot path).
    #[inline]
    pub fn rhs_into(&self, state: &[f64], t: f64, out: &mut [f64]) {
        (self.rhs)(state, t, &self.params, out)
    }

    /// Row-major d*d Jacobian: analytic when available, otherwise central
    /// finite differences with step `fd_step`.
    pub fn jacobian_eval(&self, state: &[f64], t: f64, fd_step: f64) -> Result<Vec<f64>> {
        if state.len() != self.dimension {
            return Err(ChaosError::DimensionMismatch {
                expected: self.dimension,
                got: state.len(),
            });
        }
        let d = self.dimension;
        let mut jac = vec![0.0; d * d];
        match self.analytic_jacobian {
            Some(j) => j(state, t, &self.params, &mut jac),
            None => {
                let mut xp = state.to_vec();
                let mut fp = vec![0.0; d];
                let mut fm = vec![0.0; d];
                for col in 0..d {
                    xp[col] = state[col] + fd_step;
                    (self.rhs)(&xp, t, &self.params, &mut fp);
                    xp[col] = state[col] - fd_step;
                    (self.rhs)(&xp, t, &self.params, &mut fm);
                    xp[col] = state[col];
                    for row in 0..d {
                        jac[row * d + col] = (fp[row] - fm[row]) / (2.0 * fd_step);
                    }
                }
            }
        }
        if !jac.iter().all(|x| x.is_finite()) {
            return Err(ChaosError::NonFinite {
                context: format!("{} jacobian", self.name),
            });
        }
        Ok(jac)
    }

    /// Jacobian trace (volume contraction rate when negative).
    pub fn jacobian_trace(&self, state: &[f64], t: f64) -> Result<f64> {
        let d = self.dimension;
        let jac = self.jacobian_eval(state, t, 1e-6)?;
        Ok((0..d).map(|i| jac[i * d + i]).sum())
    }
}

/// Flag predicate for `list_systems`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemFilter {
    All,
    Hamiltonian,
    Nonautonomous,
    Autonomous,
    Chaotic,
    Nonchaotic,
}

impl SystemFilter {
    fn matches(&self, flags: &SystemFlags) -> bool {
        match self {
            SystemFilter::All => true,
            SystemFilter::Hamiltonian => flags.hamiltonian,
            SystemFilter::Nonautonomous => flags.nonautonomous,
            SystemFilter::Autonomous => !flags.nonautonomous,
            SystemFilter::Chaotic => flags.chaotic,
            SystemFilter::Nonchaotic => !flags.chaotic,
        }
    }
}

impl std::str::FromStr for SystemFilter {
    type Err = ChaosError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SystemFilter::All),
            "hamiltonian" => Ok(SystemFilter::Hamiltonian),
            "nonautonomous" => Ok(SystemFilter::Nonautonomous),
            "autonomous" => Ok(SystemFilter::Autonomous),
            "chaotic" => Ok(SystemFilter::Chaotic),
            "nonchaotic" => Ok(SystemFilter::Nonchaotic),
            other => Err(ChaosError::InvalidArgument(format!(
                "unknown filter '{other}'"
            ))),
        }
    }
}

fn registry() -> &'static Vec<SystemSpec> {
    static REGISTRY: OnceLock<Vec<SystemSpec>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut all = systems::build_all();
        all.sort_by(|a, b| a.name.cmp(b.name));
        for spec in &mut all {
            if let Some(ann) = annotations::baked(spec.name) {
                spec.annotations = Some(ann);
            }
        }
        all
    })
}

/// Look up a system by name.
pub fn lookup(name: &str) -> Result<&'static SystemSpec> {
    let reg = registry();
    reg.iter()
        .find(|s| s.name == name)
        .ok_or_else(|| {
            let mut scored: Vec<(usize, &str)> = reg
                .iter()
                .map(|s| (levenshtein(&name.to_lowercase(), &s.name.to_lowercase()), s.name))
                .collect();
            scored.sort();
            ChaosError::UnknownSystem {
                name: name.to_string(),
                suggestions: scored.iter().take(3).map(|(_, n)| n.to_string()).collect(),
            }
        })
}

/// Lexicographically sorted system names matching the filter.
pub fn list_systems(filter: SystemFilter) -> Vec<&'static str> {
    registry()
        .iter()
        .filter(|s| filter.matches(&s.flags))
        .map(|s| s.name)
        .collect()
}

/// All registered systems in name order.
pub fn all_systems() -> impl Iterator<Item = &'static SystemSpec> {
    registry().iter()
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            cur[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Metadata document with the per-system record fields.
pub fn metadata_json(spec: &SystemSpec) -> serde_json::Value {
    let ann = spec.annotations.as_ref();
    serde_json::json!({
        "name": spec.name,
        "citation": spec.citation,
        "description": spec.description,
        "parameters": spec.parameters(),
        "embedding_dimension": spec.dimension,
        "unbounded_indices": spec.unbounded_indices,
        "dt": spec.dt,
        "initial_conditions": spec.default_initial_condition,
        "period": spec.period,
        "lyapunov_spectrum": ann.map(|a| a.lyapunov_spectrum.clone()),
        "largest_lyapunov_exponent": ann.map(|a| a.largest_lyapunov),
        "correlation_dimension": ann.map(|a| a.correlation_dimension),
        "kaplan_yorke_dimension": ann.map(|a| a.kaplan_yorke_dimension),
        "multiscale_entropy": ann.map(|a| a.multiscale_entropy),
        "pesin_entropy": ann.map(|a| a.pesin_entropy),
        "delay": false,
        "hamiltonian": spec.flags.hamiltonian,
        "nonautonomous": spec.flags.nonautonomous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_returns_lorenz() {
        let s = lookup("Lorenz").unwrap();
        assert_eq!(s.dimension, 3);
        assert_eq!(s.parameter("sigma"), Some(10.0));
        assert_eq!(s.parameter("rho"), Some(28.0));
        assert_eq!(s.parameter("beta"), Some(8.0 / 3.0));
    }

    #[test]
    fn lookup_torus_is_autonomous_quasiperiodic() {
        let s = lookup("Torus").unwrap();
        assert!(!s.flags.nonautonomous);
        assert!(!s.flags.chaotic);
    }

    #[test]
    fn lookup_unknown_suggests_neighbors() {
        let err = lookup("NoSuchSystem").unwrap_err();
        match err {
            ChaosError::UnknownSystem { suggestions, .. } => {
                assert_eq!(suggestions.len(), 3)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lorenz_rhs_at_unit_state() {
        let s = lookup("Lorenz").unwrap();
        let dx = s.rhs_eval(&[1.0, 1.0, 1.0], 0.0).unwrap();
        assert!((dx[0] - 0.0).abs() < 1e-15);
        assert!((dx[1] - 26.0).abs() < 1e-15);
        assert!((dx[2] + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rossler_rhs_at_origin() {
        let s = lookup("Rossler").unwrap();
        let dx = s.rhs_eval(&[0.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(dx, vec![0.0, 0.0, 0.2]);
    }

    #[test]
    fn autonomous_rhs_ignores_time() {
        for s in all_systems().filter(|s| !s.flags.nonautonomous) {
            let x = &s.default_initial_condition;
            let a = s.rhs_eval(x, 0.0).unwrap();
            let b = s.rhs_eval(x, 17.3).unwrap();
            assert_eq!(a, b, "{} rhs depends on t", s.name);
        }
    }

    #[test]
    fn rhs_finite_at_default_ic() {
        for s in all_systems() {
            let dx = s.rhs_eval(&s.default_initial_condition, 0.0).unwrap();
            assert!(dx.iter().all(|v| v.is_finite()), "{}", s.name);
            assert_eq!(s.default_initial_condition.len(), s.dimension);
            assert!(s.dt < s.period, "{}: dt must resolve the period", s.name);
        }
    }

    #[test]
    fn rhs_eval_rejects_wrong_dimension() {
        let s = lookup("Lorenz").unwrap();
        assert!(s.rhs_eval(&[1.0, 2.0], 0.0).is_err());
    }

    #[test]
    fn lorenz_jacobian_trace_is_constant() {
        let s = lookup("Lorenz").unwrap();
        for state in [[1.0, 1.0, 1.0], [-3.0, 7.0, 25.0]] {
            let tr = s.jacobian_trace(&state, 0.0).unwrap();
            assert!((tr + 41.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_jacobian_matches_analytic() {
        let s = lookup("Lorenz").unwrap();
        let state = [1.0, 1.0, 1.0];
        let analytic = s.jacobian_eval(&state, 0.0, 1e-5).unwrap();
        let mut fd_spec = s.clone();
        fd_spec.analytic_jacobian = None;
        let fd = fd_spec.jacobian_eval(&state, 0.0, 1e-5).unwrap();
        let max_dev = analytic
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-6, "max deviation {max_dev}");
    }

    #[test]
    fn analytic_jacobians_match_finite_differences_everywhere() {
        // Guards against typos in the hand-derived Jacobians.
        for s in all_systems() {
            let state = &s.default_initial_condition;
            let t = 0.37;
            let analytic = s.jacobian_eval(state, t, 1e-6).unwrap();
            let mut fd_spec = s.clone();
            fd_spec.analytic_jacobian = None;
            let fd = fd_spec.jacobian_eval(state, t, 1e-6).unwrap();
            let scale = analytic.iter().map(|v| v.abs()).fold(1.0, f64::max);
            for (a, b) in analytic.iter().zip(&fd) {
                assert!(
                    (a - b).abs() / scale < 1e-5,
                    "{}: jacobian mismatch {a} vs {b}",
                    s.name
                );
            }
        }
    }

    #[test]
    fn list_systems_sorted_and_filtered() {
        let all = list_systems(SystemFilter::All);
        assert!(all.len() >= 20);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);

        let ham = list_systems(SystemFilter::Hamiltonian);
        assert!(ham.contains(&"HenonHeiles"));
        assert!(!ham.contains(&"Lorenz"));

        let forced = list_systems(SystemFilter::Nonautonomous);
        assert!(forced.contains(&"Duffing"));
        assert!(forced.contains(&"DrivenPendulum"));
        assert_eq!(forced.len(), 2);
    }

    #[test]
    fn baked_annotations_satisfy_invariants() {
        for s in all_systems() {
            if let Some(ann) = &s.annotations {
                ann.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
            }
        }
    }

    #[test]
    fn metadata_json_has_table_fields() {
        let doc = metadata_json(lookup("Lorenz").unwrap());
        for key in [
            "name",
            "citation",
            "description",
            "parameters",
            "embedding_dimension",
            "unbounded_indices",
            "dt",
            "initial_conditions",
            "period",
            "lyapunov_spectrum",
            "largest_lyapunov_exponent",
            "correlation_dimension",
            "kaplan_yorke_dimension",
            "multiscale_entropy",
            "pesin_entropy",
            "delay",
            "hamiltonian",
            "nonautonomous",
        ] {
            assert!(doc.get(key).is_some(), "missing {key}");
        }
    }
}
