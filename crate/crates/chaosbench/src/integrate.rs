//! Trajectory production: fixed-step RK4, adaptive Dormand-Prince,
//! stochastically forced integration, transient removal, and resampling.

use crate::error::{ChaosError, Result};
use crate::registry::SystemSpec;
use crate::trajectory::{Provenance, Trajectory};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// States whose norm exceeds this are treated as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e8;

fn check_ic(spec: &SystemSpec, ic: &[f64]) -> Result<()> {
    if ic.len() != spec.dimension {
        return Err(ChaosError::DimensionMismatch {
            expected: spec.dimension,
            got: ic.len(),
        });
    }
    if !ic.iter().all(|x| x.is_finite()) {
        return Err(ChaosError::NonFinite {
            context: "initial condition".into(),
        });
    }
    Ok(())
}

fn check_divergence(state: &[f64], t: f64) -> Result<()> {
    let norm = state.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm > DIVERGENCE_BOUND {
        return Err(ChaosError::Divergence {
            norm,
            bound: DIVERGENCE_BOUND,
            t,
        });
    }
    Ok(())
}

/// One classic fourth-order Runge-Kutta step, writing the result into `state`.
pub fn rk4_step(spec: &SystemSpec, state: &mut [f64], t: f64, dt: f64, scratch: &mut Rk4Scratch) {
    let d = state.len();
    let Rk4Scratch { k1, k2, k3, k4, tmp } = scratch;
    spec.rhs_into(state, t, k1);
    for i in 0..d {
        tmp[i] = state[i] + 0.5 * dt * k1[i];
    }
    spec.rhs_into(tmp, t + 0.5 * dt, k2);
    for i in 0..d {
        tmp[i] = state[i] + 0.5 * dt * k2[i];
    }
    spec.rhs_into(tmp, t + 0.5 * dt, k3);
    for i in 0..d {
        tmp[i] = state[i] + dt * k3[i];
    }
    spec.rhs_into(tmp, t + dt, k4);
    for i in 0..d {
        state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Reusable stage buffers for `rk4_step`.
pub struct Rk4Scratch {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Scratch {
    pub fn new(dim: usize) -> Self {
        Rk4Scratch {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }
}

/// Fixed-step RK4 from `ic`: returns `n_steps + 1` rows starting at `ic`.
pub fn integrate_fixed(
    spec: &SystemSpec,
    ic: &[f64],
    dt: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    if dt <= 0.0 || n_steps == 0 {
        return Err(ChaosError::InvalidArgument(
            "dt must be positive and n_steps >= 1".into(),
        ));
    }
    check_ic(spec, ic)?;
    let d = spec.dimension;
    let mut state = ic.to_vec();
    let mut scratch = Rk4Scratch::new(d);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity((n_steps + 1) * d);
    times.push(0.0);
    states.extend_from_slice(&state);
    for k in 0..n_steps {
        let t = k as f64 * dt;
        rk4_step(spec, &mut state, t, dt, &mut scratch);
        check_divergence(&state, t + dt)?;
        times.push((k + 1) as f64 * dt);
        states.extend_from_slice(&state);
    }
    Ok(Trajectory::new(
        times,
        states,
        d,
        spec.period / dt,
        Provenance::deterministic(spec.name, ic),
    ))
}

// Dormand-Prince 5(4) coefficients.
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Dopri5<'a> {
    spec: &'a SystemSpec,
    rtol: f64,
    atol: f64,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y4: Vec<f64>,
}

impl<'a> Dopri5<'a> {
    fn new(spec: &'a SystemSpec, rtol: f64, atol: f64) -> Self {
        let d = spec.dimension;
        Dopri5 {
            spec,
            rtol,
            atol,
            k: std::array::from_fn(|_| vec![0.0; d]),
            tmp: vec![0.0; d],
            y4: vec![0.0; d],
        }
    }

    /// One embedded trial step; returns the scaled error estimate.
    fn trial(&mut self, y: &[f64], t: f64, h: f64, y5: &mut [f64]) -> f64 {
        let d = y.len();
        self.spec.rhs_into(y, t, &mut self.k[0]);
        for s in 0..6 {
            for i in 0..d {
                let mut acc = 0.0;
                for (j, kj) in self.k.iter().take(s + 1).enumerate() {
                    acc += DP_A[s][j] * kj[i];
                }
                self.tmp[i] = y[i] + h * acc;
            }
            self.spec.rhs_into(&self.tmp, t + DP_C[s] * h, &mut self.k[s + 1]);
        }
        let mut err = 0.0;
        for i in 0..d {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for (j, kj) in self.k.iter().enumerate() {
                acc5 += DP_B5[j] * kj[i];
                acc4 += DP_B4[j] * kj[i];
            }
            y5[i] = y[i] + h * acc5;
            self.y4[i] = y[i] + h * acc4;
            let scale = self.atol + self.rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - self.y4[i]) / scale;
            err += e * e;
        }
        (err / d as f64).sqrt()
    }

    /// Advance from t to t_end with step-size control.
    fn advance(&mut self, y: &mut Vec<f64>, t: &mut f64, t_end: f64, h: &mut f64) -> Result<()> {
        let d = y.len();
        let mut y5 = vec![0.0; d];
        while *t < t_end {
            let h_try = h.min(t_end - *t);
            if h_try < 1e-14 * t_end.abs().max(1.0) {
                return Err(ChaosError::StepSizeUnderflow { t: *t, h: h_try });
            }
            let err = self.trial(y, *t, h_try, &mut y5);
            if err.is_finite() && err <= 1.0 {
                *t += h_try;
                y.copy_from_slice(&y5);
                check_divergence(y, *t)?;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                *h = h_try * factor;
            } else {
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 1.0)
                } else {
                    0.1
                };
                *h = h_try * factor;
            }
        }
        Ok(())
    }
}

/// Adaptive Dormand-Prince 5(4) integration over `t_span`, sampled on a
/// uniform grid with spacing `spec.dt` (every substep lands exactly on the
/// next grid point, so no interpolation is involved).
pub fn integrate_adaptive(
    spec: &SystemSpec,
    ic: &[f64],
    t_span: (f64, f64),
    rtol: f64,
    atol: f64,
) -> Result<Trajectory> {
    let (t0, t1) = t_span;
    if t1 <= t0 {
        return Err(ChaosError::InvalidArgument("t_span must increase".into()));
    }
    if rtol <= 0.0 || atol <= 0.0 {
        return Err(ChaosError::InvalidArgument("tolerances must be positive".into()));
    }
    check_ic(spec, ic)?;
    let d = spec.dimension;
    let h_out = spec.dt;
    let n_out = ((t1 - t0) / h_out).round().max(1.0) as usize;
    let mut solver = Dopri5::new(spec, rtol, atol);
    let mut y = ic.to_vec();
    let mut t = t0;
    let mut h = h_out / 10.0;
    let mut times = Vec::with_capacity(n_out + 1);
    let mut states = Vec::with_capacity((n_out + 1) * d);
    times.push(t0);
    states.extend_from_slice(&y);
    for k in 1..=n_out {
        let t_target = t0 + k as f64 * h_out;
        solver.advance(&mut y, &mut t, t_target, &mut h)?;
        times.push(t_target);
        states.extend_from_slice(&y);
    }
    Ok(Trajectory::new(
        times,
        states,
        d,
        spec.period / h_out,
        Provenance::deterministic(spec.name, ic),
    ))
}

/// Additive-noise stochastic Runge-Kutta: exact RK4 drift plus a
/// per-coordinate Gaussian increment (strong order 1.0 for additive noise).
/// The per-coordinate noise scale is `noise_amplitude` times the standard
/// deviation of a noise-free reference trajectory.
pub fn integrate_stochastic(
    spec: &SystemSpec,
    ic: &[f64],
    dt: f64,
    n_steps: usize,
    noise_amplitude: f64,
    seed: u64,
) -> Result<Trajectory> {
    if noise_amplitude < 0.0 {
        return Err(ChaosError::InvalidArgument(
            "noise_amplitude must be nonnegative".into(),
        ));
    }
    if noise_amplitude == 0.0 {
        // Bit-compatible with the deterministic path.
        let mut traj = integrate_fixed(spec, ic, dt, n_steps)?;
        traj.provenance.seed = Some(seed);
        return Ok(traj);
    }
    check_ic(spec, ic)?;
    let d = spec.dimension;
    let sigma: Vec<f64> = {
        let reference = reference_trajectory(spec, ic)?;
        reference
            .std()
            .iter()
            .map(|s| noise_amplitude * s)
            .collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sqrt_dt = dt.sqrt();
    let mut state = ic.to_vec();
    let mut scratch = Rk4Scratch::new(d);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity((n_steps + 1) * d);
    times.push(0.0);
    states.extend_from_slice(&state);
    for k in 0..n_steps {
        let t = k as f64 * dt;
        rk4_step(spec, &mut state, t, dt, &mut scratch);
        for (x, s) in state.iter_mut().zip(&sigma) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *x += s * sqrt_dt * z;
        }
        check_divergence(&state, t + dt)?;
        times.push((k + 1) as f64 * dt);
        states.extend_from_slice(&state);
    }
    let mut traj = Trajectory::new(
        times,
        states,
        d,
        spec.period / dt,
        Provenance::deterministic(spec.name, ic),
    );
    traj.provenance.seed = Some(seed);
    traj.provenance.noise_amplitude = noise_amplitude;
    Ok(traj)
}

/// Noise-free reference used for noise scaling: 20 periods at the system dt.
pub(crate) fn reference_trajectory(spec: &SystemSpec, ic: &[f64]) -> Result<Trajectory> {
    let n = (20.0 * spec.period / spec.dt).round() as usize;
    integrate_fixed(spec, ic, spec.dt, n.max(1))
}

/// Integrate away the transient and return the final on-attractor state.
pub fn settle_on_attractor(
    spec: &SystemSpec,
    ic: &[f64],
    n_transient_periods: usize,
) -> Result<Vec<f64>> {
    if n_transient_periods == 0 {
        return Err(ChaosError::InvalidArgument(
            "n_transient_periods must be >= 1".into(),
        ));
    }
    check_ic(spec, ic)?;
    let dt = spec.dt;
    let n_steps = (n_transient_periods as f64 * spec.period / dt).round() as usize;
    let mut state = ic.to_vec();
    let mut scratch = Rk4Scratch::new(spec.dimension);
    for k in 0..n_steps.max(1) {
        let t = k as f64 * dt;
        rk4_step(spec, &mut state, t, dt, &mut scratch);
        check_divergence(&state, t + dt)?;
    }
    Ok(state)
}

/// Default transient length in periods.
pub const DEFAULT_TRANSIENT_PERIODS: usize = 100;

/// Integer-stride decimation to a coarser granularity.
pub fn resample(traj: &Trajectory, target_granularity: f64, period: f64) -> Result<Trajectory> {
    if target_granularity <= 0.0 || period <= 0.0 {
        return Err(ChaosError::InvalidArgument(
            "granularity and period must be positive".into(),
        ));
    }
    let source_dt = traj.dt();
    let target_dt = period / target_granularity;
    if target_dt < source_dt * (1.0 - 1e-12) {
        return Err(ChaosError::UpsampleRejected {
            target: target_dt,
            available: source_dt,
        });
    }
    let source_granularity = period / source_dt;
    let stride = (source_granularity / target_granularity).round().max(1.0) as usize;
    let n = traj.len();
    let mut times = Vec::with_capacity(n / stride + 1);
    let mut states = Vec::with_capacity((n / stride + 1) * traj.dim);
    let mut i = 0;
    while i < n {
        times.push(traj.times[i]);
        states.extend_from_slice(traj.row(i));
        i += stride;
    }
    Ok(Trajectory::new(
        times,
        states,
        traj.dim,
        source_granularity / stride as f64,
        traj.provenance.clone(),
    ))
}

#[cfg(test)]
pub(crate) mod test_systems {
    use crate::registry::{SystemFlags, SystemSpec};

    /// Scalar linear decay: xdot = -x.
    pub fn linear_decay() -> SystemSpec {
        fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
            out[0] = -x[0];
        }
        SystemSpec {
            name: "LinearDecay",
            dimension: 1,
            param_names: &[],
            params: vec![],
            rhs,
            analytic_jacobian: None,
            energy: None,
            default_initial_condition: vec![1.0],
            dt: 0.1,
            period: 10.0,
            flags: SystemFlags {
                hamiltonian: false,
                nonautonomous: false,
                bounded: true,
                chaotic: false,
                transcendental: false,
            },
            unbounded_indices: vec![],
            state_bound: 2.0,
            citation: "",
            description: "",
            annotations: None,
        }
    }

    /// Harmonic oscillator with unit angular frequency.
    pub fn harmonic() -> SystemSpec {
        fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
            out[0] = x[1];
            out[1] = -x[0];
        }
        fn energy(x: &[f64], _p: &[f64]) -> f64 {
            0.5 * (x[0] * x[0] + x[1] * x[1])
        }
        SystemSpec {
            name: "Harmonic",
            dimension: 2,
            param_names: &[],
            params: vec![],
            rhs,
            analytic_jacobian: None,
            energy: Some(energy),
            default_initial_condition: vec![1.0, 0.0],
            dt: 0.01 * std::f64::consts::TAU,
            period: std::f64::consts::TAU,
            flags: SystemFlags {
                hamiltonian: true,
                nonautonomous: false,
                bounded: true,
                chaotic: false,
                transcendental: false,
            },
            unbounded_indices: vec![],
            state_bound: 2.0,
            citation: "",
            description: "",
            annotations: None,
        }
    }

    /// Contracting linear system with a stable fixed point at (2, -1).
    pub fn stable_fixed_point() -> SystemSpec {
        fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
            out[0] = -(x[0] - 2.0);
            out[1] = -2.0 * (x[1] + 1.0);
        }
        SystemSpec {
            name: "StableFixedPoint",
            dimension: 2,
            param_names: &[],
            params: vec![],
            rhs,
            analytic_jacobian: None,
            energy: None,
            default_initial_condition: vec![0.0, 0.0],
            dt: 0.05,
            period: 5.0,
            flags: SystemFlags {
                hamiltonian: false,
                nonautonomous: false,
                bounded: true,
                chaotic: false,
                transcendental: false,
            },
            unbounded_indices: vec![],
            state_bound: 5.0,
            citation: "",
            description: "",
            annotations: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_systems::*;
    use super::*;
    use crate::registry;

    #[test]
    fn rk4_matches_exponential_decay() {
        let spec = linear_decay();
        let traj = integrate_fixed(&spec, &[1.0], 0.1, 1).unwrap();
        assert!((traj.row(1)[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let spec = linear_decay();
        let exact = (-1.0f64).exp();
        let err = |dt: f64| {
            let n = (1.0 / dt).round() as usize;
            let traj = integrate_fixed(&spec, &[1.0], dt, n).unwrap();
            (traj.last_state()[0] - exact).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!(
            (ratio - 16.0).abs() < 0.2 * 16.0,
            "convergence ratio {ratio}"
        );
    }

    #[test]
    fn fixed_integration_is_deterministic() {
        let spec = registry::lookup("Lorenz").unwrap();
        let a = integrate_fixed(spec, &spec.default_initial_condition, 0.005, 500).unwrap();
        let b = integrate_fixed(spec, &spec.default_initial_condition, 0.005, 500).unwrap();
        assert_eq!(a.states, b.states);
    }

    #[test]
    fn lorenz_stays_bounded_and_does_not_recur() {
        let spec = registry::lookup("Lorenz").unwrap();
        let n = (20.0 * spec.period / spec.dt) as usize;
        let traj = integrate_fixed(spec, &spec.default_initial_condition, spec.dt, n).unwrap();
        for i in 0..traj.len() {
            for v in traj.row(i) {
                assert!(v.abs() < spec.state_bound);
            }
        }
        // No state revisited: compare each sampled state to much later ones.
        let first = traj.row(0);
        for i in 100..traj.len() {
            let d: f64 = traj
                .row(i)
                .iter()
                .zip(first)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(d > 1e-6, "trajectory revisited its start at row {i}");
        }
    }

    #[test]
    fn divergence_guard_fires() {
        fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
            out[0] = x[0] * x[0];
        }
        let mut spec = linear_decay();
        spec.rhs = rhs;
        let err = integrate_fixed(&spec, &[10.0], 0.5, 100_000).unwrap_err();
        assert!(matches!(err, ChaosError::Divergence { .. }));
    }

    #[test]
    fn adaptive_preserves_harmonic_amplitude() {
        let spec = harmonic();
        let t_end = 10.0 * spec.period;
        let traj = integrate_adaptive(&spec, &[1.0, 0.0], (0.0, t_end), 1e-9, 1e-12).unwrap();
        for i in 0..traj.len() {
            let r = traj.row(i);
            let amplitude = (r[0] * r[0] + r[1] * r[1]).sqrt();
            assert!((amplitude - 1.0).abs() < 1e-6, "amplitude drift {amplitude}");
        }
    }

    #[test]
    fn adaptive_agrees_with_fine_fixed_step_on_lorenz() {
        let spec = registry::lookup("Lorenz").unwrap();
        let ic = &spec.default_initial_condition;
        let adaptive =
            integrate_adaptive(spec, ic, (0.0, spec.period), 1e-10, 1e-12).unwrap();
        let fine_dt = spec.dt / 4.0;
        let n = (spec.period / fine_dt).round() as usize;
        let fixed = integrate_fixed(spec, ic, fine_dt, n).unwrap();
        // Compare at the adaptive output times (multiples of spec.dt = 4 fine steps).
        for (i, _t) in adaptive.times.iter().enumerate() {
            let a = adaptive.row(i);
            let f = fixed.row(i * 4);
            for (x, y) in a.iter().zip(f) {
                assert!((x - y).abs() < 1e-4, "mismatch at row {i}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn zero_noise_is_bit_identical_to_deterministic() {
        let spec = registry::lookup("Lorenz").unwrap();
        let ic = &spec.default_initial_condition;
        let det = integrate_fixed(spec, ic, 0.005, 300).unwrap();
        let sto = integrate_stochastic(spec, ic, 0.005, 300, 0.0, 42).unwrap();
        assert_eq!(det.states, sto.states);
    }

    #[test]
    fn stochastic_is_reproducible_under_seed() {
        let spec = registry::lookup("Lorenz").unwrap();
        let ic = &spec.default_initial_condition;
        let a = integrate_stochastic(spec, ic, 0.005, 300, 0.025, 7).unwrap();
        let b = integrate_stochastic(spec, ic, 0.005, 300, 0.025, 7).unwrap();
        assert_eq!(a.states, b.states);
        let c = integrate_stochastic(spec, ic, 0.005, 300, 0.025, 8).unwrap();
        assert_ne!(a.states, c.states);
    }

    #[test]
    fn noise_increments_scale_linearly_with_amplitude() {
        let spec = registry::lookup("Lorenz").unwrap();
        let ic = settle_on_attractor(spec, &spec.default_initial_condition, 20).unwrap();
        let dt = spec.dt;
        // Short horizon so chaotic amplification does not swamp the
        // linear-in-amplitude diffusive spread.
        let n = 5;
        let smooth = integrate_fixed(spec, &ic, dt, n).unwrap();
        let spread = |amplitude: f64| -> f64 {
            let mut acc = 0.0;
            let mut count = 0usize;
            for seed in 0..50u64 {
                let noisy = integrate_stochastic(spec, &ic, dt, n, amplitude, seed).unwrap();
                for i in 0..noisy.len() {
                    for (a, b) in noisy.row(i).iter().zip(smooth.row(i)) {
                        acc += (a - b) * (a - b);
                        count += 1;
                    }
                }
            }
            (acc / count as f64).sqrt()
        };
        let ratio = spread(2.0 / 40.0) / spread(1.0 / 40.0);
        assert!(
            (ratio - 2.0).abs() < 0.2,
            "noise spread ratio {ratio}, expected ~2"
        );
    }

    #[test]
    fn settle_converges_to_stable_fixed_point() {
        let spec = stable_fixed_point();
        let settled = settle_on_attractor(&spec, &[0.0, 0.0], 10).unwrap();
        assert!((settled[0] - 2.0).abs() < 1e-6);
        assert!((settled[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn settle_lands_inside_attractor_bounding_box() {
        let spec = registry::lookup("Lorenz").unwrap();
        let settled = settle_on_attractor(spec, &[1.0, 1.0, 1.0], 100).unwrap();
        let n = (50.0 * spec.period / spec.dt) as usize;
        let reference =
            integrate_fixed(spec, &spec.default_initial_condition, spec.dt, n).unwrap();
        for j in 0..3 {
            let col = reference.column(j);
            let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let pad = 0.05 * (hi - lo);
            assert!(
                settled[j] > lo - pad && settled[j] < hi + pad,
                "coordinate {j} = {} outside [{lo}, {hi}]",
                settled[j]
            );
        }
    }

    #[test]
    fn settling_twice_barely_changes_statistics() {
        let spec = registry::lookup("Lorenz").unwrap();
        let once = settle_on_attractor(spec, &[1.0, 1.0, 1.0], 100).unwrap();
        let twice = settle_on_attractor(spec, &once, 100).unwrap();
        let n = (100.0 * spec.period / spec.dt) as usize;
        let a = integrate_fixed(spec, &once, spec.dt, n).unwrap();
        let b = integrate_fixed(spec, &twice, spec.dt, n).unwrap();
        let (sa, sb) = (a.std(), b.std());
        for j in 0..3 {
            let rel = (sa[j] - sb[j]).abs() / sa[j];
            assert!(rel < 0.02, "coordinate {j} std changed by {rel}");
        }
    }

    #[test]
    fn resample_strides_match_stated_rounding() {
        let spec = linear_decay();
        // 500 points per period: dt = period / 500.
        let dt = spec.period / 500.0;
        let traj = integrate_fixed(&spec, &[1.0], dt, 2000).unwrap();
        let fine = resample(&traj, 100.0, spec.period).unwrap();
        assert!((fine.dt() - 5.0 * dt).abs() < 1e-12);
        assert_eq!(fine.len(), 2001usize.div_ceil(5));
        let coarse = resample(&traj, 15.0, spec.period).unwrap();
        assert!((coarse.dt() - 33.0 * dt).abs() < 1e-12);
        assert!(coarse.spacing_deviation() < 1e-9);
    }

    #[test]
    fn resample_rejects_upsampling() {
        let spec = linear_decay();
        let traj = integrate_fixed(&spec, &[1.0], 0.1, 100).unwrap();
        let err = resample(&traj, 1000.0, spec.period).unwrap_err();
        assert!(matches!(err, ChaosError::UpsampleRejected { .. }));
    }

    #[test]
    fn dissipative_systems_contract_volume_on_average() {
        for spec in registry::all_systems().filter(|s| !s.flags.hamiltonian) {
            let settled =
                settle_on_attractor(spec, &spec.default_initial_condition, 50).unwrap();
            // The instantaneous trace can be positive in places (Hadley);
            // only the long-time average must contract.
            let n = (200.0 * spec.period / spec.dt) as usize;
            let traj = integrate_fixed(spec, &settled, spec.dt, n).unwrap();
            let mut acc = 0.0;
            for i in 0..traj.len() {
                acc += spec.jacobian_trace(traj.row(i), traj.times[i]).unwrap();
            }
            let mean_trace = acc / traj.len() as f64;
            assert!(
                mean_trace < 0.0,
                "{}: mean Jacobian trace {mean_trace} not negative",
                spec.name
            );
        }
    }
}
