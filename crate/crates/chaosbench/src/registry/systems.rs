//! The curated system definitions: right-hand sides, analytic Jacobians,
//! parameters, and per-system metadata.
//!
//! Parameter values and initial conditions come from the systems' original
//! publications; each chaotic entry is validated by the positive
//! largest-Lyapunov-exponent check in the characterization test suite.

use super::{SystemFlags, SystemSpec};

const DISSIPATIVE: SystemFlags = SystemFlags {
    hamiltonian: false,
    nonautonomous: false,
    bounded: true,
    chaotic: true,
    transcendental: false,
};

macro_rules! jac {
    ($d:expr, $out:ident, [$($v:expr),* $(,)?]) => {{
        let vals = [$($v),*];
        debug_assert_eq!(vals.len(), $d * $d);
        $out.copy_from_slice(&vals);
    }};
}

pub fn build_all() -> Vec<SystemSpec> {
    vec![
        lorenz(),
        rossler(),
        thomas(),
        chen(),
        halvorsen(),
        dadras(),
        aizawa(),
        four_wing(),
        sprott_b(),
        hadley(),
        rucklidge(),
        hindmarsh_rose(),
        moore_spiegel(),
        genesio_tesi(),
        shimizu_morioka(),
        lorenz96(),
        rikitake(),
        henon_heiles(),
        duffing(),
        driven_pendulum(),
        torus(),
    ]
}

fn lorenz() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (sigma, rho, beta) = (p[0], p[1], p[2]);
        out[0] = sigma * (x[1] - x[0]);
        out[1] = x[0] * (rho - x[2]) - x[1];
        out[2] = x[0] * x[1] - beta * x[2];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (sigma, rho, beta) = (p[0], p[1], p[2]);
        jac!(3, out, [
            -sigma, sigma, 0.0,
            rho - x[2], -1.0, -x[0],
            x[1], x[0], -beta,
        ]);
    }
    SystemSpec {
        name: "Lorenz",
        dimension: 3,
        param_names: &["sigma", "rho", "beta"],
        params: vec![10.0, 28.0, 8.0 / 3.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-9.7869288, -15.03852, 20.533978],
        dt: 0.0093,
        period: 1.49,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 60.0,
        citation: "Lorenz, E. N. (1963). Deterministic nonperiodic flow. J. Atmos. Sci. 20.",
        description: "Atmospheric convection reduced to three modes; the canonical butterfly attractor.",
        annotations: None,
    }
}

fn rossler() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        out[0] = -x[1] - x[2];
        out[1] = x[0] + a * x[1];
        out[2] = b + x[2] * (x[0] - c);
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, c) = (p[0], p[2]);
        jac!(3, out, [
            0.0, -1.0, -1.0,
            1.0, a, 0.0,
            x[2], 0.0, x[0] - c,
        ]);
    }
    SystemSpec {
        name: "Rossler",
        dimension: 3,
        param_names: &["a", "b", "c"],
        params: vec![0.2, 0.2, 5.7],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-9.0, 0.0, 0.0],
        dt: 0.061,
        period: 6.1,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 60.0,
        citation: "Rossler, O. E. (1976). An equation for continuous chaos. Phys. Lett. A 57.",
        description: "Minimal folded-band chaotic flow with a single quadratic term.",
        annotations: None,
    }
}

fn thomas() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let b = p[0];
        out[0] = x[1].sin() - b * x[0];
        out[1] = x[2].sin() - b * x[1];
        out[2] = x[0].sin() - b * x[2];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let b = p[0];
        jac!(3, out, [
            -b, x[1].cos(), 0.0,
            0.0, -b, x[2].cos(),
            x[0].cos(), 0.0, -b,
        ]);
    }
    SystemSpec {
        name: "Thomas",
        dimension: 3,
        param_names: &["b"],
        params: vec![0.18],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.1, 1.1, -0.9],
        dt: 0.27,
        period: 27.0,
        flags: SystemFlags {
            transcendental: true,
            ..DISSIPATIVE
        },
        unbounded_indices: vec![],
        state_bound: 12.0,
        citation: "Thomas, R. (1999). Deterministic chaos seen in terms of feedback circuits. Int. J. Bifurc. Chaos 9.",
        description: "Cyclically symmetric labyrinth chaos from a biological feedback circuit.",
        annotations: None,
    }
}

fn chen() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        out[0] = a * (x[1] - x[0]);
        out[1] = (c - a) * x[0] - x[0] * x[2] + c * x[1];
        out[2] = x[0] * x[1] - b * x[2];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        jac!(3, out, [
            -a, a, 0.0,
            c - a - x[2], c, -x[0],
            x[1], x[0], -b,
        ]);
    }
    SystemSpec {
        name: "Chen",
        dimension: 3,
        param_names: &["a", "b", "c"],
        params: vec![35.0, 3.0, 28.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-3.0, 2.0, 20.0],
        dt: 0.0026,
        period: 0.42,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 80.0,
        citation: "Chen, G. & Ueta, T. (1999). Yet another chaotic attractor. Int. J. Bifurc. Chaos 9.",
        description: "Dual of the Lorenz system arising from anti-control of chaos.",
        annotations: None,
    }
}

fn halvorsen() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let a = p[0];
        out[0] = -a * x[0] - 4.0 * x[1] - 4.0 * x[2] - x[1] * x[1];
        out[1] = -a * x[1] - 4.0 * x[2] - 4.0 * x[0] - x[2] * x[2];
        out[2] = -a * x[2] - 4.0 * x[0] - 4.0 * x[1] - x[0] * x[0];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let a = p[0];
        jac!(3, out, [
            -a, -4.0 - 2.0 * x[1], -4.0,
            -4.0, -a, -4.0 - 2.0 * x[2],
            -4.0 - 2.0 * x[0], -4.0, -a,
        ]);
    }
    SystemSpec {
        name: "Halvorsen",
        dimension: 3,
        param_names: &["a"],
        params: vec![1.4],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-5.0, 0.0, 0.0],
        dt: 0.011,
        period: 1.8,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 30.0,
        citation: "Sprott, J. C. (2010). Elegant Chaos. World Scientific. (Halvorsen's cyclically symmetric attractor.)",
        description: "Cyclically symmetric three-wing attractor with strong dissipation.",
        annotations: None,
    }
}

fn dadras() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c, d, e) = (p[0], p[1], p[2], p[3], p[4]);
        out[0] = x[1] - a * x[0] + b * x[1] * x[2];
        out[1] = c * x[1] - x[0] * x[2] + x[2];
        out[2] = d * x[0] * x[1] - e * x[2];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c, d, e) = (p[0], p[1], p[2], p[3], p[4]);
        jac!(3, out, [
            -a, 1.0 + b * x[2], b * x[1],
            -x[2], c, 1.0 - x[0],
            d * x[1], d * x[0], -e,
        ]);
    }
    SystemSpec {
        name: "Dadras",
        dimension: 3,
        param_names: &["a", "b", "c", "d", "e"],
        params: vec![3.0, 2.7, 1.7, 2.0, 9.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![1.1, 2.1, -2.0],
        dt: 0.029,
        period: 4.6,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 40.0,
        citation: "Dadras, S. & Momeni, H. R. (2009). A novel three-dimensional autonomous chaotic system. Phys. Lett. A 373.",
        description: "Four-scroll attractor generated by cross-product nonlinearities.",
        annotations: None,
    }
}

fn aizawa() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c, d, e, f) = (p[0], p[1], p[2], p[3], p[4], p[5]);
        out[0] = (x[2] - b) * x[0] - d * x[1];
        out[1] = d * x[0] + (x[2] - b) * x[1];
        out[2] = c + a * x[2] - x[2].powi(3) / 3.0
            - (x[0] * x[0] + x[1] * x[1]) * (1.0 + e * x[2])
            + f * x[2] * x[0].powi(3);
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, _c, d, e, f) = (p[0], p[1], p[2], p[3], p[4], p[5]);
        jac!(3, out, [
            x[2] - b, -d, x[0],
            d, x[2] - b, x[1],
            -2.0 * x[0] * (1.0 + e * x[2]) + 3.0 * f * x[2] * x[0] * x[0],
            -2.0 * x[1] * (1.0 + e * x[2]),
            a - x[2] * x[2] - e * (x[0] * x[0] + x[1] * x[1]) + f * x[0].powi(3),
        ]);
    }
    SystemSpec {
        name: "Aizawa",
        dimension: 3,
        param_names: &["a", "b", "c", "d", "e", "f"],
        params: vec![0.95, 0.7, 0.6, 3.5, 0.25, 0.1],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.1, 0.0, 0.0],
        dt: 0.018,
        period: 1.8,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 10.0,
        citation: "Aizawa, Y. (1982). Global aspects of the dissipative dynamical systems. Prog. Theor. Phys. 68.",
        description: "Sphere-like attractor with a central spindle from a dissipative normal form.",
        annotations: None,
    }
}

fn four_wing() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        out[0] = a * x[0] + x[1] * x[2];
        out[1] = b * x[0] + c * x[1] - x[0] * x[2];
        out[2] = -x[2] - x[0] * x[1];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        jac!(3, out, [
            a, x[2], x[1],
            b - x[2], c, -x[0],
            -x[1], -x[0], -1.0,
        ]);
    }
    SystemSpec {
        name: "FourWing",
        dimension: 3,
        param_names: &["a", "b", "c"],
        params: vec![0.2, 0.01, -0.4],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![1.3, -0.18, 0.01],
        dt: 0.075,
        period: 7.5,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 10.0,
        citation: "Wang, Z. et al. (2009). A four-wing butterfly attractor from a fully autonomous system. Int. J. Bifurc. Chaos 19.",
        description: "Four-wing butterfly attractor symmetric under coordinate reflection.",
        annotations: None,
    }
}

fn sprott_b() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
        out[0] = x[1] * x[2];
        out[1] = x[0] - x[1];
        out[2] = 1.0 - x[0] * x[1];
    }
    fn jacobian(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
        jac!(3, out, [
            0.0, x[2], x[1],
            1.0, -1.0, 0.0,
            -x[1], -x[0], 0.0,
        ]);
    }
    SystemSpec {
        name: "SprottB",
        dimension: 3,
        param_names: &[],
        params: vec![],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.3, 1.1, 0.8],
        dt: 0.035,
        period: 3.5,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 30.0,
        citation: "Sprott, J. C. (1994). Some simple chaotic flows. Phys. Rev. E 50.",
        description: "Algebraically minimal chaotic flow (case B) with two quadratic terms.",
        annotations: None,
    }
}

fn hadley() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, f, g) = (p[0], p[1], p[2], p[3]);
        out[0] = -x[1] * x[1] - x[2] * x[2] - a * x[0] + a * f;
        out[1] = x[0] * x[1] - b * x[0] * x[2] - x[1] + g;
        out[2] = b * x[0] * x[1] + x[0] * x[2] - x[2];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, _f, _g) = (p[0], p[1], p[2], p[3]);
        jac!(3, out, [
            -a, -2.0 * x[1], -2.0 * x[2],
            x[1] - b * x[2], x[0] - 1.0, -b * x[0],
            b * x[1] + x[2], b * x[0], x[0] - 1.0,
        ]);
    }
    SystemSpec {
        name: "Hadley",
        dimension: 3,
        param_names: &["a", "b", "f", "g"],
        params: vec![0.25, 4.0, 8.0, 1.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.39, -1.0, 0.3],
        dt: 0.0115,
        period: 1.15,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 20.0,
        citation: "Lorenz, E. N. (1984). Irregularity: a fundamental property of the atmosphere. Tellus A 36.",
        description: "Low-order model of the Hadley circulation in the atmosphere.",
        annotations: None,
    }
}

fn rucklidge() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (kappa, lambda) = (p[0], p[1]);
        out[0] = -kappa * x[0] + lambda * x[1] - x[1] * x[2];
        out[1] = x[0];
        out[2] = -x[2] + x[1] * x[1];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (kappa, lambda) = (p[0], p[1]);
        jac!(3, out, [
            -kappa, lambda - x[2], -x[1],
            1.0, 0.0, 0.0,
            0.0, 2.0 * x[1], -1.0,
        ]);
    }
    SystemSpec {
        name: "Rucklidge",
        dimension: 3,
        param_names: &["kappa", "lambda"],
        params: vec![2.0, 6.7],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![1.0, 0.0, 4.5],
        dt: 0.06,
        period: 6.0,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 20.0,
        citation: "Rucklidge, A. M. (1992). Chaos in models of double convection. J. Fluid Mech. 237.",
        description: "Double-convection model reducing to a Lorenz-like flow.",
        annotations: None,
    }
}

fn hindmarsh_rose() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c, d, r, s, x0, i_ext) =
            (p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]);
        out[0] = x[1] - a * x[0].powi(3) + b * x[0] * x[0] - x[2] + i_ext;
        out[1] = c - d * x[0] * x[0] - x[1];
        out[2] = r * (s * (x[0] - x0) - x[2]);
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, _c, d, r, s, _x0, _i) =
            (p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]);
        jac!(3, out, [
            -3.0 * a * x[0] * x[0] + 2.0 * b * x[0], 1.0, -1.0,
            -2.0 * d * x[0], -1.0, 0.0,
            r * s, 0.0, -r,
        ]);
    }
    SystemSpec {
        name: "HindmarshRose",
        dimension: 3,
        param_names: &["a", "b", "c", "d", "r", "s", "x0", "i_ext"],
        params: vec![1.0, 3.0, 1.0, 5.0, 0.006, 4.0, -1.6, 3.25],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-0.8, -2.5, 3.2],
        dt: 0.015,
        period: 7.5,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 20.0,
        citation: "Hindmarsh, J. L. & Rose, R. M. (1984). A model of neuronal bursting using three coupled first order differential equations. Proc. R. Soc. B 221.",
        description: "Bursting neuron model with slow-fast spiking dynamics.",
        annotations: None,
    }
}

fn moore_spiegel() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (t_big, r_big) = (p[0], p[1]);
        out[0] = x[1];
        out[1] = x[2];
        out[2] = -x[2] - (t_big - r_big + r_big * x[0] * x[0]) * x[1] - t_big * x[0];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (t_big, r_big) = (p[0], p[1]);
        jac!(3, out, [
            0.0, 1.0, 0.0,
            0.0, 0.0, 1.0,
            -2.0 * r_big * x[0] * x[1] - t_big,
            -(t_big - r_big + r_big * x[0] * x[0]),
            -1.0,
        ]);
    }
    SystemSpec {
        name: "MooreSpiegel",
        dimension: 3,
        param_names: &["T", "R"],
        params: vec![6.0, 20.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.2, 0.2, 0.2],
        dt: 0.0105,
        period: 2.1,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 30.0,
        citation: "Moore, D. W. & Spiegel, E. A. (1966). A thermally excited non-linear oscillator. Astrophys. J. 143.",
        description: "Thermally excited oscillator from astrophysical convection.",
        annotations: None,
    }
}

fn genesio_tesi() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        out[0] = x[1];
        out[1] = x[2];
        out[2] = -c * x[0] - b * x[1] - a * x[2] + x[0] * x[0];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (a, b, c) = (p[0], p[1], p[2]);
        jac!(3, out, [
            0.0, 1.0, 0.0,
            0.0, 0.0, 1.0,
            -c + 2.0 * x[0], -b, -a,
        ]);
    }
    SystemSpec {
        name: "GenesioTesi",
        dimension: 3,
        param_names: &["a", "b", "c"],
        params: vec![0.44, 1.1, 1.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.1, 0.1, 0.1],
        dt: 0.06,
        period: 6.0,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 10.0,
        citation: "Genesio, R. & Tesi, A. (1992). Harmonic balance methods for the analysis of chaotic dynamics in nonlinear systems. Automatica 28.",
        description: "Jerk-form chaotic system used for harmonic-balance analysis.",
        annotations: None,
    }
}

fn shimizu_morioka() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (lambda, alpha) = (p[0], p[1]);
        out[0] = x[1];
        out[1] = x[0] - lambda * x[1] - x[0] * x[2];
        out[2] = -alpha * x[2] + x[0] * x[0];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (lambda, alpha) = (p[0], p[1]);
        jac!(3, out, [
            0.0, 1.0, 0.0,
            1.0 - x[2], -lambda, -x[0],
            2.0 * x[0], 0.0, -alpha,
        ]);
    }
    SystemSpec {
        name: "ShimizuMorioka",
        dimension: 3,
        param_names: &["lambda", "alpha"],
        params: vec![0.75, 0.45],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-1.0, 0.0, 0.5],
        dt: 0.056,
        period: 5.6,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 10.0,
        citation: "Shimizu, T. & Morioka, N. (1980). On the bifurcation of a symmetric limit cycle to an asymmetric one in a simple model. Phys. Lett. A 76.",
        description: "Lorenz-like model for large-Rayleigh-number convection.",
        annotations: None,
    }
}

fn lorenz96() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let f = p[0];
        let n = x.len();
        for i in 0..n {
            let ip1 = (i + 1) % n;
            let im1 = (i + n - 1) % n;
            let im2 = (i + n - 2) % n;
            out[i] = (x[ip1] - x[im2]) * x[im1] - x[i] + f;
        }
    }
    fn jacobian(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
        let n = x.len();
        out.fill(0.0);
        for i in 0..n {
            let ip1 = (i + 1) % n;
            let im1 = (i + n - 1) % n;
            let im2 = (i + n - 2) % n;
            out[i * n + i] += -1.0;
            out[i * n + ip1] += x[im1];
            out[i * n + im1] += x[ip1] - x[im2];
            out[i * n + im2] += -x[im1];
        }
    }
    SystemSpec {
        name: "Lorenz96",
        dimension: 5,
        param_names: &["F"],
        params: vec![8.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![8.01, 8.0, 8.0, 8.0, 8.0],
        dt: 0.016,
        period: 1.6,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 30.0,
        citation: "Lorenz, E. N. (1996). Predictability: a problem partly solved. Proc. ECMWF Seminar on Predictability.",
        description: "Cyclic midlatitude-atmosphere toy model with five sites.",
        annotations: None,
    }
}

fn rikitake() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (mu, a) = (p[0], p[1]);
        out[0] = -mu * x[0] + x[2] * x[1];
        out[1] = -mu * x[1] + x[0] * (x[2] - a);
        out[2] = 1.0 - x[0] * x[1];
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (mu, a) = (p[0], p[1]);
        jac!(3, out, [
            -mu, x[2], x[1],
            x[2] - a, -mu, x[0],
            -x[1], -x[0], 0.0,
        ]);
    }
    SystemSpec {
        name: "Rikitake",
        dimension: 3,
        param_names: &["mu", "a"],
        params: vec![2.0, 5.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![-1.4, -3.0, 4.4],
        dt: 0.045,
        period: 4.5,
        flags: DISSIPATIVE,
        unbounded_indices: vec![],
        state_bound: 20.0,
        citation: "Rikitake, T. (1958). Oscillations of a system of disk dynamos. Proc. Camb. Phil. Soc. 54.",
        description: "Coupled disk dynamos modelling geomagnetic polarity reversals.",
        annotations: None,
    }
}

fn henon_heiles() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
        // state: (x, y, px, py)
        out[0] = x[2];
        out[1] = x[3];
        out[2] = -x[0] - 2.0 * x[0] * x[1];
        out[3] = -x[1] - x[0] * x[0] + x[1] * x[1];
    }
    fn jacobian(x: &[f64], _t: f64, _p: &[f64], out: &mut [f64]) {
        jac!(4, out, [
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            -1.0 - 2.0 * x[1], -2.0 * x[0], 0.0, 0.0,
            -2.0 * x[0], -1.0 + 2.0 * x[1], 0.0, 0.0,
        ]);
    }
    fn energy(x: &[f64], _p: &[f64]) -> f64 {
        0.5 * (x[2] * x[2] + x[3] * x[3])
            + 0.5 * (x[0] * x[0] + x[1] * x[1])
            + x[0] * x[0] * x[1]
            - x[1].powi(3) / 3.0
    }
    SystemSpec {
        name: "HenonHeiles",
        dimension: 4,
        param_names: &[],
        params: vec![],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: Some(energy),
        // E = 1/6: chaotic sea at the escape-energy boundary.
        default_initial_condition: vec![0.0, 0.0, (1.0f64 / 3.0).sqrt(), 0.0],
        dt: 0.063,
        period: 6.3,
        flags: SystemFlags {
            hamiltonian: true,
            nonautonomous: false,
            bounded: true,
            chaotic: true,
            transcendental: false,
        },
        unbounded_indices: vec![],
        state_bound: 3.0,
        citation: "Henon, M. & Heiles, C. (1964). The applicability of the third integral of motion. Astron. J. 69.",
        description: "Galactic-potential Hamiltonian with mixed regular and chaotic regions.",
        annotations: None,
    }
}

fn duffing() -> SystemSpec {
    fn rhs(x: &[f64], t: f64, p: &[f64], out: &mut [f64]) {
        let (delta, gamma, omega) = (p[0], p[1], p[2]);
        out[0] = x[1];
        out[1] = -delta * x[1] + x[0] - x[0].powi(3) + gamma * (omega * t).cos();
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let delta = p[0];
        jac!(2, out, [
            0.0, 1.0,
            1.0 - 3.0 * x[0] * x[0], -delta,
        ]);
    }
    SystemSpec {
        name: "Duffing",
        dimension: 2,
        param_names: &["delta", "gamma", "omega"],
        params: vec![0.25, 0.3, 1.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![1.0, 0.0],
        dt: 0.0628,
        period: std::f64::consts::TAU,
        flags: SystemFlags {
            hamiltonian: false,
            nonautonomous: true,
            bounded: true,
            chaotic: true,
            transcendental: true,
        },
        unbounded_indices: vec![],
        state_bound: 5.0,
        citation: "Guckenheimer, J. & Holmes, P. (1983). Nonlinear Oscillations, Dynamical Systems, and Bifurcations of Vector Fields. Springer.",
        description: "Periodically forced double-well oscillator with homoclinic chaos.",
        annotations: None,
    }
}

fn driven_pendulum() -> SystemSpec {
    fn rhs(x: &[f64], t: f64, p: &[f64], out: &mut [f64]) {
        let (damping, amplitude, omega) = (p[0], p[1], p[2]);
        out[0] = x[1];
        out[1] = -x[0].sin() - damping * x[1] + amplitude * (omega * t).cos();
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let damping = p[0];
        jac!(2, out, [
            0.0, 1.0,
            -x[0].cos(), -damping,
        ]);
    }
    SystemSpec {
        name: "DrivenPendulum",
        dimension: 2,
        param_names: &["damping", "amplitude", "omega"],
        params: vec![0.5, 1.2, 2.0 / 3.0],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![0.8, 0.8],
        dt: 0.094,
        period: 3.0 * std::f64::consts::PI,
        flags: SystemFlags {
            hamiltonian: false,
            nonautonomous: true,
            bounded: true,
            chaotic: true,
            transcendental: true,
        },
        // The angle winds: rotations accumulate without bound.
        unbounded_indices: vec![0],
        state_bound: 6.0,
        citation: "Baker, G. L. & Gollub, J. P. (1990). Chaotic Dynamics: An Introduction. Cambridge University Press.",
        description: "Damped sinusoidally driven pendulum; the angle coordinate winds freely.",
        annotations: None,
    }
}

fn torus() -> SystemSpec {
    fn rhs(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (omega1, omega2) = (p[0], p[1]);
        let r1 = x[0] * x[0] + x[1] * x[1];
        let r2 = x[2] * x[2] + x[3] * x[3];
        out[0] = -omega1 * x[1] + x[0] * (1.0 - r1);
        out[1] = omega1 * x[0] + x[1] * (1.0 - r1);
        out[2] = -omega2 * x[3] + x[2] * (1.0 - r2);
        out[3] = omega2 * x[2] + x[3] * (1.0 - r2);
    }
    fn jacobian(x: &[f64], _t: f64, p: &[f64], out: &mut [f64]) {
        let (omega1, omega2) = (p[0], p[1]);
        let r1 = x[0] * x[0] + x[1] * x[1];
        let r2 = x[2] * x[2] + x[3] * x[3];
        jac!(4, out, [
            1.0 - r1 - 2.0 * x[0] * x[0], -omega1 - 2.0 * x[0] * x[1], 0.0, 0.0,
            omega1 - 2.0 * x[0] * x[1], 1.0 - r1 - 2.0 * x[1] * x[1], 0.0, 0.0,
            0.0, 0.0, 1.0 - r2 - 2.0 * x[2] * x[2], -omega2 - 2.0 * x[2] * x[3],
            0.0, 0.0, omega2 - 2.0 * x[2] * x[3], 1.0 - r2 - 2.0 * x[3] * x[3],
        ]);
    }
    let omega1 = std::f64::consts::TAU * 0.2;
    SystemSpec {
        name: "Torus",
        dimension: 4,
        param_names: &["omega1", "omega2"],
        params: vec![omega1, omega1 * std::f64::consts::SQRT_2],
        rhs,
        analytic_jacobian: Some(jacobian),
        energy: None,
        default_initial_condition: vec![1.0, 0.0, 1.0, 0.0],
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
        state_bound: 2.0,
        citation: "Two attracting limit-cycle oscillators at incommensurate frequencies (standard quasiperiodic normal form).",
        description: "Quasiperiodic flow on an attracting two-torus; zero largest Lyapunov exponent.",
        annotations: None,
    }
}
