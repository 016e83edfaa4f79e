//! Time evolution of the battery ⊗ nucleus master equation and the analytic
//! oracles it is checked against.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::nv_model::{
    apply_lindbladian, build_effective_hamiltonian, nuclear_up_projector, E_DOWN, E_UP, G_DOWN, G_UP,
};
use crate::qcore::{hermitian_eigensystem, trace_out_nucleus, DensityMatrix, SquareComplexMatrix, I, ONE, ZERO};
use crate::{mhz, TWO_PI};

/// Hard floor on the sampled spectrum; anything below is a step-size or model bug.
pub const POSITIVITY_HARD_TOL: f64 = 1e-6;
/// Internal steps must resolve the fastest period at least this finely.
pub const MIN_STEPS_PER_PERIOD: f64 = 200.0;
/// Default resolution used by [`TimeGrid::for_dynamics`].
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 1000.0;
/// Numeric steadiness: ‖rhs‖_F below this …
pub const STEADY_RHS_TOL: f64 = 1e-10;
/// … or elapsed time beyond this many 1/γ.
pub const STEADY_MAX_DECAY_TIMES: f64 = 30.0;

/// Parameters of the effective dynamics, rad/μs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dynamics {
    pub delta: f64,
    pub omega_rabi: f64,
    pub gamma: f64,
    pub a_par: f64,
}

impl Dynamics {
    pub fn new(delta: f64, omega_rabi: f64, gamma: f64, a_par: f64) -> Self {
        Self {
            delta,
            omega_rabi,
            gamma,
            a_par,
        }
    }

    /// Drive off, Δ forced to zero.
    pub fn storage(gamma: f64, a_par: f64) -> Self {
        Self::new(0.0, 0.0, gamma, a_par)
    }

    pub fn hamiltonian(&self) -> SquareComplexMatrix {
        build_effective_hamiltonian(self.delta, self.omega_rabi, self.a_par)
    }

    /// T_min = 2π / max(|Δ| + A∥, Ω, γ, 2π·0.01)
    pub fn shortest_period(&self) -> f64 {
        let fastest = (self.delta.abs() + self.a_par)
            .max(self.omega_rabi)
            .max(self.gamma)
            .max(mhz(0.01));
        TWO_PI / fastest
    }

    pub fn max_step(&self) -> f64 {
        self.shortest_period() / MIN_STEPS_PER_PERIOD
    }

    pub fn default_step(&self) -> f64 {
        self.shortest_period() / DEFAULT_STEPS_PER_PERIOD
    }
}

/// Uniform sample times with an integer number of internal steps between samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_samples: usize,
    pub dt_internal: f64,
    substeps: usize,
}

impl TimeGrid {
    /// Picks the largest internal step ≤ `dt_max` that divides the sample spacing.
    pub fn new(t_start: f64, t_end: f64, n_samples: usize, dt_max: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(Error::OutOfRange {
                name: "t_end",
                value: t_end,
                reason: "time window must satisfy t_end > t_start",
            });
        }
        if n_samples < 2 {
            return Err(Error::OutOfRange {
                name: "n_samples",
                value: n_samples as f64,
                reason: "need at least two samples",
            });
        }
        if !(dt_max.is_finite() && dt_max > 0.0) {
            return Err(Error::OutOfRange {
                name: "dt_internal",
                value: dt_max,
                reason: "internal step must be positive",
            });
        }
        let spacing = (t_end - t_start) / (n_samples - 1) as f64;
        let substeps = ((spacing / dt_max).ceil() as usize).max(1);
        Ok(Self {
            t_start,
            t_end,
            n_samples,
            dt_internal: spacing / substeps as f64,
            substeps,
        })
    }

    pub fn for_dynamics(t_start: f64, t_end: f64, n_samples: usize, dynamics: &Dynamics) -> Result<Self> {
        Self::new(t_start, t_end, n_samples, dynamics.default_step())
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_samples - 1) as f64
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.n_samples {
            self.t_end
        } else {
            self.t_start + k as f64 * self.spacing()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_samples).map(|k| self.time(k)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory has at least two samples")
    }

    /// Battery states ρ_b(t).
    pub fn reduced_states(&self) -> Vec<DensityMatrix> {
        self.states
            .iter()
            .map(|s| DensityMatrix::from_checked_spectrum(trace_out_nucleus(s.matrix())))
            .collect()
    }

    /// Tr[(1 ⊗ |↑⟩⟨↑|) ρ(t)] per sample.
    pub fn nuclear_up_population(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| s.population(E_UP) + s.population(G_UP))
            .collect()
    }
}

/// Classic fourth-order step of dρ/dt = 𝓛ρ.
fn rk4_step(h: &SquareComplexMatrix, gamma: f64, rho: &SquareComplexMatrix, dt: f64) -> SquareComplexMatrix {
    let k1 = apply_lindbladian(h, gamma, rho);
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::from(0.5 * dt), &k1);
    let k2 = apply_lindbladian(h, gamma, &tmp);
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::from(0.5 * dt), &k2);
    let k3 = apply_lindbladian(h, gamma, &tmp);
    let mut tmp = rho.clone();
    tmp.add_scaled(C64::from(dt), &k3);
    let k4 = apply_lindbladian(h, gamma, &tmp);

    let mut next = rho.clone();
    next.add_scaled(C64::from(dt / 6.0), &k1);
    next.add_scaled(C64::from(dt / 3.0), &k2);
    next.add_scaled(C64::from(dt / 3.0), &k3);
    next.add_scaled(C64::from(dt / 6.0), &k4);
    next.hermitian_part()
}

fn checked_sample(m: SquareComplexMatrix, t: f64) -> Result<DensityMatrix> {
    let min = hermitian_eigensystem(&m)?.eigenvalues[0];
    if min < -POSITIVITY_HARD_TOL {
        return Err(Error::PositivityLost { t, min_eigenvalue: min });
    }
    if min < -crate::qcore::DENSITY_POSITIVITY_TOL {
        log::warn!("slightly negative eigenvalue {min:.3e} at t = {t:.6} us");
    }
    Ok(DensityMatrix::from_checked_spectrum(m))
}

fn check_state_dim(rho0: &DensityMatrix) -> Result<()> {
    if rho0.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho0.dim(),
        });
    }
    Ok(())
}

/// Fixed-step RK4 integration of the master equation, sampled on `grid`.
pub fn integrate(rho0: &DensityMatrix, dynamics: &Dynamics, grid: &TimeGrid) -> Result<Trajectory> {
    check_state_dim(rho0)?;
    let max = dynamics.max_step();
    if grid.dt_internal > max * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            dt: grid.dt_internal,
            max,
        });
    }
    let h = dynamics.hamiltonian();
    let mut rho = rho0.matrix().clone();
    let mut states = Vec::with_capacity(grid.n_samples);
    states.push(rho0.clone());
    for k in 1..grid.n_samples {
        for _ in 0..grid.substeps {
            rho = rk4_step(&h, dynamics.gamma, &rho, grid.dt_internal);
        }
        states.push(checked_sample(rho.clone(), grid.time(k))?);
    }
    Ok(Trajectory { grid: *grid, states })
}

/// State at a single time `t` after `rho0`, integrated with the default step.
pub fn evolve_to(rho0: &DensityMatrix, dynamics: &Dynamics, t: f64) -> Result<DensityMatrix> {
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let grid = TimeGrid::for_dynamics(0.0, t, 2, dynamics)?;
    Ok(integrate(rho0, dynamics, &grid)?.states.pop().expect("two samples"))
}

/// Integrates until ‖𝓛ρ‖_F < 1e-10 or t > 30/γ; returns the state and the
/// time at which steadiness was declared.
pub fn relax_to_steady(rho0: &DensityMatrix, dynamics: &Dynamics) -> Result<(DensityMatrix, f64)> {
    check_state_dim(rho0)?;
    if dynamics.gamma <= 0.0 {
        return Err(Error::NoSteadyState);
    }
    let h = dynamics.hamiltonian();
    let dt = dynamics.max_step();
    let t_max = STEADY_MAX_DECAY_TIMES / dynamics.gamma;
    let mut rho = rho0.matrix().clone();
    let mut t = 0.0;
    while t <= t_max {
        if apply_lindbladian(&h, dynamics.gamma, &rho).frobenius_norm() < STEADY_RHS_TOL {
            break;
        }
        rho = rk4_step(&h, dynamics.gamma, &rho, dt);
        t += dt;
    }
    Ok((checked_sample(rho, t)?, t))
}

/// Driven, damped qubit fixed point in (|e⟩, |g⟩) order:
/// (1/η)[[Ω², −2ΔΩ − iγΩ], [−2ΔΩ + iγΩ, η − Ω²]], η = 4Δ² + 2Ω² + γ².
pub fn steady_state_qubit(delta: f64, omega_rabi: f64, gamma: f64) -> Result<DensityMatrix> {
    if !(gamma > 0.0) {
        return Err(Error::NoSteadyState);
    }
    let eta = 4.0 * delta * delta + 2.0 * omega_rabi * omega_rabi + gamma * gamma;
    let pe = omega_rabi * omega_rabi / eta;
    let c = C64::new(-2.0 * delta * omega_rabi, -gamma * omega_rabi) / eta;
    let m = SquareComplexMatrix::from_rows([[C64::from(pe), c], [c.conj(), C64::from(1.0 - pe)]])?;
    DensityMatrix::new(m)
}

/// Battery steady state with the nucleus prepared at angle ψ: the ↓ sector
/// sees detuning Δ, the ↑ sector Δ + A∥; nuclear cross-coherences decay.
pub fn steady_state_reduced(
    nuclear: &crate::nv_model::NuclearInit,
    delta: f64,
    omega_rabi: f64,
    gamma: f64,
    a_par: f64,
) -> Result<DensityMatrix> {
    let w_up = nuclear.up_weight();
    let down = steady_state_qubit(delta, omega_rabi, gamma)?;
    let up = steady_state_qubit(delta + a_par, omega_rabi, gamma)?;
    let m = &down.matrix().scale_real(1.0 - w_up) + &up.matrix().scale_real(w_up);
    DensityMatrix::new(m)
}

/// Exact storage-stage solution (Ω = 0, Δ = 0, H = A∥|e↑⟩⟨e↑|).
pub fn storage_closed_form(rho0: &DensityMatrix, gamma: f64, a_par: f64, t: f64) -> Result<DensityMatrix> {
    check_state_dim(rho0)?;
    let r = rho0.matrix();
    let decay = (-gamma * t).exp();
    let half_decay = (-0.5 * gamma * t).exp();
    let phase = (-I * a_par * t).exp(); // e^{−iA∥t}
    let mut out = SquareComplexMatrix::zeros(4);

    // excited sector
    out[(E_UP, E_UP)] = r[(E_UP, E_UP)] * decay;
    out[(E_DOWN, E_DOWN)] = r[(E_DOWN, E_DOWN)] * decay;
    out[(E_UP, E_DOWN)] = r[(E_UP, E_DOWN)] * phase * decay;
    out[(E_DOWN, E_UP)] = r[(E_DOWN, E_UP)] * phase.conj() * decay;

    // electron coherences
    for g in [G_UP, G_DOWN] {
        out[(E_UP, g)] = r[(E_UP, g)] * phase * half_decay;
        out[(g, E_UP)] = r[(g, E_UP)] * phase.conj() * half_decay;
        out[(E_DOWN, g)] = r[(E_DOWN, g)] * half_decay;
        out[(g, E_DOWN)] = r[(g, E_DOWN)] * half_decay;
    }

    // ground sector fed by γ∫ρ_ee
    out[(G_UP, G_UP)] = r[(G_UP, G_UP)] + r[(E_UP, E_UP)] * (1.0 - decay);
    out[(G_DOWN, G_DOWN)] = r[(G_DOWN, G_DOWN)] + r[(E_DOWN, E_DOWN)] * (1.0 - decay);
    let rate = C64::new(gamma, a_par);
    let feed = if rate.norm() == 0.0 {
        ZERO
    } else {
        gamma * (ONE - (-rate * t).exp()) / rate
    };
    out[(G_UP, G_DOWN)] = r[(G_UP, G_DOWN)] + r[(E_UP, E_DOWN)] * feed;
    out[(G_DOWN, G_UP)] = r[(G_DOWN, G_UP)] + r[(E_DOWN, E_UP)] * feed.conj();

    DensityMatrix::new(out.hermitian_part())
}

/// exp(A) by scaling and squaring with a degree-20 Taylor polynomial.
fn expm(a: &SquareComplexMatrix) -> SquareComplexMatrix {
    let n = a.dim();
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a.scale_real(0.5f64.powi(squarings));
    let mut result = SquareComplexMatrix::identity(n);
    let mut term = SquareComplexMatrix::identity(n);
    for k in 1..=20 {
        term = (&term * &b).scale_real(1.0 / k as f64);
        result = &result + &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Generator of the 2×2 block ρ_{(·,n),(·,n′)} vectorized row-major.
fn block_generator(delta: f64, omega_rabi: f64, gamma: f64, a_par: f64, up_row: bool, up_col: bool) -> SquareComplexMatrix {
    let qubit_h = |shift: f64| {
        SquareComplexMatrix::from_real_rows([[delta + shift, 0.5 * omega_rabi], [0.5 * omega_rabi, 0.0]])
            .expect("2×2")
    };
    let h_row = qubit_h(if up_row { a_par } else { 0.0 });
    let h_col = qubit_h(if up_col { a_par } else { 0.0 });
    let sigma = SquareComplexMatrix::from_real_rows([[0.0, 0.0], [1.0, 0.0]]).expect("2×2");
    let excited = SquareComplexMatrix::from_real_rows([[1.0, 0.0], [0.0, 0.0]]).expect("2×2");

    let mut g = SquareComplexMatrix::zeros(4);
    for col in 0..4 {
        let mut x = SquareComplexMatrix::zeros(2);
        x[(col / 2, col % 2)] = ONE;
        let mut image = (&(&h_row * &x) - &(&x * &h_col)).scale(-I);
        image.add_scaled(C64::from(gamma), &(&(&sigma * &x) * &sigma.adjoint()));
        image.add_scaled(C64::from(-0.5 * gamma), &excited.anticommutator(&x));
        for row in 0..4 {
            g[(row, col)] = image[(row / 2, row % 2)];
        }
    }
    g
}

/// Independent route: each nuclear-sector block (n, n′) evolves under its own
/// exact propagator, then the 4×4 state is reassembled.
pub fn block_evolve_oracle(rho0: &DensityMatrix, dynamics: &Dynamics, grid: &TimeGrid) -> Result<Trajectory> {
    check_state_dim(rho0)?;
    let r = rho0.matrix();
    // nuclear index 0 = ↑, 1 = ↓; full index = 2·electron + nuclear
    let sectors = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    let generators: Vec<SquareComplexMatrix> = sectors
        .iter()
        .map(|&(n, m)| {
            block_generator(dynamics.delta, dynamics.omega_rabi, dynamics.gamma, dynamics.a_par, n == 0, m == 0)
        })
        .collect();

    let mut states = Vec::with_capacity(grid.n_samples);
    for k in 0..grid.n_samples {
        let t = grid.time(k) - grid.t_start;
        let mut out = SquareComplexMatrix::zeros(4);
        for (&(n, m), gen) in sectors.iter().zip(&generators) {
            let prop = expm(&gen.scale_real(t));
            let x0: Vec<C64> = (0..4).map(|v| r[(2 * (v / 2) + n, 2 * (v % 2) + m)]).collect();
            for row in 0..4 {
                let val: C64 = (0..4).map(|c| prop[(row, c)] * x0[c]).sum();
                out[(2 * (row / 2) + n, 2 * (row % 2) + m)] = val;
            }
        }
        states.push(checked_sample(out.hermitian_part(), grid.time(k))?);
    }
    Ok(Trajectory { grid: *grid, states })
}

/// Tr[(1⊗|↑⟩⟨↑|) ρ]
pub fn nuclear_up_population(rho: &DensityMatrix) -> f64 {
    (&nuclear_up_projector() * rho.matrix()).trace().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nv_model::{build_initial_state, NuclearInit};
    use crate::qcore::partial_trace_nuclear;

    const A_PAR: f64 = 2.0 * std::f64::consts::PI * 2.14;

    #[test]
    fn grid_rejects_bad_windows() {
        assert!(TimeGrid::new(1.0, 1.0, 10, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 3, 0.0).is_err());
        let g = TimeGrid::new(0.0, 1.0, 11, 0.03).unwrap();
        assert_eq!(g.substeps(), 4);
        assert!((g.dt_internal - 0.025).abs() < 1e-15);
        assert_eq!(g.time(10), 1.0);
    }

    #[test]
    fn step_rule_is_enforced() {
        let d = Dynamics::new(0.0, mhz(0.5), 0.0, A_PAR);
        let grid = TimeGrid::new(0.0, 1.0, 2, 2.0 * d.max_step()).unwrap();
        let err = integrate(&build_initial_state(&NuclearInit::down()), &d, &grid).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn amplitude_damping_closed_form() {
        let gamma = mhz(0.1);
        let d = Dynamics::storage(gamma, A_PAR);
        let mut ket = [ZERO; 4];
        ket[E_DOWN] = ONE;
        let rho0 = DensityMatrix::pure(&ket).unwrap();
        let grid = TimeGrid::for_dynamics(0.0, 5.0, 51, &d).unwrap();
        let traj = integrate(&rho0, &d, &grid).unwrap();
        for (t, s) in grid.times().iter().zip(&traj.states) {
            assert!((s.population(E_DOWN) - (-gamma * t).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn steady_state_examples() {
        let g = steady_state_qubit(0.3, 0.0, 1.0).unwrap();
        assert!((g.population(1) - 1.0).abs() < 1e-15);

        let s = steady_state_qubit(0.0, 1.0, 1.0).unwrap();
        assert!((s.population(0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((s[(0, 1)].norm() - 1.0 / 3.0).abs() < 1e-15);

        let s = steady_state_qubit(0.0, mhz(0.5), mhz(0.1)).unwrap();
        assert!((s.population(0) - 25.0 / 51.0).abs() < 1e-14);

        assert!(matches!(steady_state_qubit(0.0, 1.0, 0.0), Err(Error::NoSteadyState)));
    }

    #[test]
    fn reduced_steady_state_limits() {
        let (d, o, g) = (mhz(0.2), mhz(0.5), mhz(0.1));
        let down = steady_state_reduced(&NuclearInit::down(), d, o, g, A_PAR).unwrap();
        assert!(down.matrix().max_abs_diff(steady_state_qubit(d, o, g).unwrap().matrix()) < 1e-15);
        let up = steady_state_reduced(&NuclearInit::new(std::f64::consts::PI).unwrap(), d, o, g, A_PAR).unwrap();
        assert!(up.matrix().max_abs_diff(steady_state_qubit(d + A_PAR, o, g).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn storage_closed_form_examples() {
        let gamma = mhz(0.1);
        let mut ket = [ZERO; 4];
        ket[E_DOWN] = ONE;
        let full = DensityMatrix::pure(&ket).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut ket = [ZERO; 4];
        ket[E_DOWN] = C64::from(h);
        ket[G_DOWN] = C64::from(h);
        let half = DensityMatrix::pure(&ket).unwrap();
        for t in [0.0, 0.3, 1.7, 6.0] {
            let f = partial_trace_nuclear(&storage_closed_form(&full, gamma, A_PAR, t).unwrap()).unwrap();
            assert!((f.population(0) - (-gamma * t).exp()).abs() < 1e-15);
            assert_eq!(f[(0, 1)].norm(), 0.0);
            let s = partial_trace_nuclear(&storage_closed_form(&half, gamma, A_PAR, t).unwrap()).unwrap();
            assert!((s[(0, 1)].norm() - 0.5 * (-0.5 * gamma * t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn block_oracle_leaves_empty_sector_empty() {
        let d = Dynamics::new(mhz(0.3), mhz(0.7), mhz(0.1), A_PAR);
        let grid = TimeGrid::for_dynamics(0.0, 3.0, 31, &d).unwrap();
        let traj = block_evolve_oracle(&build_initial_state(&NuclearInit::down()), &d, &grid).unwrap();
        for s in &traj.states {
            for i in [E_UP, G_UP] {
                for j in 0..4 {
                    assert_eq!(s[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn block_oracle_conserves_sector_traces() {
        let d = Dynamics::new(mhz(-0.4), mhz(1.0), mhz(0.1), A_PAR);
        let grid = TimeGrid::for_dynamics(0.0, 4.0, 21, &d).unwrap();
        let rho0 = build_initial_state(&NuclearInit::new(1.1).unwrap());
        let traj = block_evolve_oracle(&rho0, &d, &grid).unwrap();
        let p0 = nuclear_up_population(&rho0);
        for p in traj.nuclear_up_population() {
            assert!((p - p0).abs() < 1e-12);
        }
    }

    #[test]
    fn expm_of_diagonal() {
        let a = SquareComplexMatrix::diagonal(&[-3.0, 0.5, 12.0, 0.0]).unwrap();
        let e = expm(&a);
        for (i, x) in [-3.0f64, 0.5, 12.0, 0.0].iter().enumerate() {
            assert!((e[(i, i)].re - x.exp()).abs() <= 1e-13 * x.exp());
        }
    }
}
