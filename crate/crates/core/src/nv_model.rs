//! Physical model of the NV center: constants, the full electron ⊗ ¹⁴N
//! Hamiltonian, the effective four-level battery model and its Lindbladian.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mhz;
use crate::qcore::{DensityMatrix, SquareComplexMatrix, I, ONE, ZERO};

/// ħ in μeV·μs.
pub const HBAR_UEV_US: f64 = 6.582119569e-4;

// Basis of the effective model.
pub const E_UP: usize = 0;
pub const E_DOWN: usize = 1;
pub const G_UP: usize = 2;
pub const G_DOWN: usize = 3;

/// Constants of the electron/nuclear spin Hamiltonian, all in rad/μs
/// (gyromagnetic ratios in rad/μs per Gauss).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub d: f64,
    pub gamma_e: f64,
    pub q: f64,
    pub gamma_n: f64,
    pub a_perp: f64,
    pub a_par: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            d: mhz(2870.0),
            gamma_e: mhz(2.8),
            q: mhz(4.96),
            gamma_n: mhz(3.07e-4),
            a_perp: mhz(2.7),
            a_par: mhz(2.14),
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("d", self.d),
            ("gamma_e", self.gamma_e),
            ("q", self.q),
            ("gamma_n", self.gamma_n),
            ("a_perp", self.a_perp),
            ("a_par", self.a_par),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    reason: "physical constants must be finite and strictly positive",
                });
            }
        }
        Ok(())
    }
}

/// Microwave drive, detuning, decay and static field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriveParams {
    /// Ω, rad/μs
    pub omega_rabi: f64,
    /// Δ = ω₀ − ω, rad/μs
    pub detuning: f64,
    /// γ, rad/μs
    pub gamma: f64,
    /// Gauss
    pub b_z: f64,
}

impl DriveParams {
    pub fn new(omega_rabi: f64, detuning: f64, gamma: f64, b_z: f64) -> Result<Self> {
        let p = Self {
            omega_rabi,
            detuning,
            gamma,
            b_z,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega_rabi", self.omega_rabi),
            ("gamma", self.gamma),
            ("b_z", self.b_z),
        ];
        for (name, value) in nonneg {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    reason: "must be finite and non-negative",
                });
            }
        }
        if !self.detuning.is_finite() {
            return Err(Error::OutOfRange {
                name: "detuning",
                value: self.detuning,
                reason: "must be finite",
            });
        }
        Ok(())
    }
}

/// Nuclear preparation angle: |ψ⟩ = sin(ψ/2)|↑⟩ + cos(ψ/2)|↓⟩.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NuclearInit {
    psi: f64,
}

impl NuclearInit {
    pub fn new(psi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&psi) {
            return Err(Error::OutOfRange {
                name: "psi",
                value: psi,
                reason: "nuclear angle must lie in [0, pi]",
            });
        }
        Ok(Self { psi })
    }

    /// Nucleus in |↓⟩ = |m_I = 0⟩.
    pub fn down() -> Self {
        Self { psi: 0.0 }
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Population of |↑⟩, sin²(ψ/2).
    pub fn up_weight(&self) -> f64 {
        (0.5 * self.psi).sin().powi(2)
    }
}

/// Everything needed to set up a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub constants: PhysicalConstants,
    pub drive: DriveParams,
    pub nuclear: NuclearInit,
}

impl ModelParams {
    pub fn splitting(&self) -> QbSplitting {
        qb_splitting(&self.constants, self.drive.b_z).expect("b_z validated non-negative")
    }

    pub fn effective_hamiltonian(&self) -> SquareComplexMatrix {
        build_effective_hamiltonian(self.drive.detuning, self.drive.omega_rabi, self.constants.a_par)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QbSplitting {
    /// ω₀ = D − γe·B_z, rad/μs
    pub omega0: f64,
    /// ħω₀ in μeV
    pub energy_uev: f64,
}

impl QbSplitting {
    /// Refuses fields at or beyond the |0⟩/|−1⟩ level crossing.
    pub fn operational(&self) -> Result<f64> {
        if self.omega0 > 0.0 {
            Ok(self.omega0)
        } else {
            Err(Error::BelowLevelCrossing { omega0: self.omega0 })
        }
    }
}

pub fn qb_splitting(constants: &PhysicalConstants, b_z: f64) -> Result<QbSplitting> {
    if !(b_z.is_finite() && b_z >= 0.0) {
        return Err(Error::OutOfRange {
            name: "b_z",
            value: b_z,
            reason: "field must be finite and non-negative",
        });
    }
    let omega0 = constants.d - constants.gamma_e * b_z;
    Ok(QbSplitting {
        omega0,
        energy_uev: HBAR_UEV_US * omega0,
    })
}

/// Spin-1 operators in the m = (+1, 0, −1) basis: (S_x, S_y, S_z) row-major.
fn spin_one() -> [[C64; 9]; 3] {
    let r = std::f64::consts::SQRT_2;
    // S+ = √2(|+1⟩⟨0| + |0⟩⟨−1|)
    let mut sp = [ZERO; 9];
    sp[1] = C64::from(r);
    sp[5] = C64::from(r);
    let mut sm = [ZERO; 9];
    for i in 0..3 {
        for j in 0..3 {
            sm[i * 3 + j] = sp[j * 3 + i].conj();
        }
    }
    let mut sx = [ZERO; 9];
    let mut sy = [ZERO; 9];
    for k in 0..9 {
        sx[k] = 0.5 * (sp[k] + sm[k]);
        sy[k] = (sp[k] - sm[k]) / (2.0 * I);
    }
    let mut sz = [ZERO; 9];
    sz[0] = ONE;
    sz[8] = -ONE;
    [sx, sy, sz]
}

fn identity3() -> [C64; 9] {
    let mut id = [ZERO; 9];
    id[0] = ONE;
    id[4] = ONE;
    id[8] = ONE;
    id
}

fn square3(a: &[C64; 9]) -> [C64; 9] {
    let mut out = [ZERO; 9];
    for i in 0..3 {
        for j in 0..3 {
            out[i * 3 + j] = (0..3).map(|k| a[i * 3 + k] * a[k * 3 + j]).sum();
        }
    }
    out
}

/// Index of |m_S, m_I⟩ in the 9-dim product basis (electron major).
pub fn full_index(m_s: i32, m_i: i32) -> usize {
    assert!((-1..=1).contains(&m_s) && (-1..=1).contains(&m_i));
    (3 * (1 - m_s) + (1 - m_i)) as usize
}

/// H = D S_z² + γe B_z S_z − Q I_z² − γn B_z I_z − (A⊥(S_xI_x + S_yI_y) + A∥ S_zI_z)
pub fn build_full_hamiltonian(constants: &PhysicalConstants, b_z: f64) -> SquareComplexMatrix {
    let [sx, sy, sz] = spin_one();
    let id = identity3();
    let sz2 = square3(&sz);
    let k = |a: &[C64; 9], b: &[C64; 9]| SquareComplexMatrix::kron(a, 3, b, 3).expect("3⊗3 is 9");

    let c = constants;
    let mut h = k(&sz2, &id).scale_real(c.d);
    h.add_scaled(C64::from(c.gamma_e * b_z), &k(&sz, &id));
    h.add_scaled(C64::from(-c.q), &k(&id, &sz2));
    h.add_scaled(C64::from(-c.gamma_n * b_z), &k(&id, &sz));
    h.add_scaled(C64::from(-c.a_perp), &k(&sx, &sx));
    h.add_scaled(C64::from(-c.a_perp), &k(&sy, &sy));
    h.add_scaled(C64::from(-c.a_par), &k(&sz, &sz));
    h.hermitian_part()
}

/// Full-basis indices of (|e↑⟩, |e↓⟩, |g↑⟩, |g↓⟩).
pub fn subspace_indices() -> [usize; 4] {
    [
        full_index(-1, 1),
        full_index(-1, 0),
        full_index(0, 1),
        full_index(0, 0),
    ]
}

pub const SUBSPACE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SubspaceReport {
    /// H9 projected onto the four-level subspace, artifact ordering.
    pub projected: SquareComplexMatrix,
    /// max |shifted diagonal − diag(A∥, 0, 0, 0)|
    pub diagonal_residual: f64,
    /// Largest off-diagonal element inside the subspace (|e↑⟩–|g↓⟩ flip-flop,
    /// dropped by the rotating-wave approximation).
    pub in_subspace_coupling: f64,
    /// Largest element connecting the subspace to the excluded levels.
    pub leakage: f64,
    /// Smallest energy separation bridged by any dropped coupling.
    pub min_bridged_gap: f64,
}

pub fn validate_subspace_reduction(
    h9: &SquareComplexMatrix,
    constants: &PhysicalConstants,
    b_z: f64,
) -> Result<SubspaceReport> {
    if h9.dim() != 9 {
        return Err(Error::DimensionMismatch {
            expected: 9,
            actual: h9.dim(),
        });
    }
    let omega0 = constants.d - constants.gamma_e * b_z;
    let nuclear_offset = -(constants.q + constants.gamma_n * b_z);
    let idx = subspace_indices();

    let mut projected = SquareComplexMatrix::zeros(4);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            projected[(a, b)] = h9[(i, j)];
        }
    }

    let expected = [constants.a_par, 0.0, 0.0, 0.0];
    let mut diagonal_residual = 0.0f64;
    for a in 0..4 {
        let electron_excited = a < 2;
        let nuclear_up = a % 2 == 0;
        let mut shifted = projected[(a, a)].re;
        if electron_excited {
            shifted -= omega0;
        }
        if nuclear_up {
            shifted -= nuclear_offset;
        }
        let diff = (shifted - expected[a]).abs().max(projected[(a, a)].im.abs());
        if diff > SUBSPACE_TOL {
            return Err(Error::SubspaceMismatch {
                row: a,
                col: a,
                expected: expected[a],
                found: shifted,
            });
        }
        diagonal_residual = diagonal_residual.max(diff);
    }

    let mut in_subspace_coupling = 0.0f64;
    let mut min_bridged_gap = f64::INFINITY;
    for a in 0..4 {
        for b in 0..4 {
            let v = projected[(a, b)].norm();
            if a != b && v > 0.0 {
                in_subspace_coupling = in_subspace_coupling.max(v);
                min_bridged_gap = min_bridged_gap.min((projected[(a, a)].re - projected[(b, b)].re).abs());
            }
        }
    }
    let mut leakage = 0.0f64;
    for &i in &idx {
        for k in (0..9).filter(|k| !idx.contains(k)) {
            let v = h9[(i, k)].norm();
            if v > 0.0 {
                leakage = leakage.max(v);
                min_bridged_gap = min_bridged_gap.min((h9[(i, i)].re - h9[(k, k)].re).abs());
            }
        }
    }

    Ok(SubspaceReport {
        projected,
        diagonal_residual,
        in_subspace_coupling,
        leakage,
        min_bridged_gap,
    })
}

/// H_eff = Δσ†σ + (Ω/2)σ_x + A∥σ†σh†h in (|e↑⟩, |e↓⟩, |g↑⟩, |g↓⟩).
pub fn build_effective_hamiltonian(delta: f64, omega_rabi: f64, a_par: f64) -> SquareComplexMatrix {
    let mut h = SquareComplexMatrix::zeros(4);
    h[(E_UP, E_UP)] = C64::from(delta + a_par);
    h[(E_DOWN, E_DOWN)] = C64::from(delta);
    let half = C64::from(0.5 * omega_rabi);
    for (e, g) in [(E_UP, G_UP), (E_DOWN, G_DOWN)] {
        h[(e, g)] = half;
        h[(g, e)] = half;
    }
    h
}

/// |g⟩ ⊗ (sin(ψ/2)|↑⟩ + cos(ψ/2)|↓⟩)
pub fn build_initial_state(nuclear: &NuclearInit) -> DensityMatrix {
    let half = 0.5 * nuclear.psi();
    let mut ket = [ZERO; 4];
    ket[G_UP] = C64::from(half.sin());
    ket[G_DOWN] = C64::from(half.cos());
    DensityMatrix::pure(&ket).expect("normalized product ket")
}

/// 1 ⊗ |↑⟩⟨↑|
pub fn nuclear_up_projector() -> SquareComplexMatrix {
    SquareComplexMatrix::diagonal(&[1.0, 0.0, 1.0, 0.0]).expect("dim 4")
}

/// σ ⊗ 1 with σ = |g⟩⟨e|.
pub fn jump_operator() -> SquareComplexMatrix {
    let mut l = SquareComplexMatrix::zeros(4);
    l[(G_UP, E_UP)] = ONE;
    l[(G_DOWN, E_DOWN)] = ONE;
    l
}

/// −i[H, ρ] + (γ/2)(2LρL† − {L†L, ρ}) with L = σ ⊗ 1.
pub fn lindblad_rhs(h_eff: &SquareComplexMatrix, gamma: f64, rho: &DensityMatrix) -> SquareComplexMatrix {
    apply_lindbladian(h_eff, gamma, rho.matrix())
}

/// Same map on an arbitrary 4×4 operator (integrator stages are not states).
pub(crate) fn apply_lindbladian(h: &SquareComplexMatrix, gamma: f64, rho: &SquareComplexMatrix) -> SquareComplexMatrix {
    let mut out = h.commutator(rho).scale(-I);
    if gamma != 0.0 {
        // L†L projects onto the excited sector; LρL† copies ρ_ee into ρ_gg.
        let excited = |i: usize| if i < 2 { 1.0 } else { 0.0 };
        for i in 0..4 {
            for j in 0..4 {
                let mut d = -0.5 * gamma * (excited(i) + excited(j)) * rho[(i, j)];
                if i >= 2 && j >= 2 {
                    d += gamma * rho[(i - 2, j - 2)];
                }
                out[(i, j)] += d;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{hermitian_eigensystem, DensityMatrix};
    use proptest::prelude::*;

    #[test]
    fn splitting_at_discussion_field() {
        let s = qb_splitting(&PhysicalConstants::default(), 482.0).unwrap();
        assert!((s.omega0 - mhz(1520.4)).abs() < 1e-9);
        assert!((s.energy_uev - 6.28).abs() / 6.28 < 0.005);
        assert!(s.operational().is_ok());
    }

    #[test]
    fn splitting_at_zero_and_crossing() {
        let c = PhysicalConstants::default();
        assert_eq!(qb_splitting(&c, 0.0).unwrap().omega0, mhz(2870.0));
        let crossing = qb_splitting(&c, 1025.0).unwrap();
        assert!(crossing.omega0.abs() < mhz(0.4));
        assert!(matches!(crossing.operational(), Err(Error::BelowLevelCrossing { .. })));
        assert!(qb_splitting(&c, -1.0).is_err());
    }

    #[test]
    fn full_hamiltonian_diagonal_elements() {
        let c = PhysicalConstants::default();
        let bz = 482.0;
        let h = build_full_hamiltonian(&c, bz);
        let i = full_index(-1, 1);
        let expect = c.d - c.gamma_e * bz - c.q - c.gamma_n * bz + c.a_par;
        assert!((h[(i, i)].re - expect).abs() < 1e-9);
        let j = full_index(0, 0);
        assert_eq!(h[(j, j)], ZERO);
        assert!(h.max_hermitian_asymmetry() < 1e-12);
    }

    #[test]
    fn flip_flop_conserves_total_projection() {
        let h = build_full_hamiltonian(&PhysicalConstants::default(), 100.0);
        for ms in -1..=1 {
            for mi in -1..=1 {
                for ms2 in -1..=1 {
                    for mi2 in -1..=1 {
                        let v = h[(full_index(ms, mi), full_index(ms2, mi2))];
                        if v.norm() > 0.0 {
                            assert_eq!(ms + mi, ms2 + mi2);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_reduction_at_482_gauss() {
        let c = PhysicalConstants::default();
        let h = build_full_hamiltonian(&c, 482.0);
        let rep = validate_subspace_reduction(&h, &c, 482.0).unwrap();
        assert!(rep.diagonal_residual <= 1e-9);
        assert!((rep.projected[(0, 0)].re - (c.d - c.gamma_e * 482.0 - c.q - c.gamma_n * 482.0 + c.a_par)).abs() < 1e-9);
        // only the flip-flop term survives off the diagonal
        assert!((rep.in_subspace_coupling - c.a_perp).abs() < 1e-9);
        assert!((rep.leakage - c.a_perp).abs() < 1e-9);
        assert!(rep.min_bridged_gap > 100.0 * rep.leakage, "{}", rep.min_bridged_gap / rep.leakage);
    }

    #[test]
    fn leakage_is_linear_in_a_perp() {
        let c = PhysicalConstants::default();
        let doubled = PhysicalConstants {
            a_perp: 2.0 * c.a_perp,
            ..c
        };
        let r1 = validate_subspace_reduction(&build_full_hamiltonian(&c, 482.0), &c, 482.0).unwrap();
        let r2 = validate_subspace_reduction(&build_full_hamiltonian(&doubled, 482.0), &doubled, 482.0).unwrap();
        assert!((r2.leakage - 2.0 * r1.leakage).abs() < 1e-9);
        assert!((r2.in_subspace_coupling - 2.0 * r1.in_subspace_coupling).abs() < 1e-9);
    }

    #[test]
    fn subspace_mismatch_names_offending_element() {
        let c = PhysicalConstants::default();
        let mut h = build_full_hamiltonian(&c, 482.0);
        let i = full_index(0, 1);
        h[(i, i)] += C64::from(1e-6);
        match validate_subspace_reduction(&h, &c, 482.0) {
            Err(Error::SubspaceMismatch { row: 2, col: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn effective_hamiltonian_pattern() {
        let a = mhz(2.14);
        let h0 = build_effective_hamiltonian(0.0, 0.0, a);
        assert_eq!(h0, SquareComplexMatrix::diagonal(&[a, 0.0, 0.0, 0.0]).unwrap());

        let om = mhz(0.5);
        let h = build_effective_hamiltonian(0.0, om, a);
        assert_eq!(h[(E_UP, G_UP)], C64::from(om / 2.0));
        assert_eq!(h[(G_DOWN, E_DOWN)], C64::from(om / 2.0));
        assert_eq!(h[(E_UP, G_DOWN)], ZERO);
        assert_eq!(h[(E_UP, E_DOWN)], ZERO);
        assert_eq!(h.commutator(&nuclear_up_projector()).max_abs(), 0.0);
    }

    #[test]
    fn initial_states() {
        let down = build_initial_state(&NuclearInit::new(0.0).unwrap());
        assert_eq!(down.population(G_DOWN), 1.0);
        let up = build_initial_state(&NuclearInit::new(PI).unwrap());
        assert!((up.population(G_UP) - 1.0).abs() < 1e-15);
        let half = build_initial_state(&NuclearInit::new(PI / 2.0).unwrap());
        assert!((half[(G_UP, G_DOWN)].re - 0.5).abs() < 1e-15);
        assert!((half.purity() - 1.0).abs() < 1e-12);
        assert!(NuclearInit::new(-0.1).is_err());
        assert!(NuclearInit::new(3.2).is_err());
    }

    #[test]
    fn ground_state_is_dark_to_dissipator() {
        let h = build_effective_hamiltonian(0.0, mhz(0.5), mhz(2.14));
        let rho = build_initial_state(&NuclearInit::down());
        let d = lindblad_rhs(&h, mhz(0.1), &rho);
        for i in 0..4 {
            assert!(d[(i, i)].norm() < 1e-15);
        }
        let hd = h.commutator(rho.matrix()).scale(-I);
        assert!(d.max_abs_diff(&hd) < 1e-15);
    }

    #[test]
    fn pure_decay_rhs() {
        let gamma = 0.7;
        let h = build_effective_hamiltonian(0.0, 0.0, mhz(2.14));
        let mut ket = [ZERO; 4];
        ket[E_DOWN] = ONE;
        let rho = DensityMatrix::pure(&ket).unwrap();
        let d = lindblad_rhs(&h, gamma, &rho);
        let mut expect = SquareComplexMatrix::zeros(4);
        expect[(G_DOWN, G_DOWN)] = C64::from(gamma);
        expect[(E_DOWN, E_DOWN)] = C64::from(-gamma);
        assert!(d.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn dissipator_matches_operator_form() {
        let l = jump_operator();
        let ldl = &l.adjoint() * &l;
        let rho = DensityMatrix::maximally_mixed(4);
        let mut rho_m = rho.matrix().clone();
        rho_m[(0, 3)] = C64::new(0.1, 0.05);
        rho_m[(3, 0)] = C64::new(0.1, -0.05);
        let gamma = 1.3;
        let zero_h = SquareComplexMatrix::zeros(4);
        let fast = apply_lindbladian(&zero_h, gamma, &rho_m);
        let explicit = &(&(&l * &rho_m) * &l.adjoint()).scale_real(gamma) - &ldl.anticommutator(&rho_m).scale_real(0.5 * gamma);
        assert!(fast.max_abs_diff(&explicit) < 1e-15);
    }

    fn random_state(vals: &[f64]) -> DensityMatrix {
        let mut a = SquareComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let k = 2 * (i * 4 + j);
                a[(i, j)] = C64::new(vals[k], vals[k + 1]);
            }
        }
        let m = &a * &a.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
    }

    proptest! {
        #[test]
        fn rhs_traceless_hermitian_and_conserves_nuclear_population(
            vals in prop::collection::vec(-1.0f64..1.0, 32),
            delta in -20.0f64..20.0,
            omega in 0.0f64..10.0,
            gamma in 0.0f64..3.0,
        ) {
            let rho = random_state(&vals);
            let h = build_effective_hamiltonian(delta, omega, mhz(2.14));
            prop_assert!(h.max_hermitian_asymmetry() == 0.0);
            prop_assert!(h.entries().iter().all(|z| z.im == 0.0));
            let d = lindblad_rhs(&h, gamma, &rho);
            prop_assert!(d.trace().norm() <= 1e-12);
            prop_assert!(d.max_hermitian_asymmetry() <= 1e-12);
            let up = (&nuclear_up_projector() * &d).trace();
            prop_assert!(up.norm() <= 1e-12);
        }

        #[test]
        fn nuclear_offset_cancels_in_reduced_state(
            vals in prop::collection::vec(-1.0f64..1.0, 32),
            t in 0.0f64..3.0,
        ) {
            // adding −(Q+γnB_z)·(1⊗|↑⟩⟨↑|) leaves the battery's reduced state unchanged
            let rho = random_state(&vals);
            let c = PhysicalConstants::default();
            let h = build_effective_hamiltonian(mhz(0.3), mhz(0.8), c.a_par);
            let mut shifted = h.clone();
            shifted.add_scaled(C64::from(-(c.q + c.gamma_n * 482.0)), &nuclear_up_projector());
            let a = crate::qcore::unitary_evolve(&h, &rho, t).unwrap();
            let b = crate::qcore::unitary_evolve(&shifted, &rho, t).unwrap();
            let ra = crate::qcore::partial_trace_nuclear(&a).unwrap();
            let rb = crate::qcore::partial_trace_nuclear(&b).unwrap();
            prop_assert!(ra.matrix().max_abs_diff(rb.matrix()) <= 1e-9);
            prop_assert!(hermitian_eigensystem(&shifted).is_ok());
        }
    }
}
