mod common;

use nvqb::lindblad::{block_evolve_oracle, integrate, storage_closed_form, Dynamics, TimeGrid};
use nvqb::mhz;
use nvqb::qcore::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A_PAR: f64 = 2.0 * std::f64::consts::PI * 2.14;

fn final_state(rho0: &DensityMatrix, dynamics: &Dynamics, t: f64, dt: f64) -> DensityMatrix {
    let grid = TimeGrid::new(0.0, t, 2, dt).unwrap();
    integrate(rho0, dynamics, &grid).unwrap().states.pop().unwrap()
}

#[test]
fn storage_triangle_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dynamics = Dynamics::storage(mhz(0.1), A_PAR);
    let grid = TimeGrid::for_dynamics(0.0, 3.0, 31, &dynamics).unwrap();
    for _ in 0..20 {
        let rho0 = common::random_state(&mut rng, 4);
        let rk4 = integrate(&rho0, &dynamics, &grid).unwrap();
        let exact = block_evolve_oracle(&rho0, &dynamics, &grid).unwrap();
        for (k, t) in grid.times().into_iter().enumerate() {
            let closed = storage_closed_form(&rho0, mhz(0.1), A_PAR, t).unwrap();
            let a = rk4.states[k].matrix();
            let b = exact.states[k].matrix();
            let c = closed.matrix();
            assert!(a.max_abs_diff(b) <= 1e-8, "rk4 vs block at t={t}: {}", a.max_abs_diff(b));
            assert!(a.max_abs_diff(c) <= 1e-8, "rk4 vs closed at t={t}: {}", a.max_abs_diff(c));
            assert!(b.max_abs_diff(c) <= 1e-8, "block vs closed at t={t}: {}", b.max_abs_diff(c));
        }
    }
}

#[test]
fn driven_rk4_matches_block_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let dynamics = Dynamics::new(
            mhz(rng.gen_range(-3.0..3.0)),
            mhz(rng.gen_range(0.0..2.0)),
            mhz(rng.gen_range(0.0..0.5)),
            A_PAR,
        );
        let rho0 = common::random_state(&mut rng, 4);
        let grid = TimeGrid::for_dynamics(0.0, 2.0, 21, &dynamics).unwrap();
        let rk4 = integrate(&rho0, &dynamics, &grid).unwrap();
        let exact = block_evolve_oracle(&rho0, &dynamics, &grid).unwrap();
        for (a, b) in rk4.states.iter().zip(&exact.states) {
            assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-8);
        }
    }
}

#[test]
fn global_error_is_fourth_order() {
    let dynamics = Dynamics::new(mhz(0.3), mhz(1.0), mhz(0.1), A_PAR);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rho0 = common::random_state(&mut rng, 4);
    let t = 2.0;
    let grid = TimeGrid::new(0.0, t, 2, 1.0).unwrap();
    let exact = block_evolve_oracle(&rho0, &dynamics, &grid).unwrap().states.pop().unwrap();
    let h = dynamics.max_step();
    let e1 = final_state(&rho0, &dynamics, t, h).matrix().max_abs_diff(exact.matrix());
    let e2 = final_state(&rho0, &dynamics, t, h / 2.0).matrix().max_abs_diff(exact.matrix());
    let ratio = e1 / e2;
    assert!((12.0..=20.0).contains(&ratio), "error ratio {ratio} (e1 {e1:e}, e2 {e2:e})");

    let d = dynamics.default_step();
    let coarse = final_state(&rho0, &dynamics, t, d);
    let fine = final_state(&rho0, &dynamics, t, d / 2.0);
    assert!(coarse.matrix().max_abs_diff(fine.matrix()) <= 1e-8);
}

#[test]
fn oversized_step_is_refused() {
    let dynamics = Dynamics::new(0.0, mhz(1.0), mhz(0.1), A_PAR);
    let grid = TimeGrid::new(0.0, 1.0, 2, 2.0 * dynamics.max_step()).unwrap();
    let rho0 = DensityMatrix::maximally_mixed(4);
    assert!(integrate(&rho0, &dynamics, &grid).is_err());
}
