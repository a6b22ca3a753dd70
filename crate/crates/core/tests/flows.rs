use flatloop_core::flows::{
    ansatz_loop, count_connecting_orbits, find_periodic_solutions, integrate_chi, integrate_orbit, solve_cylinder,
};
use flatloop_core::hamiltonian::{FreeHamiltonian, PendulumHamiltonian};
use flatloop_core::homology::{homology_of_complex, morse_witten_complex_perturbed};
use flatloop_core::{FlatTorus, FOUR_PI_SQ};
use libm::log2;

#[test]
fn orbit_closure_sorts_lattice_from_half_integer_momenta() {
    for n in 1..=3 {
        let h = FreeHamiltonian::new(FlatTorus::new(n).unwrap());
        for k in -3i64..=3 {
            let u0 = vec![0.1; n];
            let lattice = vec![FOUR_PI_SQ * k as f64; n];
            let o = integrate_orbit(&h, &u0, &lattice, 1000).unwrap();
            assert!(o.closure_defect < 1e-8);
            if k != 0 {
                assert!(o.energy_drift < 1e-9);
            }
            let half = vec![FOUR_PI_SQ * (k as f64 + 0.5); n];
            assert!(integrate_orbit(&h, &u0, &half, 1000).unwrap().closure_defect > 0.1);
        }
    }
    let p = PendulumHamiltonian::new(3, 0.45);
    assert!(integrate_orbit(&p, &[0.45], &[FOUR_PI_SQ * 3.0], 2000).unwrap().closure_defect < 1e-8);
}

#[test]
fn boundary_coefficient_comes_from_the_orbit_count() {
    let orbits = count_connecting_orbits(1, 0.0).unwrap();
    let complex = morse_witten_complex_perturbed(1, Some(orbits.count)).unwrap();
    assert_eq!(complex.boundary(1).unwrap().get(0, 0), &orbits.parity.into());
    let h = homology_of_complex(&complex).unwrap();
    assert_eq!((h.free_rank(0), h.free_rank(1)), (1, 1));
}

#[test]
fn chi_trajectories_are_monotone() {
    for chi0 in [0.05, 0.2, 0.45] {
        assert_eq!(integrate_chi(chi0, -10.0, 10.0, 2000).unwrap().monotonicity(), Some(1));
    }
    for chi0 in [0.55, 0.8, 0.95] {
        assert_eq!(integrate_chi(chi0, -10.0, 10.0, 2000).unwrap().monotonicity(), Some(-1));
    }
}

#[test]
fn cylinder_ansatz_converges_with_step_refinement() {
    let w0 = ansatz_loop(1, 0.2, 0.25, 0.0, 32).unwrap();
    let coarse = solve_cylinder(1, 0.2, &w0, 8.0, 0.8).unwrap().ansatz_coherence(0.25);
    let fine = solve_cylinder(1, 0.2, &w0, 8.0, 0.4).unwrap().ansatz_coherence(0.25);
    assert!(fine < coarse);
    assert!(log2(coarse / fine) >= 1.0);
    let w = solve_cylinder(1, 0.2, &w0, 15.0, 0.05).unwrap();
    assert!(w.ansatz_coherence(0.25) < 1e-6);
}

#[test]
fn perturbed_initial_loop_flows_to_the_minimum() {
    let w0 = ansatz_loop(1, 0.0, 0.25, 0.05, 64).unwrap();
    let g = solve_cylinder(1, 0.0, &w0, 15.0, 0.01).unwrap();
    assert!(g.residual < 1e-4, "residual {}", g.residual);
    assert!(g.max_energy_increase().unwrap() <= 1e-8);
    for i in 0..g.s_grid.len() {
        let periodic: Vec<f64> = (0..g.t_grid.len()).map(|j| g.w[i][j] - g.t_grid[j]).collect();
        assert!(periodic.iter().all(|x| x.is_finite()));
    }
}

#[test]
fn only_the_critical_pair_is_periodic() {
    let sols = find_periodic_solutions(10);
    let values: Vec<f64> = sols.iter().map(|s| s.y0).collect();
    assert_eq!(values.len(), 2, "{values:?}");
    assert!(values[0].abs() < 1e-6 && (values[1] - 0.5).abs() < 1e-6);
}
