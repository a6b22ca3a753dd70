use flatloop_core::hamiltonian::FreeHamiltonian;
use flatloop_core::torus::{energy, h1_distance, perturbed_energy, symplectic_action};
use flatloop_core::{FlatTorus, LatticeVector, LoopSample, PendulumPotentialSpec, PhaseLoopSample, TWO_PI_SQ};
use proptest::prelude::*;
use std::f64::consts::PI;

const N: usize = 64;

/// `kt + q + Σ small Fourier modes`, safely below the half-step lift bound.
fn wobbly(k: &[i64], q: &[f64], coeffs: &[f64]) -> LoopSample {
    let n = k.len();
    let torus = FlatTorus::new(n).unwrap();
    LoopSample::from_fn(torus, N, LatticeVector::new(k.to_vec()), |t, out| {
        for j in 0..n {
            let mut x = k[j] as f64 * t + q[j];
            for (m, c) in coeffs.iter().enumerate() {
                x += c * (2.0 * PI * (m as f64 + 1.0) * t + j as f64).sin();
            }
            out[j] = x;
        }
    })
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn time_shift_invariance(
        k in prop::collection::vec(-3i64..=3, 1..=3),
        coeffs in prop::collection::vec(-0.05f64..0.05, 0..3),
        shift in 0usize..N,
    ) {
        let q = vec![0.2; k.len()];
        let lp = wobbly(&k, &q, &coeffs);
        prop_assert!(rel(energy(&lp), energy(&lp.rotated(shift))) < 1e-9);
        let kv = LatticeVector::new(k.clone());
        let torus = FlatTorus::new(k.len()).unwrap();
        let z = PhaseLoopSample::free_orbit(torus, &kv, &q, N).unwrap();
        let h = FreeHamiltonian::new(torus);
        prop_assert!(rel(symplectic_action(&z, &h), symplectic_action(&z.rotated(shift), &h)) < 1e-9);
    }

    #[test]
    fn geodesic_energy_is_independent_of_offset_and_resolution(
        k in prop::collection::vec(-3i64..=3, 1..=3),
        q in -1.0f64..1.0,
        count in 8usize..80,
    ) {
        let torus = FlatTorus::new(k.len()).unwrap();
        let kv = LatticeVector::new(k.clone());
        let lp = LoopSample::geodesic(torus, &kv, &vec![q; k.len()], count).unwrap();
        let exact = TWO_PI_SQ * kv.norm_sq() as f64;
        prop_assert!(rel(energy(&lp), exact) < 1e-9);
        let z = PhaseLoopSample::free_orbit(torus, &kv, &vec![q; k.len()], count).unwrap();
        prop_assert!(rel(symplectic_action(&z, &FreeHamiltonian::new(torus)), energy(&lp)) < 1e-9);
    }

    #[test]
    fn h1_triangle_inequality(
        seeds in prop::collection::vec(-0.08f64..0.08, 9),
        k in -2i64..=2,
    ) {
        let a = wobbly(&[k], &[seeds[0]], &seeds[1..3]);
        let b = wobbly(&[k], &[seeds[3]], &seeds[4..6]);
        let c = wobbly(&[k], &[seeds[6]], &seeds[7..9]);
        let ab = h1_distance(&a, &b).unwrap();
        let bc = h1_distance(&b, &c).unwrap();
        let ac = h1_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!(h1_distance(&a, &a).unwrap() < 1e-9);
    }

    #[test]
    fn potential_perturbation_is_bounded(
        k in -3i64..=3,
        q0 in 0.0f64..1.0,
        coeffs in prop::collection::vec(-0.1f64..0.1, 0..3),
    ) {
        let lp = wobbly(&[k], &[0.1], &coeffs);
        let diff = perturbed_energy(&lp, &PendulumPotentialSpec::new(k, q0)).unwrap() - energy(&lp);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&diff));
    }
}

#[test]
fn energy_and_action_on_all_small_classes() {
    for n in 1..=3usize {
        let torus = FlatTorus::new(n).unwrap();
        let ks: Vec<Vec<i64>> = (0..7i64.pow(n as u32))
            .map(|mut idx| {
                (0..n)
                    .map(|_| {
                        let c = idx % 7 - 3;
                        idx /= 7;
                        c
                    })
                    .collect()
            })
            .filter(|k: &Vec<i64>| k.iter().map(|x| x * x).sum::<i64>() <= 9)
            .collect();
        for k in ks {
            let kv = LatticeVector::new(k.clone());
            let exact = TWO_PI_SQ * kv.norm_sq() as f64;
            let lp = LoopSample::geodesic(torus, &kv, &vec![0.37; n], 64).unwrap();
            let z = PhaseLoopSample::free_orbit(torus, &kv, &vec![0.37; n], 64).unwrap();
            assert!(rel(energy(&lp), exact) < 1e-9);
            assert!(rel(symplectic_action(&z, &FreeHamiltonian::new(torus)), exact) < 1e-9);
        }
    }
}
