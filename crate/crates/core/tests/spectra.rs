mod common;

use common::{cluster, periodic_fd_eigenvalues};
use flatloop_core::geodesics::{jacobi_spectrum, perturbed_jacobi_spectrum};
use flatloop_core::{Branch, FlatTorus, FOUR_PI_SQ};
use libm::{cos, log2};
use std::f64::consts::PI;

#[test]
fn closed_form_multiplicities() {
    for n in 1..=3 {
        let s = jacobi_spectrum(FlatTorus::new(n).unwrap(), 4);
        let expected: Vec<(f64, usize)> =
            (0..=4).map(|l: usize| (FOUR_PI_SQ * (l * l) as f64, if l == 0 { n } else { 2 * n })).collect();
        assert_eq!(s.eigenvalues, expected);
        assert_eq!((s.negative_count, s.kernel_dim), (0, n));
    }
}

/// Error of the lowest nonzero discrete mode against `4π²`.
fn mode_error(points: usize) -> f64 {
    let ev = periodic_fd_eigenvalues(points, |_| 0.0);
    (ev[1] - FOUR_PI_SQ).abs()
}

#[test]
fn finite_difference_spectrum_converges_at_second_order() {
    let ev = periodic_fd_eigenvalues(128, |_| 0.0);
    let groups = cluster(&ev[..9], 1e-6);
    // l = 0 simple, then pairs
    assert_eq!(groups.iter().map(|g| g.1).collect::<Vec<_>>(), [1, 2, 2, 2, 2]);
    for (l, (value, _)) in groups.iter().enumerate() {
        let exact = FOUR_PI_SQ * (l * l) as f64;
        assert!((value - exact).abs() <= 1e-2 * exact.max(1.0), "mode {l}");
    }
    let order = log2(mode_error(64) / mode_error(128));
    assert!((1.8..=2.2).contains(&order), "observed order {order}");
    let order = log2(mode_error(128) / mode_error(256));
    assert!((1.8..=2.2).contains(&order), "observed order {order}");
}

#[test]
fn perturbed_spectra_match_the_shifted_operator() {
    for (branch, offset) in [(Branch::Minus, 0.0), (Branch::Plus, 0.5)] {
        let s = perturbed_jacobi_spectrum(branch, 3);
        let sign = if branch == Branch::Minus { -1.0 } else { 1.0 };
        for (l, (value, mult)) in s.eigenvalues.iter().enumerate() {
            assert_eq!(*value, FOUR_PI_SQ * (l * l) as f64 + sign);
            assert_eq!(*mult, if l == 0 { 1 } else { 2 });
        }
        assert_eq!(s.kernel_dim, 0);
        assert_eq!(s.negative_count, if branch == Branch::Minus { 1 } else { 0 });
        // Hessian of the discretized perturbed energy at γ^∓: -d² - cos 2π(γ - kt - q0)
        let ev = periodic_fd_eigenvalues(256, |_| cos(2.0 * PI * offset));
        assert!((ev[0] - sign).abs() < 1e-8);
        assert!((ev[1] - (FOUR_PI_SQ + sign)).abs() < 1e-2);
    }
}
