mod common;

use std::f64::consts::PI;

use common::{rel, simpson};
use gp_core::scattering::{born_series, eta_highpass, eta_kernel, solve_neumann, solve_zero_energy};
use gp_core::{rescale, RadialInteraction, RadialPotential};

fn square_well_a0(v0: f64, r: f64) -> f64 {
    let k = (v0 / 2.0).sqrt();
    r - (k * r).tanh() / k
}

#[test]
fn zero_potential() {
    let sol = solve_zero_energy(&RadialPotential::zero()).unwrap();
    assert_eq!(sol.a0, 0.0);
    assert_eq!(sol.f(0.3), 1.0);
    assert_eq!(born_series(&RadialPotential::zero(), 1).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn square_well_closed_form() {
    for (v0, r) in [(2.0, 1.0), (0.3, 2.0), (50.0, 0.5)] {
        let sol = solve_zero_energy(&RadialPotential::square_well(v0, r).unwrap()).unwrap();
        assert!(rel(sol.a0, square_well_a0(v0, r)) < 1e-9, "({v0}, {r})");
        assert!(sol.residual < 1e-9);
    }
}

#[test]
fn square_well_profile() {
    let (v0, r) = (2.0, 1.0);
    let sol = solve_zero_energy(&RadialPotential::square_well(v0, r).unwrap()).unwrap();
    let k = (v0 / 2.0_f64).sqrt();
    let a0 = square_well_a0(v0, r);
    let amp = (r - a0) / (k * r).sinh();
    for x in [0.01, 0.2, 0.5, 0.9] {
        assert!((sol.f(x) - amp * (k * x).sinh() / x).abs() < 1e-8, "r = {x}");
    }
    for x in [1.0, 1.5, 10.0] {
        assert!((sol.f(x) - (1.0 - a0 / x)).abs() < 1e-9);
    }
    for (x, f) in sol.f_profile(5.0, 200) {
        assert!((0.0..=1.0).contains(&f), "f({x}) = {f}");
    }
}

#[test]
fn integral_identity_for_several_potentials() {
    let pots = [
        RadialPotential::square_well(2.0, 1.0).unwrap(),
        RadialPotential::square_well(8.0, 0.3).unwrap(),
        RadialPotential::smooth_bump(4.0, 1.0).unwrap(),
        RadialPotential::tabulated(&[[0.0, 1.0], [0.5, 0.8], [1.0, 0.3], [1.5, 0.0]], 1.5).unwrap(),
    ];
    for pot in pots {
        let sol = solve_zero_energy(&pot).unwrap();
        // Independent quadrature of (8 pi)^-1 int V f = 1/2 int r^2 V f dr.
        let oracle = 0.5 * simpson(|r| r * r * pot.value(r) * sol.f(r), 0.0, pot.range(), 20_000);
        assert!((oracle - sol.a0).abs() < 1e-8, "{oracle} vs {}", sol.a0);
        assert!((sol.integral_identity(&pot).unwrap() - sol.a0).abs() < 1e-8);
        assert!(sol.a0 >= 0.0 && sol.a0 <= pot.range());
    }
}

#[test]
fn born_terms_square_well() {
    let (v0, r) = (0.7, 1.3);
    let b = born_series(&RadialPotential::square_well(v0, r).unwrap(), 1).unwrap();
    assert!(rel(b[0], v0 * r.powi(3) / 6.0) < 1e-14);
    // Second term: -(64 pi^2)^-1 int int V(x) V(y)/|x - y|, the uniform-ball self energy.
    assert!(rel(b[1], -v0 * v0 * r.powi(5) / 30.0) < 1e-8, "{}", b[1]);
    assert_eq!(born_series(&RadialPotential::square_well(v0, r).unwrap(), 0).unwrap().len(), 1);
    assert!(born_series(&RadialPotential::square_well(v0, r).unwrap(), 2).is_err());
}

#[test]
fn born_remainder_is_cubic() {
    let base = RadialPotential::square_well(2.0, 1.0).unwrap();
    let remainder = |kappa: f64| {
        let pot = base.scaled_by(kappa).unwrap();
        let b = born_series(&pot, 1).unwrap();
        (b[0] + b[1] - solve_zero_energy(&pot).unwrap().a0).abs()
    };
    let r: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|k| remainder(*k)).collect();
    for w in r.windows(2) {
        let ratio = w[0] / w[1];
        assert!((7.0..9.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn gp_scaling_of_scattering_length() {
    let pot = RadialPotential::square_well(2.0, 1.0).unwrap();
    let a0 = solve_zero_energy(&pot).unwrap().a0;
    // beta = 1, kappa = 1 gives N^2 V(N x).
    let scaled = rescale(&pot, 100.0, 1.0, 1.0).unwrap();
    let a_scaled = solve_zero_energy(&scaled).unwrap().a0;
    assert!(rel(a_scaled, a0 / 100.0) < 1e-8);
}

#[test]
fn dilation_scaling() {
    for pot in [RadialPotential::smooth_bump(3.0, 1.0).unwrap(), RadialPotential::square_well(1.0, 1.0).unwrap()] {
        let a0 = solve_zero_energy(&pot).unwrap().a0;
        for lambda in [0.5, 2.0] {
            let a = solve_zero_energy(&pot.dilated(lambda).unwrap()).unwrap().a0;
            assert!(rel(a, lambda * a0) < 1e-8);
        }
    }
}

#[test]
fn neumann_free_case() {
    let sol = solve_neumann(&RadialPotential::zero(), 10.0).unwrap();
    assert_eq!(sol.lambda, 0.0);
    assert_eq!(sol.f(0.2), 1.0);
    assert_eq!(eta_kernel(&sol, 2.0 * PI).unwrap(), 0.0);
}

#[test]
fn neumann_precondition() {
    let pot = RadialPotential::square_well(2.0, 1.0).unwrap();
    assert!(solve_neumann(&pot, 2.0).unwrap_err().is_precondition());
}

#[test]
fn neumann_boundary_conditions_and_scaling() {
    let pot = RadialPotential::square_well(2.0, 1.0).unwrap();
    let a0 = square_well_a0(2.0, 1.0);
    let mut prev_lambda = f64::INFINITY;
    let mut prev_gap = f64::INFINITY;
    for n in [50.0, 100.0, 200.0] {
        let sol = solve_neumann(&pot, n).unwrap();
        let (f, df) = sol.boundary_values();
        assert!((f - 1.0).abs() < 1e-12 && df.abs() < 1e-10);
        assert!(sol.lambda > 0.0 && sol.lambda < prev_lambda);
        // N lambda_N tends to 3 a0 / (1/2)^3 = 24 a0.
        let gap = (n * sol.lambda - 24.0 * a0).abs();
        assert!(gap < 0.02 * 24.0 * a0 && gap < prev_gap, "N = {n}: N lambda = {}", n * sol.lambda);
        prev_lambda = sol.lambda;
        prev_gap = gap;
    }
}

#[test]
fn neumann_convolution_approaches_scattering_length() {
    let pot = RadialPotential::square_well(2.0, 1.0).unwrap();
    let a0 = square_well_a0(2.0, 1.0);
    // C frozen from a reference run (N * defect = 4.33 at N = 50, 4.29 at N = 1000).
    let c_ref = 4.33;
    for n in [50.0, 100.0, 400.0] {
        let sol = solve_neumann(&pot, n).unwrap();
        let defect = (sol.conv(0.0).unwrap() - 8.0 * PI * a0).abs();
        assert!(defect <= 1.5 * c_ref / n, "N = {n}: {defect}");
    }
}

#[test]
fn eta_decay_and_norms() {
    let pot = RadialPotential::square_well(2.0, 1.0).unwrap();
    let n = 100.0;
    let sol = solve_neumann(&pot, n).unwrap();
    // |eta_p| p^2 e^{|p|/N} on |p| <= N, bound frozen from a reference run (8.99).
    let mut worst: f64 = 0.0;
    for k in 1..=250u64 {
        let p = 2.0 * PI * (k as f64).sqrt();
        if p <= n {
            worst = worst.max(eta_kernel(&sol, p).unwrap().abs() * p * p * (p / n).exp());
        }
    }
    assert!(worst < 1.5 * 8.99, "{worst}");

    let full = eta_highpass(&sol, 1e-9, 120.0).unwrap();
    assert!(full.shells.iter().all(|(_, e)| *e != 0.0));
    let none = eta_highpass(&sol, 1e3, 120.0).unwrap();
    assert_eq!(none.l2_norm(), 0.0);
    let mut prev = f64::INFINITY;
    for mu in [5.0, 10.0, 20.0, 40.0, 80.0] {
        let norm = eta_highpass(&sol, mu, 200.0).unwrap().l2_norm();
        assert!(norm <= prev);
        // Observed decay is mu^{-1/2} for mu << N; bound frozen from a reference run (0.645).
        assert!(norm * mu.sqrt() < 1.5 * 0.645);
        prev = norm;
    }
}

#[test]
fn eta_is_radial() {
    let sol = solve_neumann(&RadialPotential::smooth_bump(2.0, 1.0).unwrap(), 30.0).unwrap();
    let p = |n: [f64; 3]| 2.0 * PI * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let a = eta_kernel(&sol, p([3.0, 4.0, 0.0])).unwrap();
    let b = eta_kernel(&sol, p([5.0, 0.0, 0.0])).unwrap();
    let c = eta_kernel(&sol, p([0.0, 0.0, -5.0])).unwrap();
    assert!((a - b).abs() <= 1e-12 * a.abs() && (a - c).abs() <= 1e-12 * a.abs());
}
