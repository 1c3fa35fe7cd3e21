use std::f64::consts::PI;

use becsim_core::resonance::{bessel_j, bessel_zero};
use proptest::prelude::*;

/// `J_n(x) = (1/2π)∫₀^{2π} cos(nτ - x sin τ) dτ`, trapezoid rule (spectrally
/// accurate for this periodic integrand).
fn quadrature(n: i32, x: f64) -> f64 {
    let m = 2 * (n.unsigned_abs() as usize + x.abs().ceil() as usize) + 64;
    let h = 2.0 * PI / m as f64;
    (0..m).map(|i| (n as f64 * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() / m as f64
}

/// Power series of `J_0`.
fn j0_series(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if f(m).signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn matches_quadrature_on_a_grid() {
    let orders = [0, 1, 2, 5, 7, 11, 15, 40, 100, 200];
    let args = [1e-3, 0.5, 2.404825557695773, 4.666666666666667, 14.0, 24.93493, 60.0, 150.0, 400.0, 999.0];
    for &n in &orders {
        for &x in &args {
            for (nn, xx) in [(n, x), (-n, x), (n, -x)] {
                let a = bessel_j(nn, xx).unwrap();
                let b = quadrature(nn, xx);
                assert!((a - b).abs() < 1e-12, "J_{nn}({xx}) = {a} vs {b}");
            }
        }
    }
}

#[test]
fn frozen_values() {
    // Quadrature-oracle values used elsewhere in the suite.
    assert!((bessel_j(5, 14.0 / 3.0).unwrap() - quadrature(5, 14.0 / 3.0)).abs() < 1e-13);
    assert!((bessel_j(5, 14.0 / 3.0).unwrap() - 0.2169).abs() < 1e-4);
    assert!((bessel_j(4, 14.0 / 3.0).unwrap() - 0.3661).abs() < 1e-4);
    assert!(bessel_j(7, 24.93493).unwrap().abs() < 2e-6);
}

#[test]
fn first_zero_of_j0() {
    let oracle = bisect(j0_series, 2.0, 3.0);
    assert!((oracle - 2.404825557695773).abs() < 1e-9);
    let z = bessel_zero(0, 1).unwrap();
    assert!((z - 2.404825557695773).abs() < 1e-9);
    assert!((z - oracle).abs() < 1e-9);
}

#[test]
fn zeros_used_for_localization() {
    // (order, index, value); values from an independent library evaluation.
    let table = [
        (7, 1, 11.086370019245084),
        (7, 5, 24.934927887673023),
        (11, 3, 23.27585372626341),
        (15, 2, 24.269180026208915),
    ];
    for (n, k, v) in table {
        let z = bessel_zero(n, k).unwrap();
        assert!((z - v).abs() < 1e-9, "zero {k} of J_{n}: {z}");
        assert!(bessel_j(n as i32, z).unwrap().abs() < 1e-9);
        let q = bisect(|x| quadrature(n as i32, x), v - 0.1, v + 0.1);
        assert!((z - q).abs() < 1e-9);
    }
    assert!((bessel_zero(7, 5).unwrap() - 24.93493).abs() < 1e-4);
}

#[test]
fn zeros_are_increasing_and_bracketed() {
    for n in [0u32, 1, 4, 7, 13] {
        let zeros: Vec<f64> = (1..=6).map(|k| bessel_zero(n, k).unwrap()).collect();
        assert!(zeros.windows(2).all(|w| w[0] < w[1]));
        for z in zeros {
            assert!(bessel_j(n as i32, z).unwrap().abs() < 1e-9);
        }
    }
}

#[test]
fn recurrence_and_normalization() {
    for i in 1..200 {
        let x = 0.37 * i as f64;
        for n in 1..60 {
            let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "n={n} x={x}");
        }
        let top = (x + 40.0) as i32;
        let mass: f64 = (-top..=top).map(|n| bessel_j(n, x).unwrap().powi(2)).sum();
        assert!((mass - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn reflection(n in -200i32..=200, x in -1000.0f64..1000.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = bessel_j(n, x).unwrap();
        prop_assert_eq!(bessel_j(-n, x).unwrap(), sign * a);
        prop_assert!(a.abs() <= 1.0);
    }

    #[test]
    fn agrees_with_quadrature(n in -60i32..=60, x in -80.0f64..80.0) {
        prop_assert!((bessel_j(n, x).unwrap() - quadrature(n, x)).abs() < 1e-12);
    }
}
