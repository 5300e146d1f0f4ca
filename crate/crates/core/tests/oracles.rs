//! Comparisons against oracles that share no code with the library's quadrature.

#![allow(clippy::excessive_precision)]

use volterra_helix::moments::{
    covariance, g1, incremental_variance, mandelbrot_constant, mandelbrot_constant_numeric, variance,
    IncrementQuery,
};
use volterra_helix::numerics::DEFAULT_TOL;
use volterra_helix::processes::{make_process, ProcessKind};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Midpoint rule on `n` cells after the graded map `z = a + (b - a) * phi(u)`,
/// `phi(u) = u^q / (u^q + (1 - u)^q)`, which clusters nodes at both ends.
/// `f` receives the distances `z - a` and `b - z`.
fn graded_midpoint(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, n: usize, q: f64) -> f64 {
    let du = 1.0 / n as f64;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..n {
        let u = (i as f64 + 0.5) * du;
        let (p, m) = (u.powf(q), (1.0 - u).powf(q));
        let phi = p / (p + m);
        let dphi = q * (u * (1.0 - u)).powf(q - 1.0) / (p + m).powi(2);
        let (lo, hi) = ((b - a) * phi, (b - a) * m / (p + m));
        let term = f(lo, hi) * (b - a) * dphi * du - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    sum
}

/// Same rule on `[0, inf)` through `x = (u / (1 - u))^q`.
fn graded_midpoint_half_line(f: impl Fn(f64) -> f64, n: usize, q: f64) -> f64 {
    let du = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) * du;
            let ratio = u / (1.0 - u);
            let x = ratio.powf(q);
            let dx = q * ratio.powf(q - 1.0) / (1.0 - u).powi(2);
            f(x) * dx * du
        })
        .sum()
}

const N: usize = 1_000_000;

#[test]
fn g1_against_graded_midpoint() {
    let (alpha, gamma) = (0.25, 0.3);
    let f = |z: f64, r: f64| r.powf(-gamma) * ((1.0 + z).powf(alpha) - z.powf(alpha)).powi(2);
    let oracle = graded_midpoint(f, 0.0, 2.0, N, 4.0);
    let value = g1(2.0, alpha, gamma).unwrap();
    assert!(rel(value, oracle) < 1e-9, "{value} vs {oracle}");
    assert!(rel(value, 0.121299999336512149775) < 1e-10);

    let f0 = |z: f64, _| ((1.0 + z).powf(0.25) - z.powf(0.25)).powi(2);
    let oracle0 = graded_midpoint(f0, 0.0, 1.0, N, 4.0);
    assert!(rel(g1(1.0, 0.25, 0.0).unwrap(), oracle0) < 1e-9);
}

#[test]
fn u1_covariance_against_kernel_product() {
    let spec = make_process(ProcessKind::U1, 0.3, 0.0, 1.0).unwrap();
    let f = |u: f64, r: f64| (-2.0 * u).exp() * (1.0 + r).powf(0.3) * r.powf(0.3);
    let oracle = graded_midpoint(f, 0.0, 1.0, N, 3.0);
    let c = covariance(&spec, 1.0, 2.0).unwrap();
    assert!((c - oracle).abs() < 1e-8, "{c} vs {oracle}");
    assert!((c - 0.433594422654032217960).abs() < 1e-10);
    assert_eq!(c, covariance(&spec, 2.0, 1.0).unwrap());
}

#[test]
fn u6_components_against_graded_midpoint() {
    let (alpha, gamma, s, t) = (0.25, 0.4, 1.0, 1.5);
    let j4 = graded_midpoint_half_line(
        |u| u.powf(-gamma) * ((t + u).powf(alpha) - (s + u).powf(alpha)).powi(2),
        N,
        5.0,
    );
    let j1 = graded_midpoint(
        |u, r| u.powf(-gamma) * ((t - s + r).powf(alpha) - r.powf(alpha)).powi(2),
        0.0,
        s,
        N,
        4.0,
    );
    let j2 = graded_midpoint(|v, r| (s + v).powf(-gamma) * r.powf(2.0 * alpha), s, t, N, 4.0);

    let u6 = make_process(ProcessKind::U6, alpha, gamma, 0.0).unwrap();
    let b = incremental_variance(&IncrementQuery::new(u6, s, t).unwrap(), DEFAULT_TOL).unwrap();
    assert!(rel(b.j4, j4) < 1e-8, "{} vs {j4}", b.j4);
    assert!(rel(b.j1 + b.j2, j1 + j2) < 1e-8);
    assert!(rel(b.total, j4 + j1 + j2) < 1e-8);
}

#[test]
fn u2_variance_literal() {
    let spec = make_process(ProcessKind::U2, 0.25, 0.4, 0.0).unwrap();
    assert!(rel(variance(&spec, 2.0).unwrap(), 2.70330684362476812707) < 1e-13);
}

#[test]
fn mandelbrot_constant_literals() {
    for (alpha, want) in [(0.25, 0.874019184764039936822), (-0.25, 2.39628046947118441488)] {
        assert!(rel(mandelbrot_constant(alpha).unwrap(), want) < 1e-13);
        assert!(rel(mandelbrot_constant_numeric(alpha, 1e-10).unwrap(), want) < 1e-9);
    }
}

fn incvar(kind: ProcessKind, alpha: f64, gamma: f64, lambda: f64, s: f64, t: f64, tol: f64) -> f64 {
    let spec = make_process(kind, alpha, gamma, lambda).unwrap();
    incremental_variance(&IncrementQuery::new(spec, s, t).unwrap(), tol)
        .unwrap()
        .total
}

// reference values from 30-digit quadrature with the endpoint singularities substituted away by hand
#[test]
fn extreme_exponents_against_high_precision() {
    let cases = [
        (ProcessKind::U2, -0.49, 0.99, 0.0, 1e-8, 1.0, 1e-14, 8.6274186904816189e9),
        (ProcessKind::V, -0.2, 0.99, 0.0, 0.5, 2.0, 1e-10, 7.63832919191022),
        (ProcessKind::U5, -0.499, 0.0, 1.0, 0.0, 2.0, 1e-10, 1001.672841951854),
    ];
    for (kind, alpha, gamma, lambda, s, t, tol, want) in cases {
        let got = incvar(kind, alpha, gamma, lambda, s, t, tol);
        assert!(rel(got, want) < 1e-10, "{kind:?}: {got} vs {want}");
    }
}

// from s ~ 0 the increment is the variance B(1 - gamma, 1 + 2 alpha) at t = 1
#[test]
fn u2_increment_from_tiny_anchor_matches_beta_limit() {
    for (alpha, gamma, s, want) in [
        (0.3, 0.99, 1e-300, 99.30308109541595),
        (0.3, 0.9, 1e-300, 9.355164871339042),
        (0.3, 0.5, 1e-200, 1.5133646828094847),
    ] {
        let got = incvar(ProcessKind::U2, alpha, gamma, 0.0, s, 1.0, DEFAULT_TOL);
        assert!(rel(got, want) < 1e-10, "gamma={gamma}: {got} vs {want}");
    }
}
