// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Bessel functions of the first kind for integer order.

use std::f64::consts::PI;

/// `J_n(x)` for integer `n` and real `x`.
///
/// Evaluated from Bessel's integral `J_n(x) = (1/2π) ∫ cos(nθ − x sin θ) dθ`
/// over one period with the trapezoidal rule. The integrand is periodic and
/// band-limited, so the rule is exact up to aliased terms `J_{M±n}(x)`; the
/// sample count `M` is chosen far enough past the turning point that those are
/// below double precision. The absolute error is a few ulp of unity for any
/// order, which is what the propagator comparisons need.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let order = f64::from(n);
    let ax = x.abs();
    let samples = (ax + order.abs() + 40.0 + 25.0 * ax.cbrt()).ceil() as usize;
    let step = 2.0 * PI / samples as f64;
    let sum: f64 = (0..samples)
        .map(|k| {
            let theta = k as f64 * step;
            (order * theta - x * theta.sin()).cos()
        })
        .sum();
    sum / samples as f64
}

/// Derivative `J_n'(x) = (J_{n−1}(x) − J_{n+1}(x)) / 2`.
pub fn bessel_j_prime(n: i32, x: f64) -> f64 {
    0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
}

/// The `k`-th positive zero (1-based) of `J_n`.
///
/// Brackets sign changes on a fine scan and refines each by bisection.
pub fn bessel_j_zero(n: i32, k: usize) -> f64 {
    assert!(k >= 1, "zeros are numbered from 1");
    let step = 0.05;
    let mut found = 0;
    let mut a = 1e-6;
    let mut fa = bessel_j(n, a);
    loop {
        let b = a + step;
        let fb = bessel_j(n, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                return bisect(|x| bessel_j(n, x), a, b, 1e-14);
            }
        }
        a = b;
        fa = fb;
    }
}

/// Bisection for a sign change of `f` on `[a, b]`, to absolute width `tol`.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}
