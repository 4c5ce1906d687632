// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form return amplitudes of the semi-infinite uniform XX chain.
//!
//! All expressions take `J = 1` and hold for a finite chain until the first
//! reflection from the far end returns, roughly at `t ≈ N`. A uniform field
//! `s` added to every site multiplies `Π₀ − iΔ₀` by `e^{2ist}`; use
//! [`with_common_field`] to apply it.

use crate::special::bessel_j;

/// `(Π₀, Δ₀)` for `J₀ = J`, `h₀ = h`.
pub fn resonant(t: f64, h: f64) -> (f64, f64) {
    let amp = if t == 0.0 { 1.0 } else { bessel_j(1, 2.0 * t) / t };
    with_common_field(amp, 0.0, h, t)
}

/// `f(t) = J₁(2t)² / t²` for `J₀ = J`, `h₀ = h`.
pub fn resonant_f(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (bessel_j(1, 2.0 * t) / t).powi(2)
    }
}

/// Flux for the antipodal equatorial pair, `σ = −(2/t) sgn(J₁(2t)) J₂(2t)`.
pub fn resonant_flux(t: f64) -> f64 {
    -2.0 / t * bessel_j(1, 2.0 * t).signum() * bessel_j(2, 2.0 * t)
}

/// `(Π_n, Δ_n)` at the point `J₀ = J`, `h₀ = 0`, `h = J/2`.
pub fn markov_point(n: usize, t: f64) -> (f64, f64) {
    let order = n as i32;
    let jn = bessel_j(order, 2.0 * t);
    let jn1 = bessel_j(order + 1, 2.0 * t);
    let (s, c) = t.sin_cos();
    let sign = |k: usize| if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    if n.is_multiple_of(2) {
        (sign(n) * (s * jn1 + c * jn), sign(n) * (c * jn1 - s * jn))
    } else {
        (sign(n + 1) * (c * jn1 - s * jn), sign(n + 3) * (s * jn1 + c * jn))
    }
}

/// `f(t) = J₀(2t)² + J₁(2t)²` at the Markov point.
pub fn markov_point_f(t: f64) -> f64 {
    bessel_j(0, 2.0 * t).powi(2) + bessel_j(1, 2.0 * t).powi(2)
}

/// `f'(t) = −2 J₁(2t)² / t` at the Markov point.
pub fn markov_point_df(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        -2.0 * bessel_j(1, 2.0 * t).powi(2) / t
    }
}

/// `(Π₀, Δ₀)` for `J₀ = √2 J`, `h₀ = h`.
pub fn sqrt2_point(t: f64, h: f64) -> (f64, f64) {
    with_common_field(bessel_j(0, 2.0 * t), 0.0, h, t)
}

/// Flux for the antipodal equatorial pair at `J₀ = √2 J`, `δh = 0`:
/// `σ = −2 sgn(J₀(2t)) J₁(2t)`.
pub fn sqrt2_flux(t: f64) -> f64 {
    -2.0 * bessel_j(0, 2.0 * t).signum() * bessel_j(1, 2.0 * t)
}

/// Applies a field `s` common to all sites to amplitudes computed without it.
pub fn with_common_field(pi: f64, delta: f64, s: f64, t: f64) -> (f64, f64) {
    let (sn, cs) = (2.0 * s * t).sin_cos();
    // (Π − iΔ) e^{2ist}
    (pi * cs + delta * sn, delta * cs - pi * sn)
}
