#![allow(dead_code)]

use std::f64::consts::PI;

/// Composite Simpson rule with `n` (even) panels; an oracle independent of the
/// library's adaptive quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `4 pi int_0^R r^2 V(r) sin(kr)/(kr) dr` by Simpson on `[0, R]`.
pub fn radial_fourier<F: Fn(f64) -> f64>(v: F, range: f64, k: f64, n: usize) -> f64 {
    let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    4.0 * PI * simpson(|r| r * r * v(r) * sinc(k * r), 0.0, range, n)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
