use std::f64::consts::PI;
use std::sync::OnceLock;

use super::ShellTable;

/// Constant term of the periodic Green's function of `-Laplace` on the unit torus
/// (zero mode removed): `G(x) = 1/(4 pi |x|) + xi + |x|^2/6 + O(|x|^4)`.
///
/// Evaluated by Ewald splitting with parameter `alpha`; the result does not
/// depend on `alpha` beyond rounding.
pub fn periodic_green_constant_with(alpha: f64) -> f64 {
    let table = ShellTable::new(400);
    let real = table.sum(400, |k| {
        let r = (k as f64).sqrt();
        libm::erfc(alpha * r) / (4.0 * PI * r)
    });
    let recip = table.sum(400, |k| {
        let p2 = 4.0 * PI * PI * k as f64;
        (-p2 / (4.0 * alpha * alpha)).exp() / p2
    });
    real + recip - 1.0 / (4.0 * alpha * alpha) - alpha / (2.0 * PI.powf(1.5))
}

pub fn periodic_green_constant() -> f64 {
    static XI: OnceLock<f64> = OnceLock::new();
    *XI.get_or_init(|| periodic_green_constant_with(2.0))
}
