use std::f64::consts::PI;

use super::bessel::j0;

/// ∫_{−k}^{k} cos(a p) / √(k² − p²) dp.
///
/// With p = k sin u the integrand becomes cos(a k sin u) on [−π/2, π/2],
/// which is symmetric about both endpoints; every odd derivative vanishes
/// there and the trapezoid rule converges geometrically.
pub fn band_integral(a: f64, k: f64) -> f64 {
    let x = a * k;
    let panels = 64 + 2 * x.abs().ceil() as usize;
    let h = PI / panels as f64;
    let mut sum = 0.5 * ((-x).cos() + x.cos());
    for i in 1..panels {
        let u = -0.5 * PI + i as f64 * h;
        sum += (x * u.sin()).cos();
    }
    sum * h
}

/// Absolute deviation between [`band_integral`] and π·J0(a·k).
pub fn band_integral_check(a: f64, k: f64) -> f64 {
    (band_integral(a, k) - PI * j0(a * k)).abs()
}
