use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Result, ScatterError};

const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Bessel function of the first kind of order zero.
///
/// Absolute error stays below 1e-13 on |x| <= 50 and the function is exactly
/// even: `bessel_j0(-x) == bessel_j0(x)`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(ScatterError::NonFinite(x));
    }
    Ok(j0(x))
}

/// Unchecked J0 for internal use on arguments known to be finite.
pub(crate) fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        j0_series(x)
    } else if x <= ASYMPTOTIC_LIMIT {
        j0_miller(x)
    } else {
        j0_asymptotic(x)
    }
}

// Σ (-x²/4)^m / (m!)², Kahan-compensated. Terms decrease monotonically for x <= 1.
fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut carry = 0.0;
    for m in 1..40 {
        let m = m as f64;
        term *= q / (m * m);
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

// Backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1} from a start index well
// above x, normalised with J0 + 2 Σ J_{2k} = 1.
fn j0_miller(x: f64) -> f64 {
    let start = ((x + 25.0 + 16.0 * x.cbrt()).ceil() as usize + 1) & !1;
    let mut upper = 0.0_f64; // J_{n+1}
    let mut current = 1e-30_f64; // J_n
    let mut norm = 0.0_f64;
    for n in (1..=start).rev() {
        if n % 2 == 0 {
            norm += 2.0 * current;
        }
        let lower = (2.0 * n as f64 / x) * current - upper;
        upper = current;
        current = lower;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += current;
    current / norm
}

// Hankel expansion J0 = sqrt(2/(πx)) (P cos χ − Q sin χ), χ = x − π/4, summed
// until the terms stop decreasing or fall below double precision.
fn j0_asymptotic(x: f64) -> f64 {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut previous = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= -(odd * odd) / (8.0 * k as f64 * x);
        if term.abs() >= previous {
            break;
        }
        previous = term.abs();
        // t_k carries (-1)^k; P takes even k with sign (-1)^(k/2), Q odd k with (-1)^((k-1)/2).
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // (1/π) ∫₀^π cos(x sin t) dt by the trapezoid rule; the integrand is
    // smooth and periodic so the rule converges geometrically.
    fn quadrature_oracle(x: f64) -> f64 {
        let n = 400 + 4 * x.abs().ceil() as usize;
        let h = PI / n as f64;
        let mut sum = 0.5 * (1.0 + 1.0);
        for i in 1..n {
            sum += (x * (i as f64 * h).sin()).cos();
        }
        sum / n as f64
    }

    #[test]
    fn reference_values() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!((bessel_j0(1.0).unwrap() - 0.7651976865579666).abs() < 1e-15);
        assert!(bessel_j0(2.404825557695773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn agrees_with_quadrature_on_dense_grid() {
        let mut worst: f64 = 0.0;
        for i in 0..=5000 {
            let x = i as f64 * 0.01;
            worst = worst.max((j0(x) - quadrature_oracle(x)).abs());
        }
        assert!(worst < 1e-13, "worst deviation {worst:e}");
    }

    #[test]
    fn continuous_across_branch_points() {
        for &x in &[SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            for y in [x - 1e-12, x, x + 1e-12] {
                assert!((j0(y) - quadrature_oracle(y)).abs() < 1e-13, "x = {y}");
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(bessel_j0(f64::NAN), Err(ScatterError::NonFinite(_))));
        assert!(bessel_j0(f64::INFINITY).is_err());
        assert!(bessel_j0(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn large_arguments_stay_finite() {
        for &x in &[1e3, 1e6, 1e12] {
            let v = j0(x);
            assert!(v.is_finite() && v.abs() <= (2.0 / (PI * x)).sqrt() * 1.01);
        }
    }

    proptest! {
        #[test]
        fn even_function(x in -1e4f64..1e4) {
            prop_assert_eq!(j0(-x), j0(x));
        }

        #[test]
        fn bounded_by_one_away_from_origin(x in 2e-8f64..1e4) {
            prop_assert!(j0(x).abs() < 1.0);
        }
    }
}
