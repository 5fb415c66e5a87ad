//! Pointwise values of the Bessel atoms J₀ and I₀.
//!
//! A 30-term power series is used for |x| <= 12, where its truncation and
//! cancellation error stay below 1e-12; beyond that the Hankel asymptotic
//! expansions take over so quadrature tails are not cut off artificially.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 12.0;
const SERIES_TERMS: usize = 30;

/// Σ (±x²/4)^k / (k!)², the shared power series of J₀ (sign −) and I₀ (sign +).
fn bessel_series(x: f64, sign: f64) -> f64 {
    let q = sign * x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_TERMS {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

/// Coefficients a_k of the order-zero Hankel expansion, in absolute value.
fn hankel_coeffs(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut a = 1.0;
    out.push(a);
    for k in 1..n {
        let m = (2 * k - 1) as f64;
        a *= m * m / (k as f64 * 8.0);
        out.push(a);
    }
    out
}

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        return bessel_series(x, -1.0);
    }
    let a = hankel_coeffs(20);
    let (mut p, mut q) = (0.0, 0.0);
    let mut pw = 1.0;
    for (k, ak) in a.iter().enumerate() {
        let term = ak * pw;
        // P = 1 - a2/x² + a4/x⁴ - ...; q carries -Q = a1/x - a3/x³ + ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        pw /= x;
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() + q * chi.sin())
}

pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        return bessel_series(x, 1.0);
    }
    let a = hankel_coeffs(20);
    let mut sum = 0.0;
    let mut pw = 1.0;
    for ak in &a {
        sum += ak * pw;
        pw /= x;
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun table 9.1 / 9.8.
        assert!((bessel_j0(0.0) - 1.0).abs() < 1e-15);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-13);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-12);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-13);
        assert!((bessel_i0(5.0) - 27.239_871_823_604_44).abs() < 1e-10);
    }

    #[test]
    fn series_and_asymptotics_agree_at_the_seam() {
        let (a, b) = (bessel_series(12.0, -1.0), {
            let x = 12.0 + 1e-12;
            bessel_j0(x)
        });
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        let (a, b) = (bessel_series(12.0, 1.0), bessel_i0(12.0 + 1e-12));
        assert!(((a - b) / a).abs() < 1e-9, "{a} vs {b}");
        assert!((bessel_j0(20.0) - 0.167_024_664_340_583_1).abs() < 1e-10);
    }
}
