//! Special functions in double precision: complex Gamma, Bernoulli numbers,
//! the Dawson function, `erf`, and Kummer's confluent hypergeometric `1F1`.

mod verify;

use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::symcore::ratio_to_f64;
use crate::{Error, Result};

pub use verify::{
    dawson_simplex_rhs, simplex_gaussian_lhs, verify_dawson_simplex, verify_gaussian_multiplicity,
    verify_mellin_pm, verify_mellin_scaling, verify_mellin_z1, half_line_mellin, mellin_sum_closed,
    mellin_minus_closed, mellin_plus_closed, QuadratureSpec, Verification,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        // sum_{k<m} binom(m+1, k) B_k = -(m+1) B_m
        let m = b.len();
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += bk * BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(k)));
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b[n].clone()
}

fn stirling_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        (1..=14)
            .map(|k| ratio_to_f64(&bernoulli(2 * k)) / ((2 * k) as f64 * (2 * k - 1) as f64))
            .collect()
    })
}

/// `ln Gamma(z)` for `Re z > 0`, continuous in `z` (imaginary part not reduced
/// modulo `2 pi`).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re <= 0.0 {
        // reflection, principal branch of the logarithm
        return c(PI.ln()) - (z * PI).sin().ln() - ln_gamma(c(1.0) - z);
    }
    let mut shift = c(0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = c(0.0);
    let mut p = inv;
    for &ck in stirling_coeffs() {
        series += p * ck;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Complex Gamma function.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        if z.im == 0.0 && z.re == z.re.round() {
            return c(f64::INFINITY);
        }
        return c(PI) / ((z * PI).sin() * gamma(c(1.0) - z));
    }
    ln_gamma(z).exp()
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(c(x)).re
}

/// Dawson's integral `F(x) = exp(-x^2) int_0^x exp(y^2) dy`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 6.0 {
        // e^{-x^2} sum x^{2n+1} / (n! (2n+1))
        let x2 = ax * ax;
        let mut t = ax;
        let mut s = ax;
        let mut n = 0.0;
        loop {
            n += 1.0;
            t *= x2 / n;
            let term = t / (2.0 * n + 1.0);
            s += term;
            if term <= 1e-17 * s {
                break;
            }
        }
        s * (-x2).exp()
    } else {
        // 1/(2x) sum (2n-1)!! / (2x^2)^n
        let y = 1.0 / (2.0 * ax * ax);
        let mut t = 1.0;
        let mut s = 1.0;
        let mut n = 0.0;
        loop {
            n += 1.0;
            let next = t * (2.0 * n - 1.0) * y;
            if next >= t || next < 1e-17 * s {
                break;
            }
            t = next;
            s += t;
        }
        s / (2.0 * ax)
    };
    v.copysign(x)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 3.0 {
        // 2x/sqrt(pi) e^{-x^2} sum (2x^2)^n / (2n+1)!!
        let x2 = ax * ax;
        let mut t = 1.0;
        let mut s = 1.0;
        let mut n = 0.0;
        loop {
            n += 1.0;
            t *= 2.0 * x2 / (2.0 * n + 1.0);
            s += t;
            if t < 1e-17 * s {
                break;
            }
        }
        2.0 * ax / PI.sqrt() * (-x2).exp() * s
    } else {
        // erfc by Lentz continued fraction
        let x2 = ax * ax;
        let tiny = 1e-300;
        let mut f = ax;
        let mut cc = ax;
        let mut d = 0.0;
        for k in 1..300 {
            let a = k as f64 / 2.0;
            let b = ax;
            d = b + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            cc = b + a / cc;
            if cc.abs() < tiny {
                cc = tiny;
            }
            d = 1.0 / d;
            let delta = cc * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x2).exp() / (PI.sqrt() * f)
    };
    v.copysign(x)
}

fn is_nonpositive_integer(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

fn kummer_series(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let mut comp = c(0.0);
    let mut n = 0.0;
    let floor = x.norm() + a.norm();
    while n < 20000.0 {
        term *= (a + n) * x / ((b + n) * (n + 1.0));
        n += 1.0;
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if n > floor && term.norm() <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!("1F1({a}, {b}, {x}) series did not converge")))
}

/// Kummer's confluent hypergeometric function `1F1(a; b; x)`.
pub fn kummer_1f1(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(b) {
        return Err(Error::Validation(format!("1F1 undefined for b = {b}")));
    }
    if x.re < 0.0 {
        Ok(x.exp() * kummer_series(b - a, b, -x)?)
    } else {
        kummer_series(a, b, x)
    }
}

pub fn kummer_1f1_real(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(kummer_1f1(c(a), c(b), c(x))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli(1), BigRational::new((-1).into(), 2.into()));
        assert_eq!(bernoulli(2), BigRational::new(1.into(), 6.into()));
        assert_eq!(bernoulli(3), BigRational::zero());
        assert_eq!(bernoulli(12), BigRational::new((-691).into(), 2730.into()));
    }

    #[test]
    fn gamma_integers() {
        for n in 1..10 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            assert!((gamma_real(n as f64) - f).abs() < 1e-13 * f);
        }
    }

    #[test]
    fn erf_values() {
        // mpmath references
        assert!((erf(1.0) - 0.842700792949714869341220635083).abs() < 2e-15);
        assert!((erf(3.5) - 0.999999256901627658587254476316).abs() < 2e-15);
        assert!((erf(-0.3) + 0.328626759459127416189617985318).abs() < 2e-15);
    }
}
