//! Riemann zeta on the complex plane, exact zeta tokens, the bundled table of
//! nontrivial zero ordinates, fractal-string zeta functions and the Dirac zeta
//! function of the round 4-sphere.

mod exact;
mod strings;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::specfun::{bernoulli, ln_gamma};
use crate::bell::factorial;
use crate::symcore::ratio_to_f64;
use crate::{Error, Result};

pub use exact::{pow2, zeta_exact, ExactValue, Transcendental};
pub use strings::{
    ford_partial_sum, ford_tail_bound, ford_trivial_residue_exact, ford_zeta, ford_zeta_exact, packed_dirac_zeta_direct,
    string_poles, string_zeta, string_zeta_exact, totients, AnalyticString, FractalString, PoleTerm, Radius, Strip,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `B_{2k} / (2k)!` for `k = 1..=40`.
fn em_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        (1..=40u32)
            .map(|k| {
                let r = bernoulli(2 * k as usize) / BigRational::from_integer(factorial(2 * k));
                ratio_to_f64(&r)
            })
            .collect()
    })
}

fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let n = 30 + s.im.abs().ceil() as usize + s.re.abs().ceil() as usize / 2;
    let mut sum = c(0.0);
    for k in (1..n).rev() {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    sum += n_s * nf / (s - 1.0) + n_s * 0.5;
    // tail: B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s;
    let mut pow = n_s / nf;
    let mut prev = f64::INFINITY;
    for (k, &b) in em_coeffs().iter().enumerate() {
        let term = rising * pow * b;
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        if mag <= 1e-17 * sum.norm() {
            break;
        }
        prev = mag;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        pow /= nf * nf;
    }
    sum
}

/// Riemann zeta function. Integers `s <= 0` and even `s > 0` go through the
/// exact Bernoulli values; `Re s < -1` uses the functional equation.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if s == c(1.0) {
        return Err(Error::Divergent("zeta has a pole at s = 1".into()));
    }
    if s.im == 0.0 && s.re == s.re.round() && s.re >= -60.0 && s.re <= 60.0 {
        let n = s.re as i64;
        if n <= 0 || n % 2 == 0 {
            return Ok(c(zeta_exact(n)?.to_f64()));
        }
    }
    if s.re < -1.0 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
        let one_minus = c(1.0) - s;
        let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(one_minus);
        return Ok(log_factor.exp() * (s * (PI / 2.0)).sin() * zeta_euler_maclaurin(one_minus));
    }
    Ok(zeta_euler_maclaurin(s))
}

pub fn riemann_zeta_real(x: f64) -> Result<f64> {
    Ok(riemann_zeta(c(x))?.re)
}

/// `zeta'(z)` by the trapezoid rule on a circle around `z` (64 nodes).
pub fn zeta_derivative(z: Complex64) -> Result<Complex64> {
    let dist = (z - 1.0).norm();
    if dist < 1e-6 {
        return Err(Error::Divergent("zeta' has a pole at s = 1".into()));
    }
    let r = (dist / 2.0).min(0.25);
    let n = 64;
    let mut acc = c(0.0);
    for k in 0..n {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        acc += riemann_zeta(z + e * r)? / e;
    }
    Ok(acc / (n as f64 * r))
}

/// Riemann-Siegel theta function.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, t / 2.0)).im - t / 2.0 * PI.ln()
}

/// Hardy's Z function, real on the real line with sign changes at the zero
/// ordinates on the critical line.
pub fn hardy_z(t: f64) -> Result<f64> {
    let th = riemann_siegel_theta(t);
    Ok((Complex64::from_polar(1.0, th) * riemann_zeta(Complex64::new(0.5, t))?).re)
}

fn bisect_z(mut lo: f64, mut hi: f64, mut zlo: f64) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let zm = hardy_z(mid)?;
        if zm == 0.0 {
            return Ok(mid);
        }
        if (zm > 0.0) == (zlo > 0.0) {
            lo = mid;
            zlo = zm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ordinates in `[t_lo, t_hi]` where `Z` changes sign on a grid of spacing
/// `step`, refined by bisection.
pub fn locate_zero_ordinates(t_lo: f64, t_hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || t_hi < t_lo {
        return Err(Error::Validation(format!("bad scan window [{t_lo}, {t_hi}] step {step}")));
    }
    let mut out = Vec::new();
    let mut a = t_lo;
    let mut za = hardy_z(a)?;
    while a < t_hi {
        let b = (a + step).min(t_hi);
        let zb = hardy_z(b)?;
        if za == 0.0 {
            out.push(a);
        } else if (za > 0.0) != (zb > 0.0) && zb != 0.0 {
            out.push(bisect_z(a, b, za)?);
        }
        a = b;
        za = zb;
    }
    Ok(out)
}

const ZERO_TABLE: &str = include_str!("../../data/zeta_zeros.txt");

/// One entry of the bundled zero table after re-verification.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCheck {
    pub ordinate: f64,
    pub refined: f64,
    pub bracketed: bool,
}

pub fn parse_zero_table(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let v: f64 = l
            .parse()
            .map_err(|_| Error::Parse(format!("zero table line {}: `{l}`", i + 1)))?;
        if !(v > 0.0) || out.last().is_some_and(|&p| p >= v) {
            return Err(Error::Parse(format!("zero table line {}: ordinates must increase", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

/// Checks that `Z` changes sign across every tabulated ordinate and that the
/// bisected root agrees with the table.
pub fn check_zero_table(ordinates: &[f64]) -> Result<Vec<ZeroCheck>> {
    ordinates
        .iter()
        .map(|&g| {
            let d = 1e-7;
            let zl = hardy_z(g - d)?;
            let zr = hardy_z(g + d)?;
            let bracketed = (zl > 0.0) != (zr > 0.0);
            let refined = if bracketed { bisect_z(g - d, g + d, zl)? } else { f64::NAN };
            Ok(ZeroCheck { ordinate: g, refined, bracketed: bracketed && (refined - g).abs() < 1e-9 })
        })
        .collect()
}

/// The bundled ordinates, verified on first use.
pub fn zero_ordinates() -> Result<&'static [f64]> {
    static TABLE: OnceLock<std::result::Result<Vec<f64>, String>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let ords = parse_zero_table(ZERO_TABLE).map_err(|e| e.to_string())?;
        let checks = check_zero_table(&ords).map_err(|e| e.to_string())?;
        if let Some(bad) = checks.iter().find(|c| !c.bracketed) {
            return Err(format!("tabulated zero {} failed the sign-change check", bad.ordinate));
        }
        Ok(ords)
    });
    match t {
        Ok(v) => Ok(v),
        Err(e) => Err(Error::Numeric(e.clone())),
    }
}

fn near(s: Complex64, x: f64) -> bool {
    (s - x).norm() < 1e-12
}

/// Dirac zeta of the round 4-sphere of radius `r`:
/// `4/3 r^s (zeta(s-3) - zeta(s-1))`.
pub fn dirac_zeta_s4(s: Complex64, r: f64) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Validation(format!("radius must be positive, got {r}")));
    }
    if near(s, 4.0) || near(s, 2.0) {
        return Err(Error::Divergent(format!("Dirac zeta of S^4 has a pole at s = {}", s.re)));
    }
    let diff = riemann_zeta(s - 3.0)? - riemann_zeta(s - 1.0)?;
    Ok((s * r.ln()).exp() * diff * (4.0 / 3.0))
}

/// Exact unit-radius Dirac zeta of `S^4` at an integer.
pub fn dirac_zeta_s4_exact(k: i64) -> Result<ExactValue> {
    if k == 4 || k == 2 {
        return Err(Error::Divergent(format!("Dirac zeta of S^4 has a pole at s = {k}")));
    }
    Ok(zeta_exact(k - 3)?.sub(&zeta_exact(k - 1)?).scale(&BigRational::new(4.into(), 3.into())))
}

/// Residues of the unit-radius Dirac zeta of `S^4`: `4/3` at 4, `-4/3` at 2.
pub fn dirac_s4_poles() -> Vec<PoleTerm> {
    vec![
        PoleTerm { sigma: c(2.0), residue: c(-4.0 / 3.0) },
        PoleTerm { sigma: c(4.0), residue: c(4.0 / 3.0) },
    ]
}

/// Multiplicity of the Dirac eigenvalues `+-m/r` on `S^4`, both signs together.
pub fn dirac_s4_multiplicity(m: u64) -> BigRational {
    let m = BigInt::from(m);
    BigRational::new(BigInt::from(4) * (&m * &m * &m - &m), 3.into())
}
