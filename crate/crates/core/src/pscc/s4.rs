//! Integrated heat coefficients of the round 4-sphere, viewed as the
//! Robertson-Walker metric with `a(t) = rho sin(t / rho)`, `0 <= t <= pi rho`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bell::factorial;
use crate::expansion::a2m_checked;
use crate::zeta::dirac_zeta_s4_exact;
use crate::{Error, Result};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn rpow(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        num_traits::pow(r.recip(), (-k) as usize)
    }
}

fn double_factorial(n: i64) -> BigInt {
    let mut p = BigInt::one();
    let mut k = n;
    while k > 1 {
        p *= k;
        k -= 2;
    }
    p
}

/// `int_0^pi sin^n` for odd `n >= 1`: `2 (n-1)!! / n!!`.
fn wallis_odd(n: i64) -> Result<BigRational> {
    if n < 0 || n % 2 == 0 {
        return Err(Error::Validation(format!(
            "sin^{n} does not integrate to a rational over [0, pi]"
        )));
    }
    Ok(BigRational::new(BigInt::from(2) * double_factorial(n - 1), double_factorial(n)))
}

/// `int_0^{pi rho} a_{2M}(t) dt` for `a(t) = rho sin(t / rho)`.
///
/// Derivatives reduce to `a^{(2j)} = (-1)^j rho^{-2j} a` and
/// `a^{(2j+1)} = (-1)^j rho^{-2j} a'`; with `a = rho s`, `a' = c`, `c^2 = 1 - s^2`
/// the integrand collects into a Laurent polynomial in `s` plus an odd part in
/// `c`, which must cancel before integrating.
pub fn s4_heat_coefficient_radius(m: u32, rho: &BigRational) -> Result<BigRational> {
    if rho <= &BigRational::zero() {
        return Err(Error::Validation("radius must be positive".into()));
    }
    let poly = a2m_checked(m, crate::expansion::DEFAULT_MAX_ORDER)?.to_a_form();
    // even[p] and odd[p]: coefficients of s^p and c s^p
    let mut even: BTreeMap<i64, BigRational> = BTreeMap::new();
    let mut odd: BTreeMap<i64, BigRational> = BTreeMap::new();
    for (mono, coeff) in poly.terms() {
        let c = coeff
            .as_rational()
            .ok_or_else(|| Error::Validation("irrational coefficient in a_2M".into()))?
            .clone();
        let mut factor = c;
        let mut s_pow = mono.a_pow;
        let mut c_pow: u32 = 0;
        let mut rho_pow = mono.a_pow;
        for (&i, &e) in &mono.d {
            let j = (i / 2) as i64;
            let sign_neg = j % 2 == 1 && e % 2 == 1;
            if sign_neg {
                factor = -factor;
            }
            rho_pow -= 2 * j * e as i64;
            if i % 2 == 0 {
                s_pow += e as i64;
                rho_pow += e as i64;
            } else {
                c_pow += e;
            }
        }
        factor *= rpow(rho, rho_pow);
        // c^{2q} = sum_l binom(q, l) (-1)^l s^{2l}
        let q = c_pow / 2;
        let target = if c_pow % 2 == 0 { &mut even } else { &mut odd };
        for l in 0..=q {
            let mut b = BigRational::from_integer(binomial(BigInt::from(q), BigInt::from(l)));
            if l % 2 == 1 {
                b = -b;
            }
            *target.entry(s_pow + 2 * l as i64).or_insert_with(BigRational::zero) += &factor * b;
        }
    }
    if let Some((p, _)) = odd.iter().find(|(_, v)| !v.is_zero()) {
        return Err(Error::Validation(format!("a_{} has a surviving odd term c s^{p} on the sphere", 2 * m)));
    }
    let mut total = BigRational::zero();
    for (p, v) in even.iter().filter(|(_, v)| !v.is_zero()) {
        total += v * wallis_odd(*p)?;
    }
    // dt = rho d(theta)
    Ok(total * rho)
}

/// Unit-radius value of [`s4_heat_coefficient_radius`].
pub fn s4_heat_coefficient(m: u32) -> Result<BigRational> {
    s4_heat_coefficient_radius(m, &BigRational::one())
}

/// Coefficient of `tau^{2M-4}` in `Tr exp(-tau^2 D^2)` on the unit 4-sphere from
/// the residues of `Gamma(s/2) zeta_D(s) / 2` at `s = 4 - 2M`.
pub fn s4_heat_coefficient_from_zeta(m: u32) -> Result<BigRational> {
    match m {
        // Gamma(2)/2 * 4/3 and Gamma(1)/2 * (-4/3)
        0 => Ok(rat(2, 3)),
        1 => Ok(rat(-2, 3)),
        _ => {
            let j = m - 2;
            // Res_{s=-2j} Gamma(s/2)/2 = (-1)^j / j!
            let z = dirac_zeta_s4_exact(-2 * j as i64)?
                .as_rational()
                .ok_or_else(|| Error::Validation("non-rational Dirac zeta value".into()))?;
            let mut v = z / BigRational::from_integer(factorial(j));
            if j % 2 == 1 {
                v = -v;
            }
            Ok(v)
        }
    }
}
