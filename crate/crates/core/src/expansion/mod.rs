//! Coefficients of `exp(V^2/4U) U^r V^m` and the heat coefficients `a_{2M}`.
//!
//! With `tau = s^{1/2}`,
//! `U = tau^2 sum_n u_n tau^n / n!`, `V = tau^2 sum_n v_n tau^n / n!`,
//! `u_n = B^{(n)} 2^{n/2} x_n`, `v_n = A^{(n+1)} 2^{n/2} x_n` (`x_0 = 1`), and
//! `exp(V^2/4U) U^r V^m = tau^{2(r+m)} sum_M C^{(r,m)}_M tau^M`.
//! Each `C^{(r,m)}_M` is a polynomial in the `u_n, v_n`, stored as a
//! [`MomentPoly`] whose monomials pair a symbolic part with a product of
//! bridge functionals `x_k`.

mod families;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bell::{factorial, partial_bell, Ring};
use crate::bridge::{moment_product, MomentSpec};
use crate::symcore::{DerivMonomial, ExactScalar, SymPoly};
use crate::{Error, Result};

pub use families::{eval_family, ScaleFactor};

/// Default cap on `M` for `a_{2M}`.
pub const DEFAULT_MAX_ORDER: u32 = 4;

/// One term `coeff * sym * prod x_k^{m_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTerm {
    pub coeff: ExactScalar,
    pub sym: DerivMonomial,
    pub x: MomentSpec,
}

/// Polynomial in the symbols and the bridge functionals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentPoly {
    terms: BTreeMap<(DerivMonomial, MomentSpec), ExactScalar>,
}

impl MomentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(sym: DerivMonomial, x: MomentSpec, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(sym, x, c);
        p
    }

    pub fn add_term(&mut self, sym: DerivMonomial, x: MomentSpec, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let key = (sym, x);
        let slot = self.terms.entry(key.clone()).or_insert_with(ExactScalar::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> Vec<MomentTerm> {
        self.terms
            .iter()
            .map(|((sym, x), c)| MomentTerm { coeff: c.clone(), sym: sym.clone(), x: x.clone() })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((s, x), c) in &o.terms {
            out.add_term(s.clone(), x.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for ((s, x), v) in &self.terms {
            out.add_term(s.clone(), x.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((s1, x1), c1) in &self.terms {
            for ((s2, x2), c2) in &o.terms {
                out.add_term(s1.mul(s2), x1.mul(x2), c1 * c2);
            }
        }
        out
    }

    /// Replaces each bridge monomial by its Gaussian expectation.
    pub fn integrate_bridge(&self) -> SymPoly {
        let mut out = SymPoly::zero();
        for ((s, x), c) in &self.terms {
            let e = moment_product(x);
            if !e.is_zero() {
                out.add_term(s.clone(), c.scale(&e));
            }
        }
        out
    }
}

impl Ring for MomentPoly {
    fn r_zero() -> Self {
        Self::zero()
    }
    fn r_one() -> Self {
        Self::monomial(DerivMonomial::one(), MomentSpec::one(), ExactScalar::one())
    }
    fn r_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn r_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn r_scale(&self, c: &BigInt) -> Self {
        self.scale(&ExactScalar::from_rational(BigRational::from_integer(c.clone())))
    }
    fn r_is_zero(&self) -> bool {
        self.is_empty()
    }
}

/// Scaling applied to the series `U -> su U`, `V -> sv V` with `su = a^{-2}`,
/// `sv = a^{-1}`; `a = 1` is the plain expansion.
#[derive(Clone, Debug)]
struct UvScale {
    a: BigRational,
}

impl UvScale {
    fn identity() -> Self {
        Self { a: BigRational::one() }
    }

    fn a_pow(&self, e: i64) -> BigRational {
        if e >= 0 {
            num_traits::pow(self.a.clone(), e as usize)
        } else {
            num_traits::pow(self.a.recip(), (-e) as usize)
        }
    }

    /// `(su)^{b_half/2} = a^{-b_half}`.
    fn u_half_pow(&self, b_half: i64) -> BigRational {
        self.a_pow(-b_half)
    }

    fn v_pow(&self, e: i64) -> BigRational {
        self.a_pow(-e)
    }
}

/// `u_l` for `l >= 1`.
fn u_symbol(l: u32, s: &UvScale) -> MomentPoly {
    MomentPoly::monomial(
        DerivMonomial::b_deriv(l, 1),
        MomentSpec::letter(l),
        ExactScalar::pow_sqrt2(l as i64).scale(&s.u_half_pow(2)),
    )
}

/// `v_q` for `q >= 1`.
fn v_symbol(q: u32, s: &UvScale) -> MomentPoly {
    MomentPoly::monomial(
        DerivMonomial::a_deriv(q + 1, 1),
        MomentSpec::letter(q),
        ExactScalar::pow_sqrt2(q as i64).scale(&s.v_pow(1)),
    )
}

/// Generalised binomial `binom(top, k)` for rational `top`.
fn gbinom(top: &BigRational, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k {
        num *= top - BigRational::from_integer(i.into());
    }
    num / BigRational::from_integer(factorial(k))
}

fn ibinom(n: u32, k: u32) -> BigRational {
    if k > n {
        BigRational::zero()
    } else {
        BigRational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
    }
}

/// Prefactor `binom(-n+r, k) binom(2n+m, p) / (4^n n!) * u_0^{-n+r-k} v_0^{2n+m-p}`.
fn leading_block(r2: i64, m: u32, n: u32, k: u32, p: u32, s: &UvScale) -> Option<(BigRational, DerivMonomial)> {
    let top = BigRational::new(BigInt::from(r2 - 2 * n as i64), BigInt::from(2));
    let bp = ibinom(2 * n + m, p);
    if bp.is_zero() {
        return None;
    }
    let c = gbinom(&top, k) * bp
        / BigRational::from_integer(BigInt::from(4u32).pow(n) * factorial(n));
    if c.is_zero() {
        return None;
    }
    let b_half = r2 - 2 * n as i64 - 2 * k as i64;
    let v0 = (2 * n + m - p) as i64;
    let sym = DerivMonomial::b_half_pow(b_half).mul(&DerivMonomial::a_deriv(1, v0 as u32));
    Some((c * s.u_half_pow(b_half) * s.v_pow(v0), sym))
}

fn compositions(n: u32, parts: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(rem: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < parts {
            return;
        }
        for first in 1..=rem - (parts - 1) {
            cur.push(first);
            rec(rem - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, parts, &mut Vec::new(), out);
}

fn crm_direct_scaled(r2: i64, m: u32, order: u32, s: &UvScale) -> MomentPoly {
    let mut out = MomentPoly::zero();
    for n in 0..=order / 2 {
        let big_n = order - 2 * n;
        for k in 0..=big_n {
            for p in 0..=big_n.min(2 * n + m) {
                if k + p > big_n || (k + p == 0 && big_n > 0) {
                    continue;
                }
                let Some((c0, sym0)) = leading_block(r2, m, n, k, p, s) else { continue };
                let mut comps = Vec::new();
                compositions(big_n, k + p, &mut comps);
                for comp in comps {
                    let mut term = MomentPoly::monomial(sym0.clone(), MomentSpec::one(), ExactScalar::from_rational(c0.clone()));
                    let mut den = BigInt::one();
                    for (idx, &part) in comp.iter().enumerate() {
                        let sym = if (idx as u32) < k { u_symbol(part, s) } else { v_symbol(part, s) };
                        term = term.mul(&sym);
                        den *= factorial(part);
                    }
                    out = out.add(&term.scale(&ExactScalar::from_rational(BigRational::new(BigInt::one(), den))));
                }
            }
        }
    }
    out
}

/// `C^{(r,m)}_M` with `r = r2 / 2`, summed over compositions of the
/// non-leading orders.
pub fn crm_direct(r2: i64, m: u32, order: u32) -> MomentPoly {
    crm_direct_scaled(r2, m, order, &UvScale::identity())
}

/// `C^{(r,m)}_M` after replacing `U -> a^{-2} U` and `V -> a^{-1} V` term by term
/// in the series.
pub fn crm_direct_rescaled(r2: i64, m: u32, order: u32, a: &BigRational) -> MomentPoly {
    crm_direct_scaled(r2, m, order, &UvScale { a: a.clone() })
}

/// `C^{(r,m)}_M` through partial Bell polynomials in `u_1, u_2, ...` and
/// `v_1, v_2, ...`.
pub fn crm_bell(r2: i64, m: u32, order: u32) -> MomentPoly {
    let s = UvScale::identity();
    let us: Vec<MomentPoly> = (1..=order).map(|l| u_symbol(l, &s)).collect();
    let vs: Vec<MomentPoly> = (1..=order).map(|q| v_symbol(q, &s)).collect();
    let mut out = MomentPoly::zero();
    for n in 0..=order / 2 {
        let big_n = order - 2 * n;
        let nfact = BigRational::from_integer(factorial(big_n));
        for k in 0..=big_n {
            for p in 0..=big_n.min(2 * n + m) {
                let Some((c0, sym0)) = leading_block(r2, m, n, k, p, &s) else { continue };
                let kp = BigRational::from_integer(factorial(k) * factorial(p));
                for beta in 0..=big_n {
                    let bu = partial_bell(beta as usize, k as usize, &us);
                    if bu.is_empty() {
                        continue;
                    }
                    let bv = partial_bell((big_n - beta) as usize, p as usize, &vs);
                    if bv.is_empty() {
                        continue;
                    }
                    let c = &c0 * ibinom(big_n, beta) * &kp / &nfact;
                    let lead = MomentPoly::monomial(sym0.clone(), MomentSpec::one(), ExactScalar::from_rational(c));
                    out = out.add(&lead.mul(&bu).mul(&bv));
                }
            }
        }
    }
    out
}

/// Integrated `C^{(r,m)}_M` as a symbolic polynomial.
pub fn crm_integrated(r2: i64, m: u32, order: u32) -> SymPoly {
    crm_direct(r2, m, order).integrate_bridge()
}

fn combine_a2m(m_order: u32, c: &dyn Fn(i64, u32, u32) -> SymPoly) -> SymPoly {
    let half = ExactScalar::from_ratio(1, 2);
    let quarter = ExactScalar::from_ratio(1, 4);
    let lead = c(-3, 0, 2 * m_order).scale(&half);
    if m_order == 0 {
        return lead;
    }
    let lower = c(-5, 2, 2 * m_order - 2).sub(&c(-1, 0, 2 * m_order - 2));
    lead.add(&lower.scale(&quarter))
}

/// The heat coefficient `a_{2M}` in the A/B variables.
///
/// `a_0 = C_0^{(-3/2,0)}/2`, and for `M >= 1`
/// `a_{2M} = E[C_{2M}^{(-3/2,0)}/2 + (C_{2M-2}^{(-5/2,2)} - C_{2M-2}^{(-1/2,0)})/4]`.
pub fn a2m(m_order: u32) -> SymPoly {
    let p = combine_a2m(m_order, &|r2, m, o| crm_integrated(r2, m, o));
    assert!(p.is_rational(), "a_{} picked up an irrational coefficient", 2 * m_order);
    p
}

/// Same as [`a2m`] but refuses orders above `max_order`.
pub fn a2m_checked(m_order: u32, max_order: u32) -> Result<SymPoly> {
    if m_order > max_order {
        return Err(Error::OrderTooLarge { requested: m_order, max: max_order });
    }
    Ok(a2m(m_order))
}

/// `a_{2M}` assembled from the Bell-polynomial form of each `C^{(r,m)}`.
pub fn a2m_bell(m_order: u32) -> SymPoly {
    combine_a2m(m_order, &|r2, m, o| crm_bell(r2, m, o).integrate_bridge())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficient() {
        let a0 = a2m(0);
        assert_eq!(a0.to_text(), "1/2 * B^(-3/2)");
    }

    #[test]
    fn compositions_count() {
        let mut v = Vec::new();
        compositions(5, 2, &mut v);
        assert_eq!(v.len(), 4);
        let mut all = 0;
        for parts in 1..=6 {
            let mut v = Vec::new();
            compositions(6, parts, &mut v);
            all += v.len();
        }
        assert_eq!(all, 32);
    }

    #[test]
    fn generalized_binomial() {
        let top = BigRational::new((-3).into(), 2.into());
        assert_eq!(gbinom(&top, 2), BigRational::new(15.into(), 8.into()));
        assert_eq!(gbinom(&top, 0), BigRational::one());
    }

    #[test]
    fn odd_orders_integrate_to_zero() {
        for order in [1, 3, 5] {
            for (r2, m) in [(-3, 0), (-5, 2), (-1, 0)] {
                let c = crm_direct(r2, m, order);
                assert!(!c.is_empty());
                assert!(c.integrate_bridge().is_empty(), "C^({r2}/2,{m})_{order}");
            }
        }
    }
}
