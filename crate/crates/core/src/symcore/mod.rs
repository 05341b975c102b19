//! Exact symbolic layer.
//!
//! Expressions are polynomials in `A^{(i)}`, `B^{(i)}` (`i >= 1`) and
//! half-integer powers of `B`, with coefficients in Q(sqrt 2). The bare
//! symbol `A` never appears: it is always written as `B^{1/2}`.
//! [`AFormPoly`] is the same kind of object rewritten through
//! `A = 1/a`, `B = a^{-2}` in terms of the scale factor and its derivatives.

mod aform;
mod scalar;
mod text;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bell::Ring;

pub use aform::{AFormPoly, AMonomial};
pub use scalar::{ratio_to_f64, ExactScalar};
pub(crate) use scalar::fmt_rational;
pub use text::{CoeffJson, JsonPoly};

/// Sparse exponent map `derivative order -> power`, orders `>= 1`.
pub type ExpMap = BTreeMap<u32, u32>;

pub(crate) fn exp_map_mul(a: &ExpMap, b: &ExpMap) -> ExpMap {
    let mut out = a.clone();
    for (&i, &e) in b {
        *out.entry(i).or_insert(0) += e;
    }
    out
}

pub(crate) fn exp_map_dec(m: &mut ExpMap, i: u32) {
    let e = m.get_mut(&i).expect("exponent present");
    *e -= 1;
    if *e == 0 {
        m.remove(&i);
    }
}

/// Monomial `B^{b_half/2} * prod A^{(i)}^{a_exp[i]} * prod B^{(i)}^{b_exp[i]}`.
///
/// The derived ordering (b_half, then sorted A exponents, then sorted B
/// exponents) is the canonical ordering used for printing and comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivMonomial {
    pub b_half: i64,
    pub a_exp: ExpMap,
    pub b_exp: ExpMap,
}

impl DerivMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `B^{k/2}`.
    pub fn b_half_pow(k: i64) -> Self {
        Self { b_half: k, ..Self::default() }
    }

    /// `(A^{(i)})^e`, `i >= 1`.
    pub fn a_deriv(i: u32, e: u32) -> Self {
        assert!(i >= 1, "A itself is written as B^(1/2)");
        let mut m = Self::default();
        if e > 0 {
            m.a_exp.insert(i, e);
        }
        m
    }

    /// `(B^{(i)})^e`, `i >= 1`.
    pub fn b_deriv(i: u32, e: u32) -> Self {
        assert!(i >= 1, "use b_half_pow for powers of B");
        let mut m = Self::default();
        if e > 0 {
            m.b_exp.insert(i, e);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            b_half: self.b_half + other.b_half,
            a_exp: exp_map_mul(&self.a_exp, &other.a_exp),
            b_exp: exp_map_mul(&self.b_exp, &other.b_exp),
        }
    }

    /// Total derivative weight `sum i * e` over A and B derivatives.
    pub fn weight(&self) -> u64 {
        self.a_exp.iter().chain(self.b_exp.iter()).map(|(&i, &e)| i as u64 * e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.b_half == 0 && self.a_exp.is_empty() && self.b_exp.is_empty()
    }
}

/// Canonical sparse polynomial over [`DerivMonomial`] with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymPoly {
    terms: BTreeMap<DerivMonomial, ExactScalar>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::monomial(DerivMonomial::one(), c)
    }

    pub fn monomial(m: DerivMonomial, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Adds `c * m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: DerivMonomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivMonomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &DerivMonomial) -> Option<&ExactScalar> {
        self.terms.get(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// d/dt via Leibniz: `A^{(i)} -> A^{(i+1)}`, `B^{(i)} -> B^{(i+1)}`,
    /// `B^{k/2} -> (k/2) B^{k/2-1} B'`.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.b_half != 0 {
                let mut d = m.clone();
                d.b_half -= 2;
                *d.b_exp.entry(1).or_insert(0) += 1;
                out.add_term(d, c.scale(&BigRational::new(m.b_half.into(), 2.into())));
            }
            for (&i, &e) in &m.a_exp {
                let mut d = m.clone();
                exp_map_dec(&mut d.a_exp, i);
                *d.a_exp.entry(i + 1).or_insert(0) += 1;
                out.add_term(d, c.scale(&BigRational::from_integer(e.into())));
            }
            for (&i, &e) in &m.b_exp {
                let mut d = m.clone();
                exp_map_dec(&mut d.b_exp, i);
                *d.b_exp.entry(i + 1).or_insert(0) += 1;
                out.add_term(d, c.scale(&BigRational::from_integer(e.into())));
            }
        }
        out
    }

    /// Set of derivative weights present.
    pub fn weights(&self) -> std::collections::BTreeSet<u64> {
        self.terms.keys().map(DerivMonomial::weight).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(ExactScalar::is_rational)
    }

    /// Substitutes numeric values: `b_pow(x)` for `B^x` (x a half-integer
    /// given as `b_half`), `a_d(i)` for `A^{(i)}`, `b_d(i)` for `B^{(i)}`.
    pub fn eval_ab(&self, b: f64, a_d: &dyn Fn(u32) -> f64, b_d: &dyn Fn(u32) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64() * b.powf(m.b_half as f64 / 2.0);
                for (&i, &e) in &m.a_exp {
                    v *= a_d(i).powi(e as i32);
                }
                for (&i, &e) in &m.b_exp {
                    v *= b_d(i).powi(e as i32);
                }
                v
            })
            .sum()
    }
}

impl Ring for SymPoly {
    fn r_zero() -> Self {
        Self::zero()
    }
    fn r_one() -> Self {
        Self::constant(ExactScalar::one())
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_sqrt_b() {
        // A = B^{1/2}, so d/dt B^{1/2} = (1/2) B^{-1/2} B'.
        let a = SymPoly::monomial(DerivMonomial::b_half_pow(1), ExactScalar::one());
        let da = a.differentiate();
        let expect = SymPoly::monomial(
            DerivMonomial::b_half_pow(-1).mul(&DerivMonomial::b_deriv(1, 1)),
            ExactScalar::from_ratio(1, 2),
        );
        assert_eq!(da, expect);
    }

    #[test]
    fn cancellation_removes_terms() {
        let m = DerivMonomial::a_deriv(2, 1);
        let p = SymPoly::monomial(m.clone(), ExactScalar::one());
        assert!(p.sub(&p).is_empty());
        assert_eq!(p.mul(&p).coeff(&DerivMonomial::a_deriv(2, 2)), Some(&ExactScalar::one()));
    }

    #[test]
    fn canonical_order() {
        let lo = DerivMonomial::b_half_pow(-5);
        let hi = DerivMonomial::b_half_pow(-3).mul(&DerivMonomial::a_deriv(1, 2));
        assert!(lo < hi);
        let x = DerivMonomial::a_deriv(1, 2);
        let y = DerivMonomial::a_deriv(2, 1);
        assert!(x < y);
    }
}
