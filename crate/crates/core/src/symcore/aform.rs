use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{exp_map_dec, exp_map_mul, ExactScalar, ExpMap, SymPoly};
use crate::bell::{faa_di_bruno, Ring};

/// Monomial `a^{a_pow} * prod (a^{(i)})^{d[i]}`, `i >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AMonomial {
    pub a_pow: i64,
    pub d: ExpMap,
}

impl AMonomial {
    pub fn a_pow(p: i64) -> Self {
        Self { a_pow: p, d: ExpMap::new() }
    }

    pub fn deriv(i: u32, e: u32) -> Self {
        let mut d = ExpMap::new();
        if e > 0 {
            d.insert(i, e);
        }
        Self { a_pow: 0, d }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { a_pow: self.a_pow + other.a_pow, d: exp_map_mul(&self.d, &other.d) }
    }

    /// `(sum_{j>=0} k_j, sum_j j k_j)` once the monomial is multiplied by
    /// `a^{shift}`, where `k_0` is the resulting power of `a`.
    pub fn degree_pair(&self, shift: i64) -> (i64, i64) {
        let k0 = self.a_pow + shift;
        let count: i64 = self.d.values().map(|&e| e as i64).sum();
        let weight: i64 = self.d.iter().map(|(&i, &e)| i as i64 * e as i64).sum();
        (k0 + count, weight)
    }
}

/// Polynomial in `a`, `1/a` and derivatives of `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AFormPoly {
    terms: BTreeMap<AMonomial, ExactScalar>,
}

impl AFormPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: AMonomial, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: AMonomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(ExactScalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AMonomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
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

    /// d/dt with `a^p -> p a^{p-1} a'` and `a^{(i)} -> a^{(i+1)}`.
    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.a_pow != 0 {
                let mut d = m.clone();
                d.a_pow -= 1;
                *d.d.entry(1).or_insert(0) += 1;
                out.add_term(d, c.scale(&BigRational::from_integer(m.a_pow.into())));
            }
            for (&i, &e) in &m.d {
                let mut d = m.clone();
                exp_map_dec(&mut d.d, i);
                *d.d.entry(i + 1).or_insert(0) += 1;
                out.add_term(d, c.scale(&BigRational::from_integer(e.into())));
            }
        }
        out
    }

    /// Numeric value given `deriv(k) = a^{(k)}(t)` (with `deriv(0) = a(t)`).
    pub fn eval(&self, deriv: &dyn Fn(u32) -> f64) -> f64 {
        let a = deriv(0);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64() * a.powi(m.a_pow as i32);
                for (&i, &e) in &m.d {
                    v *= deriv(i).powi(e as i32);
                }
                v
            })
            .sum()
    }

    /// Monomials violating the grading of the heat coefficient `a_{2m}`:
    /// writing `a_{2m} = Q / a^{2m-3}`, every monomial of `Q` must have
    /// `sum_j k_j = sum_j j k_j` with that common value in `{2m-2, 2m}`.
    pub fn grading_violations(&self, m: u32) -> Vec<AMonomial> {
        let shift = 2 * m as i64 - 3;
        let allowed = [2 * m as i64 - 2, 2 * m as i64];
        self.terms
            .keys()
            .filter(|mono| {
                let (count, weight) = mono.degree_pair(shift);
                !(count == weight && allowed.contains(&weight))
            })
            .cloned()
            .collect()
    }
}

impl Ring for AFormPoly {
    fn r_zero() -> Self {
        Self::zero()
    }
    fn r_one() -> Self {
        Self::monomial(AMonomial::default(), ExactScalar::one())
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

/// n-th derivative of `a^{power}` (`power` = -1 for A, -2 for B), by Faa di Bruno
/// with `f(y) = y^{power}` and `g = a`.
pub(crate) fn deriv_of_a_power(power: i64, n: u32) -> AFormPoly {
    if n == 0 {
        return AFormPoly::monomial(AMonomial::a_pow(power), ExactScalar::one());
    }
    // f^{(m)}(a) = power (power-1) ... (power-m+1) a^{power-m}
    let mut f_derivs = Vec::with_capacity(n as usize);
    let mut falling = BigInt::from(1);
    for m in 1..=n as i64 {
        falling *= BigInt::from(power - m + 1);
        f_derivs.push(AFormPoly::monomial(
            AMonomial::a_pow(power - m),
            ExactScalar::from_rational(BigRational::from_integer(falling.clone())),
        ));
    }
    let g_derivs: Vec<AFormPoly> =
        (1..=n).map(|j| AFormPoly::monomial(AMonomial::deriv(j, 1), ExactScalar::one())).collect();
    faa_di_bruno(n as usize, &f_derivs, &g_derivs)
}

impl SymPoly {
    /// Rewrites through `A = 1/a`, `B = a^{-2}`.
    pub fn to_a_form(&self) -> AFormPoly {
        let mut cache: HashMap<(i64, u32, u32), AFormPoly> = HashMap::new();
        let mut power = |base: i64, i: u32, e: u32| -> AFormPoly {
            cache
                .entry((base, i, e))
                .or_insert_with(|| deriv_of_a_power(base, i).r_pow(e))
                .clone()
        };
        let mut out = AFormPoly::zero();
        for (m, c) in self.terms() {
            let mut p = AFormPoly::monomial(AMonomial::a_pow(-m.b_half), c.clone());
            for (&i, &e) in &m.a_exp {
                p = p.mul(&power(-1, i, e));
            }
            for (&i, &e) in &m.b_exp {
                p = p.mul(&power(-2, i, e));
            }
            out = out.add(&p);
        }
        out
    }

    /// Numeric value through the scale factor: `deriv(k) = a^{(k)}(t)`.
    pub fn eval_numeric(&self, deriv: &dyn Fn(u32) -> f64) -> f64 {
        self.to_a_form().eval(deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::DerivMonomial;

    fn am(p: i64, d: &[(u32, u32)]) -> AMonomial {
        AMonomial { a_pow: p, d: d.iter().copied().collect() }
    }

    #[test]
    fn a_derivatives_of_inverse() {
        // A' = -a'/a^2
        let d1 = deriv_of_a_power(-1, 1);
        assert_eq!(d1, AFormPoly::monomial(am(-2, &[(1, 1)]), ExactScalar::from_int(-1)));
        // A'' = -a''/a^2 + 2 a'^2/a^3
        let mut expect = AFormPoly::monomial(am(-2, &[(2, 1)]), ExactScalar::from_int(-1));
        expect.add_term(am(-3, &[(1, 2)]), ExactScalar::from_int(2));
        assert_eq!(deriv_of_a_power(-1, 2), expect);
    }

    #[test]
    fn faa_di_bruno_matches_repeated_differentiation() {
        for base in [-1i64, -2] {
            let mut p = AFormPoly::monomial(AMonomial::a_pow(base), ExactScalar::one());
            for n in 1..=7 {
                p = p.differentiate();
                assert_eq!(deriv_of_a_power(base, n), p, "base {base} order {n}");
            }
        }
    }

    #[test]
    fn leading_coefficient_rewrites() {
        let a0 = SymPoly::monomial(DerivMonomial::b_half_pow(-3), ExactScalar::from_ratio(1, 2));
        assert_eq!(a0.to_a_form(), AFormPoly::monomial(am(3, &[]), ExactScalar::from_ratio(1, 2)));
    }
}
