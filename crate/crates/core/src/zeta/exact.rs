use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::riemann_zeta;
use crate::bell::factorial;
use crate::specfun::bernoulli;
use crate::symcore::ratio_to_f64;
use crate::{Error, Result};

/// Monomial `pi^{pi_pow} prod zeta(n)^{e_n}` over odd `n >= 3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transcendental {
    pub pi_pow: i32,
    pub zetas: BTreeMap<u32, i32>,
}

impl Transcendental {
    fn mul(&self, o: &Self) -> Self {
        let mut zetas = self.zetas.clone();
        for (&n, &e) in &o.zetas {
            let v = zetas.entry(n).or_insert(0);
            *v += e;
            if *v == 0 {
                zetas.remove(&n);
            }
        }
        Self { pi_pow: self.pi_pow + o.pi_pow, zetas }
    }

    fn inv(&self) -> Self {
        Self { pi_pow: -self.pi_pow, zetas: self.zetas.iter().map(|(&n, &e)| (n, -e)).collect() }
    }

    fn to_f64(&self) -> f64 {
        let mut v = std::f64::consts::PI.powi(self.pi_pow);
        for (&n, &e) in &self.zetas {
            let z = riemann_zeta(Complex64::new(n as f64, 0.0)).expect("odd zeta value").re;
            v *= z.powi(e);
        }
        v
    }
}

/// Finite sum of rationals times [`Transcendental`] monomials. Used for the
/// closed forms `zeta(2k) = q pi^{2k}`, `zeta(-k) = q` and named odd zeta values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactValue {
    terms: BTreeMap<Transcendental, BigRational>,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(r: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_term(Transcendental::default(), r);
        v
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    pub fn pi_pow(k: i32) -> Self {
        let mut v = Self::zero();
        v.add_term(Transcendental { pi_pow: k, zetas: BTreeMap::new() }, BigRational::one());
        v
    }

    /// The symbol `zeta(n)` for odd `n >= 3`.
    pub fn zeta_symbol(n: u32) -> Self {
        let mut v = Self::zero();
        v.add_term(Transcendental { pi_pow: 0, zetas: BTreeMap::from([(n, 1)]) }, BigRational::one());
        v
    }

    fn add_term(&mut self, t: Transcendental, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Transcendental, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (t, c) = self.terms.iter().next().unwrap();
                (t == &Transcendental::default()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * r);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &o.terms {
                out.add_term(t1.mul(t2), c1 * c2);
            }
        }
        out
    }

    /// Inverse of a single-term value.
    pub fn inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::Validation(format!("cannot invert `{self}` exactly")));
        }
        let (t, c) = self.terms.iter().next().unwrap();
        let mut out = Self::zero();
        out.add_term(t.inv(), c.recip());
        Ok(out)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::Divergent("division by an exact zero".into()));
        }
        Ok(self.mul(&o.inv()?))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(t, c)| ratio_to_f64(c) * t.to_f64()).sum()
    }
}

fn factor_strings(t: &Transcendental) -> (Vec<String>, Vec<String>) {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (&n, &e) in &t.zetas {
        let s = if e.abs() == 1 { format!("zeta({n})") } else { format!("zeta({n})^{}", e.abs()) };
        if e > 0 {
            num.push(s);
        } else {
            den.push(s);
        }
    }
    if t.pi_pow != 0 {
        let s = if t.pi_pow.abs() == 1 { "pi".to_string() } else { format!("pi^{}", t.pi_pow.abs()) };
        if t.pi_pow > 0 {
            num.push(s);
        } else {
            den.push(s);
        }
    }
    (num, den)
}

fn fmt_term(t: &Transcendental, c: &BigRational) -> String {
    let (mut num, mut den) = factor_strings(t);
    let p = c.numer().abs();
    let q = c.denom().clone();
    if !p.is_one() || num.is_empty() {
        num.insert(0, p.to_string());
    }
    if !q.is_one() {
        den.insert(0, q.to_string());
    }
    let n = num.join("*");
    match den.len() {
        0 => n,
        1 => format!("{n}/{}", den[0]),
        _ => format!("{n}/({})", den.join("*")),
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", fmt_term(t, c))?;
        }
        Ok(())
    }
}

/// `zeta(n)` at an integer: rational for `n <= 0`, rational times `pi^n` for even
/// `n > 0`, and the symbol `zeta(n)` for odd `n >= 3`.
pub fn zeta_exact(n: i64) -> Result<ExactValue> {
    if n == 1 {
        return Err(Error::Divergent("zeta has a pole at s = 1".into()));
    }
    if n <= 0 {
        let m = (-n) as usize;
        let mut v = bernoulli(m + 1) / BigRational::from_integer(BigInt::from(m + 1));
        if m % 2 == 1 {
            v = -v;
        }
        return Ok(ExactValue::rational(v));
    }
    if n % 2 == 1 {
        return Ok(ExactValue::zeta_symbol(n as u32));
    }
    // (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!)
    let k = n / 2;
    let mut c = bernoulli(n as usize) * BigRational::from_integer(BigInt::from(2).pow(n as u32))
        / BigRational::from_integer(BigInt::from(2) * factorial(n as u32));
    if k % 2 == 0 {
        c = -c;
    }
    Ok(ExactValue::pi_pow(n as i32).scale(&c))
}

/// `2^{-k}` as an exact rational.
pub fn pow2(k: i64) -> BigRational {
    let p = BigInt::from(2).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}
