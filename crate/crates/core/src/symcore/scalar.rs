use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bell::Ring;

/// Exact element `rat + sqrt2 * sqrt(2)` of the field Q(sqrt 2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    pub rat: BigRational,
    pub sqrt2: BigRational,
}

impl ExactScalar {
    pub fn new(rat: BigRational, sqrt2: BigRational) -> Self {
        Self { rat, sqrt2 }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// `2^{k/2}` for any integer `k`.
    pub fn pow_sqrt2(k: i64) -> Self {
        let half = k.div_euclid(2);
        let base = if half >= 0 {
            BigRational::from_integer(BigInt::one() << half as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-half) as usize)
        };
        if k.rem_euclid(2) == 0 {
            Self::from_rational(base)
        } else {
            Self::new(BigRational::zero(), base)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.rat * c, &self.sqrt2 * c)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let two = BigRational::from_integer(2.into());
        let norm = &self.rat * &self.rat - two * &self.sqrt2 * &self.sqrt2;
        Some(Self::new(&self.rat / &norm, -&self.sqrt2 / &norm))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rat) + std::f64::consts::SQRT_2 * ratio_to_f64(&self.sqrt2)
    }

    /// Sign used when printing a term: negative only when every nonzero part is negative.
    pub(crate) fn is_printed_negative(&self) -> bool {
        match (self.rat.is_zero(), self.sqrt2.is_zero()) {
            (_, true) => self.rat.is_negative(),
            (true, false) => self.sqrt2.is_negative(),
            _ => false,
        }
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both parts into range before dividing.
            let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
            let shift = shift.max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(0.0);
            n / d
        }
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.sqrt2.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.rat)),
            (true, false) => write!(f, "{}*sqrt2", fmt_rational(&self.sqrt2)),
            _ => {
                let sign = if self.sqrt2.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}*sqrt2)", fmt_rational(&self.rat), sign, fmt_rational(&self.sqrt2.abs()))
            }
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat + &o.rat, &self.sqrt2 + &o.sqrt2)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.rat += &o.rat;
        self.sqrt2 += &o.sqrt2;
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat - &o.rat, &self.sqrt2 - &o.sqrt2)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let two = BigRational::from_integer(2.into());
        ExactScalar::new(
            &self.rat * &o.rat + two * &self.sqrt2 * &o.sqrt2,
            &self.rat * &o.sqrt2 + &self.sqrt2 * &o.rat,
        )
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.rat, -self.sqrt2)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.rat, -&self.sqrt2)
    }
}

impl Ring for ExactScalar {
    fn r_zero() -> Self {
        Self::zero()
    }
    fn r_one() -> Self {
        Self::one()
    }
    fn r_add(&self, other: &Self) -> Self {
        self + other
    }
    fn r_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn r_scale(&self, c: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(c.clone()))
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_powers() {
        assert_eq!(ExactScalar::pow_sqrt2(0), ExactScalar::one());
        assert_eq!(ExactScalar::pow_sqrt2(2), ExactScalar::from_int(2));
        assert_eq!(ExactScalar::pow_sqrt2(3), ExactScalar::sqrt2().scale(&BigRational::from_integer(2.into())));
        assert_eq!(ExactScalar::pow_sqrt2(-2), ExactScalar::from_ratio(1, 2));
        let s = ExactScalar::pow_sqrt2(-1);
        assert_eq!(&s * &ExactScalar::sqrt2(), ExactScalar::one());
    }

    #[test]
    fn inverse_and_display() {
        let x = ExactScalar::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()));
        assert_eq!(&x * &x.inv().unwrap(), ExactScalar::one());
        assert_eq!(x.to_string(), "(1/2 - 3/4*sqrt2)");
        assert_eq!(ExactScalar::from_ratio(-5, 10).to_string(), "-1/2");
        assert!(ExactScalar::zero().inv().is_none());
    }
}
