//! Partial Bell polynomials and the Faa di Bruno formula.
//!
//! `B_{n,k}(x_1, ..., x_{n-k+1})` is the sum over partitions of `n` into
//! exactly `k` parts, with multiplicities `lambda_i`, of
//! `n! / prod(lambda_i! (i!)^lambda_i) * prod x_i^lambda_i`.
//!
//! The integer skeleton of each `B_{n,k}` (coefficients and multiplicity
//! vectors) is computed once and cached; evaluation then works over any
//! carrier implementing [`Ring`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Minimal commutative ring interface used by the Bell machinery.
pub trait Ring: Clone {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_add(&self, other: &Self) -> Self;
    fn r_mul(&self, other: &Self) -> Self;
    fn r_scale(&self, c: &BigInt) -> Self;
    fn r_is_zero(&self) -> bool;

    fn r_pow(&self, e: u32) -> Self {
        let mut acc = Self::r_one();
        for _ in 0..e {
            acc = acc.r_mul(self);
        }
        acc
    }
}

impl Ring for f64 {
    fn r_zero() -> Self {
        0.0
    }
    fn r_one() -> Self {
        1.0
    }
    fn r_add(&self, other: &Self) -> Self {
        self + other
    }
    fn r_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn r_scale(&self, c: &BigInt) -> Self {
        self * c.to_f64().unwrap_or(f64::NAN)
    }
    fn r_is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Ring for BigRational {
    fn r_zero() -> Self {
        BigRational::zero()
    }
    fn r_one() -> Self {
        BigRational::one()
    }
    fn r_add(&self, other: &Self) -> Self {
        self + other
    }
    fn r_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn r_scale(&self, c: &BigInt) -> Self {
        self * BigRational::from_integer(c.clone())
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// One partition contributing to `B_{n,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellTerm {
    pub coeff: BigInt,
    /// `lambda[i-1]` is the number of parts equal to `i`.
    pub lambda: Vec<u32>,
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Vec<BellTerm>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Integer template of `B_{n,k}`: one entry per partition of `n` into `k` parts.
pub fn bell_template(n: usize, k: usize) -> Arc<Vec<BellTerm>> {
    if let Some(t) = cache().lock().unwrap().get(&(n, k)) {
        return t.clone();
    }
    let mut out = Vec::new();
    if n == 0 && k == 0 {
        out.push(BellTerm { coeff: BigInt::one(), lambda: Vec::new() });
    } else if k > 0 && k <= n {
        let width = n - k + 1;
        let mut lambda = vec![0u32; width];
        partitions(n, k, width, &mut lambda, &mut out);
    }
    let arc = Arc::new(out);
    cache().lock().unwrap().insert((n, k), arc.clone());
    arc
}

// Distributes parts from the largest size down so each partition is visited once.
fn partitions(rem_n: usize, rem_k: usize, size: usize, lambda: &mut Vec<u32>, out: &mut Vec<BellTerm>) {
    if size == 0 {
        if rem_n == 0 && rem_k == 0 {
            let n: usize = lambda.iter().enumerate().map(|(i, &l)| (i + 1) * l as usize).sum();
            let mut den = BigInt::one();
            for (i, &l) in lambda.iter().enumerate() {
                den *= factorial(l);
                den *= num_traits::pow(factorial(i as u32 + 1), l as usize);
            }
            out.push(BellTerm { coeff: factorial(n as u32) / den, lambda: lambda.clone() });
        }
        return;
    }
    // Remaining parts all have size <= `size`, so rem_n <= size * rem_k.
    if rem_n > size * rem_k || rem_n < rem_k {
        return;
    }
    let max_here = (rem_n / size).min(rem_k);
    for c in (0..=max_here).rev() {
        lambda[size - 1] = c as u32;
        partitions(rem_n - c * size, rem_k - c, size - 1, lambda, out);
    }
    lambda[size - 1] = 0;
}

/// Evaluates `B_{n,k}(xs[0], xs[1], ...)`; `xs[i]` plays the role of `x_{i+1}`.
///
/// Missing entries of `xs` are treated as zero.
pub fn partial_bell<R: Ring>(n: usize, k: usize, xs: &[R]) -> R {
    let template = bell_template(n, k);
    let mut powers: HashMap<(usize, u32), R> = HashMap::new();
    let mut total = R::r_zero();
    'terms: for term in template.iter() {
        let mut prod = R::r_one();
        for (i, &l) in term.lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let Some(x) = xs.get(i) else { continue 'terms };
            if x.r_is_zero() {
                continue 'terms;
            }
            let p = powers.entry((i, l)).or_insert_with(|| x.r_pow(l)).clone();
            prod = prod.r_mul(&p);
        }
        total = total.r_add(&prod.r_scale(&term.coeff));
    }
    total
}

/// Complete Bell polynomial `B_n = sum_k B_{n,k}`.
pub fn complete_bell<R: Ring>(n: usize, xs: &[R]) -> R {
    (0..=n).fold(R::r_zero(), |acc, k| acc.r_add(&partial_bell(n, k, xs)))
}

/// Bell number (number of set partitions of an `n`-set) from the template row sums.
pub fn bell_number(n: usize) -> BigInt {
    (0..=n)
        .flat_map(|k| bell_template(n, k).iter().map(|t| t.coeff.clone()).collect::<Vec<_>>())
        .sum()
}

/// n-th derivative of `f(g(t))`.
///
/// `f_derivs[m-1]` is `f^{(m)}` evaluated at `g`, `g_derivs[j-1]` is `g^{(j)}`.
/// For `n = 0` the caller already has `f(g)`, so this returns zero.
pub fn faa_di_bruno<R: Ring>(n: usize, f_derivs: &[R], g_derivs: &[R]) -> R {
    let mut total = R::r_zero();
    for m in 1..=n {
        let b = partial_bell(n, m, g_derivs);
        if b.r_is_zero() {
            continue;
        }
        total = total.r_add(&f_derivs[m - 1].r_mul(&b));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_templates() {
        assert_eq!(bell_template(0, 0).len(), 1);
        assert!(bell_template(3, 0).is_empty());
        assert!(bell_template(2, 3).is_empty());
        // B_{4,2} = 4 x1 x3 + 3 x2^2
        let t = bell_template(4, 2);
        let mut got: Vec<(i64, Vec<u32>)> =
            t.iter().map(|b| (b.coeff.to_i64().unwrap(), b.lambda.clone())).collect();
        got.sort();
        assert_eq!(got, vec![(3, vec![0, 2, 0]), (4, vec![1, 0, 1])]);
    }

    #[test]
    fn bell_numbers() {
        let known = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, &b) in known.iter().enumerate() {
            assert_eq!(bell_number(n), BigInt::from(b));
        }
    }

    #[test]
    fn missing_arguments_are_zero() {
        let xs = vec![q(2)];
        // B_{3,1} = x3, so with only x1 available it vanishes.
        assert!(partial_bell(3, 1, &xs).is_zero());
        assert_eq!(partial_bell(3, 3, &xs), q(8));
    }
}
