//! Brownian bridge integrals.
//!
//! With `alpha` a Brownian bridge on `[0, 1]` and `x_k = int_0^1 alpha(v)^k dv`,
//! every Gaussian integral of a monomial in the `x_k` reduces to integrals
//! over the ordered simplex `0 <= v_1 <= ... <= v_n <= 1` of
//! `V(i_1, ..., i_n) = E[alpha(v_1)^{i_1} ... alpha(v_n)^{i_n}]`, a polynomial in
//! the covariances `c_{j,m} = v_min (1 - v_max)`.

mod mc;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bell::factorial;

pub use mc::{mc_estimate, mc_estimate_many, McEstimate};

/// A word of letters; in `V(w)` each letter is the power of `alpha` at one point.
pub type Word = Vec<u32>;

/// Monomial `prod_k x_k^{m_k}` in the bridge functionals, `k >= 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MomentSpec(pub BTreeMap<u32, u32>);

impl MomentSpec {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn letter(k: u32) -> Self {
        assert!(k >= 1, "x_0 = 1 is not a letter");
        Self(BTreeMap::from([(k, 1)]))
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut m = Self::one();
        for &(k, e) in pairs {
            if e > 0 {
                *m.0.entry(k).or_insert(0) += e;
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &e) in &other.0 {
            *out.0.entry(k).or_insert(0) += e;
        }
        out
    }

    /// Total power of `alpha`, `sum k m_k`.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(&k, &m)| k * m).sum()
    }

    /// Number of factors, `sum m_k`.
    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `int_{Delta^n} prod v_i^{k_i} = prod_{p=1}^n 1 / (p + k_1 + ... + k_p)`.
pub fn monomial_simplex_integral(k: &[u32]) -> BigRational {
    let mut den = BigInt::one();
    let mut cum = 0u64;
    for (p, &kp) in k.iter().enumerate() {
        cum += kp as u64;
        den *= BigInt::from(p as u64 + 1 + cum);
    }
    BigRational::new(BigInt::one(), den)
}

/// `int_{Delta^n} v_{j_1} ... v_{j_k}` for distinct indices
/// `1 <= j_1 < ... < j_k <= n`: `j_1 (j_2 + 1) ... (j_k + k - 1) / (n + k)!`.
pub fn subset_simplex_integral(n: usize, js: &[usize]) -> BigRational {
    assert!(js.windows(2).all(|w| w[0] < w[1]), "indices must increase");
    assert!(js.iter().all(|&j| j >= 1 && j <= n), "indices out of range");
    let num: BigInt = js.iter().enumerate().map(|(i, &j)| BigInt::from(j + i)).product();
    BigRational::new(num, factorial((n + js.len()) as u32))
}

/// Polynomial in `v_1, ..., v_n` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl VPoly {
    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self { n, terms: BTreeMap::new() };
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    /// `v_j`, 1-based.
    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j - 1] = 1;
        let mut p = Self { n, terms: BTreeMap::new() };
        p.add_term(e, BigRational::one());
        p
    }

    /// Bridge covariance `c_{j,m} = v_min(j,m) (1 - v_max(j,m))`.
    pub fn covariance(n: usize, j: usize, m: usize) -> Self {
        let (lo, hi) = (j.min(m), j.max(m));
        Self::var(n, lo).mul(&Self::one(n).sub(&Self::var(n, hi)))
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self { n: self.n, terms: BTreeMap::new() };
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self { n: self.n, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(v).fold(crate::symcore::ratio_to_f64(c), |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }
}

/// Integral of a [`VPoly`] over the ordered simplex.
pub fn simplex_integrate(p: &VPoly) -> BigRational {
    p.terms().map(|(e, c)| c * monomial_simplex_integral(e)).sum()
}

/// All perfect matchings of `{1, ..., 2n}` as lists of pairs `(i, j)`, `i < j`.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for idx in 0..free.len() {
            let partner = free.remove(idx);
            cur.push((first, partner));
            rec(free, cur, out);
            cur.pop();
            free.insert(idx, partner);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    rec(&mut (1..=2 * n).collect(), &mut Vec::new(), &mut out);
    out
}

/// `int_{Delta^{2n}} E[alpha(v_1) ... alpha(v_{2n})]`, one simplex integral of
/// `prod v_i (1 - v_j)` per perfect matching `{(i, j)}`.
pub fn pairing_integral(n: usize) -> BigRational {
    let dim = 2 * n;
    perfect_matchings(n)
        .iter()
        .map(|pairs| {
            let p = pairs.iter().fold(VPoly::one(dim), |acc, &(i, j)| acc.mul(&VPoly::covariance(dim, i, j)));
            simplex_integrate(&p)
        })
        .sum()
}

/// `E[x_1^{2n}]` from the pairing / index-subset expansion: each matching
/// contributes `sum_J (-1)^{|J|} int v_{sigma_J}` with `sigma_J` the left ends of
/// all pairs plus the right ends of the pairs in `J`.
pub fn x1_even_moment(n: usize) -> BigRational {
    let dim = 2 * n;
    let mut total = BigRational::zero();
    for pairs in perfect_matchings(n) {
        for mask in 0u32..(1 << n) {
            let mut idx: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
            let mut k = 0;
            for (b, &(_, j)) in pairs.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    idx.push(j);
                    k += 1;
                }
            }
            idx.sort_unstable();
            let term = subset_simplex_integral(dim, &idx);
            if k % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total * BigRational::from_integer(factorial(dim as u32))
}

/// Calls `f(s, wick)` for every symmetric pair-count matrix `s` compatible with
/// the word (`2 s_jj + sum_{m != j} s_jm = w_j`), where `wick` is the number of
/// perfect matchings of the points with that pair-count pattern.
fn for_each_pair_matrix(w: &[u32], f: &mut dyn FnMut(&[Vec<u32>], &BigRational)) {
    let n = w.len();
    let mut rem: Vec<u32> = w.to_vec();
    let mut s = vec![vec![0u32; n]; n];
    let num: BigInt = w.iter().map(|&i| factorial(i)).product();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        m: usize,
        n: usize,
        rem: &mut Vec<u32>,
        s: &mut Vec<Vec<u32>>,
        num: &BigInt,
        f: &mut dyn FnMut(&[Vec<u32>], &BigRational),
    ) {
        if j == n {
            let mut den = BigInt::one();
            for a in 0..n {
                den *= factorial(s[a][a]) * (BigInt::one() << s[a][a] as usize);
                for b in a + 1..n {
                    den *= factorial(s[a][b]);
                }
            }
            f(s, &BigRational::new(num.clone(), den));
            return;
        }
        if m == n {
            if rem[j] == 0 {
                rec(j + 1, j + 1, n, rem, s, num, f);
            }
            return;
        }
        if m == j {
            for c in 0..=rem[j] / 2 {
                s[j][j] = c;
                rem[j] -= 2 * c;
                rec(j, j + 1, n, rem, s, num, f);
                rem[j] += 2 * c;
            }
            s[j][j] = 0;
            return;
        }
        let hi = rem[j].min(rem[m]);
        // Row j must be exhausted by the time its last column is reached.
        let lo = if m == n - 1 { rem[j] } else { 0 };
        if lo > hi {
            return;
        }
        for c in lo..=hi {
            s[j][m] = c;
            s[m][j] = c;
            rem[j] -= c;
            rem[m] -= c;
            rec(j, m + 1, n, rem, s, num, f);
            rem[j] += c;
            rem[m] += c;
        }
        s[j][m] = 0;
        s[m][j] = 0;
    }

    if w.iter().sum::<u32>() % 2 == 1 {
        return;
    }
    rec(0, 0, n, &mut rem, &mut s, &num, f);
}

/// `V(w)` as an explicit polynomial in `v_1, ..., v_n` (Wick expansion over
/// pair-count matrices). Zero when the total letter sum is odd.
pub fn monomial_bridge_polynomial(w: &[u32]) -> VPoly {
    let n = w.len();
    let mut out = VPoly::constant(n, BigRational::zero());
    for_each_pair_matrix(w, &mut |s, wick| {
        let mut term = VPoly::constant(n, wick.clone());
        for a in 0..n {
            for b in a..n {
                if s[a][b] > 0 {
                    term = term.mul(&VPoly::covariance(n, a + 1, b + 1).pow(s[a][b]));
                }
            }
        }
        out = out.add(&term);
    });
    out
}

/// `int_{Delta^n} V(w)` from the closed combinatorial formula: for each pair
/// matrix with `K_p = s_pp + sum_{j<p} s_jp`, sum over `r_p <= K_p` of
/// `prod_p (-1)^{r_p} binom(K_p, r_p) / (p + sum_{l<=p} (i_l - r_l))`, times
/// `(-1)^{|w|/2}` and the Wick count.
pub fn word_integral_closed(w: &[u32]) -> BigRational {
    let n = w.len();
    let half: u32 = w.iter().sum::<u32>() / 2;
    let mut total = BigRational::zero();
    for_each_pair_matrix(w, &mut |s, wick| {
        let ks: Vec<u32> = (0..n).map(|p| s[p][p] + (0..p).map(|j| s[j][p]).sum::<u32>()).collect();
        // Dynamic programme over the running sum sum_{l<=p} (i_l - r_l).
        let mut states: HashMap<u64, BigRational> = HashMap::from([(0, BigRational::one())]);
        for p in 0..n {
            let mut next: HashMap<u64, BigRational> = HashMap::new();
            for (cum, val) in &states {
                for r in 0..=ks[p] {
                    let c2 = cum + (w[p] - r) as u64;
                    let mut term = val * BigRational::new(binomial(BigInt::from(ks[p]), BigInt::from(r)), BigInt::from(p as u64 + 1 + c2));
                    if r % 2 == 1 {
                        term = -term;
                    }
                    *next.entry(c2).or_insert_with(BigRational::zero) += term;
                }
            }
            states = next;
        }
        let inner: BigRational = states.into_values().sum();
        let signed = if half % 2 == 1 { -inner } else { inner };
        total += wick * signed;
    });
    total
}

type WordCache = Mutex<HashMap<Word, BigRational>>;

fn word_cache() -> &'static WordCache {
    static C: OnceLock<WordCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `int_{Delta^n} V(w) dv`, memoized by word.
pub fn word_integral(w: &[u32]) -> BigRational {
    if let Some(v) = word_cache().lock().unwrap().get(w) {
        return v.clone();
    }
    let v = word_integral_closed(w);
    word_cache().lock().unwrap().insert(w.to_vec(), v.clone());
    v
}

/// Shuffle product of two words as a multiset of words.
pub fn shuffle(u: &[u32], v: &[u32]) -> BTreeMap<Word, BigInt> {
    let mut out = BTreeMap::new();
    fn rec(u: &[u32], v: &[u32], cur: &mut Word, out: &mut BTreeMap<Word, BigInt>) {
        if u.is_empty() || v.is_empty() {
            let mut w = cur.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(BigInt::zero) += 1;
            return;
        }
        cur.push(u[0]);
        rec(&u[1..], v, cur, out);
        cur.pop();
        cur.push(v[0]);
        rec(u, &v[1..], cur, out);
        cur.pop();
    }
    rec(u, v, &mut Vec::new(), &mut out);
    out
}

/// Shuffle product of several words.
pub fn shuffle_multi(words: &[Word]) -> BTreeMap<Word, BigInt> {
    let mut acc: BTreeMap<Word, BigInt> = BTreeMap::from([(Vec::new(), BigInt::one())]);
    for w in words {
        let mut next = BTreeMap::new();
        for (a, ca) in &acc {
            for (b, cb) in shuffle(a, w) {
                *next.entry(b).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc = next;
    }
    acc
}

type MomentCache = Mutex<HashMap<MomentSpec, BigRational>>;

fn moment_cache() -> &'static MomentCache {
    static C: OnceLock<MomentCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `E[prod x_k^{m_k}] = (prod m_k!) int_{Delta^{|m|}} V(shuffle of the blocks (k^{m_k}))`.
pub fn moment_product(spec: &MomentSpec) -> BigRational {
    if spec.weight() % 2 == 1 {
        return BigRational::zero();
    }
    if let Some(v) = moment_cache().lock().unwrap().get(spec) {
        return v.clone();
    }
    let blocks: Vec<Word> = spec.0.iter().map(|(&k, &m)| vec![k; m as usize]).collect();
    let mut total = BigRational::zero();
    for (w, c) in shuffle_multi(&blocks) {
        total += word_integral(&w) * BigRational::from_integer(c);
    }
    let mfact: BigInt = spec.0.values().map(|&m| factorial(m)).product();
    total *= BigRational::from_integer(mfact);
    moment_cache().lock().unwrap().insert(spec.clone(), total.clone());
    total
}

/// Same moment through the explicit polynomial route:
/// `simplex_integrate(monomial_bridge_polynomial(w))` for each shuffled word.
pub fn moment_product_via_polynomials(spec: &MomentSpec) -> BigRational {
    if spec.weight() % 2 == 1 {
        return BigRational::zero();
    }
    let blocks: Vec<Word> = spec.0.iter().map(|(&k, &m)| vec![k; m as usize]).collect();
    let mut total = BigRational::zero();
    for (w, c) in shuffle_multi(&blocks) {
        total += simplex_integrate(&monomial_bridge_polynomial(&w)) * BigRational::from_integer(c);
    }
    let mfact: BigInt = spec.0.values().map(|&m| factorial(m)).product();
    total * BigRational::from_integer(mfact)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, qq: i64) -> BigRational {
        BigRational::new(p.into(), qq.into())
    }

    #[test]
    fn simplex_basics() {
        assert_eq!(monomial_simplex_integral(&[0, 0, 0]), r(1, 6));
        assert_eq!(monomial_simplex_integral(&[1]), r(1, 2));
        assert_eq!(monomial_simplex_integral(&[1, 1]), r(1, 8));
    }

    #[test]
    fn shuffle_mass() {
        let s = shuffle(&[1, 1], &[1]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[&vec![1, 1, 1]], BigInt::from(3));
        let s = shuffle(&[1, 2], &[3, 4, 5]);
        let mass: BigInt = s.values().sum();
        assert_eq!(mass, BigInt::from(10));
    }

    #[test]
    fn bridge_polynomials() {
        let p = monomial_bridge_polynomial(&[2]);
        assert_eq!(p, VPoly::covariance(1, 1, 1));
        let p = monomial_bridge_polynomial(&[1, 2]);
        assert!(p.terms().next().is_none());
        let p = monomial_bridge_polynomial(&[4]);
        assert_eq!(p, VPoly::covariance(1, 1, 1).pow(2).scale(&r(3, 1)));
    }

    #[test]
    fn first_moments() {
        assert_eq!(moment_product(&MomentSpec::from_pairs(&[(1, 2)])), r(1, 12));
        assert_eq!(moment_product(&MomentSpec::from_pairs(&[(2, 1)])), r(1, 6));
        assert_eq!(moment_product(&MomentSpec::from_pairs(&[(1, 1), (2, 1)])), BigRational::zero());
        assert_eq!(moment_product(&MomentSpec::one()), BigRational::one());
    }
}
