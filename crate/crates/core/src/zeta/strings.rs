use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use super::{dirac_s4_multiplicity, pow2, riemann_zeta, zero_ordinates, zeta_derivative, zeta_exact, ExactValue};
use crate::bell::factorial;
use crate::symcore::ratio_to_f64;
use crate::{Error, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A simple pole `sigma` of a zeta function with its residue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoleTerm {
    pub sigma: Complex64,
    pub residue: Complex64,
}

/// Closed rectangle `re.0 <= Re s <= re.1`, `im.0 <= Im s <= im.1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strip {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Strip {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        Self { re, im }
    }

    /// All imaginary parts, real parts in `[re_lo, re_hi]`.
    pub fn vertical(re_lo: f64, re_hi: f64) -> Self {
        Self { re: (re_lo, re_hi), im: (f64::NEG_INFINITY, f64::INFINITY) }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        let eps = 1e-12;
        s.re >= self.re.0 - eps && s.re <= self.re.1 + eps && s.im >= self.im.0 - eps && s.im <= self.im.1 + eps
    }
}

/// One radius of a truncated string. `exact` is kept when the radius was given
/// as a rational so integer-point zeta values stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Radius {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub mult: u64,
}

type Evaluator = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// A user-supplied string zeta: an evaluator or a table of values, plus its poles.
#[derive(Clone)]
pub struct AnalyticString {
    pub name: String,
    pub poles: Vec<PoleTerm>,
    pub values: Vec<(Complex64, Complex64)>,
    evaluator: Option<Evaluator>,
}

impl fmt::Debug for AnalyticString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticString")
            .field("name", &self.name)
            .field("poles", &self.poles)
            .field("values", &self.values)
            .field("evaluator", &self.evaluator.is_some())
            .finish()
    }
}

/// The radii of a packing, described through their zeta function.
#[derive(Clone, Debug)]
pub enum FractalString {
    /// Ford circles: radii `1/(2n^2)` with multiplicity `phi(n)`.
    Ford,
    Truncated(Vec<Radius>),
    Analytic(AnalyticString),
}

fn parse_radius(v: &Value) -> Result<(f64, Option<BigRational>)> {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(|| Error::Parse(format!("bad radius {n}")))?;
            let exact = n.as_i64().map(|i| BigRational::from_integer(i.into()));
            Ok((x, exact))
        }
        Value::String(s) => {
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (s.trim(), "1"),
            };
            let p: BigInt = p.parse().map_err(|_| Error::Parse(format!("bad radius `{s}`")))?;
            let q: BigInt = q.parse().map_err(|_| Error::Parse(format!("bad radius `{s}`")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("bad radius `{s}`")));
            }
            let r = BigRational::new(p, q);
            Ok((ratio_to_f64(&r), Some(r)))
        }
        _ => Err(Error::Parse(format!("bad radius {v}"))),
    }
}

fn parse_quad(v: &Value, what: &str) -> Result<[f64; 4]> {
    let a = v.as_array().filter(|a| a.len() == 4).ok_or_else(|| Error::Parse(format!("{what} must be [re, im, re, im]")))?;
    let mut out = [0.0; 4];
    for (o, x) in out.iter_mut().zip(a) {
        *o = x.as_f64().ok_or_else(|| Error::Parse(format!("{what}: non-numeric entry {x}")))?;
    }
    Ok(out)
}

impl FractalString {
    pub fn truncated(radii: Vec<Radius>) -> Result<Self> {
        for r in &radii {
            if !(r.value > 0.0) || r.value.is_infinite() || r.exact.as_ref().is_some_and(|e| !e.is_positive()) {
                return Err(Error::Validation(format!("radius must be positive, got {}", r.value)));
            }
            if r.mult == 0 {
                return Err(Error::Validation("multiplicity must be positive".into()));
            }
        }
        Ok(Self::Truncated(radii))
    }

    pub fn from_reals(radii: &[(f64, u64)]) -> Result<Self> {
        Self::truncated(radii.iter().map(|&(value, mult)| Radius { value, exact: None, mult }).collect())
    }

    pub fn from_rationals(radii: &[(BigRational, u64)]) -> Result<Self> {
        Self::truncated(
            radii
                .iter()
                .map(|(r, mult)| Radius { value: ratio_to_f64(r), exact: Some(r.clone()), mult: *mult })
                .collect(),
        )
    }

    /// The Ford radii `1/(2n^2)`, `n <= n_max`, with totient multiplicities.
    pub fn ford_prefix(n_max: u64) -> Self {
        let phi = totients(n_max as usize);
        Self::Truncated(
            (1..=n_max)
                .map(|n| {
                    let r = BigRational::new(BigInt::one(), BigInt::from(2 * n * n));
                    Radius { value: ratio_to_f64(&r), exact: Some(r), mult: phi[n as usize] }
                })
                .collect(),
        )
    }

    /// User zeta with a pole table. Poles must be distinct with nonzero residues.
    pub fn analytic(
        name: &str,
        evaluator: Option<Evaluator>,
        poles: Vec<PoleTerm>,
        values: Vec<(Complex64, Complex64)>,
    ) -> Result<Self> {
        for (i, p) in poles.iter().enumerate() {
            if p.residue == c(0.0) {
                return Err(Error::Validation(format!("pole at {} has zero residue", p.sigma)));
            }
            if poles[..i].iter().any(|q| (q.sigma - p.sigma).norm() < 1e-12) {
                return Err(Error::Validation(format!("duplicate pole at {}", p.sigma)));
            }
        }
        Ok(Self::Analytic(AnalyticString { name: name.to_string(), poles, values, evaluator }))
    }

    /// Parses `{variant, radii: [[r, mult]..], poles: [[re, im, resRe, resIm]..],
    /// values: [[re, im, zRe, zIm]..]}`. Radii may be numbers or `"p/q"` strings.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(s)?;
        let variant = doc
            .get("variant")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("string descriptor needs a `variant`".into()))?;
        let list = |key: &str| doc.get(key).and_then(Value::as_array).cloned().unwrap_or_default();
        match variant.to_ascii_lowercase().as_str() {
            "ford" => Ok(Self::Ford),
            "truncated" => {
                let mut radii = Vec::new();
                for e in list("radii") {
                    let pair = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("radii entries are [r, mult]".into()))?;
                    let (value, exact) = parse_radius(&pair[0])?;
                    let mult = pair[1].as_u64().ok_or_else(|| Error::Parse(format!("bad multiplicity {}", pair[1])))?;
                    radii.push(Radius { value, exact, mult });
                }
                Self::truncated(radii)
            }
            "analytic" => {
                let poles = list("poles")
                    .iter()
                    .map(|p| parse_quad(p, "pole").map(|q| PoleTerm { sigma: Complex64::new(q[0], q[1]), residue: Complex64::new(q[2], q[3]) }))
                    .collect::<Result<Vec<_>>>()?;
                let values = list("values")
                    .iter()
                    .map(|p| parse_quad(p, "value").map(|q| (Complex64::new(q[0], q[1]), Complex64::new(q[2], q[3]))))
                    .collect::<Result<Vec<_>>>()?;
                let name = doc.get("name").and_then(Value::as_str).unwrap_or("analytic");
                Self::analytic(name, None, poles, values)
            }
            other => Err(Error::Parse(format!("unknown string variant `{other}`"))),
        }
    }

    /// Built-in names: `ford`, `unit` (one unit sphere), `pair` (radii 1 and 1/2).
    pub fn builtin(name: &str) -> Option<Self> {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        match name {
            "ford" => Some(Self::Ford),
            "unit" => Self::from_rationals(&[(r(1, 1), 1)]).ok(),
            "pair" => Self::from_rationals(&[(r(1, 1), 1), (r(1, 2), 1)]).ok(),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Ford => "ford".into(),
            Self::Truncated(r) => format!("truncated[{}]", r.len()),
            Self::Analytic(a) => a.name.clone(),
        }
    }
}

/// Euler totients `phi(0..=n)` by sieve (`phi(0) = 0`).
pub fn totients(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for p in 2..=n {
        if phi[p] == p as u64 {
            for m in (p..=n).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    phi
}

fn is_integer(s: Complex64) -> Option<i64> {
    (s.im == 0.0 && s.re == s.re.round() && s.re.abs() < 1e6).then_some(s.re as i64)
}

/// `2^{-s} zeta(2s - 1) / zeta(2s)`.
pub fn ford_zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::Divergent("Ford zeta has a pole at s = 1".into()));
    }
    if let Some(k) = is_integer(s) {
        if k < 0 {
            return Err(Error::Divergent(format!("Ford zeta has a pole at s = {k}")));
        }
    }
    if (s - 0.5).norm() < 1e-14 {
        // zeta(2s) has its pole here
        return Ok(c(0.0));
    }
    let den = riemann_zeta(s * 2.0)?;
    if den.norm() < 1e-14 {
        return Err(Error::Divergent(format!("zeta(2s) vanishes at s = {s}")));
    }
    Ok((-s * 2f64.ln()).exp() * riemann_zeta(s * 2.0 - 1.0)? / den)
}

/// Exact Ford zeta at an integer `k >= 0`.
pub fn ford_zeta_exact(k: i64) -> Result<ExactValue> {
    if k == 1 || k < 0 {
        return Err(Error::Divergent(format!("Ford zeta has a pole at s = {k}")));
    }
    let v = zeta_exact(2 * k - 1)?.div(&zeta_exact(2 * k)?)?;
    Ok(v.scale(&pow2(-k)))
}

/// Residue of the Ford zeta at `s = -k`, `k >= 1`:
/// `2^k zeta(-2k-1) (2 pi)^{2k} (-1)^k / ((2k)! zeta(2k+1))`.
pub fn ford_trivial_residue_exact(k: u32) -> ExactValue {
    let mut q = pow2(3 * k as i64) / BigRational::from_integer(factorial(2 * k));
    if k % 2 == 1 {
        q = -q;
    }
    let zodd = zeta_exact(2 * k as i64 + 1).expect("odd zeta symbol");
    zeta_exact(-2 * k as i64 - 1)
        .expect("rational")
        .mul(&ExactValue::pi_pow(2 * k as i32))
        .div(&zodd)
        .expect("single term")
        .scale(&q)
}

/// `sum_{n <= n_max} phi(n) (2 n^2)^{-s}`, summed from the small terms up.
pub fn ford_partial_sum(s: Complex64, n_max: u64) -> Complex64 {
    let phi = totients(n_max as usize);
    let mut acc = c(0.0);
    for n in (1..=n_max).rev() {
        acc += (-s * (2.0 * (n * n) as f64).ln()).exp() * phi[n as usize] as f64;
    }
    acc
}

/// Bound on `|sum_{n > n_max} phi(n) (2n^2)^{-s}|` for `Re s > 1`, using
/// `phi(n) <= n` and an integral comparison.
pub fn ford_tail_bound(re_s: f64, n_max: u64) -> f64 {
    assert!(re_s > 1.0, "tail bound needs Re s > 1");
    let n = n_max as f64;
    2f64.powf(-re_s) * n.powf(2.0 - 2.0 * re_s) / (2.0 * re_s - 2.0)
}

/// `zeta_L(s)` for any string.
pub fn string_zeta(string: &FractalString, s: Complex64) -> Result<Complex64> {
    match string {
        FractalString::Ford => ford_zeta(s),
        FractalString::Truncated(radii) => Ok(radii.iter().map(|r| (s * r.value.ln()).exp() * r.mult as f64).sum()),
        FractalString::Analytic(a) => {
            if let Some(p) = a.poles.iter().find(|p| (p.sigma - s).norm() < 1e-12) {
                return Err(Error::Divergent(format!("string `{}` has a pole at {}", a.name, p.sigma)));
            }
            if let Some(f) = &a.evaluator {
                return f(s);
            }
            a.values
                .iter()
                .find(|(z, _)| (z - s).norm() < 1e-12)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Validation(format!("string `{}` has no value at {s}", a.name)))
        }
    }
}

/// Exact `zeta_L(k)`; `None` when no exact form is available (real radii or
/// analytic strings).
pub fn string_zeta_exact(string: &FractalString, k: i64) -> Result<Option<ExactValue>> {
    match string {
        FractalString::Ford => ford_zeta_exact(k).map(Some),
        FractalString::Truncated(radii) => {
            let mut acc = BigRational::zero();
            for r in radii {
                let Some(e) = &r.exact else { return Ok(None) };
                let p = if k >= 0 {
                    num_traits::pow(e.clone(), k as usize)
                } else {
                    num_traits::pow(e.recip(), (-k) as usize)
                };
                acc += p * BigRational::from_integer(r.mult.into());
            }
            Ok(Some(ExactValue::rational(acc)))
        }
        FractalString::Analytic(_) => Ok(None),
    }
}

const MAX_TRIVIAL_POLES: i64 = 150;

fn ford_poles(strip: &Strip) -> Result<Vec<PoleTerm>> {
    let mut out = Vec::new();
    if strip.contains(c(1.0)) {
        out.push(PoleTerm { sigma: c(1.0), residue: c(1.5 / (std::f64::consts::PI * std::f64::consts::PI)) });
    }
    if strip.im.0 <= 0.0 && strip.im.1 >= 0.0 {
        let lowest = (-strip.re.0).floor() as i64;
        if lowest > MAX_TRIVIAL_POLES {
            return Err(Error::Validation(format!("strip reaches below Re s = -{MAX_TRIVIAL_POLES}")));
        }
        for k in 1..=lowest.max(0) {
            let s = c(-k as f64);
            if strip.contains(s) {
                out.push(PoleTerm { sigma: s, residue: c(ford_trivial_residue_exact(k as u32).to_f64()) });
            }
        }
    }
    if strip.re.0 <= 0.25 && strip.re.1 >= 0.25 {
        for &g in zero_ordinates()? {
            for sign in [1.0, -1.0] {
                let rho = Complex64::new(0.5, sign * g);
                let sigma = rho / 2.0;
                if strip.contains(sigma) {
                    // 2^{-sigma} zeta(rho - 1) / (2 zeta'(rho))
                    let res = (-sigma * 2f64.ln()).exp() * riemann_zeta(rho - 1.0)? / (zeta_derivative(rho)? * 2.0);
                    out.push(PoleTerm { sigma, residue: res });
                }
            }
        }
    }
    out.sort_by(|a, b| a.sigma.re.total_cmp(&b.sigma.re).then(a.sigma.im.total_cmp(&b.sigma.im)));
    Ok(out)
}

/// Poles of `zeta_L` inside `strip`, ordered by `(Re, Im)`. For Ford circles the
/// nontrivial part is limited to the bundled zero ordinates.
pub fn string_poles(string: &FractalString, strip: &Strip) -> Result<Vec<PoleTerm>> {
    match string {
        FractalString::Ford => ford_poles(strip),
        FractalString::Truncated(_) => Ok(Vec::new()),
        FractalString::Analytic(a) => {
            let mut v: Vec<PoleTerm> = a.poles.iter().copied().filter(|p| strip.contains(p.sigma)).collect();
            v.sort_by(|a, b| a.sigma.re.total_cmp(&b.sigma.re).then(a.sigma.im.total_cmp(&b.sigma.im)));
            Ok(v)
        }
    }
}

/// Direct double sum over radii and Dirac eigenvalues `m / r` of the packed
/// geometry, eigenvalue index cut at `m_max`. Needs `Re s > 4`.
pub fn packed_dirac_zeta_direct(string: &FractalString, s: Complex64, m_max: u64) -> Result<Complex64> {
    let FractalString::Truncated(radii) = string else {
        return Err(Error::Validation("direct sum needs a truncated string".into()));
    };
    if s.re <= 4.0 {
        return Err(Error::Divergent(format!("direct Dirac sum diverges at Re s = {}", s.re)));
    }
    let mut acc = c(0.0);
    for r in radii {
        for m in (2..=m_max).rev() {
            let lam = m as f64 / r.value;
            acc += (-s * lam.ln()).exp() * ratio_to_f64(&dirac_s4_multiplicity(m)) * r.mult as f64;
        }
    }
    Ok(acc)
}
