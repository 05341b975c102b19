//! Text, LaTeX and JSON forms of [`SymPoly`] and [`AFormPoly`].
//!
//! Text form: terms in canonical order joined by ` + ` / ` - `, each term
//! `coeff * factor * factor`, with factors `B^(k/2)`, `A[i]^e`, `B[i]^e`
//! (or `a^(p)`, `a[i]^e` for the a-form).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{fmt_rational, AFormPoly, AMonomial, DerivMonomial, ExactScalar, ExpMap, SymPoly};
use crate::{Error, Result};

fn half_exp(k: i64) -> String {
    let r = BigRational::new(k.into(), 2.into());
    fmt_rational(&r)
}

fn push_powers(out: &mut Vec<String>, sym: &str, m: &ExpMap) {
    for (&i, &e) in m {
        if e == 1 {
            out.push(format!("{sym}[{i}]"));
        } else {
            out.push(format!("{sym}[{i}]^{e}"));
        }
    }
}

fn deriv_factors(m: &DerivMonomial) -> Vec<String> {
    let mut f = Vec::new();
    match m.b_half {
        0 => {}
        2 => f.push("B".to_string()),
        k => f.push(format!("B^({})", half_exp(k))),
    }
    push_powers(&mut f, "A", &m.a_exp);
    push_powers(&mut f, "B", &m.b_exp);
    f
}

fn a_factors(m: &AMonomial) -> Vec<String> {
    let mut f = Vec::new();
    match m.a_pow {
        0 => {}
        1 => f.push("a".to_string()),
        p => f.push(format!("a^({p})")),
    }
    push_powers(&mut f, "a", &m.d);
    f
}

fn join_terms<'a>(terms: impl Iterator<Item = (&'a ExactScalar, Vec<String>)>) -> String {
    let mut s = String::new();
    for (c, factors) in terms {
        let neg = c.is_printed_negative();
        let mag = if neg { -c } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&mag.to_string());
        for f in factors {
            s.push_str(" * ");
            s.push_str(&f);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl SymPoly {
    pub fn to_text(&self) -> String {
        join_terms(self.terms().map(|(m, c)| (c, deriv_factors(m))))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut p = SymPoly::zero();
        for (c, factors) in split_terms(s)? {
            let mut m = DerivMonomial::one();
            for f in factors {
                m = m.mul(&parse_deriv_factor(&f)?);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn to_latex(&self) -> String {
        latex_terms(self.terms().map(|(m, c)| {
            let mut num = Vec::new();
            let mut den = Vec::new();
            for (&i, &e) in &m.a_exp {
                num.push(latex_pow(&latex_deriv("A", i), e as i64));
            }
            for (&i, &e) in &m.b_exp {
                num.push(latex_pow(&latex_deriv("B", i), e as i64));
            }
            if m.b_half > 0 {
                num.push(latex_half_pow("B(t)", m.b_half));
            } else if m.b_half < 0 {
                den.push(latex_half_pow("B(t)", -m.b_half));
            }
            (c, num, den)
        }))
    }
}

impl AFormPoly {
    pub fn to_text(&self) -> String {
        join_terms(self.terms().map(|(m, c)| (c, a_factors(m))))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut p = AFormPoly::zero();
        for (c, factors) in split_terms(s)? {
            let mut m = AMonomial::default();
            for f in factors {
                m = m.mul(&parse_a_factor(&f)?);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn to_latex(&self) -> String {
        latex_terms(self.terms().map(|(m, c)| {
            let mut num = Vec::new();
            let mut den = Vec::new();
            if m.a_pow > 0 {
                num.push(latex_pow("a(t)", m.a_pow));
            } else if m.a_pow < 0 {
                den.push(latex_pow("a(t)", -m.a_pow));
            }
            for (&i, &e) in &m.d {
                num.push(latex_pow(&latex_deriv("a", i), e as i64));
            }
            (c, num, den)
        }))
    }
}

fn latex_deriv(sym: &str, i: u32) -> String {
    match i {
        1 => format!("{sym}'(t)"),
        2 => format!("{sym}''(t)"),
        _ => format!("{sym}^{{({i})}}(t)"),
    }
}

fn latex_pow(base: &str, e: i64) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{{{e}}}")
    }
}

fn latex_half_pow(base: &str, k: i64) -> String {
    if k == 2 {
        base.to_string()
    } else {
        format!("{base}^{{{}}}", half_exp(k))
    }
}

fn latex_terms<'a>(terms: impl Iterator<Item = (&'a ExactScalar, Vec<String>, Vec<String>)>) -> String {
    let mut s = String::new();
    for (c, num, den) in terms {
        let neg = c.is_printed_negative();
        let mag = if neg { -c } else { c.clone() };
        if neg {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let (cn, cd, surd) = match mag.as_rational() {
            Some(r) => (r.numer().clone(), r.denom().clone(), String::new()),
            None => {
                let inner = mag.to_string().replace("*sqrt2", "\\sqrt{2}");
                let surd = match inner.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                    Some(body) => format!("\\left({body}\\right)"),
                    None => inner,
                };
                (BigInt::one(), BigInt::one(), surd)
            }
        };
        let mut numer: Vec<String> = Vec::new();
        if !cn.is_one() || (num.is_empty() && surd.is_empty()) {
            numer.push(cn.to_string());
        }
        if !surd.is_empty() {
            numer.push(surd);
        }
        numer.extend(num);
        let mut denom: Vec<String> = Vec::new();
        if !cd.is_one() {
            denom.push(cd.to_string());
        }
        denom.extend(den);
        if denom.is_empty() {
            s.push_str(&numer.join(" "));
        } else {
            s.push_str(&format!("\\frac{{{}}}{{{}}}", numer.join(" "), denom.join(" ")));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_scalar(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        // "(a + b*sqrt2)" or "(a - b*sqrt2)"
        let (rat, rest, neg) = if let Some((a, b)) = inner.split_once(" + ") {
            (a, b, false)
        } else if let Some((a, b)) = inner.split_once(" - ") {
            (a, b, true)
        } else {
            return Err(Error::Parse(format!("bad scalar `{s}`")));
        };
        let b = rest
            .strip_suffix("*sqrt2")
            .ok_or_else(|| Error::Parse(format!("bad scalar `{s}`")))?;
        let mut b = parse_rational(b)?;
        if neg {
            b = -b;
        }
        return Ok(ExactScalar::new(parse_rational(rat)?, b));
    }
    if let Some(b) = s.strip_suffix("*sqrt2") {
        return Ok(ExactScalar::new(BigRational::zero(), parse_rational(b)?));
    }
    Ok(ExactScalar::from_rational(parse_rational(s)?))
}

fn looks_numeric(s: &str) -> bool {
    s.starts_with('(') || s.chars().next().is_some_and(|c| c.is_ascii_digit())
}

/// Splits `t1 + t2 - t3` at top level into (signed coefficient, factor strings).
fn split_terms(s: &str) -> Result<Vec<(ExactScalar, Vec<String>)>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    let bytes = s.as_bytes();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut neg = false;
    if bytes[0] == b'-' {
        neg = true;
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b' ' if depth == 0 && i + 2 < bytes.len() && (bytes[i + 1] == b'+' || bytes[i + 1] == b'-') && bytes[i + 2] == b' ' => {
                pieces.push((neg, s[start..i].to_string()));
                neg = bytes[i + 1] == b'-';
                i += 3;
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    pieces.push((neg, s[start..].to_string()));
    let mut out = Vec::new();
    for (neg, body) in pieces {
        let mut parts: Vec<String> = body.split(" * ").map(|x| x.trim().to_string()).collect();
        let mut c = if looks_numeric(&parts[0]) {
            parse_scalar(&parts.remove(0))?
        } else {
            ExactScalar::one()
        };
        if neg {
            c = -c;
        }
        out.push((c, parts));
    }
    Ok(out)
}

fn parse_power_suffix(rest: &str) -> Result<u32> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad exponent `{rest}`")))
}

fn parse_indexed(f: &str, sym: char) -> Result<Option<(u32, u32)>> {
    let Some(rest) = f.strip_prefix(sym).and_then(|r| r.strip_prefix('[')) else {
        return Ok(None);
    };
    let (idx, rest) = rest.split_once(']').ok_or_else(|| Error::Parse(format!("bad factor `{f}`")))?;
    let i: u32 = idx.parse().map_err(|_| Error::Parse(format!("bad index in `{f}`")))?;
    if i == 0 {
        return Err(Error::Parse(format!("derivative order must be >= 1 in `{f}`")));
    }
    Ok(Some((i, parse_power_suffix(rest)?)))
}

fn parse_deriv_factor(f: &str) -> Result<DerivMonomial> {
    if f == "B" {
        return Ok(DerivMonomial::b_half_pow(2));
    }
    if let Some(e) = f.strip_prefix("B^(").and_then(|x| x.strip_suffix(')')) {
        let r = parse_rational(e)? * BigRational::from_integer(2.into());
        if !r.is_integer() {
            return Err(Error::Parse(format!("B exponent must be a half-integer in `{f}`")));
        }
        return Ok(DerivMonomial::b_half_pow(r.to_integer().to_i64().unwrap_or(0)));
    }
    if let Some((i, e)) = parse_indexed(f, 'A')? {
        return Ok(DerivMonomial::a_deriv(i, e));
    }
    if let Some((i, e)) = parse_indexed(f, 'B')? {
        return Ok(DerivMonomial::b_deriv(i, e));
    }
    Err(Error::Parse(format!("unknown factor `{f}`")))
}

fn parse_a_factor(f: &str) -> Result<AMonomial> {
    if f == "a" {
        return Ok(AMonomial::a_pow(1));
    }
    if let Some(e) = f.strip_prefix("a^(").and_then(|x| x.strip_suffix(')')) {
        let p: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?;
        return Ok(AMonomial::a_pow(p));
    }
    if let Some((i, e)) = parse_indexed(f, 'a')? {
        return Ok(AMonomial::deriv(i, e));
    }
    Err(Error::Parse(format!("unknown factor `{f}`")))
}

/// Coefficient `p/q + (p2/q2) sqrt 2`. Integers are written as JSON numbers
/// when they fit in 64 bits and as decimal strings otherwise.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoeffJson {
    pub p: Value,
    pub q: Value,
    #[serde(default = "zero_value")]
    pub p2: Value,
    #[serde(default = "one_value")]
    pub q2: Value,
}

fn zero_value() -> Value {
    Value::from(0)
}

fn one_value() -> Value {
    Value::from(1)
}

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer coefficient {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`"))),
        _ => Err(Error::Parse(format!("bad integer {v}"))),
    }
}

impl CoeffJson {
    pub fn from_scalar(c: &ExactScalar) -> Self {
        Self {
            p: int_to_json(c.rat.numer()),
            q: int_to_json(c.rat.denom()),
            p2: int_to_json(c.sqrt2.numer()),
            q2: int_to_json(c.sqrt2.denom()),
        }
    }

    pub fn to_scalar(&self) -> Result<ExactScalar> {
        let mk = |p: &Value, q: &Value| -> Result<BigRational> {
            let q = int_from_json(q)?;
            if q.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(int_from_json(p)?, q))
        };
        Ok(ExactScalar::new(mk(&self.p, &self.q)?, mk(&self.p2, &self.q2)?))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonTerm {
    pub coeff: CoeffJson,
    #[serde(rename = "bHalf", default, skip_serializing_if = "Option::is_none")]
    pub b_half: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<[u32; 2]>>,
    #[serde(rename = "aPow", default, skip_serializing_if = "Option::is_none")]
    pub a_pow: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<[u32; 2]>>,
}

/// JSON document `{ "terms": [...] }` shared by both polynomial forms.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JsonPoly {
    pub terms: Vec<JsonTerm>,
}

fn exp_pairs(m: &ExpMap) -> Vec<[u32; 2]> {
    m.iter().map(|(&i, &e)| [i, e]).collect()
}

fn exp_from_pairs(pairs: &[[u32; 2]]) -> Result<ExpMap> {
    let mut m = ExpMap::new();
    for &[i, e] in pairs {
        if i == 0 {
            return Err(Error::Parse("derivative order 0 in JSON".into()));
        }
        if e > 0 {
            *m.entry(i).or_insert(0) += e;
        }
    }
    Ok(m)
}

impl SymPoly {
    pub fn to_json(&self) -> JsonPoly {
        JsonPoly {
            terms: self
                .terms()
                .map(|(m, c)| JsonTerm {
                    coeff: CoeffJson::from_scalar(c),
                    b_half: Some(m.b_half),
                    a: Some(exp_pairs(&m.a_exp)),
                    b: Some(exp_pairs(&m.b_exp)),
                    a_pow: None,
                    d: None,
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &JsonPoly) -> Result<Self> {
        let mut p = SymPoly::zero();
        for t in &doc.terms {
            let m = DerivMonomial {
                b_half: t.b_half.unwrap_or(0),
                a_exp: exp_from_pairs(t.a.as_deref().unwrap_or(&[]))?,
                b_exp: exp_from_pairs(t.b.as_deref().unwrap_or(&[]))?,
            };
            p.add_term(m, t.coeff.to_scalar()?);
        }
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

impl AFormPoly {
    pub fn to_json(&self) -> JsonPoly {
        JsonPoly {
            terms: self
                .terms()
                .map(|(m, c)| JsonTerm {
                    coeff: CoeffJson::from_scalar(c),
                    b_half: None,
                    a: None,
                    b: None,
                    a_pow: Some(m.a_pow),
                    d: Some(exp_pairs(&m.d)),
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &JsonPoly) -> Result<Self> {
        let mut p = AFormPoly::zero();
        for t in &doc.terms {
            let m = AMonomial { a_pow: t.a_pow.unwrap_or(0), d: exp_from_pairs(t.d.as_deref().unwrap_or(&[]))? };
            p.add_term(m, t.coeff.to_scalar()?);
        }
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}
