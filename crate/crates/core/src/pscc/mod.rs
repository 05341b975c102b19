//! Heat-trace and spectral-action expansions for geometries assembled from
//! rescaled copies of one round metric, one copy per radius of a fractal string.
//!
//! The heat trace of the assembly is `sum_r theta(tau / r)`, whose Mellin
//! transform is `zeta_L(s)` times that of `theta`. Bulk terms come from the
//! single-metric coefficients, pole terms from the poles of `zeta_L`.

mod report;
mod s4;
mod scaling;
mod singular;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::expansion::{a2m_checked, ScaleFactor, DEFAULT_MAX_ORDER};
use crate::specfun::gamma;
use crate::zeta::{
    dirac_zeta_s4, string_poles, string_zeta, string_zeta_exact, zero_ordinates, ExactValue, FractalString, PoleTerm,
    Strip,
};
use crate::{Error, Result};

pub use report::{reconciliation_report, s4_packing_leading_terms, LeadingTerm, ReconciliationReport, ReconciliationRow};
pub use s4::{s4_heat_coefficient, s4_heat_coefficient_from_zeta, s4_heat_coefficient_radius};
pub use scaling::{
    nonround_zeta_coefficients, rescale_metric, rescale_uv, verify_scaling_law, NonRoundTerm, ScalingCheck, ZetaWeight,
    CRM_PAIRS,
};
pub use singular::{gamma_mellin, singular_expansion_combine, MellinData};

/// Distance below which a string pole counts as sitting on a bulk exponent.
pub const COLLISION_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A coefficient, exact when every factor was.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Numeric(Complex64),
    Exact(ExactValue),
}

impl Coeff {
    pub fn value(&self) -> Complex64 {
        match self {
            Self::Numeric(z) => *z,
            Self::Exact(e) => c(e.to_f64()),
        }
    }

    pub fn exact(&self) -> Option<&ExactValue> {
        match self {
            Self::Exact(e) => Some(e),
            Self::Numeric(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TermKind {
    /// Contribution of the single-metric coefficient `a_{2M}`.
    Bulk(u32),
    /// Contribution of a pole `sigma` of the string zeta function.
    Pole(Complex64),
}

/// `amplitude * x^a * cos(b ln x + phase)`: a conjugate pole pair in real form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPeriodic {
    pub amplitude: f64,
    pub a: f64,
    pub b: f64,
    pub phase: f64,
}

/// `coeff * x^exponent`, with `x = tau` for heat traces and `x = Lambda` for
/// spectral actions.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    pub exponent: Complex64,
    pub coeff: Coeff,
    pub kind: TermKind,
    pub log_periodic: Option<LogPeriodic>,
}

impl ExpansionTerm {
    /// Value at `x > 0`. A merged log-periodic term stands for both members of
    /// its pair.
    pub fn eval(&self, x: f64) -> Complex64 {
        if let Some(lp) = &self.log_periodic {
            return c(lp.amplitude * x.powf(lp.a) * (lp.b * x.ln() + lp.phase).cos());
        }
        self.coeff.value() * (self.exponent * x.ln()).exp()
    }

    pub fn to_json(&self) -> Value {
        let coeff = match &self.coeff {
            Coeff::Exact(e) => json!({"exact": e.to_string(), "re": e.to_f64(), "im": 0.0}),
            Coeff::Numeric(z) => json!({"re": z.re, "im": z.im}),
        };
        let kind = match self.kind {
            TermKind::Bulk(m) => json!({"bulk": m}),
            TermKind::Pole(s) => json!({"pole": {"re": s.re, "im": s.im}}),
        };
        let mut v = json!({
            "kind": kind,
            "exponent": {"re": self.exponent.re, "im": self.exponent.im},
            "coeff": coeff,
        });
        if let Some(lp) = &self.log_periodic {
            v["logPeriodic"] = json!({"amplitude": lp.amplitude, "a": lp.a, "b": lp.b, "phase": lp.phase});
        }
        v
    }
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TermKind::Bulk(m) => format!("bulk M={m}"),
            TermKind::Pole(s) => format!("pole {:.6}{:+.6}i", s.re, s.im),
        };
        if let Some(lp) = &self.log_periodic {
            return write!(
                f,
                "{kind:<28} {:.6e} x^{:.6} cos({:.6} ln x {:+.6})",
                lp.amplitude, lp.a, lp.b, lp.phase
            );
        }
        let v = self.coeff.value();
        let exact = self.coeff.exact().map(|e| format!("  [{e}]")).unwrap_or_default();
        write!(
            f,
            "{kind:<28} x^({:.6}{:+.6}i)  {:+.12e}{:+.12e}i{exact}",
            self.exponent.re, self.exponent.im, v.re, v.im
        )
    }
}

/// Sum of the terms at `x`.
pub fn evaluate_terms(terms: &[ExpansionTerm], x: f64) -> Complex64 {
    terms.iter().map(|t| t.eval(x)).sum()
}

type MomentFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// Moments of a test function `f(x) = int exp(-tau^2 x^2) dmu(tau)`.
///
/// The expansion uses `m(beta) = int tau^{-beta} dmu`, related to `f` by
/// `m(beta) = 2 f_beta / Gamma(beta/2)` for `Re beta > 0` with
/// `f_beta = int_0^inf f(v) v^{beta-1} dv`, `m(0) = f(0)` and
/// `m(-2j) = (-1)^j j! f^{(2j)}(0) / (2j)!`.
#[derive(Clone)]
pub struct TestFunctionMoments {
    pub name: String,
    pub f0: f64,
    mellin: MomentFn,
    /// `f^{(2j)}(0)` for `j = 0, 1, ...`.
    taylor_even: Vec<f64>,
    mu: Option<MomentFn>,
}

impl fmt::Debug for TestFunctionMoments {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunctionMoments").field("name", &self.name).field("f0", &self.f0).finish()
    }
}

impl TestFunctionMoments {
    /// `f(x) = exp(-s x^2)`: `mu` is a point mass at `sqrt s`.
    pub fn gaussian(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::Validation(format!("Gaussian width must be positive, got {s}")));
        }
        let ln_s = s.ln();
        let taylor_even = (0..40)
            .map(|j: i32| {
                // (-s)^j (2j)! / j!
                let mut v = 1.0;
                for k in (j + 1)..=(2 * j) {
                    v *= k as f64;
                }
                v * (-s).powi(j)
            })
            .collect();
        Ok(Self {
            name: format!("gaussian({s})"),
            f0: 1.0,
            mellin: Arc::new(move |b: Complex64| Ok(gamma(b / 2.0) / 2.0 * (-b / 2.0 * ln_s).exp())),
            taylor_even,
            mu: Some(Arc::new(move |b: Complex64| Ok((-b / 2.0 * ln_s).exp()))),
        })
    }

    /// A test function known through `f(0)`, its Mellin transform on
    /// `Re beta > 0` and its even Taylor derivatives at 0.
    pub fn custom(
        name: &str,
        f0: f64,
        mellin: impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
        taylor_even: Vec<f64>,
    ) -> Self {
        let mut t = taylor_even;
        if t.is_empty() {
            t.push(f0);
        }
        Self { name: name.into(), f0, mellin: Arc::new(mellin), taylor_even: t, mu: None }
    }

    /// `f_beta = int_0^inf f(v) v^{beta-1} dv`, `Re beta > 0`.
    pub fn f_moment(&self, beta: Complex64) -> Result<Complex64> {
        if beta.re <= 0.0 {
            return Err(Error::Divergent(format!("f moment at {beta} needs Re > 0")));
        }
        (self.mellin)(beta)
    }

    /// `m(beta)`, see the type docs.
    pub fn mu_moment(&self, beta: Complex64) -> Result<Complex64> {
        if beta.norm() < 1e-14 {
            return Ok(c(self.f0));
        }
        if beta.im == 0.0 && beta.re < 0.0 && (beta.re / 2.0).fract() == 0.0 {
            let j = (-beta.re / 2.0) as usize;
            let d = self
                .taylor_even
                .get(j)
                .ok_or_else(|| Error::Validation(format!("f^({}) (0) not supplied", 2 * j)))?;
            // (-1)^j j! / (2j)!
            let mut w = 1.0;
            for k in (j + 1)..=(2 * j) {
                w /= k as f64;
            }
            if j % 2 == 1 {
                w = -w;
            }
            return Ok(c(w * d));
        }
        if beta.re > 0.0 {
            return Ok(self.f_moment(beta)? * 2.0 / gamma(beta / 2.0));
        }
        match &self.mu {
            Some(mu) => mu(beta),
            None => Err(Error::Validation(format!("moment of {} at {beta} is not available", self.name))),
        }
    }
}

/// Geometry of the unit-radius building block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry {
    /// Round 4-sphere, `a(t) = sin t` integrated over `[0, pi]`.
    S4,
    /// A Robertson-Walker slice: coefficients evaluated pointwise at time `t`.
    Rw { family: ScaleFactor, t: f64 },
}

impl Geometry {
    /// Coefficient of `tau^{2M-4}` for one unit copy.
    fn bulk_coefficient(&self, m: u32) -> Result<Coeff> {
        match *self {
            Geometry::S4 => Ok(Coeff::Exact(ExactValue::rational(s4_heat_coefficient(m)?))),
            Geometry::Rw { family, t } => {
                if !family.admissible(t) {
                    return Err(Error::Validation(format!("t = {t} outside the domain of the {} family", family.name())));
                }
                let p = a2m_checked(m, DEFAULT_MAX_ORDER)?;
                Ok(Coeff::Numeric(c(crate::expansion::eval_family(&p, family, t))))
            }
        }
    }

    /// `f~(sigma) = Gamma(sigma/2)/2 zeta_D(sigma)`, the Mellin transform of the
    /// unit heat trace.
    fn mellin_heat_trace(&self, sigma: Complex64) -> Result<Complex64> {
        match self {
            Geometry::S4 => Ok(gamma(sigma / 2.0) / 2.0 * dirac_zeta_s4(sigma, 1.0)?),
            Geometry::Rw { .. } => Err(Error::Validation(
                "pole terms need the Mellin transform of the heat trace, which is only available for S4; \
                 exclude poles for Robertson-Walker geometries"
                    .into(),
            )),
        }
    }
}

/// Poles of `zeta_L` that matter at order `max_m`, i.e. with `Re sigma >= 4 - 2 max_m`.
pub fn relevant_strip(max_m: u32) -> Strip {
    Strip::vertical(4.0 - 2.0 * max_m as f64 - COLLISION_TOL, f64::INFINITY)
}

fn check_collisions(poles: &[PoleTerm]) -> Result<()> {
    for p in poles {
        if p.sigma.im.abs() < COLLISION_TOL {
            let r = p.sigma.re.round();
            // Gamma(s/2) zeta_D(s) is singular at 4, 2, 0, -2, ...
            if (p.sigma.re - r).abs() < COLLISION_TOL && r <= 4.0 && (r as i64) % 2 == 0 {
                return Err(Error::PoleCollision { pole: format!("{}", p.sigma), exponent: r as i64 });
            }
        }
    }
    Ok(())
}

fn bulk_zeta(string: &FractalString, s: i64) -> Result<Coeff> {
    if let Some(e) = string_zeta_exact(string, s)? {
        return Ok(Coeff::Exact(e));
    }
    Ok(Coeff::Numeric(string_zeta(string, c(s as f64))?))
}

fn mul_coeff(a: &Coeff, b: &Coeff) -> Coeff {
    match (a, b) {
        (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(x.mul(y)),
        _ => Coeff::Numeric(a.value() * b.value()),
    }
}

fn sort_terms(terms: &mut [ExpansionTerm]) {
    terms.sort_by(|x, y| {
        let key = |t: &ExpansionTerm| match t.kind {
            TermKind::Bulk(m) => (0, m as f64, 0.0),
            TermKind::Pole(s) => (1, s.re, s.im),
        };
        let (a, b) = (key(x), key(y));
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
    });
}

fn sort_by_exponent(terms: &mut [ExpansionTerm]) {
    terms.sort_by(|x, y| x.exponent.re.total_cmp(&y.exponent.re).then(x.exponent.im.total_cmp(&y.exponent.im)));
}

/// Small-`tau` expansion of the heat trace of the assembled geometry: bulk terms
/// `zeta_L(4-2M) c_{2M} tau^{2M-4}` for `M <= max_m`, and with `include_poles`
/// the terms `f~(sigma) Res_sigma tau^{-sigma}` for the poles with
/// `Re sigma >= 4 - 2 max_m`. Bulk terms come first, ordered by `M`; poles
/// follow, ordered by `(Re, Im)`.
pub fn round_heat_expansion(
    string: &FractalString,
    max_m: u32,
    geometry: &Geometry,
    include_poles: bool,
) -> Result<Vec<ExpansionTerm>> {
    if max_m > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooLarge { requested: max_m, max: DEFAULT_MAX_ORDER });
    }
    let poles = string_poles(string, &relevant_strip(max_m))?;
    check_collisions(&poles)?;
    let mut out = Vec::new();
    for m in 0..=max_m {
        let z = bulk_zeta(string, 4 - 2 * m as i64)?;
        let coeff = mul_coeff(&z, &geometry.bulk_coefficient(m)?);
        out.push(ExpansionTerm { exponent: c(2.0 * m as f64 - 4.0), coeff, kind: TermKind::Bulk(m), log_periodic: None });
    }
    if include_poles {
        for p in &poles {
            let coeff = geometry.mellin_heat_trace(p.sigma)? * p.residue;
            out.push(ExpansionTerm {
                exponent: -p.sigma,
                coeff: Coeff::Numeric(coeff),
                kind: TermKind::Pole(p.sigma),
                log_periodic: None,
            });
        }
    }
    sort_terms(&mut out);
    Ok(out)
}

/// Large-`Lambda` expansion of `Tr f(D / Lambda)`: every heat term
/// `c tau^{-beta}` becomes `m(beta) c Lambda^{beta}`. Conjugate pole pairs are
/// merged into a single log-periodic term (kept on the member with `Im > 0`).
pub fn spectral_action(
    string: &FractalString,
    moments: &TestFunctionMoments,
    max_m: u32,
    geometry: &Geometry,
    include_poles: bool,
) -> Result<Vec<ExpansionTerm>> {
    let heat = round_heat_expansion(string, max_m, geometry, include_poles)?;
    let mut out: Vec<ExpansionTerm> = Vec::new();
    for t in heat {
        // `+ 0` clears the sign of zero parts
        let beta = -t.exponent + c(0.0);
        let mu = moments.mu_moment(beta)?;
        let coeff = match &t.coeff {
            Coeff::Exact(e) if mu.im == 0.0 && mu.re == 1.0 => Coeff::Exact(e.clone()),
            other => Coeff::Numeric(other.value() * mu),
        };
        out.push(ExpansionTerm { exponent: beta, coeff, kind: t.kind, log_periodic: None });
    }
    merge_conjugate_pairs(out)
}

/// Replaces each pair `c x^sigma + conj(c) x^conj(sigma)` by one real
/// log-periodic term `2|c| x^a cos(b ln x + arg c)`.
pub fn merge_conjugate_pairs(terms: Vec<ExpansionTerm>) -> Result<Vec<ExpansionTerm>> {
    let mut out = Vec::new();
    let mut used = vec![false; terms.len()];
    for i in 0..terms.len() {
        if used[i] {
            continue;
        }
        let t = &terms[i];
        if t.exponent.im.abs() < COLLISION_TOL {
            out.push(t.clone());
            continue;
        }
        if t.exponent.im < 0.0 {
            // merged when its upper partner is reached
            continue;
        }
        let partner = (0..terms.len()).find(|&j| {
            !used[j] && j != i && (terms[j].exponent - t.exponent.conj()).norm() < 1e-9
        });
        let Some(j) = partner else {
            return Err(Error::Validation(format!("pole term at {} has no conjugate partner", t.exponent)));
        };
        used[i] = true;
        used[j] = true;
        let (upper, lower) = (t, &terms[j]);
        let cu = upper.coeff.value();
        let cl = lower.coeff.value();
        if (cu - cl.conj()).norm() > 1e-9 * cu.norm().max(1e-300) {
            return Err(Error::Numeric(format!("pole pair at {} is not conjugate-symmetric", upper.exponent)));
        }
        let mut merged = upper.clone();
        merged.log_periodic = Some(LogPeriodic {
            amplitude: 2.0 * cu.norm(),
            a: upper.exponent.re,
            b: upper.exponent.im,
            phase: cu.arg(),
        });
        out.push(merged);
    }
    if let Some(k) = (0..terms.len()).find(|&k| !used[k] && terms[k].exponent.im <= -COLLISION_TOL) {
        return Err(Error::Validation(format!("pole term at {} has no conjugate partner", terms[k].exponent)));
    }
    Ok(out)
}

/// Exact bulk coefficients of a truncated string with rational radii, computed
/// as the sum over radii of the rescaled single-sphere coefficients.
pub fn finite_string_oracle(radii: &[(BigRational, u64)], max_m: u32) -> Result<Vec<BigRational>> {
    (0..=max_m)
        .map(|m| {
            let mut acc = BigRational::from_integer(0.into());
            for (r, mult) in radii {
                acc += s4_heat_coefficient_radius(m, r)? * BigRational::from_integer((*mult).into());
            }
            Ok(acc)
        })
        .collect()
}

/// Direct heat trace `sum_r mult sum_{m>=2} (4/3)(m^3 - m) exp(-tau^2 m^2 / r^2)`
/// of a truncated S4 assembly; terms are summed until below `1e-18` relative.
pub fn s4_heat_trace_direct(string: &FractalString, tau: f64) -> Result<f64> {
    let FractalString::Truncated(radii) = string else {
        return Err(Error::Validation("direct heat trace needs a truncated string".into()));
    };
    if !(tau > 0.0) {
        return Err(Error::Validation("tau must be positive".into()));
    }
    let mut total = 0.0;
    for r in radii.iter().rev() {
        let x = tau / r.value;
        let mut s = 0.0;
        let mut m = 2u64;
        loop {
            let mf = m as f64;
            let term = 4.0 / 3.0 * (mf * mf * mf - mf) * (-(x * mf) * (x * mf)).exp();
            s += term;
            if mf * x > 1.0 && term <= 1e-18 * s {
                break;
            }
            m += 1;
        }
        total += s * r.mult as f64;
    }
    Ok(total)
}

/// Imaginary extent covered by the bundled zero table for Ford poles.
pub fn ford_pole_height() -> Result<f64> {
    Ok(zero_ordinates()?.last().copied().unwrap_or(0.0) / 2.0)
}
