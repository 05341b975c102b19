//! Leading terms of the spectral action of an S4 packing written against the
//! moments `f_alpha = int_0^inf f(v) v^{alpha-1} dv`, and the comparison of the
//! Ford-circle values with the published constants.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use super::{s4_heat_coefficient, Coeff};
use crate::zeta::{
    dirac_zeta_s4, dirac_zeta_s4_exact, ford_trivial_residue_exact, string_poles, string_zeta, string_zeta_exact,
    zeta_exact, ExactValue, FractalString, Strip,
};
use crate::{Error, Result};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// One entry `value * moment * Lambda^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    pub moment: String,
    pub lambda_power: Complex64,
    pub value: Coeff,
}

fn zeta_l(string: &FractalString, k: i64) -> Result<Coeff> {
    match string_zeta_exact(string, k)? {
        Some(e) => Ok(Coeff::Exact(e)),
        None => Ok(Coeff::Numeric(string_zeta(string, Complex64::new(k as f64, 0.0))?)),
    }
}

fn scale(c: &Coeff, e: &ExactValue) -> Coeff {
    match c {
        Coeff::Exact(x) => Coeff::Exact(x.mul(e)),
        Coeff::Numeric(z) => Coeff::Numeric(z * e.to_f64()),
    }
}

/// Exact residue of the Ford zeta at an integer pole, if `sigma` is one.
fn ford_integer_residue(sigma: Complex64) -> Option<ExactValue> {
    if sigma.im != 0.0 || sigma.re != sigma.re.round() {
        return None;
    }
    let k = sigma.re as i64;
    if k == 1 {
        // 2^{-1} (1/2) / zeta(2)
        return zeta_exact(2).ok()?.inv().ok().map(|z| z.scale(&BigRational::new(1.into(), 4.into())));
    }
    (k < 0).then(|| ford_trivial_residue_exact((-k) as u32))
}

/// `f(0) zeta_L(0) zeta_D(0) + f_2 Lambda^2 zeta_L(2)/2 + f_4 Lambda^4 zeta_L(4)/2
/// + sum_sigma f_sigma Lambda^sigma zeta_D(sigma)/2 Res_sigma`, over the poles of
/// `zeta_L` in `strip`.
pub fn s4_packing_leading_terms(string: &FractalString, strip: &Strip) -> Result<Vec<LeadingTerm>> {
    let mut out = Vec::new();
    let dz0 = dirac_zeta_s4_exact(0)?;
    out.push(LeadingTerm { moment: "f(0)".into(), lambda_power: Complex64::new(0.0, 0.0), value: scale(&zeta_l(string, 0)?, &dz0) });
    for k in [2i64, 4] {
        out.push(LeadingTerm {
            moment: format!("f_{k}"),
            lambda_power: Complex64::new(k as f64, 0.0),
            value: scale(&zeta_l(string, k)?, &ExactValue::rational(half())),
        });
    }
    for p in string_poles(string, strip)? {
        let exact = match (string, p.sigma.im == 0.0 && p.sigma.re == p.sigma.re.round()) {
            (FractalString::Ford, true) => {
                let k = p.sigma.re as i64;
                let res = ford_integer_residue(p.sigma);
                match (dirac_zeta_s4_exact(k), res) {
                    (Ok(d), Some(r)) => Some(d.mul(&r).scale(&half())),
                    _ => None,
                }
            }
            _ => None,
        };
        let value = match exact {
            Some(e) => Coeff::Exact(e),
            None => Coeff::Numeric(dirac_zeta_s4(p.sigma, 1.0)? / 2.0 * p.residue),
        };
        let moment = if p.sigma.im == 0.0 { format!("f_{}", p.sigma.re) } else { format!("f_({}{:+}i)", p.sigma.re, p.sigma.im) };
        out.push(LeadingTerm { moment, lambda_power: p.sigma, value });
    }
    Ok(out)
}

/// One coefficient of the Ford-circle S4 packing.
#[derive(Clone, Debug)]
pub struct ReconciliationRow {
    pub term: String,
    /// Published constant.
    pub printed: ExactValue,
    /// Value obtained by composing the leading-term formula with the Ford zeta.
    pub pipeline: ExactValue,
    /// `printed / pipeline`.
    pub ratio: Option<ExactValue>,
    pub matches: bool,
    /// Coefficient of the same moment when every heat term is carried through
    /// the Mellin transform of `f` (`m(beta) = 2 f_beta / Gamma(beta/2)`).
    pub mellin: ExactValue,
}

#[derive(Clone, Debug)]
pub struct ReconciliationReport {
    pub rows: Vec<ReconciliationRow>,
}

impl ReconciliationReport {
    /// The `Lambda^2` and `Lambda^4` rows must agree exactly.
    pub fn passes(&self) -> bool {
        self.rows.iter().filter(|r| r.term == "Lambda^2" || r.term == "Lambda^4").all(|r| r.matches)
            && self.rows.len() == 4
    }
}

impl fmt::Display for ReconciliationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:<24} {:<24} {:<14} {:<8} {}", "term", "printed", "pipeline", "ratio", "match", "mellin")?;
        for r in &self.rows {
            let ratio = r.ratio.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:<10} {:<24} {:<24} {:<14} {:<8} {}",
                r.term,
                r.printed.to_string(),
                r.pipeline.to_string(),
                ratio,
                if r.matches { "yes" } else { "no" },
                r.mellin
            )?;
        }
        Ok(())
    }
}

fn row(term: &str, printed: ExactValue, pipeline: ExactValue, mellin: ExactValue) -> ReconciliationRow {
    let ratio = printed.div(&pipeline).ok();
    let matches = printed == pipeline;
    ReconciliationRow { term: term.into(), printed, pipeline, ratio, matches, mellin }
}

/// Compares the Ford-circle S4 packing coefficients of `f(0)`, `Lambda`,
/// `Lambda^2` and `Lambda^4` with the printed constants `11/140`, `1/pi^2`,
/// `45 zeta(3)/(4 pi^4)` and `4725 zeta(7)/(16 pi^8)`.
pub fn reconciliation_report() -> Result<ReconciliationReport> {
    let ford = FractalString::Ford;
    let terms = s4_packing_leading_terms(&ford, &Strip::new((0.9, 1.1), (0.0, 0.0)))?;
    let get = |moment: &str| -> Result<ExactValue> {
        terms
            .iter()
            .find(|t| t.moment == moment)
            .and_then(|t| t.value.exact().cloned())
            .ok_or_else(|| Error::Numeric(format!("no exact leading term for {moment}")))
    };
    let printed_f0 = ExactValue::from_ratio(11, 140);
    let printed_l1 = ExactValue::pi_pow(-2);
    let printed_l2 = ExactValue::zeta_symbol(3).mul(&ExactValue::pi_pow(-4)).scale(&BigRational::new(45.into(), 4.into()));
    let printed_l4 = ExactValue::zeta_symbol(7).mul(&ExactValue::pi_pow(-8)).scale(&BigRational::new(4725.into(), 16.into()));

    // Mellin route: bulk coefficient m(beta) zeta_L(beta) c_{2M}, m(beta) = 2 f_beta / Gamma(beta/2)
    let zl = |k| string_zeta_exact(&ford, k).and_then(|z| z.ok_or_else(|| Error::Numeric("Ford zeta not exact".into())));
    let two = BigRational::from_integer(2.into());
    let mellin_l4 = zl(4)?.scale(&(&two * s4_heat_coefficient(0)?)); // Gamma(2) = 1
    let mellin_l2 = zl(2)?.scale(&(&two * s4_heat_coefficient(1)?)); // Gamma(1) = 1
    let mellin_f0 = zl(0)?.scale(&s4_heat_coefficient(2)?);
    // pole at 1: Gamma(1/2)/2 zeta_D(1) Res * 2/Gamma(1/2) = zeta_D(1) Res
    let res1 = ford_integer_residue(Complex64::new(1.0, 0.0)).expect("residue at 1");
    let mellin_l1 = dirac_zeta_s4_exact(1)?.mul(&res1);

    Ok(ReconciliationReport {
        rows: vec![
            row("f(0)", printed_f0, get("f(0)")?, mellin_f0),
            row("Lambda^1", printed_l1, get("f_1")?, mellin_l1),
            row("Lambda^2", printed_l2, get("f_2")?, mellin_l2),
            row("Lambda^4", printed_l4, get("f_4")?, mellin_l4),
        ],
    })
}
