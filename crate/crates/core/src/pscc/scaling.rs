//! Constant rescalings `a -> a * a_0` of the scale factor and the non-round
//! zeta coefficients built from them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use crate::expansion::{crm_direct_rescaled, crm_integrated};
use crate::symcore::{ExactScalar, SymPoly};
use crate::zeta::{string_zeta, string_zeta_exact, ExactValue, FractalString};
use crate::{Error, Result};

fn rpow(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(r.clone(), k as usize)
    } else {
        num_traits::pow(r.recip(), (-k) as usize)
    }
}

fn check_positive(a: &BigRational) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::Validation(format!("scale must be positive, got {a}")));
    }
    Ok(())
}

/// `(U, V) -> (a^{-2} U, a^{-1} V)`.
pub fn rescale_uv(u: &BigRational, v: &BigRational, a: &BigRational) -> Result<(BigRational, BigRational)> {
    check_positive(a)?;
    Ok((u * rpow(a, -2), v * rpow(a, -1)))
}

/// Substitutes `B^{k/2} -> a^{-k} B^{k/2}`, `A^{(i)} -> a^{-1} A^{(i)}` and
/// `B^{(i)} -> a^{-2} B^{(i)}` in every monomial.
pub fn rescale_metric(p: &SymPoly, a: &BigRational) -> Result<SymPoly> {
    check_positive(a)?;
    let mut out = SymPoly::zero();
    for (m, c) in p.terms() {
        let na: i64 = m.a_exp.values().map(|&e| e as i64).sum();
        let nb: i64 = m.b_exp.values().map(|&e| e as i64).sum();
        let k = -(m.b_half + na + 2 * nb);
        out.add_term(m.clone(), c.scale(&rpow(a, k)));
    }
    Ok(out)
}

/// Outcome of the three-way scaling check for one `C^{(r,m)}` at one order.
#[derive(Clone, Debug)]
pub struct ScalingCheck {
    pub r2: i64,
    pub m: u32,
    pub order: u32,
    /// Series rescaled through `U, V` before integration.
    pub via_uv: SymPoly,
    /// Integrated coefficient with the metric substitution applied.
    pub via_metric: SymPoly,
    /// `a^{-2r-m}` times the integrated coefficient.
    pub predicted: SymPoly,
}

impl ScalingCheck {
    pub fn holds(&self) -> bool {
        self.via_uv == self.predicted && self.via_metric == self.predicted
    }
}

/// Checks `C^{(r,m)}_M -> a^{-2r-m} C^{(r,m)}_M` under `U -> a^{-2}U`, `V -> a^{-1}V`.
pub fn verify_scaling_law(r2: i64, m: u32, order: u32, a: &BigRational) -> Result<ScalingCheck> {
    check_positive(a)?;
    let base = crm_integrated(r2, m, order);
    let via_uv = crm_direct_rescaled(r2, m, order, a).integrate_bridge();
    let via_metric = rescale_metric(&base, a)?;
    let predicted = base.scale(&ExactScalar::from_rational(rpow(a, -r2 - m as i64)));
    Ok(ScalingCheck { r2, m, order, via_uv, via_metric, predicted })
}

/// The three `(2r, m)` pairs entering `a_{2M}`.
pub const CRM_PAIRS: [(i64, u32); 3] = [(-3, 0), (-5, 2), (-1, 0)];

/// `zeta_L(s)` at an integer, exact where possible.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaWeight {
    pub s: i64,
    pub value: Complex64,
    pub exact: Option<ExactValue>,
}

fn zeta_weight(string: &FractalString, s: i64) -> Result<ZetaWeight> {
    let value = string_zeta(string, Complex64::new(s as f64, 0.0)).map_err(|e| match e {
        Error::Divergent(msg) => Error::Divergent(format!("zeta_L({s}) diverges: {msg}")),
        other => other,
    })?;
    let exact = string_zeta_exact(string, s)?;
    Ok(ZetaWeight { s, value, exact })
}

/// One `tau^{2M-4}` coefficient of the non-round expansion:
/// `zeta_L(3) p3 + zeta_L(1) p1`.
#[derive(Clone, Debug)]
pub struct NonRoundTerm {
    pub m: u32,
    pub tau_power: i64,
    /// `C^{(-3/2,0)}_{2M}/2 + C^{(-5/2,2)}_{2M-2}/4`, integrated.
    pub p3: SymPoly,
    /// `-C^{(-1/2,0)}_{2M-2}/4`, integrated.
    pub p1: SymPoly,
    pub zeta3: ZetaWeight,
    pub zeta1: ZetaWeight,
}

impl NonRoundTerm {
    /// Combined polynomial when both weights are rational.
    pub fn exact_poly(&self) -> Option<SymPoly> {
        let w3 = self.zeta3.exact.as_ref()?.as_rational()?;
        let w1 = self.zeta1.exact.as_ref()?.as_rational()?;
        Some(self.p3.scale(&ExactScalar::from_rational(w3)).add(&self.p1.scale(&ExactScalar::from_rational(w1))))
    }
}

/// Bulk coefficients for a string whose spheres are rescaled copies of one
/// metric: each `C^{(r,m)}` picks up `a^{-2r-m}`, so summing over radii gives
/// `zeta_L(3)` or `zeta_L(1)`. Pole contributions are not produced.
pub fn nonround_zeta_coefficients(string: &FractalString, max_m: u32) -> Result<Vec<NonRoundTerm>> {
    let zeta1 = zeta_weight(string, 1)?;
    let zeta3 = zeta_weight(string, 3)?;
    let quarter = ExactScalar::from_ratio(1, 4);
    let half = ExactScalar::from_ratio(1, 2);
    let mut out = Vec::new();
    for m in 0..=max_m {
        let mut p3 = crm_integrated(-3, 0, 2 * m).scale(&half);
        let mut p1 = SymPoly::zero();
        if m > 0 {
            p3 = p3.add(&crm_integrated(-5, 2, 2 * m - 2).scale(&quarter));
            p1 = crm_integrated(-1, 0, 2 * m - 2).scale(&quarter.scale(&BigRational::from_integer(BigInt::from(-1))));
        }
        out.push(NonRoundTerm {
            m,
            tau_power: 2 * m as i64 - 4,
            p3,
            p1,
            zeta3: zeta3.clone(),
            zeta1: zeta1.clone(),
        });
    }
    Ok(out)
}
