//! Small-`tau` expansion of `g(tau) = sum_r mult f(tau / r)` from the poles of
//! `M(g)(z) = zeta_R(z) M(f)(z)`.

use std::sync::Arc;

use num_complex::Complex64;

use super::{sort_by_exponent, Coeff, ExpansionTerm, TermKind, COLLISION_TOL};
use crate::specfun::gamma;
use crate::zeta::{string_poles, string_zeta, FractalString, PoleTerm, Strip};
use crate::{Error, Result};

/// Mellin transform of `f` with its poles in the region of interest.
#[derive(Clone)]
pub struct MellinData {
    pub evaluator: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
    pub poles: Vec<PoleTerm>,
}

/// `M(exp(-tau)) = Gamma(z)` with poles `-k`, residues `(-1)^k / k!`, `k <= k_max`.
pub fn gamma_mellin(k_max: u32) -> MellinData {
    let mut fact = 1.0;
    let poles = (0..=k_max)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            PoleTerm { sigma: Complex64::new(-(k as f64), 0.0), residue: Complex64::new(sign / fact, 0.0) }
        })
        .collect();
    MellinData { evaluator: Arc::new(|z| Ok(gamma(z))), poles }
}

/// Terms `zeta_R(sigma_f) Res M(f) tau^{-sigma_f}` for the poles of `M(f)`
/// (kind `Bulk(i)`, `i` the pole index) and `Res zeta_R M(f)(sigma) tau^{-sigma}`
/// for the poles of `zeta_R` in `strip`, ordered by the real part of the
/// `tau` exponent.
pub fn singular_expansion_combine(string: &FractalString, mellin: &MellinData, strip: &Strip) -> Result<Vec<ExpansionTerm>> {
    let string_p = string_poles(string, strip)?;
    for p in &string_p {
        if let Some(q) = mellin.poles.iter().find(|q| (q.sigma - p.sigma).norm() < COLLISION_TOL) {
            return Err(Error::PoleCollision { pole: format!("{}", p.sigma), exponent: q.sigma.re.round() as i64 });
        }
    }
    let mut out = Vec::new();
    for (i, q) in mellin.poles.iter().enumerate() {
        let z = string_zeta(string, q.sigma)?;
        out.push(ExpansionTerm {
            exponent: -q.sigma,
            coeff: Coeff::Numeric(z * q.residue),
            kind: TermKind::Bulk(i as u32),
            log_periodic: None,
        });
    }
    for p in &string_p {
        out.push(ExpansionTerm {
            exponent: -p.sigma,
            coeff: Coeff::Numeric(p.residue * (mellin.evaluator)(p.sigma)?),
            kind: TermKind::Pole(p.sigma),
            log_periodic: None,
        });
    }
    sort_by_exponent(&mut out);
    Ok(out)
}
