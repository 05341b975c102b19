//! Numerical checks of the Dawson simplex formulas and the Gaussian/Mellin
//! identities for `(x^2 - 1/4) exp(-x^2 U -/+ x V)`.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dawson, gamma, kummer_1f1};
use crate::quad::{adaptive_gk, cube_to_simplex, exp_sinh, qmc_cube};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub tolerance: f64,
    pub max_panels: usize,
    pub qmc_points: u64,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { tolerance: 1e-9, max_panels: 4000, qmc_points: 10_000_000, seed: 0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Validation(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// Outcome of one identity check; `pass` is `|lhs - rhs| <= tol * max(1, |rhs|)`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Verification {
    pub name: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Verification {
    pub fn new(name: impl Into<String>, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let abs_diff = (lhs - rhs).norm();
        Self {
            name: name.into(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_diff,
            tol,
            pass: abs_diff <= tol * rhs.norm().max(1.0),
        }
    }

    pub fn real(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0), tol)
    }
}

#[derive(Clone, Debug, Deserialize)]
struct DawsonTerm {
    coeff: f64,
    arg: [usize; 2],
    den: Vec<[usize; 2]>,
    #[serde(default)]
    num: Option<usize>,
}

fn dawson_terms() -> &'static BTreeMap<String, Vec<DawsonTerm>> {
    static T: OnceLock<BTreeMap<String, Vec<DawsonTerm>>> = OnceLock::new();
    T.get_or_init(|| {
        serde_json::from_str(include_str!("../../data/dawson_simplex.json")).expect("bundled Dawson table parses")
    })
}

fn interval_sum(u: &[f64], iv: [usize; 2]) -> f64 {
    u[iv[0] - 1..iv[1]].iter().sum()
}

/// Closed Dawson combination for `int_{Delta^n} exp(-1/2 sum c_{jm} u_j u_m)`.
pub fn dawson_simplex_rhs(u: &[f64]) -> Result<f64> {
    let n = u.len();
    let terms = dawson_terms()
        .get(&n.to_string())
        .ok_or_else(|| Error::Validation(format!("no Dawson formula for n = {n}")))?;
    let scale = u.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    let mut total = 0.0;
    for t in terms {
        let mut v = t.coeff * SQRT_2 * dawson(interval_sum(u, t.arg) / (2.0 * SQRT_2));
        if let Some(k) = t.num {
            v *= u[k - 1];
        }
        for &d in &t.den {
            let s = interval_sum(u, d);
            if s.abs() <= 1e-12 * scale {
                return Err(Error::Validation(format!("degenerate u: partial sum u_{}..u_{} vanishes", d[0], d[1])));
            }
            v /= s;
        }
        total += v;
    }
    Ok(total)
}

fn quad_form(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut q = 0.0;
    for j in 0..n {
        q += v[j] * (1.0 - v[j]) * u[j] * u[j];
        for m in j + 1..n {
            q += 2.0 * v[j] * (1.0 - v[m]) * u[j] * u[m];
        }
    }
    q
}

fn simplex_integrand(u: &[f64], x: &[f64]) -> f64 {
    let mut v = [0.0; 8];
    let v = &mut v[..x.len()];
    let jac = cube_to_simplex(x, v);
    jac * (-0.5 * quad_form(u, v)).exp()
}

/// `int_{Delta^n} exp(-1/2 sum_{j,m} c_{jm} u_j u_m) dv` with the bridge
/// covariance `c_{jm} = v_min (1 - v_max)`. Nested adaptive rules for `n <= 3`,
/// shifted Halton points for larger `n`.
pub fn simplex_gaussian_lhs(u: &[f64], quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let n = u.len();
    if n == 0 || n > 8 {
        return Err(Error::Validation(format!("simplex dimension {n} outside 1..=8")));
    }
    if n >= 4 {
        return qmc_cube(&|x: &[f64]| simplex_integrand(u, x), n, quad.qmc_points, quad.seed);
    }
    let failed = Cell::new(false);
    let tol = quad.tolerance * 1e-2;
    fn level(k: usize, x: &mut [f64], u: &[f64], tol: f64, maxp: usize, failed: &Cell<bool>) -> f64 {
        if k == x.len() {
            return simplex_integrand(u, x);
        }
        let base = x.to_vec();
        let f = |t: f64| {
            let mut inner = base.clone();
            inner[k] = t;
            level(k + 1, &mut inner, u, tol, maxp, failed)
        };
        match adaptive_gk(&f, 0.0, 1.0, tol, tol, maxp) {
            Ok(v) => v,
            Err(_) => {
                failed.set(true);
                f64::NAN
            }
        }
    }
    let mut x = vec![0.0; n];
    let v = level(0, &mut x, u, tol, quad.max_panels, &failed);
    if failed.get() || !v.is_finite() {
        return Err(Error::Numeric("nested simplex quadrature did not converge".into()));
    }
    Ok(v)
}

/// Simplex Gaussian integral against its Dawson closed form.
pub fn verify_dawson_simplex(u: &[f64], quad: &QuadratureSpec) -> Result<Verification> {
    let rhs = dawson_simplex_rhs(u)?;
    let lhs = simplex_gaussian_lhs(u, quad)?;
    Ok(Verification::real(format!("dawson_simplex n={}", u.len()), lhs, rhs, quad.tolerance))
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0) {
        return Err(Error::Validation(format!("U must be positive, got {u}")));
    }
    Ok(())
}

/// `int_R (x^2 - 1/4) exp(-x^2 U - x V) dx` against
/// `sqrt(pi) exp(V^2/4U) (-U^2 + 2U + V^2) / (4 U^{5/2})`.
pub fn verify_gaussian_multiplicity(u: f64, v: f64, quad: &QuadratureSpec) -> Result<Verification> {
    check_u(u)?;
    let x0 = -v / (2.0 * u);
    let half = 12.0 / u.sqrt();
    let lhs = adaptive_gk(
        &|x| (x * x - 0.25) * (-x * x * u - x * v).exp(),
        x0 - half,
        x0 + half,
        1e-300,
        quad.tolerance * 1e-2,
        quad.max_panels,
    )?;
    let rhs = PI.sqrt() * (v * v / (4.0 * u)).exp() * (-u * u + 2.0 * u + v * v) / (4.0 * u.powf(2.5));
    Ok(Verification::real("gaussian_multiplicity", lhs, rhs, quad.tolerance))
}

fn cpow(base: f64, e: Complex64) -> Complex64 {
    (e * base.ln()).exp()
}

fn f11(a: Complex64, b: f64, w: f64) -> Result<Complex64> {
    kummer_1f1(a, Complex64::new(b, 0.0), Complex64::new(w, 0.0))
}

/// `int_0^inf x^{z-1} (x^2 - 1/4) exp(-x^2 U + sign x V) dx` by quadrature.
pub fn half_line_mellin(z: Complex64, u: f64, v: f64, sign: f64, tol: f64) -> Result<Complex64> {
    check_u(u)?;
    if z.re <= 0.0 {
        return Err(Error::Divergent(format!("Mellin integral diverges at the origin for Re z = {}", z.re)));
    }
    exp_sinh(&|x: f64| cpow(x, z - 1.0) * ((x * x - 0.25) * (-x * x * u + sign * x * v).exp()), tol)
}

fn mellin_pm_closed(z: Complex64, u: f64, v: f64, sign: f64) -> Result<Complex64> {
    check_u(u)?;
    let w = v * v / (4.0 * u);
    let even = gamma(z / 2.0) * u.sqrt() * (-f11(z / 2.0, 0.5, w)? * u + z * 2.0 * f11((z + 2.0) / 2.0, 0.5, w)?);
    let odd = gamma((z + 1.0) / 2.0)
        * v
        * (f11((z + 1.0) / 2.0, 1.5, w)? * u - (z + 1.0) * 2.0 * f11((z + 3.0) / 2.0, 1.5, w)?);
    Ok(cpow(u, -(z + 3.0) / 2.0) / 8.0 * (even + odd * sign))
}

/// Closed form of the Mellin transform of `(x^2 - 1/4) exp(-x^2 U - x V)`.
pub fn mellin_minus_closed(z: Complex64, u: f64, v: f64) -> Result<Complex64> {
    mellin_pm_closed(z, u, v, 1.0)
}

/// Closed form of the Mellin transform of `(x^2 - 1/4) exp(-x^2 U + x V)`.
pub fn mellin_plus_closed(z: Complex64, u: f64, v: f64) -> Result<Complex64> {
    mellin_pm_closed(z, u, v, -1.0)
}

/// Sum of both transforms:
/// `-1/4 U^{-1-z/2} Gamma(z/2) (U 1F1(z/2, 1/2, w) - 2z 1F1(1+z/2, 1/2, w))`, `w = V^2/4U`.
pub fn mellin_sum_closed(z: Complex64, u: f64, v: f64) -> Result<Complex64> {
    check_u(u)?;
    let w = v * v / (4.0 * u);
    Ok(-cpow(u, -1.0 - z / 2.0) / 4.0
        * gamma(z / 2.0)
        * (f11(z / 2.0, 0.5, w)? * u - z * 2.0 * f11(z / 2.0 + 1.0, 0.5, w)?))
}

/// `H(z) = U^{-z/2} Gamma(z/2) 1F1(z/2, 1/2, V^2/4U)`.
fn h_fn(z: Complex64, u: f64, v: f64) -> Result<Complex64> {
    Ok(cpow(u, -z / 2.0) * gamma(z / 2.0) * f11(z / 2.0, 0.5, v * v / (4.0 * u))?)
}

/// The multiplicity integral as the `z = 1` value of the Mellin sum.
pub fn verify_mellin_z1(u: f64, v: f64) -> Result<Verification> {
    let lhs = mellin_sum_closed(Complex64::new(1.0, 0.0), u, v)?;
    let rhs = (v * v / (4.0 * u)).exp() * PI.sqrt() / 4.0
        * (-u.powf(-0.5) + 2.0 * u.powf(-1.5) + v * v * u.powf(-2.5));
    Ok(Verification::new("mellin_z1", lhs, Complex64::new(rhs, 0.0), 1e-9))
}

/// Quadrature against the closed forms for each sign and for the sum.
pub fn verify_mellin_pm(z: Complex64, u: f64, v: f64, quad: &QuadratureSpec) -> Result<Vec<Verification>> {
    let qtol = quad.tolerance * 1e-2;
    let minus_q = half_line_mellin(z, u, v, -1.0, qtol)?;
    let plus_q = half_line_mellin(z, u, v, 1.0, qtol)?;
    let minus_c = mellin_minus_closed(z, u, v)?;
    let plus_c = mellin_plus_closed(z, u, v)?;
    let sum_c = mellin_sum_closed(z, u, v)?;
    Ok(vec![
        Verification::new("mellin_minus", minus_q, minus_c, quad.tolerance),
        Verification::new("mellin_plus", plus_q, plus_c, quad.tolerance),
        Verification::new("mellin_sum_quadrature", minus_q + plus_q, sum_c, quad.tolerance),
        Verification::new("mellin_sum_closed", minus_c + plus_c, sum_c, quad.tolerance),
    ])
}

/// `-1/4 a^z H(z) + a^{z+2} H(z+2)` against the Mellin sum evaluated at the
/// rescaled `U -> a^{-2} U`, `V -> a^{-1} V`.
pub fn verify_mellin_scaling(z: Complex64, u: f64, v: f64, a: f64, tol: f64) -> Result<Verification> {
    if !(a > 0.0) {
        return Err(Error::Validation(format!("scale factor must be positive, got {a}")));
    }
    let lhs = -cpow(a, z) / 4.0 * h_fn(z, u, v)? + cpow(a, z + 2.0) * h_fn(z + 2.0, u, v)?;
    let rhs = mellin_sum_closed(z, u / (a * a), v / a)?;
    Ok(Verification::new("mellin_scaling", lhs, rhs, tol))
}
