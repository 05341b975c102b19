//! Closed-form scale factors for numeric evaluation of `a_{2M}`.

use crate::symcore::SymPoly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScaleFactor {
    /// `a = exp(H t)`.
    Inflation { h: f64 },
    /// `a = (2 H t)^{1/2}`.
    Radiation { h: f64 },
    /// `a = (3 H t / 2)^{2/3}`.
    Matter { h: f64 },
    /// `a = H t`.
    Empty { h: f64 },
    /// `a = sin t`.
    Sphere,
}

fn power_law_deriv(c: f64, alpha: f64, k: u32, t: f64) -> f64 {
    let mut falling = 1.0;
    for i in 0..k {
        falling *= alpha - i as f64;
    }
    c * falling * t.powf(alpha - k as f64)
}

impl ScaleFactor {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Inflation { .. } => "inflation",
            Self::Radiation { .. } => "radiation",
            Self::Matter { .. } => "matter",
            Self::Empty { .. } => "empty",
            Self::Sphere => "sphere",
        }
    }

    /// `a^{(k)}(t)`.
    pub fn deriv(&self, k: u32, t: f64) -> f64 {
        match *self {
            Self::Inflation { h } => h.powi(k as i32) * (h * t).exp(),
            Self::Radiation { h } => power_law_deriv((2.0 * h).sqrt(), 0.5, k, t),
            Self::Matter { h } => power_law_deriv((1.5 * h).powf(2.0 / 3.0), 2.0 / 3.0, k, t),
            Self::Empty { h } => match k {
                0 => h * t,
                1 => h,
                _ => 0.0,
            },
            Self::Sphere => match k % 4 {
                0 => t.sin(),
                1 => t.cos(),
                2 => -t.sin(),
                _ => -t.cos(),
            },
        }
    }

    /// Whether `t` lies in the domain where `a > 0`.
    pub fn admissible(&self, t: f64) -> bool {
        match self {
            Self::Inflation { .. } => t.is_finite(),
            Self::Sphere => t > 0.0 && t < std::f64::consts::PI,
            _ => t > 0.0,
        }
    }
}

/// Numeric value of `p` along `family` at time `t`.
pub fn eval_family(p: &SymPoly, family: ScaleFactor, t: f64) -> f64 {
    p.eval_numeric(&|k| family.deriv(k, t))
}
