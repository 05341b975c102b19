//! Exact combinatorial expansion of the spectral action for Robertson-Walker
//! metrics, Brownian bridge integrals, and spectral actions of packed
//! 4-sphere geometries driven by fractal-string zeta functions.
//!
//! Module map:
//! - [`symcore`]: exact scalars in Q(sqrt 2) and polynomials in A, B and their
//!   derivatives, plus the rewrite into the scale factor a(t).
//! - [`bell`]: partial Bell polynomials and Faa di Bruno over generic carriers.
//! - [`bridge`]: Brownian bridge moments via simplex integrals, shuffles and
//!   Monte-Carlo cross-checks.
//! - [`expansion`]: the coefficients C^{(r,m)}_M and the heat coefficients a_{2M}.
//! - [`zeta`]: Riemann zeta, exact zeta tokens, fractal strings.
//! - [`pscc`]: heat-trace and spectral-action expansions for packed geometries.
//! - [`specfun`]: Dawson, Kummer 1F1, Gamma and closed-form verifications.

pub mod bell;
pub mod bridge;
mod error;
pub mod expansion;
pub mod golden;
pub mod pscc;
pub mod quad;
pub mod specfun;
pub mod symcore;
pub mod zeta;

pub use error::{Error, Result};
