//! Numerical quadrature: adaptive Gauss-Kronrod on intervals, double-exponential
//! rules on the half line, and randomly shifted Halton points on the cube.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, Result};

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 panel: (Kronrod estimate, |Kronrod - Gauss|).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive G7/K15 integration of `f` over `[a, b]`; stops once the
/// summed error estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn adaptive_gk(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_panels: usize) -> Result<f64> {
    let mut panels = vec![(a, b, gk15(f, a, b))];
    loop {
        let total: f64 = panels.iter().map(|p| p.2 .0).sum();
        let err: f64 = panels.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::Numeric(format!(
                "adaptive quadrature did not converge on [{a}, {b}]: estimate {total}, error {err}"
            )));
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("non-empty");
        let (lo, hi, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gk15(f, lo, mid)));
        panels.push((mid, hi, gk15(f, mid, hi)));
    }
}

/// `int_0^inf f(x) dx` by the exp-sinh rule `x = exp(pi/2 sinh t)`, halving the
/// step until successive estimates agree to `tol` (relative to `max(1, |I|)`).
pub fn exp_sinh(f: &dyn Fn(f64) -> Complex64, tol: f64) -> Result<Complex64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let term = |t: f64| -> Complex64 {
        let x = (half_pi * t.sinh()).exp();
        if x == 0.0 || !x.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let w = half_pi * t.cosh() * x;
        let v = f(x) * w;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let t_max = 6.0;
    let mut h = 0.5;
    let n0 = (t_max / h) as i64;
    let mut sum: Complex64 = (-n0..=n0).map(|k| term(k as f64 * h)).sum();
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let n = (t_max / h) as i64;
        // new points are the odd multiples of the halved step
        let add: Complex64 = (-n..=n).filter(|k| k % 2 != 0).map(|k| term(k as f64 * h)).sum();
        sum += add;
        let est = sum * h;
        if (est - prev).norm() <= tol * est.norm().max(1.0) {
            return Ok(est);
        }
        prev = est;
    }
    Err(Error::Numeric(format!("exp-sinh quadrature did not settle (last {prev})")))
}

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `i` in `base`.
pub fn halton(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Mean of `f` over `n_points` Halton points in `[0,1]^dim`, shifted modulo 1
/// by a seeded random vector. Parallel chunks are summed in chunk order.
pub fn qmc_cube(f: &(dyn Fn(&[f64]) -> f64 + Sync), dim: usize, n_points: u64, seed: u64) -> Result<f64> {
    if dim == 0 || dim > PRIMES.len() {
        return Err(Error::Validation(format!("QMC dimension {dim} outside 1..={}", PRIMES.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    const CHUNK: u64 = 1 << 16;
    let n_chunks = n_points.div_ceil(CHUNK);
    let sums: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut x = vec![0.0; dim];
            let mut s = 0.0;
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_points) {
                for (d, xd) in x.iter_mut().enumerate() {
                    let v = halton(i + 1, PRIMES[d]) + shift[d];
                    *xd = v - v.floor();
                }
                s += f(&x);
            }
            s
        })
        .collect();
    Ok(sums.iter().sum::<f64>() / n_points as f64)
}

/// Maps a point of the unit cube onto the ordered simplex
/// `0 <= v_1 <= ... <= v_n <= 1`; returns the Jacobian.
pub fn cube_to_simplex(x: &[f64], v: &mut [f64]) -> f64 {
    let n = x.len();
    let mut jac = 1.0;
    let mut upper = 1.0;
    for k in (0..n).rev() {
        v[k] = x[k] * upper;
        if k + 1 < n {
            jac *= upper;
        }
        upper = v[k];
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_and_exp() {
        let v = adaptive_gk(&|x| x.powi(5), 0.0, 2.0, 1e-13, 1e-13, 100).unwrap();
        assert!((v - 64.0 / 6.0).abs() < 1e-12);
        let v = adaptive_gk(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-14, 1e-14, 200).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exp_sinh_gamma() {
        // int_0^inf x^{1/2} e^{-x} = Gamma(3/2)
        let v = exp_sinh(&|x: f64| Complex64::new(x.sqrt() * (-x).exp(), 0.0), 1e-13).unwrap();
        assert!((v.re - 0.886226925452758013649083741671).abs() < 1e-12);
    }

    #[test]
    fn simplex_volume() {
        let mut v = vec![0.0; 3];
        let vol = qmc_cube(
            &|x: &[f64]| {
                let mut v = [0.0; 3];
                cube_to_simplex(x, &mut v)
            },
            3,
            1 << 14,
            1,
        )
        .unwrap();
        assert!((vol - 1.0 / 6.0).abs() < 1e-4);
        let j = cube_to_simplex(&[0.5, 0.5, 0.5], &mut v);
        assert_eq!(v, vec![0.125, 0.25, 0.5]);
        assert_eq!(j, 0.5 * 0.25);
    }
}
