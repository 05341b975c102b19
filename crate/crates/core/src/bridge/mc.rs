//! Monte-Carlo estimates of bridge moments.
//!
//! Each path has its own ChaCha stream selected by the path index, and
//! per-chunk sums are combined in chunk order, so results do not depend on
//! the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::MomentSpec;
use crate::{Error, Result};

const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n_paths: usize,
}

impl McEstimate {
    /// `|mean - exact| <= k * std_err`.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.std_err
    }
}

/// Samples one bridge path on `n_grid` intervals and returns
/// `x_k = int_0^1 alpha^k` (trapezoid rule) for `k = 1..=max_k`.
fn sample_xs(rng: &mut ChaCha8Rng, n_grid: usize, max_k: usize, alpha: &mut [f64], xs: &mut [f64]) {
    let h = 1.0 / n_grid as f64;
    let sd = h.sqrt();
    alpha[0] = 0.0;
    for i in 1..=n_grid {
        let z: f64 = rng.sample(StandardNormal);
        alpha[i] = alpha[i - 1] + sd * z;
    }
    let w1 = alpha[n_grid];
    for (i, a) in alpha.iter_mut().enumerate() {
        *a -= i as f64 * h * w1;
    }
    for x in xs.iter_mut() {
        *x = 0.0;
    }
    for (i, &a) in alpha.iter().enumerate() {
        let w = if i == 0 || i == n_grid { 0.5 * h } else { h };
        let mut p = 1.0;
        for k in 0..max_k {
            p *= a;
            xs[k] += w * p;
        }
    }
}

fn spec_value(spec: &MomentSpec, xs: &[f64]) -> f64 {
    spec.0.iter().map(|(&k, &m)| xs[k as usize - 1].powi(m as i32)).product()
}

/// Estimates several moments from the same set of paths.
pub fn mc_estimate_many(specs: &[MomentSpec], n_paths: usize, n_grid: usize, seed: u64) -> Result<Vec<McEstimate>> {
    if n_paths < 1000 {
        return Err(Error::Validation(format!("need at least 1000 paths, got {n_paths}")));
    }
    if n_grid < 64 {
        return Err(Error::Validation(format!("need at least 64 grid intervals, got {n_grid}")));
    }
    let max_k = specs.iter().flat_map(|s| s.0.keys().copied()).max().unwrap_or(1) as usize;
    let nspec = specs.len();
    let n_chunks = n_paths.div_ceil(CHUNK);
    let partial: Vec<Vec<(f64, f64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut alpha = vec![0.0; n_grid + 1];
            let mut xs = vec![0.0; max_k];
            let mut acc = vec![(0.0, 0.0); nspec];
            for path in c * CHUNK..((c + 1) * CHUNK).min(n_paths) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(path as u64);
                sample_xs(&mut rng, n_grid, max_k, &mut alpha, &mut xs);
                for (a, s) in acc.iter_mut().zip(specs) {
                    let v = spec_value(s, &xs);
                    a.0 += v;
                    a.1 += v * v;
                }
            }
            acc
        })
        .collect();
    let n = n_paths as f64;
    Ok((0..nspec)
        .map(|i| {
            let (s, s2) = partial.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p[i].0, acc.1 + p[i].1));
            let mean = s / n;
            let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
            McEstimate { mean, std_err: (var / n).sqrt(), n_paths }
        })
        .collect())
}

pub fn mc_estimate(spec: &MomentSpec, n_paths: usize, n_grid: usize, seed: u64) -> Result<McEstimate> {
    Ok(mc_estimate_many(std::slice::from_ref(spec), n_paths, n_grid, seed)?[0])
}
