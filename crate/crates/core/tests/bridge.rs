use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use specexp::bell::factorial;
use specexp::bridge::{
    mc_estimate_many, moment_product, moment_product_via_polynomials, monomial_bridge_polynomial,
    pairing_integral, perfect_matchings, simplex_integrate, subset_simplex_integral, word_integral,
    word_integral_closed, x1_even_moment, MomentSpec, VPoly,
};

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn words_up_to(total: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for first in 1..=rem {
            cur.push(first);
            rec(rem - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, &mut Vec::new(), &mut out);
    out
}

/// Wick's theorem by brute force over all matchings of the expanded points.
fn wick_brute(w: &[u32]) -> VPoly {
    let n = w.len();
    let owner: Vec<usize> = w.iter().enumerate().flat_map(|(j, &i)| std::iter::repeat_n(j, i as usize)).collect();
    let mut out = VPoly::constant(n, BigRational::zero());
    if owner.len() % 2 == 1 {
        return out;
    }
    for m in perfect_matchings(owner.len() / 2) {
        let mut t = VPoly::one(n);
        for (a, b) in m {
            t = t.mul(&VPoly::covariance(n, owner[a - 1] + 1, owner[b - 1] + 1));
        }
        out = out.add(&t);
    }
    out
}

#[test]
fn pair_matrices_match_brute_force_wick() {
    for w in words_up_to(6) {
        assert_eq!(monomial_bridge_polynomial(&w), wick_brute(&w), "{w:?}");
    }
}

#[test]
fn closed_form_matches_polynomial_route() {
    for w in words_up_to(8) {
        let poly = simplex_integrate(&monomial_bridge_polynomial(&w));
        assert_eq!(word_integral_closed(&w), poly, "{w:?}");
    }
}

#[test]
fn even_moments_of_x1() {
    // x_1 is centred Gaussian with variance 1/12.
    for n in 1..=3usize {
        let double_fact: i64 = (1..=2 * n as i64 - 1).step_by(2).product();
        let want = r(double_fact, 12i64.pow(n as u32));
        assert_eq!(moment_product(&MomentSpec::from_pairs(&[(1, 2 * n as u32)])), want);
        assert_eq!(x1_even_moment(n), want);
        let ordered = pairing_integral(n) * BigRational::from_integer(factorial(2 * n as u32));
        assert_eq!(ordered, want, "pairing integral n={n}");
    }
}

#[test]
fn subset_integrals_reduce_to_monomials() {
    // Doubling selected variables gives the monomial simplex integral of the indicator vector.
    for n in 1..=5usize {
        for mask in 0u32..(1 << n) {
            let js: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).map(|j| j + 1).collect();
            let mut p = VPoly::one(n);
            for &j in &js {
                p = p.mul(&VPoly::var(n, j));
            }
            assert_eq!(subset_simplex_integral(n, &js), simplex_integrate(&p), "n={n} {js:?}");
        }
    }
}

#[test]
fn known_low_moments() {
    // values from direct integration of the covariance kernel
    assert_eq!(moment_product(&MomentSpec::from_pairs(&[(2, 1)])), r(1, 6));
    assert_eq!(moment_product(&MomentSpec::from_pairs(&[(2, 2)])), r(1, 20));
    assert_eq!(moment_product(&MomentSpec::from_pairs(&[(4, 1)])), r(1, 10));
}

#[test]
fn monte_carlo_agrees() {
    let specs = vec![
        MomentSpec::from_pairs(&[(1, 2)]),
        MomentSpec::from_pairs(&[(2, 1)]),
        MomentSpec::from_pairs(&[(1, 1), (3, 1)]),
        MomentSpec::from_pairs(&[(2, 2)]),
    ];
    let est = mc_estimate_many(&specs, 20_000, 256, 7).unwrap();
    for (s, e) in specs.iter().zip(&est) {
        let exact = specexp::symcore::ratio_to_f64(&moment_product(s));
        // discretisation bias of the trapezoid rule is O(1/n_grid)
        assert!((e.mean - exact).abs() <= 5.0 * e.std_err + 2e-3, "{s:?}: {} vs {exact}", e.mean);
    }
    let again = mc_estimate_many(&specs, 20_000, 256, 7).unwrap();
    assert_eq!(est, again);
    assert!(mc_estimate_many(&specs, 10, 256, 7).is_err());
}

proptest! {
    #[test]
    fn two_routes_agree(pairs in proptest::collection::btree_map(1u32..=4, 1u32..=2, 1..=3)) {
        let spec = MomentSpec(pairs);
        prop_assume!(spec.weight() <= 8);
        prop_assert_eq!(moment_product(&spec), moment_product_via_polynomials(&spec));
    }

    #[test]
    fn odd_weight_vanishes(w in proptest::collection::vec(1u32..=4, 1..=4)) {
        prop_assume!(w.iter().sum::<u32>() % 2 == 1);
        prop_assert!(word_integral(&w).is_zero());
    }
}
