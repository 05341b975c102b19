use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use specexp::zeta::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

// mpmath, 40 digits
const REFS: [(f64, f64, f64, f64); 10] = [
    (2.0, 0.0, 1.644934066848226436472415166646025189219, 0.0),
    (3.0, 0.0, 1.202056903159594285399738161511449990765, 0.0),
    (4.0, 0.0, 1.082323233711138191516003696541167902775, 0.0),
    (7.0, 0.0, 1.0083492773819228268397975498497967596, 0.0),
    (8.0, 0.0, 1.004077356197944339378685238508652465259, 0.0),
    (-19.5, 45.0, 163171357030075749.0508451090478523632052, -169023129007656307.9251349341342830729149),
    (3.0, -40.0, 0.9326091439284983605695287924938164623181, 0.06375750607117759019147582076935661160887),
    (0.3, 2.0, 0.3853103509076438973981375152478516679134, -0.2825282116864839871391142066235937506391),
    (-5.5, 1.0, -0.005872454182014571276827430540517993002803, -0.005932366914551367161392158055114267683224),
    (-0.3, 0.7, -0.1197042110935844941250608571203635609, -0.2628611517598603503319274143534583358373),
];

#[test]
fn riemann_reference_values() {
    for &(sr, si, zr, zi) in &REFS {
        let v = riemann_zeta(c(sr, si)).unwrap();
        assert!(rel(v, c(zr, zi)) < 1e-12, "zeta({sr}+{si}i) = {v}");
    }
    // near the first zero only absolute accuracy is meaningful
    let v = riemann_zeta(c(0.5, 14.134725)).unwrap();
    let r = c(0.00000001767429841384903914977300014159216191165, -0.0000001110202893092311674710850082684420954629);
    assert!((v - r).norm() < 1e-13, "{v}");
    assert!(riemann_zeta(c(1.0, 0.0)).is_err());
}

#[test]
fn integer_fast_paths() {
    assert_eq!(riemann_zeta_real(-1.0).unwrap(), -1.0 / 12.0);
    assert_eq!(riemann_zeta_real(0.0).unwrap(), -0.5);
    assert_eq!(riemann_zeta_real(-4.0).unwrap(), 0.0);
    assert!((riemann_zeta_real(2.0).unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    // the fast path and the numeric route agree just off the integers
    for n in [-7.0, -3.0, 2.0, 6.0] {
        let exact = riemann_zeta_real(n).unwrap();
        let off = riemann_zeta(c(n, 1e-9)).unwrap().re;
        assert!((exact - off).abs() < 1e-7 * exact.abs().max(1.0), "{n}");
    }
}

#[test]
fn derivative_by_contour() {
    let d = zeta_derivative(c(0.5, 21.022039638771554993)).unwrap();
    assert!(rel(d, c(1.109295563462671139341106523534981808907, -0.2487297885164987993640523515488608076194)) < 1e-11);
}

#[test]
fn zero_table_verifies() {
    let z = zero_ordinates().unwrap();
    assert_eq!(z.len(), 25);
    assert!((z[0] - 14.134725141734693790457).abs() < 1e-14);
    let table = include_str!("../data/zeta_zeros.txt");
    let checks = check_zero_table(&parse_zero_table(table).unwrap()).unwrap();
    assert!(checks.iter().all(|c| c.bracketed));
    // a shifted ordinate is not a zero
    let bad = check_zero_table(&[14.2]).unwrap();
    assert!(!bad[0].bracketed);
    assert!(parse_zero_table("14.1\n13.0\n").is_err());
}

#[test]
fn located_zeros_match_table() {
    let found = locate_zero_ordinates(10.0, 33.0, 0.05).unwrap();
    let table = zero_ordinates().unwrap();
    assert_eq!(found.len(), 5);
    for (f, t) in found.iter().zip(table) {
        assert!((f - t).abs() < 1e-10);
    }
}

#[test]
fn exact_tokens() {
    assert_eq!(ford_zeta_exact(0).unwrap(), ExactValue::from_ratio(1, 6));
    assert_eq!(ford_zeta_exact(2).unwrap().to_string(), "45*zeta(3)/(2*pi^4)");
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(ford_zeta_exact(4).unwrap().scale(&half).to_string(), "4725*zeta(7)/(16*pi^8)");
    assert!(ford_zeta_exact(1).is_err());
    assert!(ford_zeta_exact(-2).is_err());
    let s = zeta_exact(3).unwrap().add(&zeta_exact(2).unwrap()).sub(&ExactValue::from_ratio(1, 3));
    assert_eq!(s.to_string(), "-1/3 + zeta(3) + pi^2/6");
    assert!((s.to_f64() - (1.202056903159594285 + 1.644934066848226436 - 1.0 / 3.0)).abs() < 1e-14);
    assert_eq!(ExactValue::zero().to_string(), "0");
}

#[test]
fn ford_numeric_matches_exact_and_oracle() {
    assert!((ford_zeta(c(2.0, 0.0)).unwrap().re - 0.277656633831537029293867194653537633884).abs() < 1e-14);
    assert!((ford_zeta(c(4.0, 0.0)).unwrap().re - 0.06276591086070266872611766389101494109639).abs() < 1e-15);
    assert!((ford_zeta_exact(2).unwrap().to_f64() - 0.277656633831537029293867194653537633884).abs() < 1e-14);
    let v = ford_zeta(c(2.5, 3.0)).unwrap();
    assert!(rel(v, c(-0.08163948938087496060965233513876522733096, -0.1547745321023300354110611526037206368548)) < 1e-12);
    assert_eq!(ford_zeta(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
    assert!(ford_zeta(c(1.0, 0.0)).is_err());
    assert!(ford_zeta(c(-3.0, 0.0)).is_err());
}

#[test]
fn ford_truncation_converges() {
    for s in [2.0, 4.0] {
        let target = ford_zeta(c(s, 0.0)).unwrap().re;
        let partial = ford_partial_sum(c(s, 0.0), 1_000_000).re;
        let bound = ford_tail_bound(s, 1_000_000);
        assert!(target - partial >= -1e-15 && target - partial <= bound + 1e-15);
        assert!((partial - target).abs() < 1e-6 * target);
    }
    // the explicit prefix string agrees with the fast partial sum
    let pre = FractalString::ford_prefix(200);
    let a = string_zeta(&pre, c(2.0, 0.0)).unwrap();
    assert!(rel(a, ford_partial_sum(c(2.0, 0.0), 200)) < 1e-13);
}

#[test]
fn residue_at_one_along_four_directions() {
    let target = 1.5 / std::f64::consts::PI.powi(2);
    for dir in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
        let h = dir * 1e-7;
        let v = h * ford_zeta(c(1.0, 0.0) + h).unwrap();
        assert!((v - target).norm() < 1e-6, "{dir}: {v}");
    }
}

#[test]
fn ford_pole_table() {
    let p = string_poles(&FractalString::Ford, &Strip::new((0.9, 1.1), (-1.0, 1.0))).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].sigma, c(1.0, 0.0));
    assert!((p[0].residue.re - 1.5 / std::f64::consts::PI.powi(2)).abs() < 1e-15);

    // first nontrivial pair: rho/2 with Im near 7.07
    let p = string_poles(&FractalString::Ford, &Strip::new((0.0, 0.5), (7.0, 7.2))).unwrap();
    assert_eq!(p.len(), 1);
    let located = locate_zero_ordinates(14.0, 14.4, 0.01).unwrap();
    assert!((p[0].sigma - c(0.25, located[0] / 2.0)).norm() < 1e-10);
    let r = c(-0.0550467608419878037423363690514889591359, -0.6472719932015046328307559264601584569474);
    assert!(rel(p[0].residue, r) < 1e-10, "{}", p[0].residue);

    // conjugate symmetry
    let all = string_poles(&FractalString::Ford, &Strip::new((0.0, 0.5), (-50.0, 50.0))).unwrap();
    assert_eq!(all.len(), 50);
    for q in &all {
        let conj = all.iter().find(|x| (x.sigma - q.sigma.conj()).norm() < 1e-12).unwrap();
        assert!((conj.residue - q.residue.conj()).norm() < 1e-12);
    }
}

#[test]
fn trivial_residues_two_routes() {
    let refs = [
        -0.2736865555240411751473531707969583882262,
        -0.9940750712795082112009995289349112661961,
        -2.824974081354486362467619989349985571176,
    ];
    for (k, r) in (1..=3u32).zip(refs) {
        let exact = ford_trivial_residue_exact(k).to_f64();
        assert!((exact - r).abs() < 1e-13 * r.abs(), "k={k}");
        // numeric differentiation of zeta(2s) at s = -k
        let s = c(-(k as f64), 0.0);
        let num = (-s * 2f64.ln()).exp() * riemann_zeta(s * 2.0 - 1.0).unwrap() / (zeta_derivative(s * 2.0).unwrap() * 2.0);
        assert!((num.re - r).abs() < 1e-10 * r.abs(), "k={k}: {num}");
    }
    let p = string_poles(&FractalString::Ford, &Strip::new((-3.5, -0.5), (0.0, 0.0))).unwrap();
    assert_eq!(p.iter().map(|q| q.sigma.re).collect::<Vec<_>>(), vec![-3.0, -2.0, -1.0]);
}

#[test]
fn truncated_strings() {
    let pair = FractalString::builtin("pair").unwrap();
    assert_eq!(string_zeta(&pair, c(2.0, 0.0)).unwrap(), c(1.25, 0.0));
    assert_eq!(string_zeta_exact(&pair, -4).unwrap().unwrap(), ExactValue::from_ratio(17, 1));
    assert_eq!(string_zeta_exact(&pair, 4).unwrap().unwrap(), ExactValue::from_ratio(17, 16));
    let empty = FractalString::truncated(vec![]).unwrap();
    assert_eq!(string_zeta(&empty, c(3.0, 1.0)).unwrap(), c(0.0, 0.0));
    assert!(string_poles(&pair, &Strip::vertical(-100.0, 100.0)).unwrap().is_empty());
    assert!(FractalString::from_reals(&[(0.0, 1)]).is_err());
    assert!(FractalString::from_reals(&[(1.0, 0)]).is_err());
    let reals = FractalString::from_reals(&[(0.3, 2)]).unwrap();
    assert!(string_zeta_exact(&reals, 2).unwrap().is_none());
}

#[test]
fn json_descriptors() {
    let s = FractalString::from_json_str(r#"{"variant":"truncated","radii":[[1,1],["1/2",1]]}"#).unwrap();
    assert_eq!(string_zeta_exact(&s, 3).unwrap().unwrap(), ExactValue::from_ratio(9, 8));
    let a = FractalString::from_json_str(
        r#"{"variant":"analytic","name":"toy","poles":[[1,0,2,0],[0.5,3,1,1]],"values":[[4,0,1.5,0]]}"#,
    )
    .unwrap();
    assert_eq!(string_zeta(&a, c(4.0, 0.0)).unwrap(), c(1.5, 0.0));
    assert!(string_zeta(&a, c(5.0, 0.0)).is_err());
    assert!(string_zeta(&a, c(1.0, 0.0)).is_err());
    assert_eq!(string_poles(&a, &Strip::new((0.0, 2.0), (-1.0, 1.0))).unwrap().len(), 1);
    assert!(matches!(FractalString::from_json_str(r#"{"variant":"ford"}"#).unwrap(), FractalString::Ford));
    assert!(FractalString::from_json_str(r#"{"variant":"analytic","poles":[[1,0,1,0],[1,0,2,0]]}"#).is_err());
    assert!(FractalString::from_json_str(r#"{"variant":"analytic","poles":[[1,0,0,0]]}"#).is_err());
    assert!(FractalString::from_json_str(r#"{"variant":"lattice"}"#).is_err());
}

#[test]
fn dirac_s4() {
    assert!((dirac_zeta_s4(c(0.0, 0.0), 1.0).unwrap().re - 11.0 / 90.0).abs() < 1e-15);
    assert!((dirac_zeta_s4(c(1.0, 0.0), 1.0).unwrap().re - 2.0 / 3.0).abs() < 1e-15);
    assert!(dirac_zeta_s4(c(2.0, 0.0), 1.0).is_err());
    assert!(dirac_zeta_s4(c(1.0, 0.0), -1.0).is_err());
    let s = c(5.5, 2.0);
    let v1 = dirac_zeta_s4(s, 1.0).unwrap();
    let v3 = dirac_zeta_s4(s, 3.0).unwrap();
    assert!(rel(v3, (s * 3f64.ln()).exp() * v1) < 1e-13);
}

#[test]
fn packed_product_structure() {
    // zeta of the packed Dirac operator is zeta_L times zeta_D
    let pair = FractalString::builtin("pair").unwrap();
    let s = c(7.0, 0.0);
    let prod = string_zeta(&pair, s).unwrap() * dirac_zeta_s4(s, 1.0).unwrap();
    let direct = packed_dirac_zeta_direct(&pair, s, 20000).unwrap();
    // tail of sum (4/3) m^{3-s} beyond 20000 is about 1e-13 relative
    assert!(rel(direct, prod) < 1e-11, "{direct} vs {prod}");
    // exact form at s = 0 for rational radii
    let e = string_zeta_exact(&pair, 0).unwrap().unwrap().mul(&dirac_zeta_s4_exact(0).unwrap());
    assert_eq!(e, ExactValue::from_ratio(11, 45));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflection_branch_continuous(im in -45.0f64..45.0) {
        // Re s = -1 separates the functional-equation branch from Euler-Maclaurin
        let lo = riemann_zeta(c(-1.0 - 1e-9, im)).unwrap();
        let hi = riemann_zeta(c(-1.0 + 1e-9, im)).unwrap();
        prop_assert!(rel(lo, hi) < 1e-7);
    }

    #[test]
    fn conjugate_symmetry(re in -10.0f64..30.0, im in 0.1f64..50.0) {
        let a = riemann_zeta(c(re, im)).unwrap();
        let b = riemann_zeta(c(re, -im)).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn euler_maclaurin_depth_stable(re in 1.5f64..20.0, im in -50.0f64..50.0) {
        // Dirichlet series with a large truncation as an independent route
        let s = c(re, im);
        let n = 200_000u64;
        let direct: Complex64 = (1..=n).rev().map(|k| (-s * (k as f64).ln()).exp()).sum::<Complex64>()
            + (-(s - 1.0) * (n as f64).ln()).exp() / (s - 1.0) - (-s * (n as f64).ln()).exp() * 0.5;
        prop_assert!(rel(riemann_zeta(s).unwrap(), direct) < 1e-9);
    }
}
