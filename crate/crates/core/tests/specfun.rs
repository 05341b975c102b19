use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specexp::specfun::{
    dawson, dawson_simplex_rhs, gamma, kummer_1f1, ln_gamma, verify_dawson_simplex, verify_gaussian_multiplicity,
    verify_mellin_pm, verify_mellin_scaling, verify_mellin_z1, QuadratureSpec,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

// Reference values below were computed with mpmath at 30 digits.

#[test]
fn dawson_reference_values() {
    let refs = [
        (0.001, 0.0009999993333336000207404),
        (0.5, 0.424436383502022295934),
        (0.924138873, 0.5410442246351816984727),
        (1.0, 0.5380795069127684191364),
        (2.5, 0.2230837221674354811269),
        (5.0, 0.1021340744242768354386),
        (6.0, 0.08454268897454385223907),
        (6.5, 0.07786781898606987138889),
        (10.0, 0.05025384718759852803275),
        (19.5, 0.02567487553566837368211),
        (-3.0, -0.1782710306105582873426),
    ];
    for (x, want) in refs {
        assert!((dawson(x) - want).abs() <= 1e-13, "F({x}) = {} vs {want}", dawson(x));
    }
    assert_eq!(dawson(0.0), 0.0);
}

#[test]
fn dawson_ode_residual() {
    let h = 1e-5;
    let mut x = -10.0;
    while x <= 10.0 {
        let d = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
        assert!((d - 1.0 + 2.0 * x * dawson(x)).abs() < 1e-9, "x = {x}");
        x += 0.05;
    }
}

#[test]
fn gamma_reference_values() {
    let refs = [
        (c(0.5, 0.0), c(1.772453850905516027298, 0.0)),
        (c(1.5, 2.0), c(0.1659151089389909548667, 0.1494634732664194873886)),
        (c(-2.5, 0.3), c(-0.6138229974377414904506, -0.2112326149370417766139)),
        (c(21.0, -50.0), c(-13.69355982646035753688, 18.11676566928266209022)),
        (c(0.25, 7.0), c(2.582003509403341808027e-5, -1.370386949767616847537e-6)),
    ];
    for (z, want) in refs {
        assert!(rel(gamma(z), want) < 1e-12, "Gamma({z}) = {}", gamma(z));
    }
    let lg = [
        (c(0.5, 0.0), c(0.5723649429247000870717, 0.0)),
        (c(1.5, 2.0), c(-1.499196372585095488364, 0.7332806816909978761252)),
        (c(21.0, -50.0), c(3.122792441635763674569, -173.7111575788442557981)),
        (c(0.25, 7.0), c(-10.56295333904000193272, 6.230160500529651312563)),
    ];
    for (z, want) in lg {
        assert!((ln_gamma(z) - want).norm() < 1e-12 * want.norm().max(1.0), "lnGamma({z}) = {}", ln_gamma(z));
    }
}

#[test]
fn kummer_reference_values() {
    let refs = [
        (c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(std::f64::consts::E, 0.0)),
        (c(0.7, 0.3), c(0.5, 0.0), c(3.2, 0.0), c(34.83020527368410775549, 28.57979105132076651027)),
        (c(1.2, -0.8), c(1.5, 0.0), c(20.0, 0.0), c(-214707535.8991906457473, -153575967.6918362561278)),
        (c(2.5, 0.0), c(0.5, 0.0), c(45.0, 0.0), c(1.006456349166145596977e23, 0.0)),
        (c(0.5, 0.5), c(1.5, 0.0), c(-30.0, 0.0), c(-0.06938496381163440245288, -0.1813253028994705270704)),
        (c(1.0, 2.0), c(0.5, 0.0), c(-10.0, 5.0), c(0.7253213568338951287038, -0.2194382781160035494291)),
    ];
    for (a, b, x, want) in refs {
        let got = kummer_1f1(a, b, x).unwrap();
        assert!(rel(got, want) < 1e-12, "1F1({a},{b},{x}) = {got}");
    }
    assert!(kummer_1f1(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)).is_err());
    assert_eq!(kummer_1f1(c(1.3, 0.2), c(0.7, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
}

#[test]
fn kummer_derivative_and_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let a = c(rng.random_range(-2.0..3.0), rng.random_range(-1.0..1.0));
        let b = c(rng.random_range(0.3..3.0), 0.0);
        let x = c(rng.random_range(-8.0..8.0), rng.random_range(-2.0..2.0));
        let h = 1e-5;
        let d = (kummer_1f1(a, b, x + h).unwrap() - kummer_1f1(a, b, x - h).unwrap()) / (2.0 * h);
        let want = a / b * kummer_1f1(a + 1.0, b + 1.0, x).unwrap();
        assert!((d - want).norm() <= 1e-6 * want.norm().max(1.0), "derivative at {a},{b},{x}");
        // Kummer transformation 1F1(a,b,x) = e^x 1F1(b-a,b,-x)
        let lhs = kummer_1f1(a, b, x).unwrap();
        let rhs = x.exp() * kummer_1f1(b - a, b, -x).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
        // contiguous relation (b-a) M(a-1) + (2a-b+x) M(a) - a M(a+1) = 0
        let r = (b - a) * kummer_1f1(a - 1.0, b, x).unwrap() + (a * 2.0 - b + x) * lhs
            - a * kummer_1f1(a + 1.0, b, x).unwrap();
        assert!(r.norm() <= 1e-10 * lhs.norm().max(1.0), "recurrence at {a},{b},{x}: {r}");
    }
}

#[test]
fn dawson_simplex_low_dimensions() {
    let quad = QuadratureSpec { tolerance: 1e-9, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        for _ in 0..4 {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..3.0)).collect();
            let v = verify_dawson_simplex(&u, &quad).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }
    // n = 1 closed form
    let w = dawson_simplex_rhs(&[1.0]).unwrap();
    let want = 2.0 * 2f64.sqrt() * dawson(1.0 / (2.0 * 2f64.sqrt()));
    assert!((w - want).abs() < 1e-15);
    // small u approaches the simplex volume
    let mut prev = f64::INFINITY;
    for s in [0.4, 0.2, 0.1, 0.05] {
        let w = dawson_simplex_rhs(&[s, 2.0 * s, 1.5 * s]).unwrap();
        let gap = (w - 1.0 / 6.0).abs();
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 1e-3);
    assert!(dawson_simplex_rhs(&[1.0, -1.0]).is_err());
}

#[test]
fn gaussian_and_mellin() {
    let quad = QuadratureSpec { tolerance: 1e-9, ..Default::default() };
    let v = verify_gaussian_multiplicity(1.0, 0.0, &quad).unwrap();
    assert!((v.rhs[0] - std::f64::consts::PI.sqrt() / 4.0).abs() < 1e-15);
    assert!(v.pass);
    assert!(verify_gaussian_multiplicity(2.0, 1.0, &quad).unwrap().pass);
    assert!(verify_gaussian_multiplicity(-1.0, 1.0, &quad).is_err());
    for (u, vv) in [(1.0, 0.0), (1.0, 2.0), (0.1, -3.0)] {
        assert!(verify_mellin_z1(u, vv).unwrap().pass);
    }
    let quad = QuadratureSpec { tolerance: 1e-8, ..Default::default() };
    for r in verify_mellin_pm(c(2.0, 0.0), 1.0, 1.0, &quad).unwrap() {
        assert!(r.pass, "{r:?}");
    }
    for r in verify_mellin_pm(c(1.0, 0.0), 0.7, -1.3, &quad).unwrap() {
        assert!(r.pass, "{r:?}");
    }
    assert!(verify_mellin_scaling(c(1.3, 0.4), 1.2, 0.8, 0.5, 1e-10).unwrap().pass);
}

proptest! {
    #[test]
    fn dawson_is_odd(x in -20.0f64..20.0) {
        prop_assert_eq!(dawson(-x), -dawson(x));
    }

    #[test]
    fn gamma_recurrence(re in 0.1f64..10.0, im in -10.0f64..10.0) {
        let z = c(re, im);
        let lhs = gamma(z + 1.0);
        let rhs = z * gamma(z);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }
}
