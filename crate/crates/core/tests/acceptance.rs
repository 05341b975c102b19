//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specexp::bridge::{mc_estimate_many, moment_product, moment_product_via_polynomials, MomentSpec};
use specexp::expansion::{a2m, crm_bell, crm_direct};
use specexp::golden::{golden_a_form, golden_ab};
use specexp::pscc::{
    finite_string_oracle, reconciliation_report, relevant_strip, round_heat_expansion, verify_scaling_law, Geometry,
    TermKind, CRM_PAIRS,
};
use specexp::specfun::{
    verify_dawson_simplex, verify_gaussian_multiplicity, verify_mellin_pm, verify_mellin_z1, QuadratureSpec,
};
use specexp::symcore::ratio_to_f64;
use specexp::zeta::{ford_partial_sum, ford_zeta, ford_zeta_exact, string_poles, ExactValue, FractalString, Strip};

type Outcome = Result<String, String>;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn golden_equal(m: u32, limit: Duration) -> Result<Duration, String> {
    let start = Instant::now();
    let p = a2m(m);
    let took = start.elapsed();
    let want = golden_ab(m).map_err(|e| e.to_string())?;
    ensure(p == want, format!("a_{} differs from the reference in {} monomials", 2 * m, p.sub(&want).len()))?;
    let a_form = golden_a_form(m).map_err(|e| e.to_string())?;
    ensure(p.to_a_form() == a_form, format!("a_{} scale-factor form differs", 2 * m))?;
    ensure(took <= limit, format!("a_{} took {took:?} (limit {limit:?})", 2 * m))?;
    Ok(took)
}

fn c1_low_orders() -> Outcome {
    let mut times = Vec::new();
    for m in 0..=2 {
        times.push(format!("M={m} {:.3}s", golden_equal(m, Duration::from_secs(1))?.as_secs_f64()));
    }
    Ok(times.join(", "))
}

fn c2_high_orders() -> Outcome {
    let mut times = Vec::new();
    for m in 3..=4 {
        times.push(format!("M={m} {:.3}s", golden_equal(m, Duration::from_secs(300))?.as_secs_f64()));
    }
    Ok(times.join(", "))
}

fn c3_routes() -> Outcome {
    let mut n = 0;
    for &(r2, m) in &CRM_PAIRS {
        for order in 0..=6 {
            let direct = crm_direct(r2, m, order).integrate_bridge();
            let bell = crm_bell(r2, m, order).integrate_bridge();
            ensure(direct == bell, format!("C^({r2}/2,{m})_{order}: routes differ"))?;
            n += 1;
        }
    }
    Ok(format!("{n} coefficients equal"))
}

fn c4_grading() -> Outcome {
    let mut monomials = 0;
    for m in 0..=4 {
        let a = a2m(m).to_a_form();
        let bad = a.grading_violations(m);
        ensure(bad.is_empty(), format!("a_{}: {} violations", 2 * m, bad.len()))?;
        monomials += a.len();
    }
    Ok(format!("{monomials} monomials, 0 violations"))
}

fn c5_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let mut seen = BTreeSet::new();
    let mut specs = Vec::new();
    while specs.len() < 10 {
        let letters = rng.random_range(1..=3);
        let pairs: Vec<(u32, u32)> = (0..letters).map(|_| (rng.random_range(1..=4), rng.random_range(1..=2))).collect();
        let s = MomentSpec::from_pairs(&pairs);
        let w = s.weight();
        if w % 2 == 0 && w <= 8 && seen.insert(format!("{:?}", s.0)) {
            specs.push(s);
        }
    }
    let est = mc_estimate_many(&specs, 200_000, 1024, 17).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (s, e) in specs.iter().zip(&est) {
        let exact = moment_product(s);
        ensure(exact == moment_product_via_polynomials(s), format!("{:?}: exact routes differ", s.0))?;
        let x = ratio_to_f64(&exact);
        worst = worst.max((e.mean - x).abs() / e.std_err);
        ensure(e.within(x, 4.0), format!("{:?}: MC {} +- {} vs {x}", s.0, e.mean, e.std_err))?;
    }
    ensure(moment_product(&MomentSpec::from_pairs(&[(1, 2)])) == r(1, 12), "E[x_1^2] != 1/12")?;
    Ok(format!("10 specs, worst MC deviation {worst:.2} sigma"))
}

fn c6_dawson() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let quad = QuadratureSpec { tolerance: 1e-9, ..Default::default() };
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for _ in 0..20 {
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..3.0)).collect();
            let v = verify_dawson_simplex(&u, &quad).map_err(|e| e.to_string())?;
            worst = worst.max(v.abs_diff);
            ensure(v.pass, format!("n={n} u={u:?}: {} vs {}", v.lhs[0], v.rhs[0]))?;
        }
    }
    let quad4 = QuadratureSpec { tolerance: 1e-5, qmc_points: 10_000_000, seed: 606, ..Default::default() };
    let mut worst4 = 0.0f64;
    for _ in 0..5 {
        let u: Vec<f64> = (0..4).map(|_| rng.random_range(0.2..3.0)).collect();
        let v = verify_dawson_simplex(&u, &quad4).map_err(|e| e.to_string())?;
        worst4 = worst4.max(v.abs_diff);
        ensure(v.pass, format!("n=4 u={u:?}: {} vs {}", v.lhs[0], v.rhs[0]))?;
    }
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(600), format!("took {took:?}"))?;
    Ok(format!("max error n<=3 {worst:.1e}, n=4 {worst4:.1e}, {:.1}s", took.as_secs_f64()))
}

fn c7_mellin() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let quad = QuadratureSpec { tolerance: 1e-8, ..Default::default() };
    let mut n = 0;
    for _ in 0..20 {
        let u = rng.random_range(0.3..3.0);
        let v = rng.random_range(-2.0..2.0);
        let z = Complex64::new(rng.random_range(0.5..3.0), rng.random_range(-2.0..2.0));
        let mut checks = vec![
            verify_gaussian_multiplicity(u, v, &quad).map_err(|e| e.to_string())?,
            verify_mellin_z1(u, v).map_err(|e| e.to_string())?,
        ];
        checks.extend(verify_mellin_pm(z, u, v, &quad).map_err(|e| e.to_string())?);
        for c in checks {
            ensure(c.pass, format!("{} at U={u} V={v} z={z}: diff {:.2e}", c.name, c.abs_diff))?;
            n += 1;
        }
    }
    Ok(format!("{n} identity checks"))
}

fn c8_ford() -> Outcome {
    let mut notes = Vec::new();
    for s in [2.0, 4.0] {
        let s = Complex64::new(s, 0.0);
        let partial = ford_partial_sum(s, 1_000_000);
        let full = ford_zeta(s).map_err(|e| e.to_string())?;
        let e = rel(partial, full);
        ensure(e <= 1e-6, format!("s={}: partial sum off by {e:.2e}", s.re))?;
        notes.push(format!("s={} rel {e:.1e}", s.re));
    }
    let half = ford_zeta_exact(4).map_err(|e| e.to_string())?.scale(&r(1, 2));
    let want = ExactValue::zeta_symbol(7).mul(&ExactValue::pi_pow(-8)).scale(&r(4725, 16));
    ensure(half == want, format!("zeta_L(4)/2 = {half}"))?;
    notes.push(format!("zeta_L(4)/2 = {half}"));
    let poles = string_poles(&FractalString::Ford, &Strip::new((0.9, 1.1), (-0.1, 0.1))).map_err(|e| e.to_string())?;
    ensure(poles.len() == 1, format!("{} poles near s=1", poles.len()))?;
    let target = Complex64::new(3.0 / (2.0 * PI * PI), 0.0);
    let e = rel(poles[0].residue, target);
    ensure(e <= 1e-6, format!("residue {} vs 3/(2 pi^2)", poles[0].residue))?;
    // independent limit (s - 1) zeta_L(s)
    let eps = 1e-7;
    let limit = ford_zeta(Complex64::new(1.0 + eps, 0.0)).map_err(|e| e.to_string())? * eps;
    let e2 = rel(limit, target);
    ensure(e2 <= 1e-6, format!("(s-1) zeta_L(s) at 1+1e-7 = {limit}"))?;
    notes.push(format!("residue rel {e:.1e}"));
    Ok(notes.join(", "))
}

fn c9_finite_string() -> Outcome {
    let radii = vec![(r(1, 1), 1), (r(1, 2), 1)];
    let string = FractalString::from_rationals(&radii).map_err(|e| e.to_string())?;
    let terms = round_heat_expansion(&string, 3, &Geometry::S4, true).map_err(|e| e.to_string())?;
    let oracle = finite_string_oracle(&radii, 3).map_err(|e| e.to_string())?;
    ensure(terms.iter().all(|t| matches!(t.kind, TermKind::Bulk(_))), "pole terms present")?;
    let poles = string_poles(&string, &relevant_strip(3)).map_err(|e| e.to_string())?;
    ensure(poles.is_empty(), "pole list not empty")?;
    ensure(terms.len() == oracle.len(), "wrong number of bulk terms")?;
    let mut shown = Vec::new();
    for (t, want) in terms.iter().zip(&oracle) {
        let got = t.coeff.exact().and_then(|e| e.as_rational()).ok_or("bulk coefficient not rational")?;
        ensure(&got == want, format!("{t}: expected {want}"))?;
        shown.push(got.to_string());
    }
    Ok(format!("bulk [{}], no poles", shown.join(", ")))
}

fn c10_reconciliation() -> Outcome {
    let report = reconciliation_report().map_err(|e| e.to_string())?;
    for line in report.to_string().lines() {
        println!("    {line}");
    }
    ensure(report.passes(), "Lambda^2 / Lambda^4 rows do not match")?;
    Ok("report emitted, Lambda^2 and Lambda^4 match".into())
}

fn c11_scaling() -> Outcome {
    let mut n = 0;
    for a in [r(2, 1), r(1, 3)] {
        for &(r2, m) in &CRM_PAIRS {
            for order in 0..=8 {
                let check = verify_scaling_law(r2, m, order, &a).map_err(|e| e.to_string())?;
                ensure(check.holds(), format!("C^({r2}/2,{m})_{order} at a={a}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} rescalings exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("golden a_0, a_2, a_4", c1_low_orders),
        ("golden a_6, a_8", c2_high_orders),
        ("composition and Bell routes", c3_routes),
        ("grading invariant", c4_grading),
        ("bridge moments", c5_bridge),
        ("Dawson simplex identities", c6_dawson),
        ("Mellin and Kummer identities", c7_mellin),
        ("Ford zeta", c8_ford),
        ("finite-string oracle", c9_finite_string),
        ("Ford S4 reconciliation report", c10_reconciliation),
        ("scaling law", c11_scaling),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS  {name}: {note} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
