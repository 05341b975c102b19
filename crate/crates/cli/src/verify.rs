//! Seeded property suites behind `specexp verify`.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use specexp::bridge::{mc_estimate_many, moment_product, moment_product_via_polynomials, MomentSpec};
use specexp::expansion::{a2m, crm_bell, crm_direct};
use specexp::pscc::CRM_PAIRS;
use specexp::specfun::{
    verify_dawson_simplex, verify_gaussian_multiplicity, verify_mellin_pm, verify_mellin_z1, QuadratureSpec, Verification,
};
use specexp::symcore::ratio_to_f64;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Bridge,
    Dawson,
    Mellin,
    Bell,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bridge" => Ok(Self::Bridge),
            "dawson" => Ok(Self::Dawson),
            "mellin" => Ok(Self::Mellin),
            "bell" => Ok(Self::Bell),
            "all" => Ok(Self::All),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub draws: usize,
    pub draws_n4: usize,
    pub qmc_points: u64,
    pub paths: usize,
    pub grid: usize,
    pub specs: usize,
    pub bell_order: u32,
    pub max_m: u32,
    /// Overrides the Dawson (n <= 3) and Mellin tolerances.
    pub tol: Option<f64>,
}

struct Check {
    suite: &'static str,
    name: String,
    pass: bool,
    detail: Value,
}

fn from_verification(suite: &'static str, v: Verification) -> Check {
    let pass = v.pass;
    Check { suite, name: v.name.clone(), pass, detail: serde_json::to_value(&v).unwrap_or(Value::Null) }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_spec(rng: &mut ChaCha8Rng) -> MomentSpec {
    loop {
        let letters = rng.random_range(1..=3);
        let pairs: Vec<(u32, u32)> = (0..letters).map(|_| (rng.random_range(1..=4), rng.random_range(1..=2))).collect();
        let spec = MomentSpec::from_pairs(&pairs);
        // odd weights vanish identically in both exact routes
        if spec.weight() <= 8 && spec.weight() % 2 == 0 {
            return spec;
        }
    }
}

fn bridge(o: &VerifyOptions) -> Result<Vec<Check>, Failure> {
    let mut r = rng(o.seed, 1);
    let mut specs: Vec<MomentSpec> = (0..o.specs).map(|_| random_spec(&mut r)).collect();
    specs.push(MomentSpec::from_pairs(&[(1, 2)]));
    let est = mc_estimate_many(&specs, o.paths, o.grid, o.seed)?;
    let mut out = Vec::new();
    for (s, e) in specs.iter().zip(&est) {
        let exact = moment_product(s);
        let alt = moment_product_via_polynomials(s);
        let x = ratio_to_f64(&exact);
        let label = format!("{:?}", s.0);
        out.push(Check {
            suite: "bridge",
            name: format!("moment {label} exact routes"),
            pass: exact == alt,
            detail: json!({"closed": exact.to_string(), "simplex": alt.to_string()}),
        });
        out.push(Check {
            suite: "bridge",
            name: format!("moment {label} monte-carlo"),
            pass: e.within(x, 4.0),
            detail: json!({"exact": x, "mean": e.mean, "stdErr": e.std_err, "paths": e.n_paths, "grid": o.grid}),
        });
    }
    let x1sq = moment_product(&MomentSpec::from_pairs(&[(1, 2)]));
    out.push(Check {
        suite: "bridge",
        name: "E[x_1^2] = 1/12".into(),
        pass: x1sq == BigRational::new(1.into(), 12.into()),
        detail: json!({"value": x1sq.to_string()}),
    });
    Ok(out)
}

fn dawson(o: &VerifyOptions) -> Result<Vec<Check>, Failure> {
    let mut r = rng(o.seed, 2);
    let quad = QuadratureSpec { tolerance: o.tol.unwrap_or(1e-9), ..Default::default() };
    let mut out = Vec::new();
    for n in 1..=3 {
        for _ in 0..o.draws {
            let u: Vec<f64> = (0..n).map(|_| r.random_range(0.2..3.0)).collect();
            out.push(from_verification("dawson", verify_dawson_simplex(&u, &quad)?));
        }
    }
    let quad4 = QuadratureSpec { tolerance: 1e-5, qmc_points: o.qmc_points, seed: o.seed, ..Default::default() };
    for _ in 0..o.draws_n4 {
        let u: Vec<f64> = (0..4).map(|_| r.random_range(0.2..3.0)).collect();
        out.push(from_verification("dawson", verify_dawson_simplex(&u, &quad4)?));
    }
    Ok(out)
}

fn mellin(o: &VerifyOptions) -> Result<Vec<Check>, Failure> {
    let mut r = rng(o.seed, 3);
    let quad = QuadratureSpec { tolerance: o.tol.unwrap_or(1e-8), ..Default::default() };
    let mut out = Vec::new();
    for _ in 0..o.draws {
        let u = r.random_range(0.3..3.0);
        let v = r.random_range(-2.0..2.0);
        let z = Complex64::new(r.random_range(0.5..3.0), r.random_range(-2.0..2.0));
        out.push(from_verification("mellin", verify_gaussian_multiplicity(u, v, &quad)?));
        out.push(from_verification("mellin", verify_mellin_z1(u, v)?));
        for c in verify_mellin_pm(z, u, v, &quad)? {
            out.push(from_verification("mellin", c));
        }
    }
    Ok(out)
}

fn bell(o: &VerifyOptions) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for &(r2, m) in &CRM_PAIRS {
        for order in 0..=o.bell_order {
            let direct = crm_direct(r2, m, order).integrate_bridge();
            let via_bell = crm_bell(r2, m, order).integrate_bridge();
            out.push(Check {
                suite: "bell",
                name: format!("C^({r2}/2,{m})_{order} routes"),
                pass: direct == via_bell,
                detail: json!({"terms": direct.len()}),
            });
        }
    }
    for m in 1..=o.max_m {
        let v = a2m(m).to_a_form().grading_violations(m);
        out.push(Check {
            suite: "bell",
            name: format!("grading a_{}", 2 * m),
            pass: v.is_empty(),
            detail: json!({"violations": v.len()}),
        });
    }
    Ok(out)
}

/// Runs the suite and returns the JSON report and overall outcome.
pub fn run(suite: Suite, o: &VerifyOptions) -> Result<(Value, bool), Failure> {
    let mut checks = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Bridge) {
        checks.extend(bridge(o)?);
    }
    if want(Suite::Dawson) {
        checks.extend(dawson(o)?);
    }
    if want(Suite::Mellin) {
        checks.extend(mellin(o)?);
    }
    if want(Suite::Bell) {
        checks.extend(bell(o)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let list: Vec<Value> = checks
        .into_iter()
        .map(|c| json!({"suite": c.suite, "name": c.name, "pass": c.pass, "detail": c.detail}))
        .collect();
    let name = match suite {
        Suite::Bridge => "bridge",
        Suite::Dawson => "dawson",
        Suite::Mellin => "mellin",
        Suite::Bell => "bell",
        Suite::All => "all",
    };
    let report = json!({
        "suite": name,
        "seed": o.seed,
        "pass": pass,
        "total": list.len(),
        "failed": failed,
        "checks": list,
    });
    Ok((report, pass))
}
