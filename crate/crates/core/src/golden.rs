//! Published heat coefficients `a_0 .. a_8`, transcribed into JSON.

use crate::symcore::{AFormPoly, SymPoly};
use crate::{Error, Result};

const AB: [&str; 5] = [
    include_str!("../data/a0_ab.json"),
    include_str!("../data/a2_ab.json"),
    include_str!("../data/a4_ab.json"),
    include_str!("../data/a6_ab.json"),
    include_str!("../data/a8_ab.json"),
];

const AFORM: [&str; 5] = [
    include_str!("../data/a0_a.json"),
    include_str!("../data/a2_a.json"),
    include_str!("../data/a4_a.json"),
    include_str!("../data/a6_a.json"),
    include_str!("../data/a8_a.json"),
];

/// Highest `M` with a bundled reference.
pub const MAX_GOLDEN: u32 = 4;

fn check(m: u32) -> Result<usize> {
    if m > MAX_GOLDEN {
        return Err(Error::OrderTooLarge { requested: m, max: MAX_GOLDEN });
    }
    Ok(m as usize)
}

/// Reference `a_{2M}` in the A/B variables.
pub fn golden_ab(m: u32) -> Result<SymPoly> {
    SymPoly::from_json_str(AB[check(m)?])
}

/// Reference `a_{2M}` in terms of the scale factor `a`.
pub fn golden_a_form(m: u32) -> Result<AFormPoly> {
    AFormPoly::from_json_str(AFORM[check(m)?])
}

/// Difference between a computed coefficient and the reference.
pub fn diff_against_golden(m: u32, computed: &SymPoly) -> Result<SymPoly> {
    Ok(computed.sub(&golden_ab(m)?))
}
