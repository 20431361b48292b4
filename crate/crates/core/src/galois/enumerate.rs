//! Enumeration of monic irreducible polynomials in the two orderings used to
//! assign polynomials to dimensions.

use std::collections::HashSet;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::{Digit, Field};
use super::poly::Polynomial;
use crate::error::Error;

/// Order in which monic irreducibles of equal degree are listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// Ascending decimal code.
    #[default]
    Decimal,
    /// Ascending decimal code, each polynomial followed by its reciprocal.
    Alternative,
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dec" | "decimal" => Ok(Ordering::Decimal),
            "alt" | "alternative" => Ok(Ordering::Alternative),
            _ => Err(Error::InvalidArgument(format!("unknown ordering `{s}`"))),
        }
    }
}

/// Monic irreducibles of degree `e` over `field`, ascending decimal code.
pub fn irreducibles_of_degree(field: &Arc<Field>, e: usize) -> Vec<Polynomial> {
    if field.order() == 2 {
        return packed_gf2_irreducibles(e)
            .into_iter()
            .map(|code| Polynomial::from_code(field, code))
            .collect();
    }
    let b = field.order() as u64;
    let smaller: Vec<Polynomial> = (1..=e / 2)
        .flat_map(|d| irreducibles_of_degree(field, d))
        .collect();
    let base = b.pow(e as u32);
    (0..base)
        .map(|low| Polynomial::from_code(field, base + low))
        .filter(|cand| {
            e == 1
                || (cand.coeff(0) != 0
                    && smaller
                        .iter()
                        .all(|d| !cand.rem(d).expect("nonzero divisor").is_zero()))
        })
        .collect()
}

/// GF(2) fast path: polynomials as bit masks, trial division by the
/// irreducibles of degree at most `e/2`.
fn packed_gf2_irreducibles(e: usize) -> Vec<u64> {
    assert!(e < 63, "degree too large for packed enumeration");
    if e == 1 {
        return vec![2, 3];
    }
    let divisors: Vec<u64> = (1..=e / 2).flat_map(packed_gf2_irreducibles).collect();
    let lo = 1u64 << e;
    (lo..lo << 1)
        .filter(|&c| c & 1 == 1)
        .filter(|&c| divisors.iter().all(|&d| gf2_rem(c, d) != 0))
        .collect()
}

pub(crate) fn gf2_rem(mut a: u64, d: u64) -> u64 {
    let dd = 63 - d.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dd {
        a ^= d << (63 - a.leading_zeros() - dd);
    }
    a
}

/// Orders one degree block according to `ordering`.
pub fn order_block(block: Vec<Polynomial>, ordering: Ordering) -> Vec<Polynomial> {
    match ordering {
        Ordering::Decimal => block,
        Ordering::Alternative => {
            let mut emitted: HashSet<Vec<Digit>> = HashSet::new();
            let mut out = Vec::with_capacity(block.len());
            for p in block {
                if !emitted.insert(p.coeffs().to_vec()) {
                    continue;
                }
                let rec = p.reciprocal();
                out.push(p);
                if let Some(rec) = rec {
                    if emitted.insert(rec.coeffs().to_vec()) {
                        out.push(rec);
                    }
                }
            }
            out
        }
    }
}

/// The first `count` monic irreducibles in non-decreasing degree.
pub fn enumerate_irreducibles(
    field: &Arc<Field>,
    count: usize,
    ordering: Ordering,
) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(count);
    let mut e = 1;
    while out.len() < count {
        let block = order_block(irreducibles_of_degree(field, e), ordering);
        out.extend(block.into_iter().take(count - out.len()));
        e += 1;
    }
    out
}

/// JSON export record for polynomial lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub degree: usize,
    pub code: u64,
}

impl From<&Polynomial> for PolynomialRecord {
    fn from(p: &Polynomial) -> Self {
        PolynomialRecord {
            degree: p.degree().unwrap_or(0),
            code: p.code(),
        }
    }
}
