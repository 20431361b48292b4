//! File formats: Joe-Kuo direction-number files and JSON direction tables.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::DirectionMatrix;
use crate::error::{Error, Result};
use crate::galois::{Field, Polynomial};

/// One record of a Joe-Kuo `d s a m_i` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoeKuoRecord {
    pub dimension: usize,
    pub degree: usize,
    /// Interior coefficients of the primitive polynomial, without the leading
    /// and trailing 1 bits.
    pub a: u64,
    pub m: Vec<u64>,
}

impl JoeKuoRecord {
    /// Decimal code of the full polynomial, `2^s + 2a + 1`.
    pub fn polynomial_code(&self) -> u64 {
        (1u64 << self.degree) + 2 * self.a + 1
    }

    pub fn polynomial(&self, field: &Arc<Field>) -> Polynomial {
        Polynomial::from_code(field, self.polynomial_code())
    }

    pub fn direction_matrix(&self, field: &Arc<Field>) -> Result<DirectionMatrix> {
        DirectionMatrix::from_direction_numbers(field, &self.m)
    }
}

/// Parses a Joe-Kuo direction-number file. The first line is a header;
/// dimension 1 is implicit and not listed.
pub fn parse_joe_kuo(text: &str) -> Result<Vec<JoeKuoRecord>> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let nums = fields
            .iter()
            .map(|f| {
                f.parse::<u64>()
                    .map_err(|_| err(format!("`{f}` is not a non-negative integer")))
            })
            .collect::<Result<Vec<u64>>>()?;
        if nums.len() < 3 {
            return Err(err("expected `d s a m_1 .. m_s`".into()));
        }
        let (dimension, degree, a) = (nums[0] as usize, nums[1] as usize, nums[2]);
        if degree == 0 || degree > 62 {
            return Err(err(format!("degree {degree} out of range")));
        }
        let m = nums[3..].to_vec();
        if m.len() != degree {
            return Err(err(format!(
                "{} direction numbers given for degree {degree}",
                m.len()
            )));
        }
        if a >= 1u64 << (degree - 1) {
            return Err(err(format!("polynomial code a = {a} too large for degree {degree}")));
        }
        let expected = records.len() + 2;
        if dimension != expected {
            return Err(err(format!("expected dimension {expected}, found {dimension}")));
        }
        for (r, &mr) in m.iter().enumerate() {
            if mr % 2 == 0 {
                return Err(err(format!("even direction number m_{} = {mr}", r + 1)));
            }
            if mr >= 1u64 << (r + 1) {
                return Err(err(format!(
                    "direction number m_{} = {mr} is not below 2^{}",
                    r + 1,
                    r + 1
                )));
            }
        }
        records.push(JoeKuoRecord {
            dimension,
            degree,
            a,
            m,
        });
    }
    Ok(records)
}

/// Per-dimension direction numbers with their polynomials, as written by the
/// search and read back when building sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionTable {
    pub base: u32,
    pub entries: Vec<DirectionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionEntry {
    pub dimension: usize,
    pub code: u64,
    pub degree: usize,
    pub direction_numbers: Vec<u64>,
}

impl DirectionTable {
    pub fn from_json(text: &str) -> Result<DirectionTable> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Polynomial and direction block of every entry, validated.
    pub fn resolve(&self, field: &Arc<Field>) -> Result<Vec<(Polynomial, DirectionMatrix)>> {
        if field.order() != self.base {
            return Err(Error::InvalidArgument(format!(
                "direction table is for base {}, sequence uses base {}",
                self.base,
                field.order()
            )));
        }
        self.entries
            .iter()
            .map(|entry| {
                let p = Polynomial::from_code(field, entry.code);
                if p.degree() != Some(entry.degree) || entry.direction_numbers.len() != entry.degree
                {
                    return Err(Error::InvalidDirection(format!(
                        "dimension {}: code {} / {} numbers do not match degree {}",
                        entry.dimension,
                        entry.code,
                        entry.direction_numbers.len(),
                        entry.degree
                    )));
                }
                let d = DirectionMatrix::from_direction_numbers(field, &entry.direction_numbers)?;
                Ok((p, d))
            })
            .collect()
    }
}
