use std::sync::Arc;

use super::laurent::laurent_coeffs;
use crate::error::{Error, Result};
use crate::galois::{Digit, Field, Polynomial};

/// The `e x e` non-singular upper triangular block `D = (v_{j,r})` that
/// initialises the first `e` columns of an irreducible Sobol' matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionMatrix {
    field: Arc<Field>,
    e: usize,
    /// Row-major, `entries[j * e + r]` for 0-based row `j` and column `r`.
    entries: Vec<Digit>,
}

impl DirectionMatrix {
    /// Builds from row-major rows. Entries below the diagonal must be zero and
    /// diagonal entries nonzero.
    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<u32>]) -> Result<DirectionMatrix> {
        let e = rows.len();
        if e == 0 {
            return Err(Error::InvalidDirection("empty direction matrix".into()));
        }
        let mut entries = Vec::with_capacity(e * e);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != e {
                return Err(Error::InvalidDirection(format!(
                    "row {} has {} entries, expected {e}",
                    j + 1,
                    row.len()
                )));
            }
            for &v in row {
                entries.push(field.check_digit(v)?);
            }
        }
        let d = DirectionMatrix {
            field: Arc::clone(field),
            e,
            entries,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        for j in 0..self.e {
            if self.get(j, j) == 0 {
                return Err(Error::InvalidDirection(format!(
                    "diagonal entry v_{{{0},{0}}} is zero",
                    j + 1
                )));
            }
            for r in 0..j {
                if self.get(j, r) != 0 {
                    return Err(Error::InvalidDirection(format!(
                        "entry v_{{{},{}}} below the diagonal is nonzero",
                        j + 1,
                        r + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds from direction numbers `d_r = sum_{j<=r} v_{j,r} b^{r-j}`.
    pub fn from_direction_numbers(field: &Arc<Field>, numbers: &[u64]) -> Result<DirectionMatrix> {
        let e = numbers.len();
        if e == 0 {
            return Err(Error::InvalidDirection("no direction numbers".into()));
        }
        let b = field.order() as u64;
        let mut entries = vec![0; e * e];
        for (r, &d) in numbers.iter().enumerate() {
            let bound = b.checked_pow(r as u32 + 1).unwrap_or(u64::MAX);
            if d == 0 || d >= bound {
                return Err(Error::InvalidDirection(format!(
                    "d_{} = {d} is outside [1, {b}^{})",
                    r + 1,
                    r + 1
                )));
            }
            if d % b == 0 {
                return Err(Error::InvalidDirection(format!(
                    "d_{} = {d} has a zero diagonal digit",
                    r + 1
                )));
            }
            let mut rest = d;
            for j in (0..=r).rev() {
                entries[j * e + r] = (rest % b) as Digit;
                rest /= b;
            }
        }
        Ok(DirectionMatrix {
            field: Arc::clone(field),
            e,
            entries,
        })
    }

    /// The diagonal-copy pattern: first row `bits`, each further row the
    /// previous one shifted right by one position.
    pub fn one_row(field: &Arc<Field>, bits: &[u32]) -> Result<DirectionMatrix> {
        let e = bits.len();
        let digits = bits
            .iter()
            .map(|&v| field.check_digit(v))
            .collect::<Result<Vec<_>>>()?;
        match digits.first() {
            None => return Err(Error::InvalidDirection("empty first row".into())),
            Some(0) => {
                return Err(Error::InvalidDirection(
                    "leading digit of the first row must be a unit".into(),
                ))
            }
            _ => {}
        }
        let mut entries = vec![0; e * e];
        for j in 0..e {
            for r in j..e {
                entries[j * e + r] = digits[r - j];
            }
        }
        Ok(DirectionMatrix {
            field: Arc::clone(field),
            e,
            entries,
        })
    }

    /// Direction block of the irreducible Sobol'-Niederreiter construction:
    /// the first `e` rows of the Niederreiter matrix (`g = 1`) truncated to
    /// `e` columns, in reverse order so that the row of `x^{e-1}/p` comes first.
    pub fn isn(p: &Polynomial) -> Result<DirectionMatrix> {
        let e = check_modulus(p)?;
        let field = p.field();
        let mut entries = Vec::with_capacity(e * e);
        for u in (0..e).rev() {
            entries.extend(laurent_coeffs(&Polynomial::monomial(field, u), p, e)?);
        }
        let d = DirectionMatrix {
            field: Arc::clone(field),
            e,
            entries,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    /// Entry `v_{j+1,r+1}` (0-based indices).
    pub fn get(&self, j: usize, r: usize) -> Digit {
        self.entries[j * self.e + r]
    }

    /// First row, i.e. the most significant digit of every direction number.
    pub fn first_row(&self) -> Vec<Digit> {
        self.entries[..self.e].to_vec()
    }

    /// Direction numbers `d_1..d_e`; fails if one does not fit in 64 bits.
    pub fn direction_numbers(&self) -> Result<Vec<u64>> {
        let b = self.field.order() as u64;
        (0..self.e)
            .map(|r| {
                (0..=r).try_fold(0u64, |acc, j| {
                    acc.checked_mul(b)
                        .and_then(|x| x.checked_add(self.get(j, r) as u64))
                        .ok_or_else(|| {
                            Error::InvalidDirection("direction number overflows u64".into())
                        })
                })
            })
            .collect()
    }
}

/// Checks that `p` is a monic irreducible of degree >= 1 and returns its degree.
pub(crate) fn check_modulus(p: &Polynomial) -> Result<usize> {
    let e = match p.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(e) => e,
    };
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if !p.is_irreducible() {
        return Err(Error::Reducible(p.code()));
    }
    Ok(e)
}
