use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::direction::{check_modulus, DirectionMatrix};
use super::laurent::niederreiter_matrix;
use crate::error::{Error, Result};
use crate::galois::{Digit, Field, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Irreducible Sobol' with explicitly chosen direction numbers.
    Is,
    /// Irreducible Sobol'-Niederreiter: direction block taken from the
    /// Niederreiter matrix.
    Isn,
    /// Classical base-2 Sobol'.
    Sobol,
    /// Niederreiter with all numerator polynomials equal to 1.
    #[serde(rename = "nied")]
    Niederreiter,
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "is" => Ok(Construction::Is),
            "isn" => Ok(Construction::Isn),
            "sobol" => Ok(Construction::Sobol),
            "nied" | "niederreiter" => Ok(Construction::Niederreiter),
            _ => Err(Error::InvalidArgument(format!("unknown construction `{s}`"))),
        }
    }
}

/// Number of base-`b` output digits that fit a double-precision mantissa.
pub fn default_rows(b: u32) -> usize {
    (53.0 * std::f64::consts::LN_2 / (b as f64).ln()).floor() as usize
}

/// A truncated generating matrix `C = (V_1, V_2, ...)` stored column by column.
///
/// Row `j` of column `r` is the coefficient mapping index digit `r` to output
/// digit `j`. All indices in this API are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    digits: Vec<Digit>,
    polynomial: Polynomial,
    construction: Construction,
    direction: Option<DirectionMatrix>,
}

impl GeneratingMatrix {
    pub(crate) fn from_parts(
        field: Arc<Field>,
        rows: usize,
        cols: usize,
        digits: Vec<Digit>,
        polynomial: Polynomial,
        construction: Construction,
        direction: Option<DirectionMatrix>,
    ) -> GeneratingMatrix {
        debug_assert_eq!(digits.len(), rows * cols);
        GeneratingMatrix {
            field,
            rows,
            cols,
            digits,
            polynomial,
            construction,
            direction,
        }
    }

    /// Wraps externally supplied columns (e.g. an imported matrix file).
    pub fn from_columns(
        polynomial: &Polynomial,
        construction: Construction,
        rows: usize,
        columns: &[Vec<u32>],
    ) -> Result<GeneratingMatrix> {
        let field = Arc::clone(polynomial.field());
        let mut digits = Vec::with_capacity(rows * columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::InvalidArgument(format!(
                    "column {} has {} entries, expected {rows}",
                    c + 1,
                    col.len()
                )));
            }
            for &v in col {
                digits.push(field.check_digit(v)?);
            }
        }
        Ok(GeneratingMatrix::from_parts(
            field,
            rows,
            columns.len(),
            digits,
            polynomial.clone(),
            construction,
            None,
        ))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn base(&self) -> u32 {
        self.field.order()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.polynomial
    }

    /// Degree of the generating polynomial.
    pub fn degree(&self) -> usize {
        self.polynomial.degree().unwrap_or(0)
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn direction(&self) -> Option<&DirectionMatrix> {
        self.direction.as_ref()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Digit {
        self.digits[col * self.rows + row]
    }

    pub fn column(&self, col: usize) -> &[Digit] {
        &self.digits[col * self.rows..(col + 1) * self.rows]
    }

    /// Row `row`, first `count` columns.
    pub fn row(&self, row: usize, count: usize) -> Vec<Digit> {
        (0..count.min(self.cols)).map(|c| self.get(row, c)).collect()
    }

    /// Non-singular upper triangular over the leading square block.
    pub fn is_nut(&self) -> bool {
        let n = self.rows.min(self.cols);
        (0..n).all(|r| self.get(r, r) != 0 && (r + 1..self.rows).all(|j| self.get(j, r) == 0))
    }

    /// Base-2 columns as words, output digit `j` at bit `j`. `None` unless
    /// `b = 2` and at most 64 rows are stored.
    pub fn packed_columns(&self) -> Option<Vec<u64>> {
        if self.base() != 2 || self.rows > 64 {
            return None;
        }
        Some(
            (0..self.cols)
                .map(|c| {
                    self.column(c)
                        .iter()
                        .enumerate()
                        .fold(0u64, |w, (j, &v)| w | ((v as u64) << j))
                })
                .collect(),
        )
    }

    /// Base-2 rows as words over the first (up to 64) columns, column `r` at
    /// bit `r`. `None` unless `b = 2`.
    pub fn packed_rows(&self) -> Option<Vec<u64>> {
        if self.base() != 2 {
            return None;
        }
        let width = self.cols.min(64);
        Some(
            (0..self.rows)
                .map(|j| (0..width).fold(0u64, |w, c| w | ((self.get(j, c) as u64) << c)))
                .collect(),
        )
    }

    /// Rebuilds the matrix with a different extent. Only constructions that
    /// carry their polynomial and direction block can be rebuilt.
    pub fn with_extent(&self, rows: usize, cols: usize) -> Result<GeneratingMatrix> {
        match (&self.direction, self.construction) {
            (_, Construction::Niederreiter) => {
                niederreiter_matrix(&self.polynomial, rows, cols, None)
            }
            (Some(d), kind) => Ok(build_is(&self.polynomial, d, rows, cols, kind)),
            (None, _) => Err(Error::InvalidArgument(
                "matrix has no direction block to extend from".into(),
            )),
        }
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            base: self.base(),
            polynomial: self.polynomial.code(),
            degree: self.degree(),
            construction: self.construction,
            rows: self.rows,
            cols: self.cols,
            columns: (0..self.cols)
                .map(|c| self.column(c).iter().map(|&v| v as u32).collect())
                .collect(),
        }
    }

    pub fn from_record(record: &MatrixRecord) -> Result<GeneratingMatrix> {
        let field = Field::with_order(record.base as u64)?;
        let poly = Polynomial::from_code(&field, record.polynomial);
        if poly.degree() != Some(record.degree) {
            return Err(Error::InvalidArgument(format!(
                "polynomial code {} does not have degree {}",
                record.polynomial, record.degree
            )));
        }
        if record.columns.len() != record.cols {
            return Err(Error::InvalidArgument(format!(
                "{} columns listed, {} declared",
                record.columns.len(),
                record.cols
            )));
        }
        GeneratingMatrix::from_columns(&poly, record.construction, record.rows, &record.columns)
    }

    /// Digit grid, one matrix row per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(j, c).to_string()).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// JSON layout of an exported matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub base: u32,
    pub polynomial: u64,
    pub degree: usize,
    pub construction: Construction,
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<u32>>,
}

/// Irreducible Sobol' matrix: columns `1..=e` from `direction`, later columns
/// from `V_{r+e} = a_{e-1} V_{r+e-1} + ... + a_0 V_r + V_r / b^e`, where
/// `p(x) = x^e - a_{e-1} x^{e-1} - ... - a_0` and `V_r / b^e` is `V_r`
/// shifted down by `e` rows.
pub fn is_matrix(
    p: &Polynomial,
    direction: &DirectionMatrix,
    rows: usize,
    cols: usize,
) -> Result<GeneratingMatrix> {
    let e = check_modulus(p)?;
    if direction.degree() != e {
        return Err(Error::DegreeMismatch {
            expected: e,
            got: direction.degree(),
        });
    }
    if direction.field() != p.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(build_is(p, direction, rows, cols, Construction::Is))
}

/// Classical Sobol' matrix in base 2 from odd direction numbers. The
/// polynomial is checked for irreducibility only.
pub fn sobol_matrix(
    p: &Polynomial,
    numbers: &[u64],
    rows: usize,
    cols: usize,
) -> Result<GeneratingMatrix> {
    if p.field().order() != 2 {
        return Err(Error::InvalidArgument(
            "Sobol' matrices are defined in base 2".into(),
        ));
    }
    for (r, &d) in numbers.iter().enumerate() {
        if d % 2 == 0 {
            return Err(Error::InvalidDirection(format!(
                "direction number d_{} = {d} is even",
                r + 1
            )));
        }
    }
    let direction = DirectionMatrix::from_direction_numbers(p.field(), numbers)?;
    let mut m = is_matrix(p, &direction, rows, cols)?;
    m.construction = Construction::Sobol;
    Ok(m)
}

pub(crate) fn build_is(
    p: &Polynomial,
    direction: &DirectionMatrix,
    rows: usize,
    cols: usize,
    construction: Construction,
) -> GeneratingMatrix {
    let field = Arc::clone(p.field());
    let digits = if field.order() == 2 && rows <= 64 {
        is_digits_packed(p, direction, rows, cols)
    } else {
        is_digits_generic(p, direction, rows, cols)
    };
    GeneratingMatrix::from_parts(
        field,
        rows,
        cols,
        digits,
        p.clone(),
        construction,
        Some(direction.clone()),
    )
}

/// Column-major digits through field tables, any base.
pub(crate) fn is_digits_generic(
    p: &Polynomial,
    direction: &DirectionMatrix,
    rows: usize,
    cols: usize,
) -> Vec<Digit> {
    let f = p.field();
    let e = direction.degree();
    let a: Vec<Digit> = (0..e).map(|i| f.neg(p.coeff(i))).collect();
    let mut digits = vec![0; rows * cols];
    if rows == 0 {
        return digits;
    }
    for r in 0..cols.min(e) {
        for j in 0..=r.min(rows.saturating_sub(1)) {
            digits[r * rows + j] = direction.get(j, r);
        }
    }
    for r in e..cols {
        let base = r - e;
        for j in 0..rows {
            let mut acc = if j >= e { digits[base * rows + j - e] } else { 0 };
            for (i, &ai) in a.iter().enumerate() {
                if ai != 0 {
                    acc = f.add(acc, f.mul(ai, digits[(base + i) * rows + j]));
                }
            }
            digits[r * rows + j] = acc;
        }
    }
    digits
}

/// Base-2 path: one word per column, rows as bits.
pub(crate) fn is_digits_packed(
    p: &Polynomial,
    direction: &DirectionMatrix,
    rows: usize,
    cols: usize,
) -> Vec<Digit> {
    let e = direction.degree();
    let mask = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let taps: Vec<usize> = (0..e).filter(|&i| p.coeff(i) != 0).collect();
    let mut words = vec![0u64; cols];
    for (r, w) in words.iter_mut().enumerate().take(cols.min(e)) {
        *w = (0..=r).fold(0u64, |acc, j| acc | ((direction.get(j, r) as u64) << j)) & mask;
    }
    for r in e..cols {
        let base = r - e;
        let mut v = if e < 64 { words[base] << e } else { 0 };
        for &i in &taps {
            v ^= words[base + i];
        }
        words[r] = v & mask;
    }
    let mut digits = vec![0; rows * cols];
    for (c, w) in words.iter().enumerate() {
        for j in 0..rows {
            digits[c * rows + j] = ((w >> j) & 1) as Digit;
        }
    }
    digits
}
