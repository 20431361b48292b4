use std::fmt;
use std::sync::Arc;

use super::field::{Digit, Field};
use crate::error::{Error, Result};

/// A polynomial over GF(b), constant term first, without trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Arc<Field>,
    coeffs: Vec<Digit>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({:?}, {:?})", self.field, self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Builds a polynomial from coefficients, constant term first.
    pub fn new(field: &Arc<Field>, coeffs: &[u32]) -> Result<Polynomial> {
        let coeffs = coeffs
            .iter()
            .map(|&c| field.check_digit(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_digits(field, coeffs))
    }

    pub(crate) fn from_digits(field: &Arc<Field>, mut coeffs: Vec<Digit>) -> Polynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<Field>) -> Polynomial {
        Polynomial::from_digits(field, Vec::new())
    }

    pub fn one(field: &Arc<Field>) -> Polynomial {
        Polynomial::from_digits(field, vec![1])
    }

    /// `x^n`.
    pub fn monomial(field: &Arc<Field>, n: usize) -> Polynomial {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        Polynomial::from_digits(field, coeffs)
    }

    /// Decodes `code = sum coeff_i b^i`.
    pub fn from_code(field: &Arc<Field>, mut code: u64) -> Polynomial {
        let b = field.order() as u64;
        let mut coeffs = Vec::new();
        while code > 0 {
            coeffs.push((code % b) as Digit);
            code /= b;
        }
        Polynomial::from_digits(field, coeffs)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Digit] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Digit {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Decimal code `sum coeff_i b^i`. Saturates at `u64::MAX` for codes that
    /// do not fit, which cannot happen for any enumerable degree.
    pub fn code(&self) -> u64 {
        let b = self.field.order() as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| {
            acc.saturating_mul(b).saturating_add(c as u64)
        })
    }

    fn same_field(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Polynomial::from_digits(f, coeffs))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Polynomial::from_digits(f, coeffs))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        Ok(Polynomial::from_digits(
            &self.field,
            mul_digits(&self.field, &self.coeffs, &other.coeffs),
        ))
    }

    pub fn scale(&self, c: Digit) -> Polynomial {
        let f = &self.field;
        Polynomial::from_digits(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Polynomial::from_digits(&self.field, coeffs)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.field);
        for _ in 0..n {
            acc = Polynomial::from_digits(
                &self.field,
                mul_digits(&self.field, &acc.coeffs, &self.coeffs),
            );
        }
        acc
    }

    /// Quotient and remainder, `deg(rem) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.same_field(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            quot[top - dd] = c;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::from_digits(f, quot), Polynomial::from_digits(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Scales to a monic polynomial; the zero polynomial is returned unchanged.
    pub fn to_monic(&self) -> Polynomial {
        match self.coeffs.last() {
            Some(&lead) => self.scale(self.field.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.to_monic())
    }

    /// Coefficient-reversed polynomial `x^e p(1/x)`, made monic. Returns `None`
    /// when the constant term is zero (the reversal would drop in degree).
    pub fn reciprocal(&self) -> Option<Polynomial> {
        if self.coeff(0) == 0 {
            return None;
        }
        let rev: Vec<Digit> = self.coeffs.iter().rev().copied().collect();
        Some(Polynomial::from_digits(&self.field, rev).to_monic())
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree `1..=deg/2`. Degree-one polynomials are irreducible.
    pub fn is_irreducible(&self) -> bool {
        let Some(e) = self.degree() else {
            return false;
        };
        if e == 0 {
            return false;
        }
        if self.field.order() == 2 && e < 63 {
            let code = self.code();
            return (1..=e / 2).all(|deg| {
                let lo = 1u64 << deg;
                (lo..lo << 1).all(|d| super::gf2_rem(code, d) != 0)
            });
        }
        let b = self.field.order() as u64;
        for deg in 1..=e / 2 {
            let count = b.pow(deg as u32);
            for low in 0..count {
                let div = Polynomial::from_code(&self.field, count + low);
                if self.rem(&div).map(|r| r.is_zero()).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }
}

fn mul_digits(f: &Field, a: &[Digit], b: &[Digit]) -> Vec<Digit> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}
