use std::sync::Arc;

use super::direction::check_modulus;
use super::matrix::{Construction, GeneratingMatrix};
use crate::error::{Error, Result};
use crate::galois::{Digit, Polynomial};

/// Coefficients `a(1..=count)` of `x^{-r}` in the formal Laurent expansion of
/// `numerator / denominator`, by long division. The polynomial part of the
/// quotient is discarded.
pub fn laurent_coeffs(
    numerator: &Polynomial,
    denominator: &Polynomial,
    count: usize,
) -> Result<Vec<Digit>> {
    let field = denominator.field();
    let dd = denominator.degree().ok_or(Error::DivisionByZero)?;
    let lead_inv = field
        .inv(denominator.coeffs()[dd])
        .expect("nonzero leading coefficient");
    let den = denominator.coeffs();
    // remainder of degree < dd, kept as a fixed-width window
    let mut rem = numerator.rem(denominator)?.coeffs().to_vec();
    rem.resize(dd, 0);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        // multiply by x: the coefficient leaving the window is the x^dd term
        let top = if dd == 0 { 0 } else { rem[dd - 1] };
        rem.rotate_right(1);
        if dd > 0 {
            rem[0] = 0;
        }
        let a = field.mul(top, lead_inv);
        out.push(a);
        if a != 0 {
            for i in 0..dd {
                rem[i] = field.sub(rem[i], field.mul(a, den[i]));
            }
        }
    }
    Ok(out)
}

/// Niederreiter generating matrix. Row `j` (with `j - 1 = q e + u`) holds the
/// Laurent coefficients of `x^u g_{q+1}(x) / p(x)^{q+1}`. With `g = None`
/// every `g_j` is the constant 1.
pub fn niederreiter_matrix(
    p: &Polynomial,
    rows: usize,
    cols: usize,
    g: Option<&[Polynomial]>,
) -> Result<GeneratingMatrix> {
    let e = check_modulus(p)?;
    let field = Arc::clone(p.field());
    let blocks = rows.div_ceil(e);
    if let Some(g) = g {
        if g.len() < blocks {
            return Err(Error::InvalidArgument(format!(
                "{} numerator polynomials supplied, {blocks} needed",
                g.len()
            )));
        }
        for gj in &g[..blocks] {
            if gj.is_zero() || gj.gcd(p)?.degree() != Some(0) {
                return Err(Error::NotCoprime);
            }
        }
    }
    let mut digits = vec![0; rows * cols];
    let mut power = Polynomial::one(&field);
    for q in 0..blocks {
        power = power.mul(p)?;
        let numer = match g {
            Some(g) => g[q].clone(),
            None => Polynomial::one(&field),
        };
        for u in 0..e {
            let row = q * e + u;
            if row >= rows {
                break;
            }
            let series = laurent_coeffs(&numer.shift(u), &power, cols)?;
            for (c, a) in series.into_iter().enumerate() {
                digits[c * rows + row] = a;
            }
        }
    }
    Ok(GeneratingMatrix::from_parts(
        field,
        rows,
        cols,
        digits,
        p.clone(),
        Construction::Niederreiter,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;

    #[test]
    fn series_of_one_over_x2_x_1() {
        let f = Field::with_order(2).unwrap();
        let p = Polynomial::from_code(&f, 7);
        let one = Polynomial::one(&f);
        assert_eq!(
            laurent_coeffs(&one, &p, 9).unwrap(),
            vec![0, 1, 1, 0, 1, 1, 0, 1, 1]
        );
        let x = Polynomial::monomial(&f, 1);
        assert_eq!(
            laurent_coeffs(&x, &p, 9).unwrap(),
            vec![1, 1, 0, 1, 1, 0, 1, 1, 0]
        );
        assert_eq!(
            laurent_coeffs(&one, &p.pow(2), 9).unwrap(),
            vec![0, 0, 0, 1, 0, 1, 0, 0, 0]
        );
    }

    #[test]
    fn zero_denominator() {
        let f = Field::with_order(2).unwrap();
        let one = Polynomial::one(&f);
        assert_eq!(
            laurent_coeffs(&one, &Polynomial::zero(&f), 3).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn improper_fraction_keeps_only_negative_powers() {
        // x^2+x+1 = x (x+1) + 1, so the fractional part is 1/(x+1) = x^-1 + x^-2 + ...
        let f = Field::with_order(2).unwrap();
        let num = Polynomial::from_code(&f, 0b111);
        let den = Polynomial::from_code(&f, 0b11);
        assert_eq!(laurent_coeffs(&num, &den, 4).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn niederreiter_radical_inverse_and_coprimality() {
        let f = Field::with_order(2).unwrap();
        let x = Polynomial::from_code(&f, 2);
        let m = niederreiter_matrix(&x, 6, 6, None).unwrap();
        for j in 0..6 {
            for r in 0..6 {
                assert_eq!(m.get(j, r), (j == r) as Digit);
            }
        }
        let g = vec![x.clone(); 6];
        assert_eq!(
            niederreiter_matrix(&x, 6, 6, Some(&g)).unwrap_err(),
            Error::NotCoprime
        );
        let reducible = Polynomial::from_code(&f, 5);
        assert_eq!(
            niederreiter_matrix(&reducible, 4, 4, None).unwrap_err(),
            Error::Reducible(5)
        );
    }
}
