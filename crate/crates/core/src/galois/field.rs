use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element, stored through the canonical bijection with `{0, .., b-1}`:
/// the element `sum c_i alpha^i` is the integer `sum c_i p^i`.
pub type Digit = u16;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this size get dense `b x b` addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// The finite field GF(p^k).
///
/// Elements are digits in `0..b`. For `k > 1` the digit's base-`p` expansion
/// gives the coefficients of the element as a polynomial in a root `alpha` of
/// the field modulus.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    order: u32,
    /// Monic degree-`k` irreducible over GF(p), constant term first.
    modulus: Vec<u32>,
    add: Vec<Digit>,
    mul: Vec<Digit>,
    neg: Vec<Digit>,
    inv: Vec<Digit>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `b` into `(p, k)` with `b = p^k`.
pub fn prime_power(b: u64) -> Result<(u32, u32)> {
    if b < 2 {
        return Err(Error::NotPrimePower(b));
    }
    let mut p = 2;
    while b % p != 0 {
        p += 1;
    }
    let mut rest = b;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(b));
    }
    Ok((p as u32, k))
}

impl Field {
    /// Builds GF(p^k). The modulus is the monic irreducible of degree `k` over
    /// GF(p) with the smallest decimal code.
    pub fn new(p: u32, k: u32) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExtension);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k as usize)
        };
        let mut field = Field {
            p,
            k,
            order: order as u32,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// Builds the field of order `b`, which must be a prime power.
    pub fn with_order(b: u64) -> Result<Arc<Field>> {
        if b > MAX_ORDER {
            return Err(Error::OrderTooLarge(b));
        }
        let (p, k) = prime_power(b)?;
        Field::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients over GF(p) of the field modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn build_tables(&mut self) {
        let b = self.order;
        if b <= TABLE_LIMIT {
            let n = b as usize;
            self.add = vec![0; n * n];
            self.mul = vec![0; n * n];
            for x in 0..b {
                for y in 0..b {
                    self.add[(x * b + y) as usize] = self.raw_add(x, y) as Digit;
                    self.mul[(x * b + y) as usize] = self.raw_mul(x, y) as Digit;
                }
            }
        }
        self.neg = (0..b).map(|x| self.raw_neg(x) as Digit).collect();
        let mut inv = vec![0 as Digit; b as usize];
        if b <= TABLE_LIMIT {
            for x in 1..b {
                for y in 1..b {
                    if self.mul[(x * b + y) as usize] == 1 {
                        inv[x as usize] = y as Digit;
                        break;
                    }
                }
            }
        } else {
            for (x, slot) in inv.iter_mut().enumerate().skip(1) {
                *slot = self.raw_pow(x as u32, b - 2) as Digit;
            }
        }
        self.inv = inv;
    }

    fn raw_add(&self, mut x: u32, mut y: u32) -> u32 {
        if self.k == 1 {
            return (x + y) % self.p;
        }
        let (mut out, mut scale) = (0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        out
    }

    fn raw_neg(&self, mut x: u32) -> u32 {
        let (mut out, mut scale) = (0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        out
    }

    fn raw_mul(&self, x: u32, y: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((x as u64 * y as u64) % p) as u32;
        }
        let k = self.k as usize;
        let xs = to_base(x, self.p, k);
        let ys = to_base(y, self.p, k);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in xs.iter().enumerate() {
            for (j, &c) in ys.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * c as u64) % p;
            }
        }
        // reduce by the monic modulus, highest degree first
        for top in (k..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
            }
            prod[top] = 0;
        }
        from_base(&prod[..k], self.p)
    }

    fn raw_pow(&self, x: u32, mut e: u32) -> u32 {
        let (mut base, mut acc) = (x, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, x: Digit, y: Digit) -> Digit {
        if self.add.is_empty() {
            self.raw_add(x as u32, y as u32) as Digit
        } else {
            self.add[x as usize * self.order as usize + y as usize]
        }
    }

    #[inline]
    pub fn sub(&self, x: Digit, y: Digit) -> Digit {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Digit, y: Digit) -> Digit {
        if self.mul.is_empty() {
            self.raw_mul(x as u32, y as u32) as Digit
        } else {
            self.mul[x as usize * self.order as usize + y as usize]
        }
    }

    #[inline]
    pub fn neg(&self, x: Digit) -> Digit {
        self.neg[x as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, x: Digit) -> Option<Digit> {
        if x == 0 {
            None
        } else {
            Some(self.inv[x as usize])
        }
    }

    pub fn check_digit(&self, d: u32) -> Result<Digit> {
        if d < self.order {
            Ok(d as Digit)
        } else {
            Err(Error::DigitOutOfRange {
                digit: d,
                base: self.order,
            })
        }
    }
}

fn to_base(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    out
}

fn from_base(digits: &[u64], p: u32) -> u32 {
    digits
        .iter()
        .rev()
        .fold(0u32, |acc, &d| acc * p + d as u32)
}

/// Smallest-code monic irreducible of degree `k` over the prime field GF(p),
/// found by trial division against every monic polynomial of degree <= k/2.
fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as u64).pow(k as u32);
    'candidates: for low in 0..count {
        let mut cand = to_base(low as u32, p, k);
        cand.push(1);
        if cand[0] == 0 {
            continue;
        }
        for deg in 1..=k / 2 {
            for dlow in 0..(p as u64).pow(deg as u32) {
                let mut div = to_base(dlow as u32, p, deg);
                div.push(1);
                if prime_poly_rem_is_zero(&cand, &div, p) {
                    continue 'candidates;
                }
            }
        }
        return cand;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = monic_div.len() - 1;
    let p64 = p as u64;
    for top in (dd..rem.len()).rev() {
        let lead = rem[top];
        if lead == 0 {
            continue;
        }
        for (i, &c) in monic_div.iter().enumerate() {
            let idx = top - dd + i;
            rem[idx] = (rem[idx] + (p64 - lead) * c as u64) % p64;
        }
    }
    rem[..dd].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let b = f.order() as Digit;
        for x in 0..b {
            assert_eq!(f.add(x, 0), x);
            assert_eq!(f.mul(x, 1), x);
            assert_eq!(f.mul(x, 0), 0);
            assert_eq!(f.add(x, f.neg(x)), 0);
            if x != 0 {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            }
            for y in 0..b {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                for z in 0..b {
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_up_to_order_64() {
        for b in 2..=64u64 {
            if let Ok(f) = Field::with_order(b) {
                check_axioms(&f);
            }
        }
    }

    #[test]
    fn small_fields() {
        let gf2 = Field::new(2, 1).unwrap();
        assert_eq!(gf2.add(1, 1), 0);
        assert_eq!(gf2.mul(1, 1), 1);
        let gf3 = Field::new(3, 1).unwrap();
        assert_eq!(gf3.mul(2, 2), 1);
        let gf4 = Field::new(2, 2).unwrap();
        assert_eq!(gf4.modulus(), &[1, 1, 1]);
        assert_eq!(gf4.mul(2, 2), 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::ZeroExtension);
        assert!(matches!(Field::new(2, 17), Err(Error::OrderTooLarge(_))));
        assert!(matches!(Field::with_order(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn untabled_field_matches_inverse() {
        let f = Field::new(2, 10).unwrap();
        for x in [1u16, 2, 3, 500, 1023] {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        let f = Field::new(257, 1).unwrap();
        assert_eq!(f.mul(256, 256), 1);
    }
}
