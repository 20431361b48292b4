//! Incremental row bases and ranks over GF(b).

use crate::galois::{Digit, Field};

/// Incremental GF(2) basis of row words; each stored vector is keyed by its
/// highest set bit.
#[derive(Clone)]
pub struct PackedBasis {
    rows: [u64; 64],
    occupied: u64,
}

impl Default for PackedBasis {
    fn default() -> Self {
        PackedBasis {
            rows: [0; 64],
            occupied: 0,
        }
    }
}

impl PackedBasis {
    /// Adds `v`; returns false if it is a combination of the stored rows.
    #[inline]
    pub fn insert(&mut self, mut v: u64) -> bool {
        while v != 0 {
            let h = 63 - v.leading_zeros() as usize;
            if self.occupied >> h & 1 == 1 {
                v ^= self.rows[h];
            } else {
                self.rows[h] = v;
                self.occupied |= 1 << h;
                return true;
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.occupied.count_ones() as usize
    }
}

/// Incremental basis over a general GF(b); stored rows are normalised so the
/// first nonzero entry (the pivot) is 1.
#[derive(Clone)]
pub struct DigitBasis<'f> {
    field: &'f Field,
    width: usize,
    rows: Vec<Option<Vec<Digit>>>,
    rank: usize,
}

impl<'f> DigitBasis<'f> {
    pub fn new(field: &'f Field, width: usize) -> Self {
        DigitBasis {
            field,
            width,
            rows: vec![None; width],
            rank: 0,
        }
    }

    /// Adds the first `width` entries of `v` (missing entries read as zero).
    pub fn insert(&mut self, v: &[Digit]) -> bool {
        let f = self.field;
        let mut v: Vec<Digit> = (0..self.width).map(|i| v.get(i).copied().unwrap_or(0)).collect();
        for p in 0..self.width {
            let c = v[p];
            if c == 0 {
                continue;
            }
            match &self.rows[p] {
                Some(row) => {
                    for i in p..self.width {
                        v[i] = f.sub(v[i], f.mul(c, row[i]));
                    }
                }
                None => {
                    let inv = f.inv(c).expect("nonzero");
                    for x in v[p..].iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    self.rows[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

pub fn rank_packed(rows: &[u64]) -> usize {
    let mut basis = PackedBasis::default();
    for &r in rows {
        basis.insert(r);
    }
    basis.rank()
}

pub fn rank_digits(field: &Field, rows: &[Vec<Digit>], width: usize) -> usize {
    let mut basis = DigitBasis::new(field, width);
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}
