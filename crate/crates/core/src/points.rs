//! Point generation from generating matrices, with optional digital shift.

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{common_field, GeneratingMatrix};
use crate::error::{Error, Result};
use crate::galois::{Digit, Field};

/// Derives a stream seed from a tuple such as `(run seed, replication,
/// dimension)` by chaining the SplitMix64 finaliser.
pub fn seed_for(parts: &[u64]) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &part in parts {
        h = splitmix(h ^ splitmix(part.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded ChaCha8 generator for the stream identified by `parts`.
pub fn stream_rng(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_for(parts))
}

/// Per-dimension digit vectors added (in GF(b)) to every output point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitalShift {
    base: u32,
    digits: Vec<Vec<Digit>>,
    /// `(run seed, replication)` when drawn from [`DigitalShift::from_seed`].
    pub provenance: Option<(u64, u64)>,
}

impl DigitalShift {
    /// Draws uniform digits; dimension `i` uses the stream
    /// `seed_for(&[seed, replication, i])`.
    pub fn from_seed(base: u32, dims: usize, rows: usize, seed: u64, replication: u64) -> Self {
        let digits = (0..dims)
            .map(|i| {
                let mut rng = stream_rng(&[seed, replication, i as u64]);
                (0..rows).map(|_| rng.gen_range(0..base) as Digit).collect()
            })
            .collect();
        DigitalShift {
            base,
            digits,
            provenance: Some((seed, replication)),
        }
    }

    pub fn from_digits(base: u32, digits: Vec<Vec<u32>>) -> Result<Self> {
        let digits = digits
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|d| {
                        if d < base {
                            Ok(d as Digit)
                        } else {
                            Err(Error::DigitOutOfRange { digit: d, base })
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitalShift {
            base,
            digits,
            provenance: None,
        })
    }

    pub fn digits(&self, dim: usize) -> &[Digit] {
        &self.digits[dim]
    }
}

/// Evaluates the points of a digital sequence.
#[derive(Clone, Debug)]
pub struct PointGenerator {
    matrices: Arc<Vec<GeneratingMatrix>>,
    field: Arc<Field>,
    /// Output digits used per coordinate.
    precision: usize,
    cols: usize,
    shift: Option<DigitalShift>,
    /// Base-2 columns as words, one vector per dimension.
    packed: Option<Arc<Vec<Vec<u64>>>>,
    cursor: u64,
}

impl PointGenerator {
    pub fn new(matrices: Vec<GeneratingMatrix>) -> Result<PointGenerator> {
        PointGenerator::from_shared(Arc::new(matrices))
    }

    pub fn from_shared(matrices: Arc<Vec<GeneratingMatrix>>) -> Result<PointGenerator> {
        let field = common_field(&matrices)?;
        let (rows, cols) = (matrices[0].rows(), matrices[0].cols());
        if matrices.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::IncompatibleMatrices);
        }
        let packed = if field.order() == 2 && rows <= 64 {
            Some(Arc::new(
                matrices
                    .iter()
                    .map(|m| m.packed_columns().expect("base 2"))
                    .collect(),
            ))
        } else {
            None
        };
        Ok(PointGenerator {
            matrices,
            field,
            precision: rows,
            cols,
            shift: None,
            packed,
            cursor: 0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.matrices.len()
    }

    pub fn base(&self) -> u32 {
        self.field.order()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn matrices(&self) -> &[GeneratingMatrix] {
        &self.matrices
    }

    /// Keeps only the first `digits` output digits of every coordinate.
    pub fn with_precision(mut self, digits: usize) -> PointGenerator {
        self.precision = digits.min(self.matrices[0].rows());
        self
    }

    /// Returns a generator whose outputs are digitally shifted.
    pub fn apply_shift(&self, shift: DigitalShift) -> Result<PointGenerator> {
        if shift.base != self.base() || shift.digits.len() != self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "shift has {} dimensions in base {}, generator has {} in base {}",
                shift.digits.len(),
                shift.base,
                self.dimension(),
                self.base()
            )));
        }
        if shift.digits.iter().any(|d| d.len() < self.precision) {
            return Err(Error::InvalidArgument(format!(
                "shift digit vectors must have at least {} digits",
                self.precision
            )));
        }
        let mut out = self.clone();
        out.shift = Some(shift);
        out.cursor = 0;
        Ok(out)
    }

    /// Seeded shift for replication `replication`.
    pub fn apply_seeded_shift(&self, seed: u64, replication: u64) -> PointGenerator {
        let shift = DigitalShift::from_seed(
            self.base(),
            self.dimension(),
            self.precision,
            seed,
            replication,
        );
        self.apply_shift(shift).expect("shape matches by construction")
    }

    /// Number of points addressable with the stored index digits.
    pub fn capacity(&self) -> Option<u64> {
        (self.base() as u64).checked_pow(self.cols as u32)
    }

    fn check_index(&self, n: u64) -> Result<()> {
        match self.capacity() {
            Some(cap) if n >= cap => Err(Error::IndexOverflow {
                index: n,
                cols: self.cols,
            }),
            _ => Ok(()),
        }
    }

    fn index_digits(&self, mut n: u64) -> Vec<Digit> {
        let b = self.base() as u64;
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % b) as Digit);
            n /= b;
        }
        digits
    }

    /// Output digits of coordinate `dim` of point `n`, shift applied.
    fn coordinate_digits(&self, index_digits: &[Digit], dim: usize) -> Vec<Digit> {
        let f = &self.field;
        let m = &self.matrices[dim];
        let mut y = vec![0 as Digit; self.precision];
        for (r, &nr) in index_digits.iter().enumerate() {
            if nr == 0 {
                continue;
            }
            let col = m.column(r);
            for (yj, &c) in y.iter_mut().zip(col) {
                *yj = f.add(*yj, f.mul(c, nr));
            }
        }
        if let Some(shift) = &self.shift {
            for (yj, &s) in y.iter_mut().zip(shift.digits(dim)) {
                *yj = f.add(*yj, s);
            }
        }
        y
    }

    fn packed_word(&self, n: u64, dim: usize) -> u64 {
        let cols = &self.packed.as_ref().expect("packed")[dim];
        let mut y = 0u64;
        let mut bits = n;
        while bits != 0 {
            y ^= cols[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        y ^ self.shift_word(dim)
    }

    fn shift_word(&self, dim: usize) -> u64 {
        match &self.shift {
            Some(s) => s.digits(dim)[..self.precision]
                .iter()
                .enumerate()
                .fold(0u64, |w, (j, &d)| w | ((d as u64) << j)),
            None => 0,
        }
    }

    fn word_to_real(&self, y: u64) -> f64 {
        let p = self.precision;
        if p == 0 {
            return 0.0;
        }
        let mask = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
        let int = (y & mask).reverse_bits() >> (64 - p);
        int as f64 / 2f64.powi(p as i32)
    }

    fn digits_to_real(&self, y: &[Digit]) -> f64 {
        let b = self.base() as f64;
        y.iter().rev().fold(0.0, |acc, &d| (acc + d as f64) / b)
    }

    /// Coordinate `dim` of point `n`.
    pub fn coordinate(&self, n: u64, dim: usize) -> Result<f64> {
        self.check_index(n)?;
        if self.packed.is_some() {
            return Ok(self.word_to_real(self.packed_word(n, dim)));
        }
        let digits = self.index_digits(n);
        Ok(self.digits_to_real(&self.coordinate_digits(&digits, dim)))
    }

    /// Point `n` as reals in `[0, 1)`.
    pub fn point_at(&self, n: u64) -> Result<Vec<f64>> {
        self.check_index(n)?;
        if self.packed.is_some() {
            return Ok((0..self.dimension())
                .map(|dim| self.word_to_real(self.packed_word(n, dim)))
                .collect());
        }
        let digits = self.index_digits(n);
        Ok((0..self.dimension())
            .map(|dim| self.digits_to_real(&self.coordinate_digits(&digits, dim)))
            .collect())
    }

    /// Output digits of every coordinate of point `n`.
    pub fn point_digits(&self, n: u64) -> Result<Vec<Vec<Digit>>> {
        self.check_index(n)?;
        let digits = self.index_digits(n);
        Ok((0..self.dimension())
            .map(|dim| self.coordinate_digits(&digits, dim))
            .collect())
    }

    /// The first `b^m` points in index order.
    pub fn block(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        if m > self.cols {
            return Err(Error::TooManyColumns {
                m,
                available: self.cols,
            });
        }
        let count = (self.base() as u64)
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidArgument("block too large".into()))? as usize;
        if let Some(packed) = &self.packed {
            // Gray-code walk, written back at the plain index position
            let mut out = vec![vec![0.0; self.dimension()]; count];
            for (dim, cols) in packed.iter().enumerate() {
                let mut state = self.shift_word(dim);
                out[0][dim] = self.word_to_real(state);
                for i in 1..count {
                    state ^= cols[i.trailing_zeros() as usize];
                    out[i ^ (i >> 1)][dim] = self.word_to_real(state);
                }
            }
            return Ok(out);
        }
        (0..count as u64).map(|n| self.point_at(n)).collect()
    }

    /// Calls `visit(n, point)` for `n = 0..count` in index order without
    /// storing the block. Base 2 updates the previous point by the columns
    /// of the index bits that changed.
    pub fn visit(&self, count: u64, mut visit: impl FnMut(u64, &[f64])) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        self.check_index(count - 1)?;
        let s = self.dimension();
        match &self.packed {
            Some(packed) => {
                let mut words: Vec<u64> = (0..s).map(|d| self.shift_word(d)).collect();
                let mut point: Vec<f64> = words.iter().map(|&w| self.word_to_real(w)).collect();
                visit(0, &point);
                for n in 1..count {
                    let mut changed = n ^ (n - 1);
                    while changed != 0 {
                        let r = changed.trailing_zeros() as usize;
                        for (w, cols) in words.iter_mut().zip(packed.iter()) {
                            *w ^= cols[r];
                        }
                        changed &= changed - 1;
                    }
                    for (x, &w) in point.iter_mut().zip(&words) {
                        *x = self.word_to_real(w);
                    }
                    visit(n, &point);
                }
            }
            None => {
                for n in 0..count {
                    visit(n, &self.point_at(n)?);
                }
            }
        }
        Ok(())
    }
}

impl Iterator for PointGenerator {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let point = self.point_at(self.cursor).ok()?;
        self.cursor += 1;
        Some(point)
    }
}

/// Writes points as CSV, one point per line.
pub fn write_csv<W: Write>(mut w: W, points: &[Vec<f64>]) -> std::io::Result<()> {
    for p in points {
        let line: Vec<String> = p.iter().map(|x| format!("{x:.17}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Writes points as consecutive little-endian doubles, point by point.
pub fn write_binary<W: Write>(mut w: W, points: &[Vec<f64>]) -> std::io::Result<()> {
    for p in points {
        for x in p {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}
