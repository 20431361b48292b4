//! The t-parameter of projections of digital nets, by rank computations and
//! by direct counting of points in elementary intervals.

use std::sync::Arc;

use super::rank::{DigitBasis, PackedBasis};
use crate::construct::GeneratingMatrix;
use crate::error::{Error, Result};
use crate::galois::{Digit, Field};

/// Row-major view of a generating matrix, prepared for repeated rank work.
#[derive(Clone, Debug)]
pub enum RowCache {
    /// Base 2: one word per row, column `r` at bit `r` (first 64 columns).
    Packed { rows: Vec<u64>, cols: usize },
    /// Any base: digit rows.
    Digits {
        field: Arc<Field>,
        rows: Vec<Vec<Digit>>,
        cols: usize,
    },
}

impl RowCache {
    pub fn new(m: &GeneratingMatrix) -> RowCache {
        if m.base() == 2 {
            RowCache::Packed {
                rows: m.packed_rows().expect("base 2"),
                cols: m.cols().min(64),
            }
        } else {
            RowCache::Digits {
                field: Arc::clone(m.field()),
                rows: (0..m.rows()).map(|j| m.row(j, m.cols())).collect(),
                cols: m.cols(),
            }
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            RowCache::Packed { cols, .. } | RowCache::Digits { cols, .. } => *cols,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            RowCache::Packed { rows, .. } => rows.len(),
            RowCache::Digits { rows, .. } => rows.len(),
        }
    }

    pub fn packed_rows(&self) -> Option<&[u64]> {
        match self {
            RowCache::Packed { rows, .. } => Some(rows),
            RowCache::Digits { .. } => None,
        }
    }
}

enum Basis<'f> {
    Packed(PackedBasis, u64),
    Digits(DigitBasis<'f>),
}

impl Basis<'_> {
    /// Inserts row `j` of `cache`; rows beyond the stored ones are zero.
    fn insert(&mut self, cache: &RowCache, j: usize) -> bool {
        match (self, cache) {
            (Basis::Packed(b, mask), RowCache::Packed { rows, .. }) => {
                rows.get(j).is_some_and(|&r| b.insert(r & *mask))
            }
            (Basis::Digits(b), RowCache::Digits { rows, .. }) => {
                rows.get(j).is_some_and(|r| b.insert(r))
            }
            _ => unreachable!("caches of one projection share a base"),
        }
    }
}

impl Clone for Basis<'_> {
    fn clone(&self) -> Self {
        match self {
            Basis::Packed(b, m) => Basis::Packed(b.clone(), *m),
            Basis::Digits(b) => Basis::Digits(b.clone()),
        }
    }
}

/// t-value of the `b^m`-point net formed by the projection onto `caches`.
///
/// `t = m - k*` where `k*` is the largest `k <= m` such that, for every
/// composition `d_1 + .. + d_s = k`, the first `d_i` rows (over columns
/// `1..=m`) of every matrix are jointly linearly independent.
///
/// For every tuple of leading parts the rows of the last matrix are added
/// one at a time; since independence is inherited by sub-compositions, this
/// yields the largest admissible last part directly.
pub fn t_value_cached(caches: &[&RowCache], m: usize) -> Result<usize> {
    if caches.is_empty() {
        return Err(Error::InvalidArgument("empty projection".into()));
    }
    for c in caches {
        if m > c.cols() {
            return Err(Error::TooManyColumns {
                m,
                available: c.cols(),
            });
        }
    }
    let root = match caches[0] {
        RowCache::Packed { .. } => {
            let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
            Basis::Packed(PackedBasis::default(), mask)
        }
        RowCache::Digits { field, .. } => Basis::Digits(DigitBasis::new(field, m)),
    };
    // bound[sigma]: smallest admissible total over leading tuples summing to sigma
    let mut bound = vec![usize::MAX; m + 1];
    explore(caches, m, 0, 0, root, &mut bound);
    let mut kstar = 0;
    let mut running = usize::MAX;
    for (k, &g) in bound.iter().enumerate() {
        running = running.min(g);
        if k > running {
            break;
        }
        kstar = k;
    }
    Ok(m - kstar)
}

fn explore(
    caches: &[&RowCache],
    m: usize,
    dim: usize,
    sigma: usize,
    basis: Basis<'_>,
    bound: &mut [usize],
) {
    let last = dim + 1 == caches.len();
    if last {
        let mut b = basis;
        let mut f = 0;
        while sigma + f < m && b.insert(caches[dim], f) {
            f += 1;
        }
        bound[sigma] = bound[sigma].min(sigma + f);
        return;
    }
    let mut b = basis;
    let mut d = 0;
    loop {
        explore(caches, m, dim + 1, sigma + d, b.clone(), bound);
        if sigma + d == m {
            break;
        }
        if !b.insert(caches[dim], d) {
            // every composition using these rows fails from sigma + d + 1 on
            let s = sigma + d + 1;
            bound[s] = bound[s].min(s - 1);
            break;
        }
        d += 1;
    }
}

/// t-value of the projection onto `matrices` for `b^m` points.
pub fn t_value(matrices: &[&GeneratingMatrix], m: usize) -> Result<usize> {
    let field = matrices
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty projection".into()))?
        .field();
    if matrices.iter().any(|x| x.field() != field) {
        return Err(Error::IncompatibleMatrices);
    }
    let caches: Vec<RowCache> = matrices.iter().map(|x| RowCache::new(x)).collect();
    let refs: Vec<&RowCache> = caches.iter().collect();
    t_value_cached(&refs, m)
}

/// Largest point count accepted by the counting oracle, `b^m` with `m <= 12`.
pub const ORACLE_MAX_M: usize = 12;

/// Counting oracle: the t-value of a `b^m`-point set given as reals.
///
/// Each coordinate is resolved to its first `m` base-`b` digits; this is exact
/// when coordinates carry at most `m` digits or `b` is a power of two.
pub fn t_value_oracle(points: &[Vec<f64>], base: u32, m: usize) -> Result<usize> {
    let scale = (base as f64).powi(m as i32);
    let exact = base.is_power_of_two();
    let cells: Vec<Vec<u64>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| {
                    let y = if exact { x * scale } else { x * scale * (1.0 + 1e-12) };
                    (y.floor() as u64).min(scale as u64 - 1)
                })
                .collect()
        })
        .collect();
    t_value_oracle_cells(&cells, base, m)
}

/// Counting oracle on points given by their leading-`m`-digit integers
/// `floor(x b^m)`.
pub fn t_value_oracle_cells(cells: &[Vec<u64>], base: u32, m: usize) -> Result<usize> {
    if m > ORACLE_MAX_M {
        return Err(Error::InvalidArgument(format!(
            "counting oracle limited to m <= {ORACLE_MAX_M}"
        )));
    }
    let b = base as u64;
    let expected = b.pow(m as u32) as usize;
    if cells.len() != expected {
        return Err(Error::WrongCardinality {
            expected,
            got: cells.len(),
        });
    }
    let s = cells.first().map_or(0, |p| p.len());
    if s == 0 {
        return Err(Error::InvalidArgument("points have no coordinates".into()));
    }
    for k in (0..=m).rev() {
        if all_boxes_balanced(cells, b, m, k, s) {
            return Ok(m - k);
        }
    }
    unreachable!("k = 0 always balances")
}

fn all_boxes_balanced(cells: &[Vec<u64>], b: u64, m: usize, k: usize, s: usize) -> bool {
    let per_box = b.pow((m - k) as u32) as u32;
    let mut parts = vec![0usize; s];
    compositions(k, s, &mut parts, 0, &mut |parts| {
        let boxes = b.pow(k as u32) as usize;
        let mut counts = vec![0u32; boxes];
        for p in cells {
            let mut idx = 0u64;
            for (x, &d) in p.iter().zip(parts.iter()) {
                idx = idx * b.pow(d as u32) + x / b.pow((m - d) as u32);
            }
            counts[idx as usize] += 1;
        }
        counts.iter().all(|&c| c == per_box)
    })
}

/// Calls `check` on every composition of `k` into `s` parts until it fails.
fn compositions(
    k: usize,
    s: usize,
    parts: &mut [usize],
    pos: usize,
    check: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if pos + 1 == s {
        parts[pos] = k;
        return check(parts);
    }
    for d in 0..=k {
        parts[pos] = d;
        if !compositions(k - d, s, parts, pos + 1, check) {
            return false;
        }
    }
    true
}
