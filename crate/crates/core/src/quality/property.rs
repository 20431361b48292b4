use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rank::{DigitBasis, PackedBasis};
use super::tvalue::RowCache;
use crate::construct::{common_field, GeneratingMatrix};
use crate::error::{Error, Result};

/// Rank deficiency of the square matrix stacking the first `rows_per` rows of
/// every matrix in `window`, each cut to `rows_per * window.len()` entries.
pub(crate) fn window_deficiency(window: &[&RowCache], rows_per: usize) -> Result<usize> {
    let width = rows_per * window.len();
    if let Some(c) = window.iter().find(|c| c.cols() < width) {
        return Err(Error::TooManyColumns {
            m: width,
            available: c.cols(),
        });
    }
    let rank = match window.first() {
        None => 0,
        Some(RowCache::Packed { .. }) => {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            let mut basis = PackedBasis::default();
            for c in window {
                let rows = c.packed_rows().expect("shared base");
                for j in 0..rows_per {
                    basis.insert(rows.get(j).copied().unwrap_or(0) & mask);
                }
            }
            basis.rank()
        }
        Some(RowCache::Digits { field, .. }) => {
            let mut basis = DigitBasis::new(field, width);
            for c in window {
                if let RowCache::Digits { rows, .. } = c {
                    for row in rows.iter().take(rows_per) {
                        basis.insert(row);
                    }
                }
            }
            basis.rank()
        }
    };
    Ok(width - rank)
}

fn deficiency(seq: &[GeneratingMatrix], l: usize, k: usize, rows_per: usize) -> Result<usize> {
    if l == 0 || l > seq.len() || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimension {l} and window {k} out of range for {} matrices",
            seq.len()
        )));
    }
    common_field(seq)?;
    let len = k.min(l);
    let caches: Vec<RowCache> = seq[l - len..l].iter().map(RowCache::new).collect();
    let refs: Vec<&RowCache> = caches.iter().collect();
    window_deficiency(&refs, rows_per)
}

/// `l - R` for the leading-row matrix of dimensions `max(1, l-k+1)..=l`
/// (1-based `l`); zero means the first `b^min(k,l)` points of that window
/// are `(1,..,1)`-equidistributed.
pub fn rank_deficiency_a(seq: &[GeneratingMatrix], l: usize, k: usize) -> Result<usize> {
    deficiency(seq, l, k, 1)
}

/// As [`rank_deficiency_a`] with the first two rows of every matrix.
pub fn rank_deficiency_aprime(seq: &[GeneratingMatrix], l: usize, k: usize) -> Result<usize> {
    deficiency(seq, l, k, 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub d: usize,
    pub k: usize,
    pub pi: f64,
    pub m: usize,
    pub pi_prime: f64,
    pub m_prime: usize,
    /// Deficiencies for `l = 2..=d`.
    pub deficiencies_a: Vec<usize>,
    pub deficiencies_aprime: Vec<usize>,
}

impl PropertyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>6} {:>4} {:>6} {:>3} {:>6} {:>3}",
            "d", "k", "Pi", "m", "Pi'", "m'"
        );
        let _ = writeln!(
            s,
            "{:>6} {:>4} {:>6.2} {:>3} {:>6.2} {:>3}",
            self.d, self.k, self.pi, self.m, self.pi_prime, self.m_prime
        );
        s
    }
}

/// Averages and maxima of the Property A / A' deficiencies over `l = 2..=d`.
pub fn property_report(seq: &[GeneratingMatrix], d: usize, k: usize) -> Result<PropertyReport> {
    if d < 2 || d > seq.len() {
        return Err(Error::InvalidArgument(format!(
            "d = {d} must lie in 2..={}",
            seq.len()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("window k must be positive".into()));
    }
    common_field(seq)?;
    let caches: Vec<RowCache> = seq[..d].par_iter().map(RowCache::new).collect();
    let pairs: Vec<(usize, usize)> = (2..=d)
        .into_par_iter()
        .map(|l| {
            let len = k.min(l);
            let refs: Vec<&RowCache> = caches[l - len..l].iter().collect();
            Ok((window_deficiency(&refs, 1)?, window_deficiency(&refs, 2)?))
        })
        .collect::<Result<_>>()?;
    let (a, ap): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
    let n = (d - 1) as f64;
    Ok(PropertyReport {
        d,
        k,
        pi: a.iter().sum::<usize>() as f64 / n,
        m: a.iter().copied().max().unwrap_or(0),
        pi_prime: ap.iter().sum::<usize>() as f64 / n,
        m_prime: ap.iter().copied().max().unwrap_or(0),
        deficiencies_a: a,
        deficiencies_aprime: ap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_sequence, SequenceSpec};
    use crate::galois::Ordering;

    fn isn(d: usize) -> Vec<GeneratingMatrix> {
        build_sequence(&SequenceSpec::isn(2, d, Ordering::Decimal), 32, 32).unwrap()
    }

    #[test]
    fn first_two_dimensions_are_full_rank() {
        let seq = isn(2);
        assert_eq!(rank_deficiency_a(&seq, 2, 8).unwrap(), 0);
        assert_eq!(rank_deficiency_aprime(&seq, 2, 9).unwrap(), 0);
    }

    #[test]
    fn repeated_matrix_is_deficient() {
        let base = isn(4);
        let seq = vec![base[3].clone(), base[3].clone()];
        assert!(rank_deficiency_a(&seq, 2, 8).unwrap() >= 1);
        assert!(rank_deficiency_aprime(&seq, 2, 8).unwrap() >= 2);
    }

    #[test]
    fn report_matches_per_dimension_values() {
        let seq = isn(20);
        let rep = property_report(&seq, 20, 5).unwrap();
        let a: Vec<usize> = (2..=20).map(|l| rank_deficiency_a(&seq, l, 5).unwrap()).collect();
        assert_eq!(rep.deficiencies_a, a);
        let mean = a.iter().sum::<usize>() as f64 / 19.0;
        assert!((rep.pi - mean).abs() < 1e-12);
        assert!(rep.pi <= 5.0);
        assert_eq!(rep.pi == 0.0, a.iter().all(|&x| x == 0));
    }

    #[test]
    fn report_rejects_small_d() {
        assert!(property_report(&isn(3), 1, 5).is_err());
        assert!(property_report(&isn(3), 4, 5).is_err());
    }
}
