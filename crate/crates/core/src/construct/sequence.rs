use std::sync::Arc;

use rayon::prelude::*;

use super::direction::DirectionMatrix;
use super::laurent::niederreiter_matrix;
use super::matrix::{build_is, Construction, GeneratingMatrix};
use crate::error::{Error, Result};
use crate::formats::{DirectionTable, JoeKuoRecord};
use crate::galois::{enumerate_irreducibles, Field, Ordering, Polynomial};

/// Where the direction blocks of an IS/Sobol' sequence come from.
#[derive(Clone, Debug, Default)]
pub enum DirectionSource {
    /// Extracted from the Niederreiter matrix of each polynomial.
    #[default]
    Derived,
    /// Explicit per-dimension direction numbers with their polynomials.
    Table(DirectionTable),
    /// First rows of one-row direction blocks, one per dimension, applied to
    /// the polynomials of the chosen ordering.
    OneRow(Vec<Vec<u32>>),
    /// A Joe-Kuo file; dimension 1 is the identity (polynomial `x`).
    JoeKuo(Vec<JoeKuoRecord>),
}

#[derive(Clone, Debug)]
pub struct SequenceSpec {
    pub base: u32,
    pub dimension: usize,
    pub construction: Construction,
    pub ordering: Ordering,
    pub directions: DirectionSource,
}

impl SequenceSpec {
    /// Irreducible Sobol'-Niederreiter sequence in base `base`.
    pub fn isn(base: u32, dimension: usize, ordering: Ordering) -> SequenceSpec {
        SequenceSpec {
            base,
            dimension,
            construction: Construction::Isn,
            ordering,
            directions: DirectionSource::Derived,
        }
    }
}

/// Builds the `s` generating matrices of a sequence. Matrices are built in
/// parallel and returned in dimension order.
pub fn build_sequence(spec: &SequenceSpec, rows: usize, cols: usize) -> Result<Vec<GeneratingMatrix>> {
    if spec.dimension == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let field = Field::with_order(spec.base as u64)?;
    let s = spec.dimension;
    let ordered = || enumerate_irreducibles(&field, s, spec.ordering);

    let blocks: Vec<(Polynomial, Option<DirectionMatrix>)> = match (spec.construction, &spec.directions) {
        (Construction::Niederreiter, DirectionSource::Derived) => {
            ordered().into_iter().map(|p| (p, None)).collect()
        }
        (Construction::Isn, DirectionSource::Derived) | (Construction::Is, DirectionSource::Derived) => ordered()
            .into_par_iter()
            .map(|p| {
                let d = DirectionMatrix::isn(&p)?;
                Ok((p, Some(d)))
            })
            .collect::<Result<_>>()?,
        (Construction::Is, DirectionSource::OneRow(rows_bits)) => {
            if rows_bits.len() < s {
                return Err(Error::TableTooShort {
                    needed: s,
                    got: rows_bits.len(),
                });
            }
            ordered()
                .into_iter()
                .zip(rows_bits)
                .map(|(p, bits)| {
                    let d = DirectionMatrix::one_row(&field, bits)?;
                    if d.degree() != p.degree().unwrap_or(0) {
                        return Err(Error::DegreeMismatch {
                            expected: p.degree().unwrap_or(0),
                            got: d.degree(),
                        });
                    }
                    Ok((p, Some(d)))
                })
                .collect::<Result<_>>()?
        }
        (Construction::Is | Construction::Sobol, DirectionSource::Table(table)) => {
            let resolved = table.resolve(&field)?;
            if resolved.len() < s {
                return Err(Error::TableTooShort {
                    needed: s,
                    got: resolved.len(),
                });
            }
            resolved
                .into_iter()
                .take(s)
                .map(|(p, d)| (p, Some(d)))
                .collect()
        }
        (Construction::Is | Construction::Sobol, DirectionSource::JoeKuo(records)) => {
            if spec.base != 2 {
                return Err(Error::InvalidArgument(
                    "Joe-Kuo direction numbers are for base 2".into(),
                ));
            }
            if records.len() + 1 < s {
                return Err(Error::TableTooShort {
                    needed: s,
                    got: records.len() + 1,
                });
            }
            let mut out = vec![(
                Polynomial::from_code(&field, 2),
                Some(DirectionMatrix::from_direction_numbers(&field, &[1])?),
            )];
            for rec in &records[..s - 1] {
                out.push((rec.polynomial(&field), Some(rec.direction_matrix(&field)?)));
            }
            out
        }
        (construction, source) => {
            return Err(Error::InvalidArgument(format!(
                "construction {construction:?} cannot use direction source {}",
                source_name(source)
            )))
        }
    };

    if spec.construction == Construction::Sobol && spec.base != 2 {
        return Err(Error::InvalidArgument("Sobol' sequences are base 2".into()));
    }
    check_distinct(&blocks)?;

    blocks
        .into_par_iter()
        .map(|(p, d)| match d {
            None => niederreiter_matrix(&p, rows, cols, None),
            Some(d) => {
                if !matches!(spec.directions, DirectionSource::Derived)
                    && !p.is_irreducible()
                {
                    return Err(Error::Reducible(p.code()));
                }
                if d.degree() != p.degree().unwrap_or(0) {
                    return Err(Error::DegreeMismatch {
                        expected: p.degree().unwrap_or(0),
                        got: d.degree(),
                    });
                }
                Ok(build_is(&p, &d, rows, cols, spec.construction))
            }
        })
        .collect()
}

fn source_name(source: &DirectionSource) -> &'static str {
    match source {
        DirectionSource::Derived => "derived",
        DirectionSource::Table(_) => "table",
        DirectionSource::OneRow(_) => "one-row",
        DirectionSource::JoeKuo(_) => "joe-kuo",
    }
}

fn check_distinct(blocks: &[(Polynomial, Option<DirectionMatrix>)]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (p, _) in blocks {
        if !seen.insert(p.code()) {
            return Err(Error::InvalidArgument(format!(
                "polynomial {} is used by more than one dimension",
                p.code()
            )));
        }
    }
    Ok(())
}

/// The ISN generating matrix of a single polynomial.
pub fn isn_matrix(p: &Polynomial, rows: usize, cols: usize) -> Result<GeneratingMatrix> {
    let d = DirectionMatrix::isn(p)?;
    Ok(build_is(p, &d, rows, cols, Construction::Isn))
}

/// Field shared by a list of matrices, if they agree.
pub fn common_field(matrices: &[GeneratingMatrix]) -> Result<Arc<Field>> {
    let first = matrices.first().ok_or(Error::IncompatibleMatrices)?;
    if matrices.iter().any(|m| m.field() != first.field()) {
        return Err(Error::IncompatibleMatrices);
    }
    Ok(Arc::clone(first.field()))
}
