//! Component-by-component searches for base-2 direction numbers.

use std::cmp::Ordering as CmpOrdering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{build_is, Construction, DirectionMatrix};
use crate::error::{Error, Result};
use crate::formats::{DirectionEntry, DirectionTable};
use crate::galois::{enumerate_irreducibles, Field, Ordering, Polynomial};
use crate::points::stream_rng;
use crate::quality::{crit_dq_bounded, crit_dq_cached, crit_pi_cached, DqParams, PiParams, RowCache};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub ordering: Ordering,
    pub dimension: usize,
    /// Candidates drawn per dimension in the first step; the space is
    /// enumerated instead when it has at most this many members.
    pub budget: usize,
    pub pi: PiParams,
    pub dq: DqParams,
    pub seed: u64,
    /// Log one line per dimension to standard error.
    pub verbose: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ordering: Ordering::Decimal,
            dimension: 100,
            budget: 10_000,
            pi: PiParams::default(),
            dq: DqParams::default(),
            seed: 0,
            verbose: false,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument("sample budget must be positive".into()));
        }
        self.pi.validate()?;
        self.dq.validate()
    }

    /// Columns needed to evaluate both criteria.
    fn columns(&self) -> usize {
        self.dq.m_max.max(2 * self.pi.k2).max(self.pi.k1).max(1)
    }
}

/// Per-dimension outcome of a search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionChoice {
    pub dimension: usize,
    pub code: u64,
    pub degree: usize,
    pub direction_numbers: Vec<u64>,
    /// Number of distinct candidates examined.
    pub candidates: usize,
    /// Smallest Property A / A' criterion among the candidates.
    pub min_pi: f64,
    pub pi: f64,
    pub dq: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub choices: Vec<DimensionChoice>,
}

impl SearchResult {
    pub fn table(&self) -> DirectionTable {
        DirectionTable {
            base: 2,
            entries: self
                .choices
                .iter()
                .map(|c| DirectionEntry {
                    dimension: c.dimension,
                    code: c.code,
                    degree: c.degree,
                    direction_numbers: c.direction_numbers.clone(),
                })
                .collect(),
        }
    }

    /// First rows of the chosen direction blocks.
    pub fn first_rows(&self) -> Vec<Vec<u32>> {
        self.choices
            .iter()
            .map(|c| {
                c.direction_numbers
                    .iter()
                    .enumerate()
                    .map(|(r, &d)| (d >> r & 1) as u32)
                    .collect()
            })
            .collect()
    }
}

struct Candidate {
    numbers: Vec<u64>,
    cache: RowCache,
}

fn candidate(
    field: &Arc<Field>,
    p: &Polynomial,
    numbers: Vec<u64>,
    cols: usize,
) -> Result<Candidate> {
    let d = DirectionMatrix::from_direction_numbers(field, &numbers)?;
    let m = build_is(p, &d, cols, cols, Construction::Is);
    Ok(Candidate {
        numbers,
        cache: RowCache::new(&m),
    })
}

/// Direction numbers `d_r` odd with `d_r < 2^r`; the index enumerates them in
/// mixed radix with `d_1` least significant.
fn numbers_from_index(e: usize, mut index: u64) -> Vec<u64> {
    (1..=e)
        .map(|r| {
            let radix = 1u64 << (r - 1);
            let digit = index % radix;
            index /= radix;
            2 * digit + 1
        })
        .collect()
}

fn first_step_candidates(e: usize, budget: usize, seed: u64, j: usize) -> Vec<Vec<u64>> {
    let bits = e * (e - 1) / 2;
    if bits < 63 && (1u64 << bits) <= budget as u64 {
        return (0..1u64 << bits).map(|i| numbers_from_index(e, i)).collect();
    }
    let mut rng = stream_rng(&[seed, j as u64]);
    let mut out: Vec<Vec<u64>> = (0..budget)
        .map(|_| {
            (1..=e)
                .map(|r| 2 * rng.gen_range(0..1u64 << (r - 1)) + 1)
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Smallest `(value, numbers)` pair in lexicographic order.
fn better(a: (f64, &[u64]), b: (f64, &[u64])) -> bool {
    match a.0.total_cmp(&b.0) {
        CmpOrdering::Less => true,
        CmpOrdering::Greater => false,
        CmpOrdering::Equal => a.1 < b.1,
    }
}

/// Picks the `dq` minimiser among `pool`, pruning candidates that are
/// provably worse than one already evaluated.
fn select_by_dq(prev: &[RowCache], pool: &[&Candidate], dq: &DqParams) -> Result<(usize, f64)> {
    let best = AtomicU64::new(f64::INFINITY.to_bits());
    let scores: Vec<Option<f64>> = pool
        .par_iter()
        .map(|c| {
            let bound = f64::from_bits(best.load(AtomicOrdering::Relaxed));
            let v = crit_dq_bounded(prev, &c.cache, dq, bound)?;
            if v > bound {
                return Ok(None);
            }
            best.fetch_min(v.to_bits(), AtomicOrdering::Relaxed);
            Ok(Some(v))
        })
        .collect::<Result<_>>()?;
    let mut pick: Option<(usize, f64)> = None;
    for (i, s) in scores.iter().enumerate() {
        if let Some(v) = *s {
            if pick.is_none_or(|(bi, bv)| better((v, &pool[i].numbers), (bv, &pool[bi].numbers))) {
                pick = Some((i, v));
            }
        }
    }
    pick.ok_or_else(|| Error::InvalidArgument("empty candidate set".into()))
}

fn polynomials(cfg: &SearchConfig) -> Result<(Arc<Field>, Vec<Polynomial>)> {
    let field = Field::with_order(2)?;
    let polys = enumerate_irreducibles(&field, cfg.dimension, cfg.ordering);
    Ok((field, polys))
}

fn forced(field: &Arc<Field>, p: &Polynomial, j: usize, cols: usize) -> Result<(DimensionChoice, RowCache)> {
    let c = candidate(field, p, vec![1], cols)?;
    Ok((
        DimensionChoice {
            dimension: j,
            code: p.code(),
            degree: 1,
            direction_numbers: vec![1],
            candidates: 1,
            min_pi: 0.0,
            pi: 0.0,
            dq: 0.0,
        },
        c.cache,
    ))
}

/// Two-step search: per dimension, keep the candidates with the smallest
/// Property A / A' criterion, then choose among them by the windowed t-value
/// criterion. Ties go to the lexicographically smallest direction numbers.
pub fn search_two_step(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let cols = cfg.columns();
    let (field, polys) = polynomials(cfg)?;
    let mut prev: Vec<RowCache> = Vec::with_capacity(cfg.dimension);
    let mut choices = Vec::with_capacity(cfg.dimension);
    for (idx, p) in polys.iter().enumerate() {
        let j = idx + 1;
        let e = p.degree().expect("irreducible");
        if e == 1 {
            let (choice, cache) = forced(&field, p, j, cols)?;
            choices.push(choice);
            prev.push(cache);
            continue;
        }
        let pool: Vec<Candidate> = first_step_candidates(e, cfg.budget, cfg.seed, j)
            .into_par_iter()
            .map(|n| candidate(&field, p, n, cols))
            .collect::<Result<_>>()?;
        let pis: Vec<f64> = pool
            .par_iter()
            .map(|c| crit_pi_cached(&prev, &c.cache, &cfg.pi))
            .collect::<Result<_>>()?;
        let min_pi = pis.iter().copied().fold(f64::INFINITY, f64::min);
        let kept: Vec<&Candidate> = pool
            .iter()
            .zip(&pis)
            .filter(|(_, &v)| v == min_pi)
            .map(|(c, _)| c)
            .collect();
        let (i, dq) = select_by_dq(&prev, &kept, &cfg.dq)?;
        let chosen = kept[i];
        if cfg.verbose {
            eprintln!(
                "dim {j}: code {} deg {e} candidates {} kept {} pi {min_pi} dq {dq:.4}",
                p.code(),
                pool.len(),
                kept.len()
            );
        }
        choices.push(DimensionChoice {
            dimension: j,
            code: p.code(),
            degree: e,
            direction_numbers: chosen.numbers.clone(),
            candidates: pool.len(),
            min_pi,
            pi: min_pi,
            dq,
        });
        prev.push(chosen.cache.clone());
    }
    Ok(SearchResult {
        config: cfg.clone(),
        choices,
    })
}

/// Direction numbers of the one-row block whose first row is the binary
/// expansion of `string` (most significant bit first, `e` bits).
fn one_row_numbers(field: &Arc<Field>, e: usize, string: u64) -> Result<Vec<u64>> {
    let bits: Vec<u32> = (0..e).map(|i| (string >> (e - 1 - i) & 1) as u32).collect();
    DirectionMatrix::one_row(field, &bits)?.direction_numbers()
}

/// Exhaustive search over first rows `(1, b_2, .., b_e)` of one-row
/// direction blocks, minimising the windowed t-value criterion. Ties go to
/// the smallest string.
pub fn search_one_row(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let cols = cfg.columns();
    let (field, polys) = polynomials(cfg)?;
    let mut prev: Vec<RowCache> = Vec::with_capacity(cfg.dimension);
    let mut choices = Vec::with_capacity(cfg.dimension);
    for (idx, p) in polys.iter().enumerate() {
        let j = idx + 1;
        let e = p.degree().expect("irreducible");
        if e == 1 {
            let (choice, cache) = forced(&field, p, j, cols)?;
            choices.push(choice);
            prev.push(cache);
            continue;
        }
        let strings: Vec<u64> = (1u64 << (e - 1)..1u64 << e).collect();
        let pool: Vec<Candidate> = strings
            .par_iter()
            .map(|&s| candidate(&field, p, one_row_numbers(&field, e, s)?, cols))
            .collect::<Result<_>>()?;
        let refs: Vec<&Candidate> = pool.iter().collect();
        // strings ascend with the direction numbers, so the numeric tie-break
        // coincides with the smallest string
        let (i, dq) = select_by_dq(&prev, &refs, &cfg.dq)?;
        let chosen = &pool[i];
        let pi = crit_pi_cached(&prev, &chosen.cache, &cfg.pi)?;
        if cfg.verbose {
            eprintln!("dim {j}: code {} deg {e} string {:b} dq {dq:.4}", p.code(), strings[i]);
        }
        choices.push(DimensionChoice {
            dimension: j,
            code: p.code(),
            degree: e,
            direction_numbers: chosen.numbers.clone(),
            candidates: pool.len(),
            min_pi: pi,
            pi,
            dq,
        });
        prev.push(chosen.cache.clone());
    }
    Ok(SearchResult {
        config: cfg.clone(),
        choices,
    })
}

/// Windowed criterion of every dimension of an existing direction table,
/// evaluated with the same matrix extent as the searches.
pub fn table_dq(table: &DirectionTable, cfg: &SearchConfig) -> Result<Vec<f64>> {
    let cols = cfg.columns();
    let field = Field::with_order(table.base as u64)?;
    let caches: Vec<RowCache> = table
        .resolve(&field)?
        .iter()
        .map(|(p, d)| RowCache::new(&build_is(p, d, cols, cols, Construction::Is)))
        .collect();
    (0..caches.len())
        .map(|i| crit_dq_cached(&caches[..i], &caches[i], &cfg.dq))
        .collect()
}
