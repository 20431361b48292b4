use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::ProjectionFamily;
use super::tvalue::{t_value_cached, RowCache};
use crate::construct::{common_field, GeneratingMatrix};
use crate::error::{Error, Result};

/// Treatment of projections with `alpha_J = 0` in the scaled average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaZeroPolicy {
    /// Leave the term out and shrink the averaging count.
    #[default]
    Skip,
    /// Count the term as zero.
    Zero,
}

impl FromStr for AlphaZeroPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip" => Ok(AlphaZeroPolicy::Skip),
            "zero" => Ok(AlphaZeroPolicy::Zero),
            _ => Err(Error::InvalidArgument(format!("unknown alpha policy '{s}'"))),
        }
    }
}

/// Divisor over `m` used for the scaled average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauScale {
    /// The number of evaluated values of `m`.
    #[default]
    Range,
    /// `m1`, as if every `m < m0` contributed zero.
    Upper,
}

impl FromStr for TauScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "range" => Ok(TauScale::Range),
            "upper" => Ok(TauScale::Upper),
            _ => Err(Error::InvalidArgument(format!("unknown tau scale '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub m_step: usize,
    pub alpha_zero: AlphaZeroPolicy,
    pub tau_scale: TauScale,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            m_step: 1,
            alpha_zero: AlphaZeroPolicy::Skip,
            tau_scale: TauScale::Range,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub m: usize,
    /// `frequency[l]` counts projections with `t = l`.
    pub frequency: Vec<usize>,
    pub mean: f64,
    pub max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TProfileReport {
    pub family: ProjectionFamily,
    pub projections: usize,
    pub options: ProfileOptions,
    pub rows: Vec<ProfileRow>,
    pub t_tilde: usize,
    pub tau_tilde: f64,
    /// Number of projections whose bound `alpha_J` is zero.
    pub alpha_zero_projections: usize,
    /// Per-projection bounds `alpha_J = sum (e_j - 1)`, in family order.
    pub alphas: Vec<usize>,
}

impl TProfileReport {
    /// Aligned text table, one line per `m`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>4} {:>8} {:>4}", "m", "t_bar", "T");
        for r in &self.rows {
            let _ = writeln!(s, "{:>4} {:>8.2} {:>4}", r.m, r.mean, r.max);
        }
        let _ = writeln!(s, "(T~, tau~) = ({}, {:.3})", self.t_tilde, self.tau_tilde);
        let _ = writeln!(
            s,
            "projections: {}  alpha=0: {}",
            self.projections, self.alpha_zero_projections
        );
        s
    }
}

/// t-values of every projection in `family` for `m = m0, m0 + step, .. <= m1`.
pub fn t_profile(
    seq: &[GeneratingMatrix],
    family: &ProjectionFamily,
    m0: usize,
    m1: usize,
    options: ProfileOptions,
) -> Result<TProfileReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if options.m_step == 0 || m0 > m1 {
        return Err(Error::InvalidArgument("empty range of m".into()));
    }
    if family.dimension() > seq.len() {
        return Err(Error::InvalidArgument(format!(
            "family needs {} dimensions, sequence has {}",
            family.dimension(),
            seq.len()
        )));
    }
    common_field(seq)?;
    let seq = &seq[..family.dimension()];
    if let Some(short) = seq.iter().find(|c| c.cols() < m1) {
        return Err(Error::TooManyColumns {
            m: m1,
            available: short.cols(),
        });
    }
    let ms: Vec<usize> = (m0..=m1).step_by(options.m_step).collect();
    let caches: Vec<RowCache> = seq.par_iter().map(RowCache::new).collect();
    let projections = family.projections();

    let per_projection: Vec<(usize, Vec<usize>)> = projections
        .par_iter()
        .map(|j| {
            let refs: Vec<&RowCache> = j.iter().map(|&i| &caches[i - 1]).collect();
            let alpha = j.iter().map(|&i| seq[i - 1].degree() - 1).sum();
            let ts = ms
                .iter()
                .map(|&m| t_value_cached(&refs, m).expect("columns checked"))
                .collect();
            (alpha, ts)
        })
        .collect();

    let mut rows: Vec<ProfileRow> = ms
        .iter()
        .map(|&m| ProfileRow {
            m,
            frequency: vec![0; m + 1],
            mean: 0.0,
            max: 0,
        })
        .collect();
    let mut ratio_sum = 0.0;
    let mut ratio_terms = 0usize;
    for (alpha, ts) in &per_projection {
        for (row, &t) in rows.iter_mut().zip(ts) {
            row.frequency[t] += 1;
            row.max = row.max.max(t);
            if *alpha > 0 {
                ratio_sum += t as f64 / *alpha as f64;
                ratio_terms += 1;
            } else if options.alpha_zero == AlphaZeroPolicy::Zero {
                ratio_terms += 1;
            }
        }
    }
    let count = projections.len();
    for row in &mut rows {
        let total: usize = row.frequency.iter().enumerate().map(|(l, n)| l * n).sum();
        row.mean = total as f64 / count as f64;
    }
    let t_tilde = rows.iter().map(|r| r.max).max().unwrap_or(0);
    let tau_tilde = if ratio_terms == 0 {
        0.0
    } else {
        let mean = ratio_sum / ratio_terms as f64;
        match options.tau_scale {
            TauScale::Range => mean,
            TauScale::Upper => mean * ms.len() as f64 / m1.max(1) as f64,
        }
    };
    let alphas: Vec<usize> = per_projection.iter().map(|(a, _)| *a).collect();
    Ok(TProfileReport {
        family: family.clone(),
        projections: count,
        options,
        rows,
        t_tilde,
        tau_tilde,
        alpha_zero_projections: alphas.iter().filter(|&&a| a == 0).count(),
        alphas,
    })
}
