//! Selection criteria for the matrix of dimension `j` given dimensions `1..j`.

use serde::{Deserialize, Serialize};

use super::property::window_deficiency;
use super::tvalue::{t_value_cached, RowCache};
use crate::construct::{common_field, GeneratingMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiParams {
    pub omega: f64,
    pub k1: usize,
    pub k2: usize,
}

impl Default for PiParams {
    fn default() -> Self {
        PiParams {
            omega: 0.5,
            k1: 8,
            k2: 9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DqParams {
    pub q: f64,
    pub m_min: usize,
    pub m_max: usize,
    pub l2: usize,
    pub w: f64,
}

impl Default for DqParams {
    fn default() -> Self {
        DqParams {
            q: 6.0,
            m_min: 10,
            m_max: 17,
            l2: 20,
            w: 0.9999,
        }
    }
}

impl PiParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) || self.k1 == 0 || self.k2 == 0 {
            return Err(Error::InvalidArgument(
                "omega must lie in [0, 1] and windows must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl DqParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.q > 0.0) || !(self.w > 0.0 && self.w <= 1.0) || self.m_min > self.m_max {
            return Err(Error::InvalidArgument(
                "need q > 0, 0 < w <= 1 and m_min <= m_max".into(),
            ));
        }
        Ok(())
    }
}

/// Weighted Property A / A' deficiency of `cand` appended after `prev`.
pub(crate) fn crit_pi_cached(prev: &[RowCache], cand: &RowCache, p: &PiParams) -> Result<f64> {
    let part = |k: usize, rows_per: usize| -> Result<usize> {
        let len = k.min(prev.len() + 1);
        let mut window: Vec<&RowCache> = prev[prev.len() + 1 - len..].iter().collect();
        window.push(cand);
        window_deficiency(&window, rows_per)
    };
    let a = part(p.k1, 1)?;
    let ap = part(p.k2, 2)?;
    Ok(p.omega * a as f64 + (1.0 - p.omega) * ap as f64)
}

/// `max_m That^q / (m - That + 1)` where `That(m) = max_k t(j-k, j; m) * weight(k)`
/// over the neighbours `prev[prev.len() - k]`, `k = 1..=reach`.
///
/// Stops early once the running value exceeds `bound`; the returned value is
/// then only a lower bound that is itself above `bound`.
#[allow(clippy::too_many_arguments)]
fn pairwise_criterion(
    prev: &[RowCache],
    cand: &RowCache,
    reach: usize,
    q: f64,
    m_min: usize,
    m_max: usize,
    weight: impl Fn(usize) -> f64,
    bound: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for m in m_min..=m_max {
        let mut hat = 0.0f64;
        for k in 1..=reach.min(prev.len()) {
            let t = t_value_cached(&[&prev[prev.len() - k], cand], m)?;
            hat = hat.max(t as f64 * weight(k));
        }
        worst = worst.max(hat.powf(q) / (m as f64 - hat + 1.0));
        if worst > bound {
            break;
        }
    }
    Ok(worst)
}

pub(crate) fn crit_dq_cached(prev: &[RowCache], cand: &RowCache, p: &DqParams) -> Result<f64> {
    crit_dq_bounded(prev, cand, p, f64::INFINITY)
}

pub(crate) fn crit_dq_bounded(
    prev: &[RowCache],
    cand: &RowCache,
    p: &DqParams,
    bound: f64,
) -> Result<f64> {
    pairwise_criterion(
        prev,
        cand,
        p.l2,
        p.q,
        p.m_min,
        p.m_max,
        |k| p.w.powi(k as i32),
        bound,
    )
}

fn crit_jk_cached(
    prev: &[RowCache],
    cand: &RowCache,
    q: f64,
    m_min: usize,
    m_max: usize,
    w: f64,
) -> Result<f64> {
    let j = prev.len() + 1;
    pairwise_criterion(
        prev,
        cand,
        prev.len(),
        q,
        m_min,
        m_max,
        |k| w.powi((j - k) as i32),
        f64::INFINITY,
    )
}

fn split(seq: &[GeneratingMatrix], j: usize) -> Result<(Vec<RowCache>, RowCache)> {
    if j == 0 || j > seq.len() {
        return Err(Error::InvalidArgument(format!(
            "dimension {j} out of range for {} matrices",
            seq.len()
        )));
    }
    common_field(&seq[..j])?;
    let prev = seq[..j - 1].iter().map(RowCache::new).collect();
    Ok((prev, RowCache::new(&seq[j - 1])))
}

/// `omega (l_1 - R_{j,k1}) + (1 - omega)(l_2 - R'_{j,k2})` for dimension `j`
/// (1-based) of `seq`.
pub fn crit_pi(seq: &[GeneratingMatrix], j: usize, params: &PiParams) -> Result<f64> {
    params.validate()?;
    let (prev, cand) = split(seq, j)?;
    crit_pi_cached(&prev, &cand, params)
}

/// Windowed pairwise t-value criterion with weights `w^k` for the neighbour
/// `k` dimensions back, `k <= l2`.
pub fn crit_dq(seq: &[GeneratingMatrix], j: usize, params: &DqParams) -> Result<f64> {
    params.validate()?;
    let (prev, cand) = split(seq, j)?;
    crit_dq_cached(&prev, &cand, params)
}

/// Pairwise criterion over all earlier dimensions, the pair `(j - k, j)`
/// weighted by `w^(j-k)`.
pub fn crit_jk(
    seq: &[GeneratingMatrix],
    j: usize,
    q: f64,
    m_min: usize,
    m_max: usize,
    w: f64,
) -> Result<f64> {
    DqParams {
        q,
        m_min,
        m_max,
        l2: 1,
        w,
    }
    .validate()?;
    let (prev, cand) = split(seq, j)?;
    crit_jk_cached(&prev, &cand, q, m_min, m_max, w)
}
