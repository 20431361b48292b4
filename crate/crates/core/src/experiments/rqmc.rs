use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrand::{CoordinateStream, Integrand};
use crate::construct::GeneratingMatrix;
use crate::error::{Error, Result};
use crate::points::{seed_for, stream_rng, PointGenerator};

const OVERFLOW_TAG: u64 = 0x6f76_6572_666c_6f77;
const MC_TAG: u64 = 0x6d6f_6e74_6563_6172;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RqmcConfig {
    pub replications: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub seed: u64,
    /// Run replications one after another on the calling thread.
    pub deterministic: bool,
}

impl Default for RqmcConfig {
    fn default() -> Self {
        RqmcConfig {
            replications: 25,
            m_min: 8,
            m_max: 16,
            seed: 0,
            deterministic: false,
        }
    }
}

impl RqmcConfig {
    fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::InvalidArgument(
                "at least two replications are needed for a variance".into(),
            ));
        }
        if self.m_min > self.m_max {
            return Err(Error::InvalidArgument("m_min exceeds m_max".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub m: usize,
    pub n: u64,
    /// Grand mean of the replicate estimates.
    pub mean: f64,
    /// Sample variance of the replicate estimates.
    pub variance: f64,
    pub std_error: f64,
    /// Root mean-square error against the exact value, when known.
    pub rmse: Option<f64>,
    /// Coordinates drawn from the pseudorandom continuation.
    pub overflow: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: String,
    pub replications: usize,
    pub exact: Option<f64>,
    pub rows: Vec<EstimateRow>,
}

impl EstimateReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,m,n,mean,variance,std_error,rmse,overflow\n");
        for r in &self.rows {
            let rmse = r.rmse.map_or(String::new(), |x| format!("{x:e}"));
            let _ = writeln!(
                s,
                "{},{},{},{:e},{:e},{:e},{},{}",
                self.method, r.m, r.n, r.mean, r.variance, r.std_error, rmse, r.overflow
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:>4} {:>8} {:>14} {:>12} {:>12} {:>9}\n",
            "m", "n", "mean", "variance", "rmse", "overflow"
        );
        for r in &self.rows {
            let rmse = r.rmse.map_or("-".to_string(), |x| format!("{x:.4e}"));
            let _ = writeln!(
                s,
                "{:>4} {:>8} {:>14.8} {:>12.4e} {:>12} {:>9}",
                r.m, r.n, r.mean, r.variance, rmse, r.overflow
            );
        }
        s
    }

    /// Least-squares slope of `log2(rmse)` against `m`.
    pub fn rmse_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter_map(|r| r.rmse.filter(|&x| x > 0.0).map(|x| (r.m as f64, x.log2())))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}

/// Replicate means and overflow counts, in replication order.
fn replicate<F>(cfg: &RqmcConfig, one: F) -> Result<Vec<(f64, u64)>>
where
    F: Fn(u64) -> Result<(f64, u64)> + Sync + Send,
{
    let reps = 0..cfg.replications as u64;
    if cfg.deterministic {
        reps.map(one).collect()
    } else {
        reps.into_par_iter().map(one).collect()
    }
}

fn summarize(m: usize, n: u64, reps: &[(f64, u64)], exact: Option<f64>) -> EstimateRow {
    let r = reps.len() as f64;
    let mean = reps.iter().map(|x| x.0).sum::<f64>() / r;
    let variance = reps.iter().map(|x| (x.0 - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let rmse = exact.map(|e| (reps.iter().map(|x| (x.0 - e).powi(2)).sum::<f64>() / r).sqrt());
    EstimateRow {
        m,
        n,
        mean,
        variance,
        std_error: (variance / r).sqrt(),
        rmse,
        overflow: reps.iter().map(|x| x.1).sum(),
    }
}

/// Digitally shifted QMC estimates for `n = b^m`, `m = m_min..=m_max`.
/// Replication `r` uses the shift seeded by `(seed, r)`; the same shift is
/// used for every `m`.
pub fn rqmc_estimate(
    integrand: &dyn Integrand,
    matrices: Arc<Vec<GeneratingMatrix>>,
    cfg: &RqmcConfig,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let base_gen = PointGenerator::from_shared(matrices)?;
    let b = base_gen.base() as u64;
    let exact = integrand.exact();
    let mut rows = Vec::new();
    for m in cfg.m_min..=cfg.m_max {
        let n = b
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidArgument("point count overflows".into()))?;
        let reps = replicate(cfg, |r| {
            let g = base_gen.apply_seeded_shift(cfg.seed, r);
            let mut sum = 0.0;
            let mut overflow = 0u64;
            let mut failure = None;
            g.visit(n, |i, p| {
                if failure.is_some() {
                    return;
                }
                let mut stream = CoordinateStream::new(p, seed_for(&[OVERFLOW_TAG, cfg.seed, r, i]));
                match integrand.evaluate(&mut stream) {
                    Ok(v) => sum += v,
                    Err(e) => failure = Some(e),
                }
                overflow += stream.overflow() as u64;
            })?;
            match failure {
                Some(e) => Err(e),
                None => Ok((sum / n as f64, overflow)),
            }
        })?;
        rows.push(summarize(m, n, &reps, exact));
    }
    Ok(EstimateReport {
        method: "rqmc".into(),
        replications: cfg.replications,
        exact,
        rows,
    })
}

/// Plain Monte Carlo with `n = base^m` independent uniform points.
pub fn mc_estimate(integrand: &dyn Integrand, base: u32, cfg: &RqmcConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let exact = integrand.exact();
    let s = integrand.dimension();
    let mut rows = Vec::new();
    for m in cfg.m_min..=cfg.m_max {
        let n = (base as u64)
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidArgument("point count overflows".into()))?;
        let reps = replicate(cfg, |r| {
            let mut rng = stream_rng(&[MC_TAG, cfg.seed, r, m as u64]);
            let mut point = vec![0.0; s];
            let mut sum = 0.0;
            let mut overflow = 0u64;
            for i in 0..n {
                point.iter_mut().for_each(|x| *x = rng.gen::<f64>());
                let mut stream = CoordinateStream::new(&point, seed_for(&[MC_TAG, cfg.seed, r, m as u64, i]));
                sum += integrand.evaluate(&mut stream)?;
                overflow += stream.overflow() as u64;
            }
            Ok((sum / n as f64, overflow))
        })?;
        rows.push(summarize(m, n, &reps, exact));
    }
    Ok(EstimateReport {
        method: "mc".into(),
        replications: cfg.replications,
        exact,
        rows,
    })
}
