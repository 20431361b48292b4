use serde::{Deserialize, Serialize};

use super::integrand::{CoordinateStream, Integrand};
use crate::error::{Error, Result};

/// Single-server queue with Poisson arrivals and exponential service; all
/// times in minutes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueueModel {
    pub horizon: f64,
    pub arrival_rate: f64,
    pub service_mean: f64,
    pub threshold: f64,
}

impl QueueModel {
    /// Arrival rate 1 per minute, mean service 55 seconds, threshold 5 minutes.
    pub fn new(horizon: f64) -> Result<Self> {
        let m = QueueModel {
            horizon,
            arrival_rate: 1.0,
            service_mean: 55.0 / 60.0,
            threshold: 5.0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon >= 0.0)
            || !(self.arrival_rate > 0.0)
            || !(self.service_mean > 0.0)
            || !(self.threshold >= 0.0)
        {
            return Err(Error::InvalidArgument(
                "queue rates must be positive and horizon, threshold non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Generator dimension `2 ceil(T + 4 sqrt T)` (for unit arrival rate)
    /// that the number of clients rarely exceeds.
    pub fn default_dimension(&self) -> usize {
        let mean = self.horizon * self.arrival_rate;
        2 * (mean + 4.0 * mean.sqrt()).ceil() as usize
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueOutcome {
    /// Clients arriving in `[0, T]`.
    pub clients: usize,
    /// Clients waiting longer than the threshold.
    pub waits: usize,
}

fn exponential(u: f64, mean: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("coordinate {u} outside [0, 1)")));
    }
    Ok(-mean * (-u).ln_1p())
}

/// Simulates one horizon. Client `i` uses coordinate `2i - 1` for its
/// interarrival time and `2i` for its service time; waits follow the
/// Lindley recursion.
pub fn queue_wait_count(stream: &mut CoordinateStream<'_>, model: &QueueModel) -> Result<QueueOutcome> {
    let mut out = QueueOutcome::default();
    let mut clock = 0.0;
    let mut wait = 0.0f64;
    let mut last_service = 0.0;
    loop {
        let a = exponential(stream.next_coordinate(), 1.0 / model.arrival_rate)?;
        clock += a;
        if clock > model.horizon {
            return Ok(out);
        }
        if out.clients > 0 {
            wait = (wait + last_service - a).max(0.0);
        }
        last_service = exponential(stream.next_coordinate(), model.service_mean)?;
        out.clients += 1;
        if wait > model.threshold {
            out.waits += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueueOutput {
    Waits,
    Clients,
}

/// The queue simulation as an integrand returning one of its counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueueIntegrand {
    pub model: QueueModel,
    pub output: QueueOutput,
}

impl Integrand for QueueIntegrand {
    fn dimension(&self) -> usize {
        self.model.default_dimension()
    }

    fn exact(&self) -> Option<f64> {
        match self.output {
            QueueOutput::Clients => Some(self.model.horizon * self.model.arrival_rate),
            QueueOutput::Waits => None,
        }
    }

    fn evaluate(&self, stream: &mut CoordinateStream<'_>) -> Result<f64> {
        let o = queue_wait_count(stream, &self.model)?;
        Ok(match self.output {
            QueueOutput::Waits => o.waits as f64,
            QueueOutput::Clients => o.clients as f64,
        })
    }
}
