//! Randomized quasi-Monte Carlo integration experiments.

mod integrand;
mod queue;
mod rqmc;

pub use integrand::{f1, CoordinateStream, F1Variant, Integrand, TestFunction};
pub use queue::{queue_wait_count, QueueIntegrand, QueueModel, QueueOutcome, QueueOutput};
pub use rqmc::{mc_estimate, rqmc_estimate, EstimateReport, EstimateRow, RqmcConfig};
