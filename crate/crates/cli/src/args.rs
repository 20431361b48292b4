use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irrsobol::construct::Construction;
use irrsobol::experiments::{F1Variant, QueueOutput};
use irrsobol::galois::Ordering;
use irrsobol::quality::{AlphaZeroPolicy, TauScale};

#[derive(Parser, Debug)]
#[command(
    name = "irrsobol",
    version,
    about = "Irreducible Sobol' and Niederreiter sequences: construction, quality measures, searches and RQMC experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Prime-power base b.
    #[arg(long, global = true, default_value_t = 2)]
    pub base: u32,
    /// Number of dimensions.
    #[arg(long, global = true, default_value_t = 2)]
    pub dim: usize,
    /// Polynomial ordering: dec or alt.
    #[arg(long, global = true, default_value = "dec")]
    pub ordering: Ordering,
    /// Construction: is, isn, sobol or nied.
    #[arg(long, global = true, default_value = "isn")]
    pub construction: Construction,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; text on a terminal, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutFormat>,
    /// Write the result to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "IRRSOBOL_THREADS")]
    pub threads: Option<usize>,
    /// Single worker thread and sequential accumulation.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Direction-number table (JSON) for the is and sobol constructions.
    #[arg(long, global = true)]
    pub directions: Option<PathBuf>,
    /// Joe-Kuo direction-number file for the is and sobol constructions.
    #[arg(long = "joe-kuo", global = true)]
    pub joe_kuo: Option<PathBuf>,
    /// JSON array of first rows of one-row direction blocks.
    #[arg(long = "one-row", global = true)]
    pub one_row: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List monic irreducible polynomials in sequence order.
    Polys {
        /// How many polynomials (defaults to --dim).
        #[arg(long)]
        count: Option<usize>,
        /// List every irreducible of this degree instead.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Print generating matrices.
    Matrix {
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Read matrices from a JSON export instead of constructing them.
        #[arg(long)]
        import: Option<PathBuf>,
    },
    /// Generate points.
    Points {
        #[arg(long, default_value_t = 16)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        skip: u64,
        /// Apply a random digital shift drawn from --seed.
        #[arg(long)]
        shift: bool,
        #[arg(long, default_value_t = 0)]
        replication: u64,
        /// Also write the points as little-endian f64 to this file.
        #[arg(long)]
        binary: Option<PathBuf>,
    },
    /// t-value profile over a windowed projection family.
    Assess {
        /// Largest projection order.
        #[arg(long = "D", default_value_t = 2)]
        order: usize,
        /// Largest dimension (defaults to --dim).
        #[arg(long = "d")]
        d: Option<usize>,
        /// Window for pairs.
        #[arg(long, conflicts_with = "w")]
        w2: Option<usize>,
        /// Windows w_2,..,w_D, comma separated.
        #[arg(long, value_delimiter = ',')]
        w: Option<Vec<usize>>,
        /// Range of m as lo:hi or lo:hi:step.
        #[arg(long, default_value = "4:20")]
        m: MRange,
        /// Treatment of projections with a zero bound: skip or zero.
        #[arg(long, default_value = "skip")]
        alpha_zero: AlphaZeroPolicy,
        /// Divisor over m for the scaled average: range or upper.
        #[arg(long, default_value = "range")]
        tau_scale: TauScale,
    },
    /// Property A / A' rank deficiencies.
    Propa {
        #[arg(long = "d")]
        d: Option<usize>,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
    /// Component-by-component direction-number search (base 2).
    Search {
        #[arg(long, value_enum, default_value = "two-step")]
        method: SearchMethod,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0.5)]
        omega: f64,
        #[arg(long, default_value_t = 8)]
        k1: usize,
        #[arg(long, default_value_t = 9)]
        k2: usize,
        #[arg(long, default_value_t = 6.0)]
        q: f64,
        #[arg(long, default_value_t = 10)]
        m_min: usize,
        #[arg(long, default_value_t = 17)]
        m_max: usize,
        #[arg(long, default_value_t = 20)]
        l2: usize,
        #[arg(long, default_value_t = 0.9999)]
        weight: f64,
        /// Log progress to standard error.
        #[arg(long)]
        progress: bool,
    },
    /// RQMC integration experiment.
    Integrate {
        #[arg(long, value_enum, default_value = "f1")]
        problem: Problem,
        /// f1 variant: i or ii.
        #[arg(long, default_value = "ii")]
        variant: F1Variant,
        /// Queue horizon in minutes.
        #[arg(long, default_value_t = 1000.0)]
        horizon: f64,
        /// Queue quantity: waits or clients.
        #[arg(long, value_enum, default_value = "waits")]
        target: QueueTarget,
        #[arg(long, default_value_t = 25)]
        reps: usize,
        #[arg(long, default_value = "8:16")]
        m: MRange,
        /// Also run plain Monte Carlo.
        #[arg(long)]
        mc: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchMethod {
    TwoStep,
    OneRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    F1,
    Queue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QueueTarget {
    Waits,
    Clients,
}

impl From<QueueTarget> for QueueOutput {
    fn from(t: QueueTarget) -> Self {
        match t {
            QueueTarget::Waits => QueueOutput::Waits,
            QueueTarget::Clients => QueueOutput::Clients,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MRange {
    pub lo: usize,
    pub hi: usize,
    pub step: usize,
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad number `{x}`: {e}"));
        let (lo, hi, step) = match parts.as_slice() {
            [one] => (num(one)?, num(one)?, 1),
            [lo, hi] => (num(lo)?, num(hi)?, 1),
            [lo, hi, step] => (num(lo)?, num(hi)?, num(step)?),
            _ => return Err(format!("expected lo:hi or lo:hi:step, got `{s}`")),
        };
        if lo > hi || step == 0 {
            return Err(format!("empty range `{s}`"));
        }
        Ok(MRange { lo, hi, step })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        assert_eq!("4:20".parse::<MRange>().unwrap(), MRange { lo: 4, hi: 20, step: 1 });
        assert_eq!("4:20:2".parse::<MRange>().unwrap(), MRange { lo: 4, hi: 20, step: 2 });
        assert_eq!("7".parse::<MRange>().unwrap(), MRange { lo: 7, hi: 7, step: 1 });
        assert!("9:4".parse::<MRange>().is_err());
        assert!("a:4".parse::<MRange>().is_err());
    }

    #[test]
    fn command_line_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
