use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::stream_rng;

/// Coordinates of one point, continued by a seeded pseudorandom stream once
/// the point's own coordinates run out.
pub struct CoordinateStream<'a> {
    point: &'a [f64],
    pos: usize,
    seed: u64,
    rng: Option<ChaCha8Rng>,
    overflow: usize,
}

impl<'a> CoordinateStream<'a> {
    pub fn new(point: &'a [f64], overflow_seed: u64) -> Self {
        CoordinateStream {
            point,
            pos: 0,
            seed: overflow_seed,
            rng: None,
            overflow: 0,
        }
    }

    pub fn next_coordinate(&mut self) -> f64 {
        if let Some(&x) = self.point.get(self.pos) {
            self.pos += 1;
            return x;
        }
        self.overflow += 1;
        let seed = self.seed;
        self.rng
            .get_or_insert_with(|| stream_rng(&[seed]))
            .gen::<f64>()
    }

    /// Coordinates drawn from the pseudorandom continuation so far.
    pub fn overflow(&self) -> usize {
        self.overflow
    }
}

/// A function on the unit cube of (possibly unbounded) dimension.
pub trait Integrand: Sync {
    /// Coordinates normally consumed per evaluation.
    fn dimension(&self) -> usize;
    fn exact(&self) -> Option<f64>;
    fn evaluate(&self, stream: &mut CoordinateStream<'_>) -> Result<f64>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum F1Variant {
    /// `alpha_j = j`
    I,
    /// `alpha_j = s - j + 1`
    Ii,
}

impl FromStr for F1Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "1" => Ok(F1Variant::I),
            "ii" | "2" => Ok(F1Variant::Ii),
            _ => Err(Error::InvalidArgument(format!("unknown f1 variant '{s}'"))),
        }
    }
}

/// `prod_j (|4 u_j - 2| + alpha_j) / (1 + alpha_j)`; integrates to 1.
pub fn f1(u: &[f64], variant: F1Variant) -> f64 {
    let s = u.len();
    u.iter()
        .enumerate()
        .map(|(i, &x)| {
            let alpha = match variant {
                F1Variant::I => (i + 1) as f64,
                F1Variant::Ii => (s - i) as f64,
            };
            ((4.0 * x - 2.0).abs() + alpha) / (1.0 + alpha)
        })
        .product()
}

/// `f1` in a fixed dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFunction {
    pub dimension: usize,
    pub variant: F1Variant,
}

impl Integrand for TestFunction {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn exact(&self) -> Option<f64> {
        Some(1.0)
    }

    fn evaluate(&self, stream: &mut CoordinateStream<'_>) -> Result<f64> {
        let u: Vec<f64> = (0..self.dimension).map(|_| stream.next_coordinate()).collect();
        Ok(f1(&u, self.variant))
    }
}
